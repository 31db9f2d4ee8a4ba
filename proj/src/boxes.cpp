#include "locorth/boxes.hpp"

#include "locorth/errors.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace locorth {

Box::Box(Scenario s, Table table) : scenario_(s) {
    const auto count = s.event_count();
    for (auto& [event, p] : table) {
        if (event >= count) throw InputError("box entry index out of range for " + s.to_string());
        if (p < 0) throw InputError("negative probability at event " + format_event(decode(s, event)));
        if (p != 0) table_.emplace(event, std::move(p));
    }
}

Rational Box::probability(std::uint64_t event) const {
    auto it = table_.find(event);
    return it == table_.end() ? Rational(0) : it->second;
}

std::string Verdict::describe() const {
    auto ctx = [this] {
        std::string s;
        for (int x : context) s.push_back(static_cast<char>('0' + x));
        return s;
    };
    switch (kind) {
    case Kind::ok: return "ok";
    case Kind::not_normalized: return "not_normalized(x=" + ctx() + ")";
    case Kind::signaling: return "signaling(party=" + std::to_string(party + 1) + ", x=" + ctx() + ")";
    }
    return "?";
}

namespace {

std::vector<Rational> dense(const Box& b) {
    std::vector<Rational> p(static_cast<std::size_t>(b.scenario().event_count()));
    for (const auto& [e, v] : b.entries()) p[e] = v;
    return p;
}

// Index of the event with party `party` relabelled to local label `label`.
std::uint64_t with_local(const Scenario& s, std::uint64_t index, int party, std::uint64_t label) {
    std::uint64_t weight = 1;
    for (int i = s.parties() - 1; i > party; --i) weight *= s.local_size();
    auto old = (index / weight) % s.local_size();
    return index - old * weight + label * weight;
}

} // namespace

Verdict validate(const Box& b) {
    const auto& s = b.scenario();
    const auto p = dense(b);
    const auto d = static_cast<std::uint64_t>(s.outcomes());
    const auto m = static_cast<std::uint64_t>(s.settings());

    // Normalization: walk each context's outcome tuples.
    for (std::uint64_t c = 0; c < s.context_count(); ++c) {
        auto x = context_from_index(s, c);
        Rational total = 0;
        for (std::uint64_t o = 0; o < s.outcome_tuple_count(); ++o) {
            Event e{std::vector<int>(s.parties()), x};
            auto rest = o;
            for (int i = s.parties() - 1; i >= 0; --i) {
                e.outcomes[i] = static_cast<int>(rest % d);
                rest /= d;
            }
            total += p[encode(s, e)];
        }
        if (total != 1) return {Verdict::Kind::not_normalized, x, -1};
    }

    // No-signaling: for every event with party i at local label (x_i=0, a_i=0), the marginal over a_i
    // must not depend on x_i.
    for (int i = 0; i < s.parties(); ++i) {
        for (std::uint64_t e = 0; e < p.size(); ++e) {
            if (local_label(s, e, i) != 0) continue;
            Rational reference = 0;
            for (std::uint64_t a = 0; a < d; ++a) reference += p[with_local(s, e, i, a)];
            for (std::uint64_t x = 1; x < m; ++x) {
                Rational marginal = 0;
                for (std::uint64_t a = 0; a < d; ++a) marginal += p[with_local(s, e, i, x * d + a)];
                if (marginal != reference) {
                    auto ev = decode(s, with_local(s, e, i, x * d));
                    return {Verdict::Kind::signaling, ev.settings, i};
                }
            }
        }
    }
    return {};
}

Box pr_box() { return pr_box_variant(0, 0, 0); }

Box pr_box_variant(int alpha, int beta, int gamma) {
    Scenario s(2, 2, 2);
    Box::Table t;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    if ((a ^ b) == ((x & y) ^ (alpha & x) ^ (beta & y) ^ (gamma & 1))) {
                        t[encode(s, {{a, b}, {x, y}})] = Rational(1, 2);
                    }
                }
            }
        }
    }
    return Box(s, std::move(t));
}

Box uniform_box(const Scenario& s) {
    Box::Table t;
    Rational p(1, s.outcome_tuple_count());
    for (std::uint64_t e = 0; e < s.event_count(); ++e) t[e] = p;
    return Box(s, std::move(t));
}

Box deterministic_box(const Scenario& s, const std::vector<std::vector<int>>& response) {
    return from_lhv(LHVModel{s, {LHVStrategy{Rational(1), response}}});
}

Box from_lhv(const LHVModel& model) {
    const auto& s = model.scenario;
    Rational total = 0;
    for (const auto& st : model.strategies) {
        if (st.weight < 0) throw InputError("LHV weight is negative");
        if (st.response.size() != static_cast<std::size_t>(s.parties())) throw InputError("LHV response has wrong party count");
        for (const auto& r : st.response) {
            if (r.size() != static_cast<std::size_t>(s.settings())) throw InputError("LHV response has wrong setting count");
            for (int a : r) {
                if (a < 0 || a >= s.outcomes()) throw InputError("LHV response outcome out of range");
            }
        }
        total += st.weight;
    }
    if (total != 1) throw InputError("LHV weights sum to " + to_string(total) + ", not 1");

    Box::Table t;
    for (const auto& st : model.strategies) {
        if (st.weight == 0) continue;
        for (std::uint64_t c = 0; c < s.context_count(); ++c) {
            Event e{std::vector<int>(s.parties()), context_from_index(s, c)};
            for (int i = 0; i < s.parties(); ++i) e.outcomes[i] = st.response[i][e.settings[i]];
            t[encode(s, e)] += st.weight;
        }
    }
    return Box(s, std::move(t));
}

Box tensor(const Box& b1, const Box& b2) {
    const auto& s1 = b1.scenario();
    const auto& s2 = b2.scenario();
    if (s1.settings() != s2.settings() || s1.outcomes() != s2.outcomes()) {
        throw InputError("tensor needs equal settings and outcomes, got " + s1.to_string() + " and " + s2.to_string());
    }
    Scenario s(s1.parties() + s2.parties(), s1.settings(), s1.outcomes());
    const auto shift = s2.event_count();
    Box::Table t;
    for (const auto& [e1, p1] : b1.entries()) {
        for (const auto& [e2, p2] : b2.entries()) t.emplace_hint(t.end(), e1 * shift + e2, p1 * p2);
    }
    return Box(s, std::move(t));
}

Box tensor_power(const Box& b, int k) {
    if (k < 1) throw InputError("tensor power needs k >= 1");
    Box result = b;
    for (int i = 1; i < k; ++i) result = tensor(result, b);
    return result;
}

Box mix(const Box& b1, const Box& b2, const Rational& q) {
    if (b1.scenario() != b2.scenario()) throw InputError("mix needs boxes of the same scenario");
    if (q < 0 || q > 1) throw InputError("mixing weight " + to_string(q) + " outside [0,1]");
    Box::Table t;
    const Rational rest = 1 - q;
    for (const auto& [e, p] : b1.entries()) t[e] += q * p;
    for (const auto& [e, p] : b2.entries()) t[e] += rest * p;
    return Box(b1.scenario(), std::move(t));
}

std::vector<std::uint64_t> support(const Box& b) {
    std::vector<std::uint64_t> out;
    out.reserve(b.entries().size());
    for (const auto& [e, p] : b.entries()) {
        if (p > 0) out.push_back(e);
    }
    return out;
}

std::map<std::uint64_t, Rational> unconditional_joint(const Box& b, const std::map<std::uint64_t, Rational>& input_dist) {
    const auto& s = b.scenario();
    Rational total = 0;
    for (const auto& [c, q] : input_dist) {
        if (c >= s.context_count()) throw InputError("input distribution has an out-of-range setting tuple");
        if (q < 0) throw InputError("input distribution has a negative weight");
        total += q;
    }
    if (total != 1) throw InputError("input distribution sums to " + to_string(total) + ", not 1");
    auto verdict = validate(b);
    if (verdict.kind == Verdict::Kind::not_normalized) throw InputError("box is " + verdict.describe());

    std::map<std::uint64_t, Rational> joint;
    for (const auto& [e, p] : b.entries()) {
        auto c = context_index(s, decode(s, e).settings);
        auto it = input_dist.find(c);
        if (it == input_dist.end() || it->second == 0) continue;
        joint[e] = p * it->second;
    }
    return joint;
}

namespace {

Rational random_weight(std::mt19937_64& rng, int max_den) {
    std::uniform_int_distribution<int> den(1, max_den);
    int q = den(rng);
    std::uniform_int_distribution<int> num(0, q);
    return make_rational(num(rng), q);
}

std::vector<Rational> random_simplex_point(std::mt19937_64& rng, int components, int max_den) {
    std::vector<Rational> w;
    Rational rest = 1;
    for (int i = 0; i + 1 < components; ++i) {
        Rational f = random_weight(rng, max_den);
        w.push_back(rest * f);
        rest -= w.back();
    }
    w.push_back(rest);
    return w;
}

std::vector<std::vector<int>> random_response(const Scenario& s, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> out(0, s.outcomes() - 1);
    std::vector<std::vector<int>> r(s.parties(), std::vector<int>(s.settings()));
    for (auto& party : r) {
        for (auto& a : party) a = out(rng);
    }
    return r;
}

} // namespace

LHVModel random_lhv_model(const Scenario& s, std::mt19937_64& rng, int strategies, int max_den) {
    LHVModel model{s, {}};
    for (auto& w : random_simplex_point(rng, strategies, max_den)) {
        model.strategies.push_back(LHVStrategy{w, random_response(s, rng)});
    }
    return model;
}

Box random_ns_box(const Scenario& s, std::mt19937_64& rng, int components, int max_den) {
    const bool pr_compatible = s.parties() % 2 == 0 && s.settings() == 2 && s.outcomes() == 2;
    std::bernoulli_distribution coin(0.5);
    std::uniform_int_distribution<int> bit(0, 1);
    auto weights = random_simplex_point(rng, components, max_den);
    Box::Table t;
    for (const auto& w : weights) {
        Box component = [&] {
            if (!pr_compatible || coin(rng)) return deterministic_box(s, random_response(s, rng));
            Scenario pair(2, 2, 2);
            std::optional<Box> acc;
            for (int k = 0; k < s.parties() / 2; ++k) {
                Box factor = coin(rng) ? pr_box_variant(bit(rng), bit(rng), bit(rng))
                                       : deterministic_box(pair, random_response(pair, rng));
                acc = acc ? tensor(*acc, factor) : factor;
            }
            return *acc;
        }();
        for (const auto& [e, p] : component.entries()) t[e] += w * p;
    }
    return Box(s, std::move(t));
}

Box parse_box(const std::string& text) {
    auto lines = detail::tokenize_lines(text);
    if (lines.empty()) throw InputError("empty box file");
    const auto& head = lines.front();
    if (head.tokens.size() != 4 || head.tokens[0] != "box") detail::fail_at(head.number, "expected 'box <n> <m> <d>'");
    Scenario s(detail::parse_int(head.tokens[1], head.number), detail::parse_int(head.tokens[2], head.number),
               detail::parse_int(head.tokens[3], head.number));
    Box::Table t;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto& line = lines[i];
        if (line.tokens.size() != 2) detail::fail_at(line.number, "expected '<outcomes>|<settings> <num>/<den>'");
        try {
            auto e = encode(s, parse_event(line.tokens[0]));
            auto p = parse_rational(line.tokens[1]);
            if (p < 0) detail::fail_at(line.number, "negative probability");
            if (!t.emplace(e, p).second) detail::fail_at(line.number, "duplicate event " + line.tokens[0]);
        } catch (const InputError& err) {
            std::string what = err.what();
            if (what.rfind("line ", 0) == 0) throw;
            detail::fail_at(line.number, what);
        }
    }
    return Box(s, std::move(t));
}

std::string serialize_box(const Box& b) {
    const auto& s = b.scenario();
    std::ostringstream out;
    out << "box " << s.parties() << ' ' << s.settings() << ' ' << s.outcomes() << '\n';
    for (const auto& [e, p] : b.entries()) {
        out << format_event(decode(s, e)) << ' ' << p.get_num().get_str() << '/' << p.get_den().get_str() << '\n';
    }
    return out.str();
}

Box read_box_file(const std::string& path) { return parse_box(detail::read_file(path)); }

void write_box_file(const std::string& path, const Box& b) { detail::write_file(path, serialize_box(b)); }

Box named_box(const std::string& name) {
    if (name == "pr") return pr_box();
    if (name == "uniform") return uniform_box(Scenario(2, 2, 2));
    if (name.rfind("uniform:", 0) == 0) {
        int n = 0, m = 0, d = 0;
        char c1 = 0, c2 = 0;
        std::istringstream in(name.substr(8));
        if (!(in >> n >> c1 >> m >> c2 >> d) || c1 != ',' || c2 != ',') throw InputError("expected uniform:n,m,d");
        return uniform_box(Scenario(n, m, d));
    }
    if (name.rfind("det:", 0) == 0) {
        std::vector<std::vector<int>> response;
        std::istringstream in(name.substr(4));
        int max_outcome = 1;
        for (std::string party; std::getline(in, party, ',');) {
            std::vector<int> r;
            for (char c : party) {
                if (c < '0' || c > '9') throw InputError("det: spec must contain digits");
                r.push_back(c - '0');
                max_outcome = std::max(max_outcome, c - '0');
            }
            if (r.empty() || (!response.empty() && r.size() != response.front().size())) {
                throw InputError("det: every party needs one outcome per setting");
            }
            response.push_back(std::move(r));
        }
        if (response.empty()) throw InputError("det: spec is empty");
        Scenario s(static_cast<int>(response.size()), static_cast<int>(response.front().size()), max_outcome + 1);
        return deterministic_box(s, response);
    }
    return read_box_file(name);
}

} // namespace locorth
