#include "locorth/inequalities.hpp"

#include "locorth/errors.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <sstream>

namespace locorth {

LOInequality::LOInequality(Scenario s, std::vector<std::uint64_t> events) : scenario_(s), events_(std::move(events)) {
    std::sort(events_.begin(), events_.end());
    const auto count = s.event_count();
    for (std::size_t a = 0; a < events_.size(); ++a) {
        if (events_[a] >= count) throw InputError("event index out of range for " + s.to_string());
        if (a > 0 && events_[a] == events_[a - 1]) {
            throw InputError("duplicate event " + format_event(decode(s, events_[a])));
        }
    }
    for (std::size_t a = 0; a < events_.size(); ++a) {
        for (std::size_t b = a + 1; b < events_.size(); ++b) {
            if (!are_orthogonal(s, events_[a], events_[b])) {
                throw InputError("events " + format_event(decode(s, events_[a])) + " and " +
                                 format_event(decode(s, events_[b])) + " are not orthogonal");
            }
        }
    }
}

namespace {
std::vector<std::uint64_t> encode_all(const Scenario& s, const std::vector<Event>& events) {
    std::vector<std::uint64_t> out;
    out.reserve(events.size());
    for (const auto& e : events) {
        check_event(s, e);
        out.push_back(encode(s, e));
    }
    return out;
}
} // namespace

LOInequality::LOInequality(Scenario s, const std::vector<Event>& events) : LOInequality(s, encode_all(s, events)) {}

bool LOInequality::contains(std::uint64_t event) const {
    return std::binary_search(events_.begin(), events_.end(), event);
}

std::vector<Event> LOInequality::event_list() const {
    std::vector<Event> out;
    out.reserve(events_.size());
    for (auto e : events_) out.push_back(decode(scenario_, e));
    return out;
}

LOInequality from_clique(const Graph& g, std::span<const std::size_t> c) {
    if (!g.labels()) throw InputError("graph carries no event labels");
    const auto& labels = *g.labels();
    for (std::size_t a = 0; a < c.size(); ++a) {
        if (c[a] >= g.size()) throw InputError("vertex " + std::to_string(c[a]) + " out of range");
        for (std::size_t b = a + 1; b < c.size(); ++b) {
            if (c[b] >= g.size()) throw InputError("vertex " + std::to_string(c[b]) + " out of range");
            if (!g.adjacent(c[a], c[b])) {
                throw InputError("vertices " + std::to_string(c[a]) + " and " + std::to_string(c[b]) +
                                 " are not adjacent");
            }
        }
    }
    std::vector<std::uint64_t> events;
    for (auto v : c) events.push_back(labels.events[v]);
    return LOInequality(labels.scenario, std::move(events));
}

Rational evaluate(const LOInequality& i, const Box& b) {
    if (i.scenario() != b.scenario()) {
        throw InputError("inequality scenario " + i.scenario().to_string() + " does not match box scenario " +
                         b.scenario().to_string());
    }
    Rational total = 0;
    for (auto e : i.events()) total += b.probability(e);
    return total;
}

bool is_optimal(const LOInequality& i) {
    const auto& s = i.scenario();
    for (std::uint64_t e = 0; e < s.event_count(); ++e) {
        if (i.contains(e)) continue;
        bool extends = true;
        for (auto f : i.events()) {
            if (!are_orthogonal(s, e, f)) {
                extends = false;
                break;
            }
        }
        if (extends) return false;
    }
    return true;
}

std::vector<LOInequality> complete_to_maximal(const LOInequality& i, const SearchOptions& opts) {
    auto g = orthogonality_graph(i.scenario());
    std::vector<std::size_t> required(i.events().begin(), i.events().end());
    std::vector<LOInequality> out;
    for (const auto& c : maximal_cliques_containing(g, required, opts)) out.push_back(from_clique(g, c));
    return out;
}

LOVerdict check_lo_k(const Box& b, int k, const LOKOptions& opts) {
    if (k < 1) throw InputError("k must be at least 1");
    Box power = tensor_power(b, k);
    const auto& s = power.scenario();
    auto events = support(power);
    GraphBuilder builder(events.size());
    for (std::size_t u = 0; u < events.size(); ++u) {
        for (std::size_t v = u + 1; v < events.size(); ++v) {
            if (are_orthogonal(s, events[u], events[v])) builder.add_edge(u, v);
        }
    }
    builder.set_labels(VertexLabels{s, events});
    WeightedGraph wg{std::move(builder).build(), {}};
    for (auto e : events) wg.weights.push_back(power.probability(e));

    LOVerdict verdict;
    if (auto hit = max_weighted_clique(wg, Rational(1), opts.search)) {
        verdict.satisfied = false;
        verdict.witness = LOWitness{k, from_clique(wg.graph, hit->vertices), hit->weight};
        if (opts.maximize) {
            auto best = maximum_weight_clique(wg, opts.search);
            verdict.witness = LOWitness{k, from_clique(wg.graph, best.vertices), best.weight};
        }
    }
    if (opts.all_witnesses && !verdict.satisfied) {
        for_each_maximal_clique(wg.graph, {}, [&](const VertexSet& c) {
            Rational w = 0;
            for (auto v : c) w += wg.weights[v];
            if (w > 1) verdict.all_witnesses.push_back(LOWitness{k, from_clique(wg.graph, c), w});
        }, opts.search);
        std::sort(verdict.all_witnesses.begin(), verdict.all_witnesses.end(),
                  [](const LOWitness& x, const LOWitness& y) { return x.inequality < y.inequality; });
    }
    return verdict;
}

LinearProgram ns_polytope_lp(const Scenario& s, const std::vector<Rational>& objective) {
    const auto events = s.event_count();
    const auto d = static_cast<std::uint64_t>(s.outcomes());
    const auto m = static_cast<std::uint64_t>(s.settings());
    LinearProgram lp;
    lp.variables = events;
    lp.objective = objective;
    if (lp.objective.size() != events) throw InputError("objective length does not match the event count");

    // Normalization, one row per setting tuple.
    std::vector<std::vector<std::pair<std::size_t, Rational>>> by_context(s.context_count());
    for (std::uint64_t e = 0; e < events; ++e) {
        by_context[context_index(s, decode(s, e).settings)].emplace_back(e, Rational(1));
    }
    for (auto& row : by_context) {
        lp.rows.push_back(std::move(row));
        lp.rhs.emplace_back(1);
    }

    // No-signaling: the marginal of the other parties may not depend on x_i.
    for (int i = 0; i < s.parties(); ++i) {
        std::uint64_t weight = 1;
        for (int j = s.parties() - 1; j > i; --j) weight *= s.local_size();
        for (std::uint64_t e = 0; e < events; ++e) {
            if (local_label(s, e, i) != 0) continue;
            for (std::uint64_t x = 1; x < m; ++x) {
                std::vector<std::pair<std::size_t, Rational>> row;
                for (std::uint64_t a = 0; a < d; ++a) {
                    row.emplace_back(e + a * weight, Rational(1));
                    row.emplace_back(e + (x * d + a) * weight, Rational(-1));
                }
                lp.rows.push_back(std::move(row));
                lp.rhs.emplace_back(0);
            }
        }
    }
    return lp;
}

NSOptimum ns_optimum(const LOInequality& i, const LPOptions& opts) {
    const auto& s = i.scenario();
    if (s.event_count() > ns_max_event_limit) {
        throw InputError("scenario " + s.to_string() + " exceeds the LP size limit of " +
                         std::to_string(ns_max_event_limit) + " events");
    }
    std::vector<Rational> objective(s.event_count());
    for (auto e : i.events()) objective[e] = 1;
    auto result = solve_lp(ns_polytope_lp(s, objective), opts);
    if (result.status != LPResult::Status::optimal) throw InternalError("no-signaling LP did not reach an optimum");
    Box::Table table;
    for (std::uint64_t e = 0; e < result.solution.size(); ++e) {
        if (result.solution[e] != 0) table[e] = result.solution[e];
    }
    return {result.value, Box(s, std::move(table))};
}

Rational ns_max(const LOInequality& i, const LPOptions& opts) { return ns_optimum(i, opts).value; }

LOInequality parse_inequality(const std::string& text) {
    auto lines = detail::tokenize_lines(text);
    if (lines.empty()) throw InputError("empty inequality file");
    const auto& head = lines.front();
    if (head.tokens.size() != 4 || head.tokens[0] != "scenario") {
        detail::fail_at(head.number, "expected 'scenario <n> <m> <d>'");
    }
    Scenario s(detail::parse_int(head.tokens[1], head.number), detail::parse_int(head.tokens[2], head.number),
               detail::parse_int(head.tokens[3], head.number));
    std::vector<std::uint64_t> events;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto& line = lines[k];
        if (line.tokens.size() != 1) detail::fail_at(line.number, "expected '<outcomes>|<settings>'");
        try {
            auto e = parse_event(line.tokens[0]);
            check_event(s, e);
            events.push_back(encode(s, e));
        } catch (const InputError& err) {
            detail::fail_at(line.number, err.what());
        }
    }
    return LOInequality(s, std::move(events));
}

std::string serialize_inequality(const LOInequality& i, const std::string& comment) {
    std::ostringstream out;
    if (!comment.empty()) out << "# " << comment << '\n';
    const auto& s = i.scenario();
    out << "scenario " << s.parties() << ' ' << s.settings() << ' ' << s.outcomes() << '\n';
    for (const auto& e : i.event_list()) out << format_event(e) << '\n';
    return out.str();
}

LOInequality read_inequality_file(const std::string& path) { return parse_inequality(detail::read_file(path)); }

void write_inequality_file(const std::string& path, const LOInequality& i, const std::string& comment) {
    detail::write_file(path, serialize_inequality(i, comment));
}

} // namespace locorth
