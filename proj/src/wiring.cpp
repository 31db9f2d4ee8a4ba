#include "locorth/wiring.hpp"

#include "locorth/errors.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <sstream>

namespace locorth {

namespace {

std::string key_text(const std::vector<int>& key) {
    std::string s;
    for (std::size_t k = 0; k < key.size(); ++k) s += (k ? " " : "") + std::to_string(key[k]);
    return s;
}

// One run of a group's subprotocol: the (slot, setting, outcome) measurements and the announced outcome.
struct History {
    std::vector<std::array<int, 3>> steps;
    int outcome = 0;
};

std::vector<History> histories(const WiringProtocol& p, const WiringGroup& g, int y) {
    const int d = p.base.outcomes();
    std::vector<History> out;
    std::vector<int> key{y};
    std::vector<bool> used(static_cast<std::size_t>(p.copies) * p.base.parties(), false);
    History current;
    std::function<void()> walk = [&] {
        if (current.steps.size() == g.slots.size()) {
            auto it = g.output.find(key);
            if (it == g.output.end()) throw InputError("output table has no entry for history " + key_text(key));
            if (it->second < 0 || it->second >= g.outputs) throw InputError("output out of range for history " + key_text(key));
            current.outcome = it->second;
            out.push_back(current);
            return;
        }
        auto ord = g.order.find(key);
        if (ord == g.order.end()) throw InputError("order table has no entry for history " + key_text(key));
        int slot = ord->second;
        if (!std::binary_search(g.slots.begin(), g.slots.end(), slot)) {
            throw InputError("order names slot " + std::to_string(slot) + " outside its group");
        }
        if (used[slot]) throw InputError("slot " + std::to_string(slot) + " measured twice after history " + key_text(key));
        auto in = g.input.find(key);
        if (in == g.input.end()) throw InputError("input table has no entry for history " + key_text(key));
        if (in->second < 0 || in->second >= p.base.settings()) throw InputError("input out of range for history " + key_text(key));
        used[slot] = true;
        for (int a = 0; a < d; ++a) {
            current.steps.push_back({slot, in->second, a});
            key.push_back(a);
            walk();
            key.pop_back();
            current.steps.pop_back();
        }
        used[slot] = false;
    };
    walk();
    return out;
}

struct Expansion {
    Scenario base;
    Scenario wired;
    // per group, per group input: every history
    std::vector<std::vector<std::vector<History>>> runs;
};

Expansion expand_runs(const WiringProtocol& p) {
    check_protocol(p);
    Expansion ex{Scenario(p.copies * p.base.parties(), p.base.settings(), p.base.outcomes()), wired_scenario(p), {}};
    for (const auto& g : p.groups) {
        std::vector<std::vector<History>> per_y;
        for (int y = 0; y < g.inputs; ++y) per_y.push_back(histories(p, g, y));
        ex.runs.push_back(std::move(per_y));
    }
    return ex;
}

// Calls visit(base_event) for every combination of histories compatible with the wired event.
template <typename F>
void for_each_base_event(const Expansion& ex, const Event& wired_event, bool any_outcome, F&& visit) {
    const auto& s = ex.base;
    std::vector<std::uint64_t> weight(s.parties());
    std::uint64_t w = 1;
    for (int p = s.parties() - 1; p >= 0; --p) {
        weight[p] = w;
        w *= s.local_size();
    }
    const auto d = static_cast<std::uint64_t>(s.outcomes());
    std::function<void(std::size_t, std::uint64_t, std::vector<int>&)> rec = [&](std::size_t g, std::uint64_t acc,
                                                                                   std::vector<int>& outs) {
        if (g == ex.runs.size()) {
            visit(acc, outs);
            return;
        }
        for (const auto& h : ex.runs[g][wired_event.settings[g]]) {
            if (!any_outcome && h.outcome != wired_event.outcomes[g]) continue;
            std::uint64_t add = 0;
            for (const auto& [slot, x, a] : h.steps) add += (static_cast<std::uint64_t>(x) * d + a) * weight[slot];
            outs[g] = h.outcome;
            rec(g + 1, acc + add, outs);
        }
    };
    std::vector<int> outs(ex.runs.size());
    rec(0, 0, outs);
}

} // namespace

Scenario wired_scenario(const WiringProtocol& p) {
    if (p.groups.empty()) throw InputError("wiring has no groups");
    const int y = p.groups.front().inputs, b = p.groups.front().outputs;
    for (const auto& g : p.groups) {
        if (g.inputs != y || g.outputs != b) throw InputError("all groups must share the same input and output counts");
    }
    return Scenario(static_cast<int>(p.groups.size()), y, b);
}

void check_protocol(const WiringProtocol& p) {
    if (p.copies < 1) throw InputError("wiring needs at least one copy");
    const auto slots = static_cast<std::size_t>(p.copies) * p.base.parties();
    std::vector<int> owner(slots, -1);
    for (std::size_t gi = 0; gi < p.groups.size(); ++gi) {
        const auto& g = p.groups[gi];
        if (g.slots.empty()) throw InputError("group " + std::to_string(gi) + " is empty");
        if (!std::is_sorted(g.slots.begin(), g.slots.end())) throw InputError("group slots must be ascending");
        for (int s : g.slots) {
            if (s < 0 || static_cast<std::size_t>(s) >= slots) throw InputError("slot " + std::to_string(s) + " out of range");
            if (owner[s] != -1) throw InputError("slot " + std::to_string(s) + " belongs to two groups");
            owner[s] = static_cast<int>(gi);
        }
        if (g.inputs < 1 || g.outputs < 2) throw InputError("group " + std::to_string(gi) + " needs Y >= 1 and B >= 2");
    }
    for (std::size_t s = 0; s < slots; ++s) {
        if (owner[s] == -1) throw InputError("slot " + std::to_string(s) + " belongs to no group");
    }
    wired_scenario(p);
    for (const auto& g : p.groups) {
        for (int y = 0; y < g.inputs; ++y) histories(p, g, y);
    }
}

Box wire(const Box& b, const WiringProtocol& p) {
    if (b.scenario() != p.base) {
        throw InputError("box scenario " + b.scenario().to_string() + " does not match wiring base " + p.base.to_string());
    }
    auto ex = expand_runs(p);
    Box power = tensor_power(b, p.copies);
    Box::Table table;
    const auto& ws = ex.wired;
    for (std::uint64_t c = 0; c < ws.context_count(); ++c) {
        Event e{std::vector<int>(ws.parties(), 0), context_from_index(ws, c)};
        for_each_base_event(ex, e, true, [&](std::uint64_t base_event, const std::vector<int>& outs) {
            auto p_event = power.probability(base_event);
            if (p_event == 0) return;
            Event w{outs, e.settings};
            table[encode(ws, w)] += p_event;
        });
    }
    return Box(ws, std::move(table));
}

LOInequality expand_inequality(const LOInequality& i, const WiringProtocol& p) {
    auto ex = expand_runs(p);
    if (i.scenario() != ex.wired) {
        throw InputError("inequality scenario " + i.scenario().to_string() + " does not match wired scenario " +
                         ex.wired.to_string());
    }
    std::vector<std::uint64_t> events;
    for (const auto& term : i.event_list()) {
        for_each_base_event(ex, term, false, [&](std::uint64_t base_event, const std::vector<int>&) {
            events.push_back(base_event);
        });
    }
    try {
        return LOInequality(ex.base, std::move(events));
    } catch (const InputError& err) {
        throw InternalError(std::string("wired expansion is not an LO inequality: ") + err.what());
    }
}

Box stochastic_wire(const Box& b, const StochasticWiring& sw) {
    Box local = from_lhv(sw.local_model);
    return wire(tensor(tensor_power(b, sw.copies), local), sw.base);
}

WiringProtocol identity_protocol(const Scenario& s, int copies) {
    std::vector<int> inputs(s.settings());
    std::iota(inputs.begin(), inputs.end(), 0);
    std::vector<std::vector<int>> outputs(s.settings(), std::vector<int>(s.outcomes()));
    for (auto& o : outputs) std::iota(o.begin(), o.end(), 0);
    auto p = local_protocol(s, inputs, outputs, s.outcomes());
    if (copies == 1) return p;
    WiringProtocol q{copies, s, {}};
    for (int slot = 0; slot < copies * s.parties(); ++slot) {
        auto g = p.groups.front();
        g.slots = {slot};
        for (auto& [k, v] : g.order) v = slot;
        q.groups.push_back(std::move(g));
    }
    return q;
}

WiringProtocol local_protocol(const Scenario& s, const std::vector<int>& input_map,
                              const std::vector<std::vector<int>>& output_map, int outputs) {
    if (output_map.size() != input_map.size()) throw InputError("output map needs one row per input");
    WiringProtocol p{1, s, {}};
    for (int party = 0; party < s.parties(); ++party) {
        WiringGroup g;
        g.slots = {party};
        g.inputs = static_cast<int>(input_map.size());
        g.outputs = outputs;
        for (int y = 0; y < g.inputs; ++y) {
            g.order[{y}] = party;
            g.input[{y}] = input_map[y];
            if (output_map[y].size() != static_cast<std::size_t>(s.outcomes())) {
                throw InputError("output map needs one entry per base outcome");
            }
            for (int a = 0; a < s.outcomes(); ++a) g.output[{y, a}] = output_map[y][a];
        }
        p.groups.push_back(std::move(g));
    }
    check_protocol(p);
    return p;
}

WiringProtocol random_protocol(const Scenario& base, int copies, const RandomProtocolOptions& opts, std::mt19937_64& rng) {
    const int slots = copies * base.parties();
    if (opts.groups < 1 || opts.groups > slots) throw InputError("group count must lie in [1, slots]");
    std::vector<int> perm(slots);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    // Cut the shuffled slots into `groups` nonempty runs.
    std::vector<int> cuts(slots - 1);
    std::iota(cuts.begin(), cuts.end(), 1);
    std::shuffle(cuts.begin(), cuts.end(), rng);
    cuts.resize(opts.groups - 1);
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(slots);

    WiringProtocol p{copies, base, {}};
    int start = 0;
    for (int end : cuts) {
        WiringGroup g;
        g.slots.assign(perm.begin() + start, perm.begin() + end);
        std::sort(g.slots.begin(), g.slots.end());
        g.inputs = opts.inputs;
        g.outputs = opts.outputs;
        start = end;
        std::uniform_int_distribution<int> setting(0, base.settings() - 1), outcome(0, opts.outputs - 1);
        std::vector<int> key;
        std::vector<int> remaining;
        std::function<void()> fill = [&] {
            if (remaining.empty()) {
                g.output[key] = outcome(rng);
                return;
            }
            std::size_t pick = 0;
            if (opts.dynamic) pick = std::uniform_int_distribution<std::size_t>(0, remaining.size() - 1)(rng);
            int slot = remaining[pick];
            g.order[key] = slot;
            g.input[key] = setting(rng);
            remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
            for (int a = 0; a < base.outcomes(); ++a) {
                key.push_back(a);
                fill();
                key.pop_back();
            }
            remaining.insert(remaining.begin() + static_cast<std::ptrdiff_t>(pick), slot);
        };
        for (int y = 0; y < opts.inputs; ++y) {
            key = {y};
            remaining = g.slots;
            fill();
        }
        p.groups.push_back(std::move(g));
    }
    std::sort(p.groups.begin(), p.groups.end(),
              [](const WiringGroup& a, const WiringGroup& b) { return a.slots.front() < b.slots.front(); });
    return p;
}

WiringProtocol parse_wiring(const std::string& text) {
    auto lines = detail::tokenize_lines(text);
    if (lines.empty()) throw InputError("empty wiring file");
    const auto& head = lines.front();
    if (head.tokens.size() != 6 || head.tokens[0] != "wiring" || head.tokens[1].rfind("r=", 0) != 0 ||
        head.tokens[2] != "base") {
        detail::fail_at(head.number, "expected 'wiring r=<r> base <n> <m> <d>'");
    }
    WiringProtocol p;
    p.copies = detail::parse_int(head.tokens[1].substr(2), head.number);
    p.base = Scenario(detail::parse_int(head.tokens[3], head.number), detail::parse_int(head.tokens[4], head.number),
                      detail::parse_int(head.tokens[5], head.number));
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto& line = lines[k];
        const auto& t = line.tokens;
        if (t[0] == "group") {
            // group <id>: parties <list> inputs <Y> outputs <B>
            if (t.size() < 7 || t[1].empty() || t[1].back() != ':' || t[2] != "parties") {
                detail::fail_at(line.number, "expected 'group <id>: parties <slots> inputs <Y> outputs <B>'");
            }
            int id = detail::parse_int(t[1].substr(0, t[1].size() - 1), line.number);
            if (id != static_cast<int>(p.groups.size())) detail::fail_at(line.number, "group ids must count up from 0");
            WiringGroup g;
            std::size_t j = 3;
            for (; j < t.size() && t[j] != "inputs"; ++j) g.slots.push_back(detail::parse_int(t[j], line.number));
            if (j + 4 != t.size() || t[j] != "inputs" || t[j + 2] != "outputs") {
                detail::fail_at(line.number, "expected 'inputs <Y> outputs <B>' after the slot list");
            }
            g.inputs = detail::parse_int(t[j + 1], line.number);
            g.outputs = detail::parse_int(t[j + 3], line.number);
            std::sort(g.slots.begin(), g.slots.end());
            p.groups.push_back(std::move(g));
        } else if (t[0] == "order" || t[0] == "input" || t[0] == "output") {
            // <table> <gid> <y> <outcomes...> -> <value>
            if (t.size() < 5 || t[t.size() - 2] != "->") detail::fail_at(line.number, "expected '" + t[0] + " <group> <y> <outcomes...> -> <value>'");
            int gid = detail::parse_int(t[1], line.number);
            if (gid < 0 || gid >= static_cast<int>(p.groups.size())) detail::fail_at(line.number, "unknown group " + t[1]);
            std::vector<int> key;
            for (std::size_t j = 2; j + 2 < t.size(); ++j) key.push_back(detail::parse_int(t[j], line.number));
            int value = detail::parse_int(t.back(), line.number);
            auto& g = p.groups[gid];
            auto& table = t[0] == "order" ? g.order : t[0] == "input" ? g.input : g.output;
            if (!table.emplace(key, value).second) detail::fail_at(line.number, "duplicate " + t[0] + " entry");
        } else {
            detail::fail_at(line.number, "unknown directive '" + t[0] + "'");
        }
    }
    try {
        check_protocol(p);
    } catch (const InputError& err) {
        throw InputError(std::string("inconsistent wiring: ") + err.what());
    }
    return p;
}

std::string serialize_wiring(const WiringProtocol& p) {
    std::ostringstream out;
    out << "wiring r=" << p.copies << " base " << p.base.parties() << ' ' << p.base.settings() << ' '
        << p.base.outcomes() << '\n';
    for (std::size_t gi = 0; gi < p.groups.size(); ++gi) {
        const auto& g = p.groups[gi];
        out << "group " << gi << ": parties";
        for (int s : g.slots) out << ' ' << s;
        out << " inputs " << g.inputs << " outputs " << g.outputs << '\n';
    }
    for (std::size_t gi = 0; gi < p.groups.size(); ++gi) {
        const auto& g = p.groups[gi];
        for (const auto& [name, table] : {std::pair<const char*, const std::map<std::vector<int>, int>*>{"order", &g.order},
                                          {"input", &g.input},
                                          {"output", &g.output}}) {
            for (const auto& [key, value] : *table) out << name << ' ' << gi << ' ' << key_text(key) << " -> " << value << '\n';
        }
    }
    return out.str();
}

WiringProtocol read_wiring_file(const std::string& path) { return parse_wiring(detail::read_file(path)); }

void write_wiring_file(const std::string& path, const WiringProtocol& p) { detail::write_file(path, serialize_wiring(p)); }

} // namespace locorth
