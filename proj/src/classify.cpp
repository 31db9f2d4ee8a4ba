#include "locorth/classify.hpp"

#include "locorth/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace locorth {

namespace {

using LocalPerm = std::vector<std::uint32_t>;   // permutation of the m*d local labels

std::vector<std::vector<int>> all_permutations(int k) {
    std::vector<int> p(k);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

std::uint64_t factorial(int k) {
    std::uint64_t f = 1;
    for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

LocalPerm local_perm(const Scenario& s, const std::vector<int>& sigma, const std::vector<std::vector<int>>& tau) {
    const int d = s.outcomes();
    LocalPerm l(s.local_size());
    for (int x = 0; x < s.settings(); ++x) {
        for (int a = 0; a < d; ++a) l[x * d + a] = static_cast<std::uint32_t>(sigma[x] * d + tau[x][a]);
    }
    return l;
}

// Precomputed data for acting on event indices.
struct EventAction {
    const Scenario& s;
    std::uint64_t events;
    std::vector<std::uint64_t> weight;   // (m*d)^(n-1-p)
    std::vector<std::uint32_t> locals;   // events x n local labels

    explicit EventAction(const Scenario& sc) : s(sc), events(sc.event_count()), weight(sc.parties()) {
        const int n = s.parties();
        std::uint64_t w = 1;
        for (int p = n - 1; p >= 0; --p) {
            weight[p] = w;
            w *= s.local_size();
        }
        locals.resize(events * n);
        for (std::uint64_t e = 0; e < events; ++e) {
            for (int i = 0; i < n; ++i) locals[e * n + i] = static_cast<std::uint32_t>(local_label(s, e, i));
        }
    }

    std::uint64_t apply(std::uint64_t e, const std::vector<int>& pi, const std::vector<const LocalPerm*>& lambda) const {
        const int n = s.parties();
        std::uint64_t out = 0;
        for (int i = 0; i < n; ++i) out += (*lambda[i])[locals[e * n + i]] * weight[pi[i]];
        return out;
    }
};

// Every local relabeling: a setting permutation and an outcome permutation per source setting.
std::vector<LocalPerm> all_local_perms(const Scenario& s) {
    auto sigmas = all_permutations(s.settings());
    auto taus = all_permutations(s.outcomes());
    std::vector<LocalPerm> out;
    const int m = s.settings();
    std::vector<std::size_t> pick(m, 0);
    for (const auto& sigma : sigmas) {
        std::fill(pick.begin(), pick.end(), 0);
        while (true) {
            std::vector<std::vector<int>> tau(m);
            for (int x = 0; x < m; ++x) tau[x] = taus[pick[x]];
            out.push_back(local_perm(s, sigma, tau));
            int x = 0;
            while (x < m && ++pick[x] == taus.size()) pick[x++] = 0;
            if (x == m) break;
        }
    }
    return out;
}

} // namespace

SymmetryElement identity_symmetry(const Scenario& s) {
    SymmetryElement g;
    const int n = s.parties(), m = s.settings(), d = s.outcomes();
    g.party_perm.resize(n);
    std::iota(g.party_perm.begin(), g.party_perm.end(), 0);
    std::vector<int> idm(m), idd(d);
    std::iota(idm.begin(), idm.end(), 0);
    std::iota(idd.begin(), idd.end(), 0);
    g.setting_perms.assign(n, idm);
    g.outcome_perms.assign(n, std::vector<std::vector<int>>(m, idd));
    return g;
}

namespace {
bool is_permutation_of(const std::vector<int>& p, int k) {
    if (p.size() != static_cast<std::size_t>(k)) return false;
    std::vector<bool> seen(k, false);
    for (int v : p) {
        if (v < 0 || v >= k || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}
} // namespace

void check_symmetry(const Scenario& s, const SymmetryElement& g) {
    const int n = s.parties(), m = s.settings(), d = s.outcomes();
    if (!is_permutation_of(g.party_perm, n)) throw InputError("party permutation does not match " + s.to_string());
    if (g.setting_perms.size() != static_cast<std::size_t>(n) || g.outcome_perms.size() != static_cast<std::size_t>(n)) {
        throw InputError("symmetry element has the wrong number of parties for " + s.to_string());
    }
    for (int i = 0; i < n; ++i) {
        if (!is_permutation_of(g.setting_perms[i], m)) throw InputError("setting permutation does not match " + s.to_string());
        if (g.outcome_perms[i].size() != static_cast<std::size_t>(m)) throw InputError("outcome permutations do not match " + s.to_string());
        for (const auto& t : g.outcome_perms[i]) {
            if (!is_permutation_of(t, d)) throw InputError("outcome permutation does not match " + s.to_string());
        }
    }
}

SymmetryElement compose(const SymmetryElement& a, const SymmetryElement& b) {
    SymmetryElement c = b;
    const auto n = b.party_perm.size();
    for (std::size_t i = 0; i < n; ++i) {
        int mid = b.party_perm[i];
        c.party_perm[i] = a.party_perm[mid];
        for (std::size_t x = 0; x < b.setting_perms[i].size(); ++x) {
            int y = b.setting_perms[i][x];
            c.setting_perms[i][x] = a.setting_perms[mid][y];
            for (std::size_t o = 0; o < b.outcome_perms[i][x].size(); ++o) {
                c.outcome_perms[i][x][o] = a.outcome_perms[mid][y][b.outcome_perms[i][x][o]];
            }
        }
    }
    return c;
}

SymmetryElement inverse(const SymmetryElement& g) {
    SymmetryElement h = g;
    const auto n = g.party_perm.size();
    for (std::size_t i = 0; i < n; ++i) {
        int p = g.party_perm[i];
        h.party_perm[p] = static_cast<int>(i);
        for (std::size_t x = 0; x < g.setting_perms[i].size(); ++x) {
            int y = g.setting_perms[i][x];
            h.setting_perms[p][y] = static_cast<int>(x);
            for (std::size_t a = 0; a < g.outcome_perms[i][x].size(); ++a) {
                h.outcome_perms[p][y][g.outcome_perms[i][x][a]] = static_cast<int>(a);
            }
        }
    }
    return h;
}

SymmetryElement random_symmetry(const Scenario& s, std::mt19937_64& rng) {
    auto g = identity_symmetry(s);
    std::shuffle(g.party_perm.begin(), g.party_perm.end(), rng);
    for (auto& p : g.setting_perms) std::shuffle(p.begin(), p.end(), rng);
    for (auto& party : g.outcome_perms) {
        for (auto& p : party) std::shuffle(p.begin(), p.end(), rng);
    }
    return g;
}

std::uint64_t symmetry_group_order(const Scenario& s) {
    const int n = s.parties(), m = s.settings();
    std::uint64_t order = factorial(n);
    auto mul = [&](std::uint64_t f) {
        if (f != 0 && order > UINT64_MAX / f) throw InputError("symmetry group order overflows");
        order *= f;
    };
    for (int i = 0; i < n; ++i) {
        mul(factorial(m));
        for (int x = 0; x < m; ++x) mul(factorial(s.outcomes()));
    }
    return order;
}

std::uint64_t apply_symmetry(const Scenario& s, const SymmetryElement& g, std::uint64_t event) {
    auto e = decode(s, event);
    Event out{std::vector<int>(s.parties()), std::vector<int>(s.parties())};
    for (int i = 0; i < s.parties(); ++i) {
        int p = g.party_perm[i];
        out.settings[p] = g.setting_perms[i][e.settings[i]];
        out.outcomes[p] = g.outcome_perms[i][e.settings[i]][e.outcomes[i]];
    }
    return encode(s, out);
}

LOInequality apply_symmetry(const LOInequality& i, const SymmetryElement& g) {
    check_symmetry(i.scenario(), g);
    std::vector<std::uint64_t> events;
    for (auto e : i.events()) events.push_back(apply_symmetry(i.scenario(), g, e));
    return LOInequality(i.scenario(), std::move(events));
}

std::vector<std::vector<int>> event_matrix(const LOInequality& i) {
    std::vector<std::vector<int>> rows;
    for (const auto& e : i.event_list()) {
        std::vector<int> row = e.outcomes;
        row.insert(row.end(), e.settings.begin(), e.settings.end());
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

namespace {

// All orders of `items` that are descending in `mult`, ties permuted every way.
std::vector<std::vector<int>> multiplicity_orders(const std::vector<int>& mult) {
    std::vector<int> base(mult.size());
    std::iota(base.begin(), base.end(), 0);
    std::stable_sort(base.begin(), base.end(), [&](int a, int b) { return mult[a] > mult[b]; });
    std::vector<std::vector<int>> out{base};
    std::size_t start = 0;
    while (start < base.size()) {
        std::size_t end = start;
        while (end < base.size() && mult[base[end]] == mult[base[start]]) ++end;
        if (end - start > 1) {
            std::vector<std::vector<int>> next;
            for (const auto& order : out) {
                std::vector<int> o = order;
                do next.push_back(o);
                while (std::next_permutation(o.begin() + static_cast<std::ptrdiff_t>(start),
                                             o.begin() + static_cast<std::ptrdiff_t>(end)));
            }
            out = std::move(next);
        }
        start = end;
    }
    return out;
}

// Per-party relabel candidates: new_setting[x], new_outcome[x][a].
struct Relabel {
    std::vector<int> setting;
    std::vector<std::vector<int>> outcome;
};

std::vector<Relabel> party_relabels(const Scenario& s, const std::vector<Event>& terms, int party) {
    const int m = s.settings(), d = s.outcomes();
    std::vector<int> smult(m, 0);
    std::vector<std::vector<int>> omult(m, std::vector<int>(d, 0));
    for (const auto& t : terms) {
        ++smult[t.settings[party]];
        ++omult[t.settings[party]][t.outcomes[party]];
    }
    auto setting_orders = multiplicity_orders(smult);
    std::vector<std::vector<std::vector<int>>> outcome_orders(m);
    for (int x = 0; x < m; ++x) outcome_orders[x] = multiplicity_orders(omult[x]);

    std::vector<Relabel> out;
    for (const auto& so : setting_orders) {
        Relabel r;
        r.setting.assign(m, 0);
        for (int pos = 0; pos < m; ++pos) r.setting[so[pos]] = pos;
        std::vector<std::size_t> pick(m, 0);
        while (true) {
            r.outcome.assign(m, std::vector<int>(d, 0));
            for (int x = 0; x < m; ++x) {
                const auto& oo = outcome_orders[x][pick[x]];
                for (int pos = 0; pos < d; ++pos) r.outcome[x][oo[pos]] = pos;
            }
            out.push_back(r);
            int x = 0;
            while (x < m && ++pick[x] == outcome_orders[x].size()) pick[x++] = 0;
            if (x == m) break;
        }
    }
    return out;
}

} // namespace

LOInequality canonical_sym(const LOInequality& i, const ClassifyOptions& opts) {
    const auto& s = i.scenario();
    const int n = s.parties();
    const auto base = static_cast<std::uint64_t>(std::max(s.settings(), s.outcomes()));
    {
        long double span = 1;
        for (int k = 0; k < 2 * n; ++k) span *= static_cast<long double>(base);
        if (span > 1.8e19L) throw InputError("scenario " + s.to_string() + " too large for canonical forms");
    }
    const auto terms = i.event_list();
    std::vector<std::vector<Relabel>> cands(n);
    long double total = static_cast<long double>(factorial(n));
    for (int p = 0; p < n; ++p) {
        cands[p] = party_relabels(s, terms, p);
        total *= static_cast<long double>(cands[p].size());
    }
    if (total > static_cast<long double>(opts.max_orbit)) {
        throw BudgetExceeded("canonical form needs " + std::to_string(static_cast<double>(total)) +
                             " candidates, over the orbit budget");
    }
    std::vector<std::uint64_t> place(2 * n);
    {
        std::uint64_t w = 1;
        for (int k = 2 * n - 1; k >= 0; --k) {
            place[k] = w;
            w *= base;
        }
    }
    auto perms = all_permutations(n);
    const std::size_t r = terms.size();
    std::vector<std::uint64_t> best, keys(r);
    // relabelled[t][p] = (a', x') for term t, source party p
    std::vector<std::vector<std::pair<int, int>>> relabelled(r, std::vector<std::pair<int, int>>(n));
    std::vector<std::size_t> pick(n, 0);
    while (true) {
        for (std::size_t t = 0; t < r; ++t) {
            for (int p = 0; p < n; ++p) {
                const auto& rl = cands[p][pick[p]];
                int x = terms[t].settings[p];
                relabelled[t][p] = {rl.outcome[x][terms[t].outcomes[p]], rl.setting[x]};
            }
        }
        for (const auto& pi : perms) {
            for (std::size_t t = 0; t < r; ++t) {
                std::uint64_t key = 0;
                for (int p = 0; p < n; ++p) {
                    key += static_cast<std::uint64_t>(relabelled[t][p].first) * place[pi[p]] +
                           static_cast<std::uint64_t>(relabelled[t][p].second) * place[n + pi[p]];
                }
                keys[t] = key;
            }
            std::sort(keys.begin(), keys.end());
            if (best.empty() || keys < best) best = keys;
        }
        int p = 0;
        while (p < n && ++pick[p] == cands[p].size()) pick[p++] = 0;
        if (p == n) break;
    }
    std::vector<Event> events;
    for (auto key : best) {
        Event e{std::vector<int>(n), std::vector<int>(n)};
        for (int p = 0; p < n; ++p) {
            e.outcomes[p] = static_cast<int>((key / place[p]) % base);
            e.settings[p] = static_cast<int>((key / place[n + p]) % base);
        }
        events.push_back(std::move(e));
    }
    return LOInequality(s, events);
}

bool QuotientVector::constant_only() const {
    return std::all_of(coefficients.begin(), coefficients.end(), [](std::int64_t c) { return c == 0; });
}

QuotientVector ns_quotient(const Scenario& s, const std::vector<std::int64_t>& functional) {
    const auto events = s.event_count();
    if (functional.size() != events) throw InputError("functional length does not match " + s.to_string());
    const std::int64_t m = s.settings(), d = s.outcomes(), md = m * d;
    std::vector<std::int64_t> v = functional;
    std::int64_t sum = 0;
    for (auto c : v) sum += c;

    // Project onto the no-signaling span one party axis at a time, scaling each step by m*d.
    std::uint64_t stride = 1;
    for (int p = s.parties() - 1; p >= 0; --p) {
        const std::uint64_t block = stride * static_cast<std::uint64_t>(md);
        std::vector<std::int64_t> sx(m);
        for (std::uint64_t hi = 0; hi < events; hi += block) {
            for (std::uint64_t lo = 0; lo < stride; ++lo) {
                std::int64_t total = 0;
                for (std::int64_t x = 0; x < m; ++x) {
                    sx[x] = 0;
                    for (std::int64_t a = 0; a < d; ++a) sx[x] += v[hi + static_cast<std::uint64_t>(x * d + a) * stride + lo];
                    total += sx[x];
                }
                for (std::int64_t x = 0; x < m; ++x) {
                    for (std::int64_t a = 0; a < d; ++a) {
                        auto& c = v[hi + static_cast<std::uint64_t>(x * d + a) * stride + lo];
                        c = md * c - m * sx[x] + total;
                    }
                }
            }
        }
        stride = block;
    }
    QuotientVector q;
    q.coefficients = std::move(v);
    for (auto& c : q.coefficients) c -= sum;
    std::int64_t mn = 1;
    for (int p = 0; p < s.parties(); ++p) mn *= m;
    q.constant = sum * mn;
    return q;
}

QuotientVector ns_quotient(const LOInequality& i) {
    std::vector<std::int64_t> c(i.scenario().event_count(), 0);
    for (auto e : i.events()) c[e] = 1;
    return ns_quotient(i.scenario(), c);
}

QuotientVector orbit_minimal_quotient(const Scenario& s, const QuotientVector& q, const ClassifyOptions& opts) {
    const auto& v = q.coefficients;
    if (v.size() != s.event_count()) throw InputError("quotient length does not match " + s.to_string());
    if (std::all_of(v.begin(), v.end(), [&](std::int64_t c) { return c == v.front(); })) return q;
    if (symmetry_group_order(s) > opts.max_orbit) {
        throw BudgetExceeded("symmetry group of " + s.to_string() + " exceeds the orbit budget");
    }
    EventAction act(s);
    auto locals = all_local_perms(s);
    auto perms = all_permutations(s.parties());
    const int n = s.parties();
    const std::size_t count = v.size();

    QuotientVector best = q;
    std::vector<std::size_t> pick(n, 0);
    std::vector<const LocalPerm*> lambda(n);
    for (const auto& pi : perms) {
        std::fill(pick.begin(), pick.end(), 0);
        while (true) {
            for (int i = 0; i < n; ++i) lambda[i] = &locals[pick[i]];
            for (std::size_t j = 0; j < count; ++j) {
                auto val = v[act.apply(j, pi, lambda)];
                if (val > best.coefficients[j]) break;
                if (val < best.coefficients[j]) {
                    for (std::size_t k = j; k < count; ++k) best.coefficients[k] = v[act.apply(k, pi, lambda)];
                    break;
                }
            }
            int i = 0;
            while (i < n && ++pick[i] == locals.size()) pick[i++] = 0;
            if (i == n) break;
        }
    }
    return best;
}

namespace {

bool canonical_less(const InequalityClass& a, const InequalityClass& b) {
    if (a.representative.size() != b.representative.size()) return a.representative.size() < b.representative.size();
    return event_matrix(a.representative) < event_matrix(b.representative);
}

} // namespace

std::vector<InequalityClass> classify(const std::vector<LOInequality>& ineqs, const ClassifyOptions& opts) {
    if (ineqs.empty()) return {};
    const auto s = ineqs.front().scenario();
    std::map<std::vector<std::vector<int>>, std::pair<LOInequality, std::uint64_t>> forms;
    for (const auto& i : ineqs) {
        if (i.scenario() != s) throw InputError("classify needs inequalities of one scenario");
        auto c = canonical_sym(i, opts);
        auto [it, fresh] = forms.try_emplace(event_matrix(c), c, 0);
        ++it->second.second;
    }
    std::map<std::pair<std::int64_t, std::vector<std::int64_t>>, InequalityClass> classes;
    for (auto& [matrix, entry] : forms) {
        auto& [form, count] = entry;
        auto q = orbit_minimal_quotient(s, ns_quotient(form), opts);
        auto key = std::make_pair(q.constant, q.coefficients);
        auto it = classes.find(key);
        if (it == classes.end()) {
            it = classes.emplace(key, InequalityClass{form, 0, 0, q.constant_only(), std::nullopt}).first;
        } else if (event_matrix(form) < event_matrix(it->second.representative)) {
            it->second.representative = form;
        }
        it->second.members += count;
        ++it->second.symmetry_forms;
    }
    std::vector<InequalityClass> out;
    for (auto& [key, c] : classes) out.push_back(std::move(c));
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

std::vector<InequalityClass> enumerate_classes(const Scenario& s, const ClassifyOptions& opts) {
    if (s.event_count() > ns_max_event_limit) {
        throw InputError("scenario " + s.to_string() + " exceeds the classification size limit");
    }
    const auto group = symmetry_group_order(s);
    if (group > opts.max_orbit) throw BudgetExceeded("symmetry group of " + s.to_string() + " exceeds the orbit budget");
    auto g = orthogonality_graph(s);

    // The relabeling group is transitive on events, so every class has members through event 0.
    const std::size_t zero = 0;
    auto cliques = maximal_cliques_containing(g, std::span<const std::size_t>(&zero, 1), opts.search);
    std::vector<bool> seen(cliques.size(), false);

    EventAction act(s);
    const int n = s.parties(), d = s.outcomes();
    auto locals = all_local_perms(s);
    std::vector<const LocalPerm*> stabilizer_locals;
    for (const auto& l : locals) {
        if (l[0] == 0) stabilizer_locals.push_back(&l);
    }
    auto perms = all_permutations(n);
    std::vector<int> identity_pi(n);
    std::iota(identity_pi.begin(), identity_pi.end(), 0);

    // Local relabeling sending label (x, a) to (0, 0) by two transpositions.
    std::vector<LocalPerm> to_zero(s.local_size());
    for (int x = 0; x < s.settings(); ++x) {
        for (int a = 0; a < d; ++a) {
            std::vector<int> sigma(s.settings());
            std::iota(sigma.begin(), sigma.end(), 0);
            std::swap(sigma[0], sigma[x]);
            std::vector<std::vector<int>> tau(s.settings(), std::vector<int>(d));
            for (auto& t : tau) std::iota(t.begin(), t.end(), 0);
            std::swap(tau[x][0], tau[x][a]);
            to_zero[x * d + a] = local_perm(s, sigma, tau);
        }
    }

    struct Orbit {
        VertexSet first;
        std::uint64_t through_zero = 0;
    };
    std::vector<Orbit> orbits;
    std::vector<const LocalPerm*> lambda(n);
    std::vector<std::uint64_t> moved, image;
    for (std::size_t c = 0; c < cliques.size(); ++c) {
        if (seen[c]) continue;
        Orbit orbit{cliques[c], 0};
        const auto& clique = cliques[c];
        for (auto e : clique) {
            for (int i = 0; i < n; ++i) lambda[i] = &to_zero[act.locals[e * n + i]];
            moved.clear();
            for (auto f : clique) moved.push_back(act.apply(f, identity_pi, lambda));
            std::vector<std::size_t> pick(n, 0);
            for (const auto& pi : perms) {
                std::fill(pick.begin(), pick.end(), 0);
                while (true) {
                    for (int i = 0; i < n; ++i) lambda[i] = stabilizer_locals[pick[i]];
                    image.clear();
                    for (auto f : moved) image.push_back(act.apply(f, pi, lambda));
                    std::sort(image.begin(), image.end());
                    VertexSet key(image.begin(), image.end());
                    auto it = std::lower_bound(cliques.begin(), cliques.end(), key);
                    if (it == cliques.end() || *it != key) throw InternalError("relabeled maximal clique not found");
                    auto idx = static_cast<std::size_t>(it - cliques.begin());
                    if (!seen[idx]) {
                        seen[idx] = true;
                        ++orbit.through_zero;
                    }
                    int i = 0;
                    while (i < n && ++pick[i] == stabilizer_locals.size()) pick[i++] = 0;
                    if (i == n) break;
                }
            }
        }
        orbits.push_back(std::move(orbit));
    }

    struct Pending {
        std::vector<std::size_t> orbit_ids;
        QuotientVector quotient;
    };
    std::map<std::pair<std::int64_t, std::vector<std::int64_t>>, Pending> groups;
    for (std::size_t o = 0; o < orbits.size(); ++o) {
        auto q = orbit_minimal_quotient(s, ns_quotient(from_clique(g, orbits[o].first)), opts);
        auto& slot = groups[{q.constant, q.coefficients}];
        if (slot.orbit_ids.empty()) slot.quotient = q;
        slot.orbit_ids.push_back(o);
    }

    std::int64_t scale = 1;
    for (int p = 0; p < n; ++p) scale *= static_cast<std::int64_t>(s.local_size());
    std::vector<InequalityClass> out;
    for (auto& [key, pending] : groups) {
        auto first = from_clique(g, orbits[pending.orbit_ids.front()].first);
        Rational value = pending.quotient.constant_only() ? make_rational(pending.quotient.constant, scale)
                                                          : ns_max(first, opts.lp);
        if (value <= 1) continue;
        InequalityClass cls{canonical_sym(first, opts), 0, pending.orbit_ids.size(), pending.quotient.constant_only(), value};
        for (auto o : pending.orbit_ids) {
            const auto& orbit = orbits[o];
            auto r = orbit.first.size();
            auto total = s.event_count() * orbit.through_zero;
            if (total % r != 0) throw InternalError("orbit size is not an integer");
            cls.members += total / r;
            if (o != pending.orbit_ids.front()) {
                auto form = canonical_sym(from_clique(g, orbit.first), opts);
                if (event_matrix(form) < event_matrix(cls.representative)) cls.representative = form;
            }
        }
        out.push_back(std::move(cls));
    }
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

std::string class_file_name(const Scenario& s, std::size_t index) {
    return "class_" + std::to_string(s.parties()) + "-" + std::to_string(s.settings()) + "-" +
           std::to_string(s.outcomes()) + "_" + std::to_string(index) + ".loineq";
}

} // namespace locorth
