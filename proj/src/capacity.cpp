#include "locorth/capacity.hpp"

#include "locorth/errors.hpp"

#include <algorithm>
#include <cmath>

namespace locorth {

double reference_theta_pr() { return 4.0 * (2.0 - std::sqrt(2.0)); }

NoisyFamily pr_family(int k) {
    if (k < 1) throw InputError("k must be at least 1");
    return {pr_box(), uniform_box(Scenario(2, 2, 2)), k};
}

Graph support_non_orthogonality_graph(const Box& b) {
    const auto& s = b.scenario();
    auto events = support(b);
    GraphBuilder builder(events.size());
    for (std::size_t u = 0; u < events.size(); ++u) {
        for (std::size_t v = u + 1; v < events.size(); ++v) {
            if (!are_orthogonal(s, events[u], events[v])) builder.add_edge(u, v);
        }
    }
    builder.set_labels(VertexLabels{s, events});
    return std::move(builder).build();
}

std::size_t alpha_k(const Box& b, int k, const SearchOptions& opts) {
    if (k < 1) throw InputError("k must be at least 1");
    const auto& entries = b.entries();
    if (entries.empty()) throw InputError("box has empty support");
    for (const auto& [e, p] : entries) {
        if (p != entries.begin()->second) throw InputError("support probabilities are not all equal");
    }
    return independence_number(strong_power(support_non_orthogonality_graph(b), k), opts);
}

CapacityBound capacity_bound(const Box& b, int k, const SearchOptions& opts) {
    CapacityBound c;
    c.k = k;
    c.alpha_k = alpha_k(b, k, opts);
    c.lower_bound_theta = std::pow(static_cast<double>(c.alpha_k), 1.0 / k);
    if (b == pr_box()) c.reference_upper_theta = reference_theta_pr();
    return c;
}

PurityResult critical_purity_theta(double theta, const Rational& c, int n, int d) {
    if (n < 1 || d < 2) throw InputError("critical purity needs n >= 1 and d >= 2");
    mpz_class dn;
    mpz_ui_pow_ui(dn.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(n));
    const double floor = 1.0 / dn.get_d();
    if (c <= Rational(1) / Rational(dn) || theta <= 0) {
        throw InputError("critical purity needs c > d^-n and a positive capacity");
    }
    double q = (1.0 / theta - floor) / (to_double(c) - floor);
    PurityResult r{q, false};
    if (q < 0) r = {0, true};
    if (q > 1) r = {1, true};
    return r;
}

PurityResult critical_purity(std::size_t alpha, int k, const Rational& c, int n, int d) {
    if (alpha < 1 || k < 1) throw InputError("critical purity needs alpha >= 1 and k >= 1");
    return critical_purity_theta(std::pow(static_cast<double>(alpha), 1.0 / k), c, n, d);
}

std::vector<Rational> value_polynomial(const LOInequality& i, const NoisyFamily& fam) {
    if (fam.base.scenario() != fam.noise.scenario()) throw InputError("family base and noise differ in scenario");
    const auto& s1 = fam.base.scenario();
    Scenario sk(s1.parties() * fam.k, s1.settings(), s1.outcomes());
    if (i.scenario() != sk) {
        throw InputError("inequality scenario " + i.scenario().to_string() + " does not match family scenario " + sk.to_string());
    }
    const auto per_copy = s1.event_count();
    std::vector<Rational> poly(fam.k + 1);
    for (auto e : i.events()) {
        std::vector<Rational> term{Rational(1)};
        auto rest = e;
        for (int copy = 0; copy < fam.k; ++copy) {
            auto part = rest % per_copy;
            rest /= per_copy;
            Rational noise = fam.noise.probability(part);
            Rational slope = fam.base.probability(part) - noise;
            std::vector<Rational> next(term.size() + 1);
            for (std::size_t j = 0; j < term.size(); ++j) {
                next[j] += term[j] * noise;
                next[j + 1] += term[j] * slope;
            }
            term = std::move(next);
        }
        for (std::size_t j = 0; j < term.size(); ++j) poly[j] += term[j];
    }
    return poly;
}

Rational evaluate_polynomial(const std::vector<Rational>& poly, const Rational& q) {
    Rational v = 0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) v = v * q + *it;
    return v;
}

ThresholdResult violation_threshold(const LOInequality& i, const NoisyFamily& fam) {
    auto poly = value_polynomial(i, fam);
    auto f = [&](const Rational& q) -> Rational { return evaluate_polynomial(poly, q) - 1; };
    if (f(Rational(1)) <= 0) throw InputError("the family never violates this inequality on [0,1]");

    ThresholdResult r;
    Rational prev = f(Rational(0));
    for (int j = 1; j <= 32 && r.monotone; ++j) {
        Rational cur = f(make_rational(j, 32));
        if (cur < prev) r.monotone = false;
        prev = cur;
    }
    Rational lo(0), hi(1);
    if (!r.monotone || f(lo) > 0) {
        // Locate the last crossing from <= 0 to > 0 on a fine grid.
        const int grid = 10000;
        bool found = false;
        for (int j = grid; j > 0; --j) {
            if (f(make_rational(j, grid)) > 0 && f(make_rational(j - 1, grid)) <= 0) {
                lo = make_rational(j - 1, grid);
                hi = make_rational(j, grid);
                found = true;
                break;
            }
        }
        if (!found) throw InputError("the family violates this inequality on all of [0,1]");
    }
    while (hi - lo > Rational(1, 1) / Rational(mpz_class(1) << 50)) {
        Rational mid = (lo + hi) / 2;
        if (f(mid) > 0) hi = mid;
        else lo = mid;
    }
    r.lower = lo;
    r.upper = hi;
    r.q = to_double((lo + hi) / 2);
    return r;
}

std::optional<CliqueThreshold> min_threshold_over_cliques(const NoisyFamily& fam, const SearchOptions& opts) {
    const auto& s1 = fam.base.scenario();
    Scenario sk(s1.parties() * fam.k, s1.settings(), s1.outcomes());
    auto g = orthogonality_graph(sk);
    Box top = tensor_power(fam.base, fam.k);
    std::optional<CliqueThreshold> best;
    std::vector<std::vector<int>> best_matrix;
    for_each_maximal_clique(g, {}, [&](const VertexSet& c) {
        Rational at_one = 0;
        for (auto v : c) at_one += top.probability(v);
        if (at_one <= 1) return;
        LOInequality ineq(sk, std::vector<std::uint64_t>(c.begin(), c.end()));
        auto t = violation_threshold(ineq, fam);
        if (!best || t.q < best->q - 1e-12) {
            best = CliqueThreshold{t.q, ineq};
            best_matrix.clear();
        } else if (std::abs(t.q - best->q) <= 1e-12) {
            std::vector<std::vector<int>> m;
            for (const auto& e : ineq.event_list()) {
                std::vector<int> row = e.outcomes;
                row.insert(row.end(), e.settings.begin(), e.settings.end());
                m.push_back(std::move(row));
            }
            std::sort(m.begin(), m.end());
            if (best_matrix.empty()) {
                for (const auto& e : best->witness.event_list()) {
                    std::vector<int> row = e.outcomes;
                    row.insert(row.end(), e.settings.begin(), e.settings.end());
                    best_matrix.push_back(std::move(row));
                }
                std::sort(best_matrix.begin(), best_matrix.end());
            }
            if (m < best_matrix) {
                best = CliqueThreshold{std::min(t.q, best->q), ineq};
                best_matrix = std::move(m);
            }
        }
    }, opts);
    return best;
}

Graph packing_conflict_graph(int k, int side, int cube) {
    if (k < 1 || side < 1 || cube < 1) throw InputError("packing needs positive dimension, side and cube");
    std::size_t n = 1;
    for (int j = 0; j < k; ++j) {
        n *= static_cast<std::size_t>(side);
        if (n > (std::size_t{1} << 20)) throw InputError("packing torus too large");
    }
    auto cyclic = [&](int a, int b) {
        int diff = std::abs(a - b) % side;
        return std::min(diff, side - diff);
    };
    GraphBuilder builder(n);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            bool overlap = true;
            auto a = u, b = v;
            for (int j = 0; j < k && overlap; ++j) {
                overlap = cyclic(static_cast<int>(a % side), static_cast<int>(b % side)) < cube;
                a /= side;
                b /= side;
            }
            if (overlap) builder.add_edge(u, v);
        }
    }
    return std::move(builder).build();
}

std::size_t box_packing_count(int k, int side, int cube, const SearchOptions& opts) {
    return independence_number(packing_conflict_graph(k, side, cube), opts);
}

} // namespace locorth
