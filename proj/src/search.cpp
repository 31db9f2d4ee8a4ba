#include "locorth/search.hpp"

#include "locorth/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

namespace locorth {

namespace {

class Deadline {
public:
    explicit Deadline(double seconds) : seconds_(seconds), start_(std::chrono::steady_clock::now()) {}

    void check() const {
        if (seconds_ <= 0) return;
        std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
        if (elapsed.count() > seconds_) throw BudgetExceeded("time budget of " + std::to_string(seconds_) + " s exhausted");
    }

private:
    double seconds_;
    std::chrono::steady_clock::time_point start_;
};

Bitset all_vertices(std::size_t n) {
    Bitset b(n);
    b.set_all();
    return b;
}

// Degeneracy order of the subgraph induced by `within`: repeatedly remove a minimum-degree vertex.
std::vector<std::size_t> degeneracy_order(const Graph& g, const Bitset& within) {
    std::vector<std::size_t> vertices;
    for_each_bit(within, [&](std::size_t v) { vertices.push_back(v); });
    std::vector<std::size_t> degree(g.size(), 0);
    for (auto v : vertices) degree[v] = within.intersection_count(g.row(v));
    Bitset remaining = within;
    std::vector<std::size_t> order;
    order.reserve(vertices.size());
    for (std::size_t step = 0; step < vertices.size(); ++step) {
        std::size_t pick = g.size();
        for_each_bit(remaining, [&](std::size_t v) {
            if (pick == g.size() || degree[v] < degree[pick]) pick = v;
        });
        order.push_back(pick);
        remaining.reset(pick);
        for_each_bit(remaining, [&](std::size_t v) {
            if (g.adjacent(pick, v)) --degree[v];
        });
    }
    return order;
}

struct SharedBudget {
    const SearchOptions& opts;
    Deadline deadline;
    std::atomic<std::uint64_t> cliques{0};
    std::atomic<bool> abort{false};

    explicit SharedBudget(const SearchOptions& o) : opts(o), deadline(o.max_seconds) {}

    void count_clique() {
        if (++cliques > opts.max_cliques) {
            throw BudgetExceeded("clique budget of " + std::to_string(opts.max_cliques) + " exhausted");
        }
    }
};

class BronKerbosch {
public:
    BronKerbosch(const Graph& g, SharedBudget& budget, const std::function<void(const VertexSet&)>& visit)
        : g_(g), budget_(budget), visit_(visit) {}

    void run(VertexSet& r, Bitset p, Bitset x) {
        if ((++nodes_ & 1023) == 0) {
            if (budget_.abort) throw BudgetExceeded("aborted");
            budget_.deadline.check();
        }
        if (p.none()) {
            if (x.none()) report(r);
            return;
        }
        // Pivot: vertex of P u X with the most neighbours in P.
        std::size_t pivot = 0, best = 0;
        bool have = false;
        auto consider = [&](std::size_t u) {
            auto c = p.intersection_count(g_.row(u));
            if (!have || c > best) {
                pivot = u;
                best = c;
                have = true;
            }
        };
        for_each_bit(p, consider);
        for_each_bit(x, consider);

        Bitset branch = p;
        branch.subtract(g_.row(pivot));
        for_each_bit(branch, [&](std::size_t v) {
            Bitset np = p;
            np &= g_.row(v);
            Bitset nx = x;
            nx &= g_.row(v);
            r.push_back(v);
            run(r, std::move(np), std::move(nx));
            r.pop_back();
            p.reset(v);
            x.set(v);
        });
    }

private:
    void report(const VertexSet& r) {
        budget_.count_clique();
        VertexSet sorted = r;
        std::sort(sorted.begin(), sorted.end());
        visit_(sorted);
    }

    const Graph& g_;
    SharedBudget& budget_;
    const std::function<void(const VertexSet&)>& visit_;
    std::uint64_t nodes_ = 0;
};

Bitset common_neighbourhood(const Graph& g, std::span<const std::size_t> required) {
    Bitset p = all_vertices(g.size());
    for (auto v : required) {
        if (v >= g.size()) throw InputError("vertex " + std::to_string(v) + " out of range");
        p &= g.row(v);
    }
    for (std::size_t i = 0; i < required.size(); ++i) {
        for (std::size_t j = i + 1; j < required.size(); ++j) {
            if (required[i] == required[j] || !g.adjacent(required[i], required[j])) {
                throw InputError("required vertices " + std::to_string(required[i]) + " and " +
                                 std::to_string(required[j]) + " do not form a clique");
            }
        }
    }
    return p;
}

// Top-level branch i of the degeneracy-ordered enumeration.
void run_branch(BronKerbosch& bk, const Graph& g, std::span<const std::size_t> required,
                const std::vector<std::size_t>& order, const std::vector<std::size_t>& position, const Bitset& p0,
                std::size_t i) {
    auto v = order[i];
    Bitset p(g.size()), x(g.size());
    for_each_bit(p0, [&](std::size_t u) {
        if (!g.adjacent(v, u)) return;
        if (position[u] > i) p.set(u);
        else x.set(u);
    });
    VertexSet r(required.begin(), required.end());
    r.push_back(v);
    bk.run(r, std::move(p), std::move(x));
}

void enumerate(const Graph& g, std::span<const std::size_t> required, const SearchOptions& opts, bool parallel,
               const std::function<void(const VertexSet&)>& visit_single,
               std::vector<VertexSet>* collected) {
    Bitset p0 = common_neighbourhood(g, required);
    SharedBudget budget(opts);
    if (p0.none()) {
        if (!required.empty() || g.size() == 0) {
            budget.count_clique();
            VertexSet r(required.begin(), required.end());
            std::sort(r.begin(), r.end());
            if (collected) collected->push_back(r);
            else visit_single(r);
        }
        return;
    }
    auto order = degeneracy_order(g, p0);
    std::vector<std::size_t> position(g.size(), 0);
    for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;

    unsigned threads = opts.threads ? opts.threads : std::max(1U, std::thread::hardware_concurrency());
    if (!parallel || threads == 1 || order.size() < 2) {
        std::function<void(const VertexSet&)> visit = collected
            ? std::function<void(const VertexSet&)>([&](const VertexSet& c) { collected->push_back(c); })
            : visit_single;
        BronKerbosch bk(g, budget, visit);
        for (std::size_t i = 0; i < order.size(); ++i) run_branch(bk, g, required, order, position, p0, i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::vector<VertexSet>> local(threads);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&](unsigned t) {
        std::function<void(const VertexSet&)> visit = [&](const VertexSet& c) { local[t].push_back(c); };
        BronKerbosch bk(g, budget, visit);
        try {
            for (std::size_t i; (i = next++) < order.size() && !budget.abort;) {
                run_branch(bk, g, required, order, position, p0, i);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            budget.abort = true;
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    for (auto& part : local) {
        for (auto& c : part) collected->push_back(std::move(c));
    }
}

// Branch and bound over integer weights with a greedy colouring bound.
template <typename W>
class WeightedSearch {
public:
    WeightedSearch(const Graph& g, const std::vector<W>& w, const SearchOptions& opts)
        : g_(g), w_(w), opts_(opts), deadline_(opts.max_seconds) {}

    /// Finds a clique of weight > floor; stops at the first one when `first_only`.
    bool run(const W& floor, bool first_only) {
        best_ = floor;
        first_only_ = first_only;
        found_ = false;
        current_weight_ = 0;
        Bitset p = all_vertices(g_.size());
        expand(p);
        return found_;
    }

    const VertexSet& best_set() const { return best_set_; }
    const W& best_weight() const { return best_; }

private:
    void expand(Bitset p) {
        if (++nodes_ % 1024 == 0) deadline_.check();
        if (opts_.max_nodes && nodes_ > opts_.max_nodes) {
            throw BudgetExceeded("node budget of " + std::to_string(opts_.max_nodes) + " exhausted");
        }
        std::vector<std::size_t> order;
        std::vector<W> bound;
        Bitset uncoloured = p;
        W acc = 0;
        while (uncoloured.any()) {
            Bitset q = uncoloured;
            W heaviest = 0;
            for (auto v = q.first(); v < q.size(); v = q.next(v)) {
                q.subtract(g_.row(v));
                q.reset(v);
                uncoloured.reset(v);
                order.push_back(v);
                if (w_[v] > heaviest) heaviest = w_[v];
            }
            acc += heaviest;
            bound.resize(order.size(), acc);
        }
        for (std::size_t j = order.size(); j-- > 0;) {
            if (current_weight_ + bound[j] <= best_) return;
            auto v = order[j];
            current_.push_back(v);
            current_weight_ += w_[v];
            if (current_weight_ > best_) {
                best_ = current_weight_;
                best_set_ = current_;
                found_ = true;
                if (first_only_) return;
            }
            Bitset np = p;
            np &= g_.row(v);
            if (np.any()) {
                expand(std::move(np));
                if (found_ && first_only_) return;
            }
            current_.pop_back();
            current_weight_ -= w_[v];
            p.reset(v);
        }
    }

    const Graph& g_;
    const std::vector<W>& w_;
    const SearchOptions& opts_;
    Deadline deadline_;
    std::uint64_t nodes_ = 0;
    W best_ = 0;
    W current_weight_ = 0;
    bool first_only_ = false;
    bool found_ = false;
    VertexSet current_;
    VertexSet best_set_;
};

struct ScaledWeights {
    mpz_class denominator;
    std::vector<mpz_class> weights;
    mpz_class floor;
    bool fits_int64 = false;
};

ScaledWeights scale(const WeightedGraph& wg, const Rational& floor) {
    if (wg.weights.size() != wg.graph.size()) throw InputError("weight vector does not match the graph size");
    ScaledWeights s;
    s.denominator = floor.get_den();
    for (const auto& w : wg.weights) {
        if (w < 0) throw InputError("negative vertex weight");
        mpz_lcm(s.denominator.get_mpz_t(), s.denominator.get_mpz_t(), w.get_den_mpz_t());
    }
    mpz_class total = 0;
    for (const auto& w : wg.weights) {
        s.weights.push_back(w.get_num() * (s.denominator / w.get_den()));
        total += s.weights.back();
    }
    s.floor = floor.get_num() * (s.denominator / floor.get_den());
    s.fits_int64 = total.fits_slong_p() && s.floor.fits_slong_p() && sizeof(long) == 8;
    return s;
}

template <typename W>
std::optional<WeightedClique> weighted_search(const WeightedGraph& wg, const std::vector<W>& w, const W& floor,
                                              bool first_only, const SearchOptions& opts) {
    WeightedSearch<W> search(wg.graph, w, opts);
    if (!search.run(floor, first_only)) return std::nullopt;
    WeightedClique c{search.best_set(), 0};
    std::sort(c.vertices.begin(), c.vertices.end());
    for (auto v : c.vertices) c.weight += wg.weights[v];
    return c;
}

std::optional<WeightedClique> dispatch(const WeightedGraph& wg, const Rational& floor, bool first_only,
                                       const SearchOptions& opts) {
    auto s = scale(wg, floor);
    if (s.fits_int64) {
        std::vector<std::int64_t> w;
        for (const auto& x : s.weights) w.push_back(x.get_si());
        return weighted_search<std::int64_t>(wg, w, s.floor.get_si(), first_only, opts);
    }
    return weighted_search<mpz_class>(wg, s.weights, s.floor, first_only, opts);
}

} // namespace

bool is_clique(const Graph& g, std::span<const std::size_t> c) {
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] >= g.size()) return false;
        for (std::size_t j = i + 1; j < c.size(); ++j) {
            if (c[i] == c[j] || !g.adjacent(c[i], c[j])) return false;
        }
    }
    return true;
}

bool is_maximal_clique(const Graph& g, std::span<const std::size_t> c) {
    if (!is_clique(g, c)) return false;
    Bitset common = all_vertices(g.size());
    for (auto v : c) common &= g.row(v);
    return common.none();
}

std::vector<VertexSet> maximal_cliques(const Graph& g, const SearchOptions& opts) {
    return maximal_cliques_containing(g, {}, opts);
}

std::vector<VertexSet> maximal_cliques_containing(const Graph& g, std::span<const std::size_t> required,
                                                  const SearchOptions& opts) {
    std::vector<VertexSet> out;
    enumerate(g, required, opts, true, {}, &out);
    std::sort(out.begin(), out.end());
    return out;
}

void for_each_maximal_clique(const Graph& g, std::span<const std::size_t> required,
                             const std::function<void(const VertexSet&)>& visit, const SearchOptions& opts) {
    enumerate(g, required, opts, false, visit, nullptr);
}

std::optional<WeightedClique> max_weighted_clique(const WeightedGraph& wg, const Rational& threshold,
                                                  const SearchOptions& opts) {
    return dispatch(wg, threshold, true, opts);
}

WeightedClique maximum_weight_clique(const WeightedGraph& wg, const SearchOptions& opts) {
    // Any clique beats floor -1, so the search always returns one when the graph is nonempty.
    if (wg.graph.size() == 0) return {};
    auto best = dispatch(wg, Rational(-1), false, opts);
    return best ? *best : WeightedClique{};
}

VertexSet maximum_clique(const Graph& g, const SearchOptions& opts) {
    WeightedGraph wg{g, std::vector<Rational>(g.size(), Rational(1))};
    return maximum_weight_clique(wg, opts).vertices;
}

std::size_t clique_number(const Graph& g, const SearchOptions& opts) { return maximum_clique(g, opts).size(); }

std::size_t independence_number(const Graph& g, const SearchOptions& opts) {
    return clique_number(complement(g), opts);
}

VertexSet maximum_independent_set(const Graph& g, const SearchOptions& opts) {
    return maximum_clique(complement(g), opts);
}

} // namespace locorth
