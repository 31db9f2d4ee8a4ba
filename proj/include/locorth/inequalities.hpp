#pragma once

#include "locorth/boxes.hpp"
#include "locorth/graph.hpp"
#include "locorth/lp.hpp"
#include "locorth/rational.hpp"
#include "locorth/scenario.hpp"
#include "locorth/search.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace locorth {

/// sum_j P(e_j) <= 1 over pairwise orthogonal events e_j.
class LOInequality {
public:
    /// Events are sorted and must be distinct and pairwise orthogonal (InputError names the offending pair).
    LOInequality(Scenario s, std::vector<std::uint64_t> events);
    LOInequality(Scenario s, const std::vector<Event>& events);

    const Scenario& scenario() const { return scenario_; }
    /// Ascending event indices.
    const std::vector<std::uint64_t>& events() const { return events_; }
    std::size_t size() const { return events_.size(); }
    bool contains(std::uint64_t event) const;
    /// Events decoded, in index order.
    std::vector<Event> event_list() const;

    auto operator<=>(const LOInequality&) const = default;

private:
    Scenario scenario_;
    std::vector<std::uint64_t> events_;
};

struct LOWitness {
    int k = 0;
    LOInequality inequality;
    Rational value;
};

struct LOVerdict {
    bool satisfied = true;
    std::optional<LOWitness> witness;
    /// Filled only when every violated maximal support clique was requested.
    std::vector<LOWitness> all_witnesses;
};

struct LOKOptions {
    SearchOptions search;
    bool all_witnesses = false;
    /// When violated, report a clique of maximum weight instead of the first one found.
    bool maximize = false;
};

/// Inequality over the labels of clique `c` in a labelled orthogonality graph.
LOInequality from_clique(const Graph& g, std::span<const std::size_t> c);

/// Exact left-hand side sum_j P(e_j).
Rational evaluate(const LOInequality& i, const Box& b);

/// True iff no further event is orthogonal to every term.
bool is_optimal(const LOInequality& i);

/// Every maximal clique of the orthogonality graph containing the terms of `i`, in sorted order.
std::vector<LOInequality> complete_to_maximal(const LOInequality& i, const SearchOptions& opts = {});

/// Searches the orthogonality graph restricted to the support of b^{(x)k} for a clique of weight above 1.
LOVerdict check_lo_k(const Box& b, int k, const LOKOptions& opts = {});

/// Normalization and no-signaling equalities over all (m*d)^n event probabilities, with `objective`.
LinearProgram ns_polytope_lp(const Scenario& s, const std::vector<Rational>& objective);

/// Largest events count accepted by ns_max.
inline constexpr std::uint64_t ns_max_event_limit = 4096;

/// Exact maximum of evaluate(i, b) over no-signaling boxes b.
Rational ns_max(const LOInequality& i, const LPOptions& opts = {});

struct NSOptimum {
    Rational value;
    Box box;   // a no-signaling box attaining the value
};
NSOptimum ns_optimum(const LOInequality& i, const LPOptions& opts = {});

// Text format: "scenario <n> <m> <d>" then one "<a1..an>|<x1..xn>" per line, '#' comments.
LOInequality parse_inequality(const std::string& text);
std::string serialize_inequality(const LOInequality& i, const std::string& comment = {});
LOInequality read_inequality_file(const std::string& path);
void write_inequality_file(const std::string& path, const LOInequality& i, const std::string& comment = {});

} // namespace locorth
