#pragma once

#include "locorth/rational.hpp"
#include "locorth/scenario.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace locorth {

/// Conditional distribution P(a|x) with exact rational entries; omitted events are zero.
class Box {
public:
    using Table = std::map<std::uint64_t, Rational>;

    explicit Box(Scenario s) : scenario_(s) {}
    /// Zero entries are dropped; negative entries or out-of-range events throw InputError.
    Box(Scenario s, Table table);

    const Scenario& scenario() const { return scenario_; }
    const Table& entries() const { return table_; }

    Rational probability(std::uint64_t event) const;
    Rational probability(const Event& e) const { return probability(encode(scenario_, e)); }

    bool operator==(const Box& other) const { return scenario_ == other.scenario_ && table_ == other.table_; }

private:
    Scenario scenario_;
    Table table_;
};

struct Verdict {
    enum class Kind { ok, not_normalized, signaling };
    Kind kind = Kind::ok;
    /// Offending setting tuple (not_normalized, signaling).
    std::vector<int> context;
    /// Party whose setting change alters the others' marginal (signaling only).
    int party = -1;

    bool ok() const { return kind == Kind::ok; }
    std::string describe() const;
};

/// Exact normalization and no-signaling check.
Verdict validate(const Box& b);

/// P(ab|xy) = 1/2 iff a xor b = x*y.
Box pr_box();
/// PR variant a xor b = xy xor alpha*x xor beta*y xor gamma.
Box pr_box_variant(int alpha, int beta, int gamma);
Box uniform_box(const Scenario& s);
/// response[party][setting] = outcome.
Box deterministic_box(const Scenario& s, const std::vector<std::vector<int>>& response);

/// One hidden-variable value: a weight and a deterministic response per party and setting.
struct LHVStrategy {
    Rational weight;
    std::vector<std::vector<int>> response;   // response[party][setting]
};

struct LHVModel {
    Scenario scenario;
    std::vector<LHVStrategy> strategies;
};

/// Classical box sum_lambda q(lambda) prod_i delta(a_i, f_i(x_i, lambda)).
Box from_lhv(const LHVModel& model);

/// Parties of b1 first, then b2; requires equal m and d.
Box tensor(const Box& b1, const Box& b2);
Box tensor_power(const Box& b, int k);

/// q*b1 + (1-q)*b2, q in [0,1].
Box mix(const Box& b1, const Box& b2, const Rational& q);

/// Events with positive probability, ascending.
std::vector<std::uint64_t> support(const Box& b);

/// Joint distribution P(a, x) = P(a|x) P(x) keyed by event index.
std::map<std::uint64_t, Rational> unconditional_joint(const Box& b, const std::map<std::uint64_t, Rational>& input_dist);

/// Random classical model with `strategies` deterministic components and weights of denominator <= max_den.
LHVModel random_lhv_model(const Scenario& s, std::mt19937_64& rng, int strategies = 4, int max_den = 12);

/// Random no-signaling box: convex mixture of deterministic boxes and, when the scenario is
/// (2k,2,2), tensor products of PR variants and deterministic pair boxes.
Box random_ns_box(const Scenario& s, std::mt19937_64& rng, int components = 4, int max_den = 12);

// Text format: "box <n> <m> <d>" then "<a1..an>|<x1..xn> <num>/<den>" lines, '#' comments.
Box parse_box(const std::string& text);
std::string serialize_box(const Box& b);
Box read_box_file(const std::string& path);
void write_box_file(const std::string& path, const Box& b);

/// "pr", "uniform", "uniform:n,m,d", "det:<outs>,<outs>,..." (one digit string per party, indexed by setting),
/// or a path to a box file.
Box named_box(const std::string& name);

} // namespace locorth
