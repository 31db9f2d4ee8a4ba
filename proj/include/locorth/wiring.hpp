#pragma once

#include "locorth/boxes.hpp"
#include "locorth/inequalities.hpp"

#include <map>
#include <random>
#include <string>
#include <vector>

namespace locorth {

/// One group of base-party slots wired into a single party of the new box. Every table is keyed by
/// the group input y followed by the outcomes obtained so far, in temporal order.
struct WiringGroup {
    std::vector<int> slots;                    // slot = copy * n + party; ascending
    int inputs = 2;                            // Y
    int outputs = 2;                           // B
    std::map<std::vector<int>, int> order;     // history of length < |slots| -> next slot to measure
    std::map<std::vector<int>, int> input;     // same key -> setting fed to that slot
    std::map<std::vector<int>, int> output;    // complete history -> group outcome

    bool operator==(const WiringGroup&) const = default;
};

struct WiringProtocol {
    int copies = 1;
    Scenario base{1, 1, 2};
    std::vector<WiringGroup> groups;

    bool operator==(const WiringProtocol&) const = default;
};

/// Classical side resource: wiring acts on P^{(x)r} (x) P_loc with P_loc built from `local_model`.
struct StochasticWiring {
    LHVModel local_model;
    /// Protocol with copies = 1 over the scenario of P^{(x)r} (x) P_loc.
    WiringProtocol base;
    int copies = 1;
};

/// Scenario (groups, Y, B) of the wired box.
Scenario wired_scenario(const WiringProtocol& p);

/// Throws InputError unless the groups partition the slots, share Y and B, and every reachable
/// history has total order, input and output entries with each slot measured once.
void check_protocol(const WiringProtocol& p);

/// P_wired(b|y) as the sum of P^{(x)r} over outcome histories producing b.
Box wire(const Box& b, const WiringProtocol& p);

/// Replaces each term by its history events on the base scenario (n*r, m, d); the result is
/// asserted pairwise orthogonal (InternalError otherwise).
LOInequality expand_inequality(const LOInequality& i, const WiringProtocol& p);

Box stochastic_wire(const Box& b, const StochasticWiring& sw);

/// Each slot its own group, Y = m, B = d, identity maps.
WiringProtocol identity_protocol(const Scenario& s, int copies = 1);
/// Same local pre- and post-processing at every party: setting input_map[y], outcome output_map[y][a] in [0, B).
WiringProtocol local_protocol(const Scenario& s, const std::vector<int>& input_map,
                              const std::vector<std::vector<int>>& output_map, int outputs);

struct RandomProtocolOptions {
    int groups = 2;
    int inputs = 2;
    int outputs = 2;
    /// When false, every group measures its slots in ascending order regardless of history.
    bool dynamic = true;
};

/// Random partition of the r*n slots into nonempty groups with random total tables.
WiringProtocol random_protocol(const Scenario& base, int copies, const RandomProtocolOptions& opts, std::mt19937_64& rng);

// Text format; see docs/formats.md.
WiringProtocol parse_wiring(const std::string& text);
std::string serialize_wiring(const WiringProtocol& p);
WiringProtocol read_wiring_file(const std::string& path);
void write_wiring_file(const std::string& path, const WiringProtocol& p);

} // namespace locorth
