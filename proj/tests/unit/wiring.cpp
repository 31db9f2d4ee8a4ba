#include "locorth/boxes.hpp"
#include "locorth/errors.hpp"
#include "locorth/inequalities.hpp"
#include "locorth/wiring.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace locorth;

namespace {

LOInequality random_maximal(const Scenario& s, std::mt19937_64& rng) {
    std::vector<std::uint64_t> order(s.event_count());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::uint64_t> chosen;
    for (auto e : order) {
        bool ok = std::all_of(chosen.begin(), chosen.end(), [&](std::uint64_t f) { return are_orthogonal(s, e, f); });
        if (ok) chosen.push_back(e);
    }
    return LOInequality(s, chosen);
}

} // namespace

TEST_CASE("identity wirings") {
    Box pr = pr_box();
    CHECK(wire(pr, identity_protocol(pr.scenario())) == pr);
    CHECK(wire(pr, identity_protocol(pr.scenario(), 2)) == tensor_power(pr, 2));
    CHECK(wired_scenario(identity_protocol(Scenario(3, 2, 3), 2)) == Scenario(6, 2, 3));
}

TEST_CASE("parity wiring of two PR boxes") {
    auto p = read_wiring_file(data_path("parity_2.wiring"));
    CHECK_NOTHROW(check_protocol(p));
    Box w = wire(pr_box(), p);
    CHECK(validate(w).ok());
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            CHECK(w.probability(Event{{0, 0}, {x, y}}) == Rational(1, 2));
            CHECK(w.probability(Event{{1, 1}, {x, y}}) == Rational(1, 2));
        }
}

TEST_CASE("local processing") {
    // Flip every party's outcome under setting 1.
    auto p = local_protocol(Scenario(2, 2, 2), {0, 1}, {{0, 1}, {1, 0}}, 2);
    Box w = wire(pr_box(), p);
    CHECK(validate(w).ok());
    CHECK(w == pr_box_variant(1, 1, 0));
}

TEST_CASE("wiring text round trip") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 30; ++t) {
        const int copies = 1 + t % 2;
        RandomProtocolOptions o;
        o.groups = 1 + t % (2 * copies);
        o.inputs = 2 + t % 2;
        o.outputs = 2 + (t / 2) % 2;
        o.dynamic = t % 4 != 0;
        auto p = random_protocol(Scenario(2, 2, 2), copies, o, rng);
        CHECK(parse_wiring(serialize_wiring(p)) == p);
    }
    CHECK(parse_wiring(serialize_wiring(identity_protocol(Scenario(3, 2, 3)))) == identity_protocol(Scenario(3, 2, 3)));
}

TEST_CASE("malformed wirings") {
    auto p = identity_protocol(Scenario(2, 2, 2));
    p.groups[1].slots = {0};
    CHECK_THROWS_AS(check_protocol(p), InputError);
    auto q = identity_protocol(Scenario(2, 2, 2));
    q.groups[0].output.clear();
    CHECK_THROWS_AS(check_protocol(q), InputError);
    CHECK_THROWS_AS(parse_wiring("wiring r=1 base 2 2 2\ngroup 0: parties 0 inputs 2\n"), InputError);
}

TEST_CASE("wirings keep classical boxes classical and no-signaling boxes no-signaling") {
    std::mt19937_64 rng(43);
    for (int t = 0; t < 100; ++t) {
        Scenario base(2, 2, 2);
        RandomProtocolOptions o;
        o.groups = 2 + t % 2;
        o.dynamic = t % 3 != 0;
        auto p = random_protocol(base, 2, o, rng);
        Box c = wire(from_lhv(random_lhv_model(base, rng)), p);
        CHECK(validate(c).ok());
        CHECK(check_lo_k(c, 1).satisfied);
        CHECK(validate(wire(random_ns_box(base, rng), p)).ok());
    }
}

TEST_CASE("expanded inequalities evaluate like the wired box") {
    std::mt19937_64 rng(47);
    for (int t = 0; t < 50; ++t) {
        Scenario base(2, 2, 2);
        RandomProtocolOptions o;
        o.groups = 2 + t % 2;
        auto p = random_protocol(base, 2, o, rng);
        auto i = random_maximal(wired_scenario(p), rng);
        auto e = expand_inequality(i, p);
        Box b = random_ns_box(base, rng);
        CHECK(evaluate(e, tensor_power(b, 2)) == evaluate(i, wire(b, p)));
    }
}

TEST_CASE("stochastic wiring") {
    std::mt19937_64 rng(53);
    Scenario base(2, 2, 2);
    for (int t = 0; t < 20; ++t) {
        LHVModel local = random_lhv_model(Scenario(1, 2, 2), rng);
        StochasticWiring sw{local, random_protocol(Scenario(5, 2, 2), 1, RandomProtocolOptions{}, rng), 2};
        Box b = random_ns_box(base, rng);
        Box w = stochastic_wire(b, sw);
        CHECK(validate(w).ok());
        CHECK(w == wire(tensor(tensor_power(b, 2), from_lhv(local)), sw.base));
    }
}
