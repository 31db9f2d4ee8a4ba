#include "locorth/boxes.hpp"
#include "locorth/errors.hpp"

#include <doctest.h>

#include <random>

using namespace locorth;

TEST_CASE("PR box") {
    Box pr = pr_box();
    CHECK(validate(pr).ok());
    CHECK(support(pr).size() == 8);
    CHECK(pr.probability(parse_event("11|11")) == 0);
    CHECK(pr.probability(parse_event("01|11")) == Rational(1, 2));
    CHECK(pr.probability(parse_event("11|01")) == Rational(1, 2));
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) CHECK(validate(pr_box_variant(a, b, c)).ok());
}

TEST_CASE("validation names the failure") {
    Scenario s(2, 2, 2);
    Box::Table t{{encode(s, parse_event("00|00")), Rational(1)}};
    auto v = validate(Box(s, t));
    CHECK(v.kind == Verdict::Kind::not_normalized);
    CHECK(v.describe().find("not_normalized") != std::string::npos);

    // Bob's outcome copies Alice's setting.
    Box::Table sig;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) sig[encode(s, Event{{0, x}, {x, y}})] = 1;
    auto w = validate(Box(s, sig));
    CHECK(w.kind == Verdict::Kind::signaling);
    CHECK(w.party == 0);
    CHECK_THROWS_AS(Box(s, Box::Table{{0, Rational(-1)}}), InputError);
    CHECK_THROWS_AS(Box(s, Box::Table{{16, Rational(1)}}), InputError);
}

TEST_CASE("uniform, deterministic, LHV") {
    Scenario s(3, 2, 2);
    Box u = uniform_box(s);
    CHECK(validate(u).ok());
    CHECK(u.probability(0) == Rational(1, 8));
    Box d = deterministic_box(s, {{0, 1}, {1, 1}, {0, 0}});
    CHECK(validate(d).ok());
    CHECK(d.probability(parse_event("110|100")) == 1);
    CHECK(d.probability(parse_event("010|100")) == 0);
    LHVModel m{s, {{Rational(1, 3), {{0, 1}, {1, 1}, {0, 0}}}, {Rational(2, 3), {{1, 1}, {0, 0}, {1, 0}}}}};
    Box l = from_lhv(m);
    CHECK(validate(l).ok());
    CHECK(l.probability(parse_event("110|100")) == Rational(1, 3));
    m.strategies[0].weight = Rational(1, 2);
    CHECK_THROWS_AS(from_lhv(m), InputError);
}

TEST_CASE("tensor products and mixtures") {
    Box pr = pr_box();
    Box pr2 = tensor_power(pr, 2);
    CHECK(pr2.scenario() == Scenario(4, 2, 2));
    CHECK(validate(pr2).ok());
    CHECK(support(pr2).size() == 64);
    CHECK(pr2.probability(parse_event("0000|0000")) == Rational(1, 4));
    CHECK(tensor(pr, pr) == pr2);
    Box half = mix(pr, uniform_box(pr.scenario()), Rational(1, 2));
    CHECK(half.probability(parse_event("11|11")) == Rational(1, 8));
    CHECK(half.probability(parse_event("00|00")) == Rational(3, 8));
    CHECK(mix(pr, uniform_box(pr.scenario()), 1) == pr);
}

TEST_CASE("unconditional joint") {
    Box pr = pr_box();
    std::map<std::uint64_t, Rational> px;
    for (std::uint64_t c = 0; c < 4; ++c) px[c] = Rational(1, 4);
    auto joint = unconditional_joint(pr, px);
    Rational total = 0;
    for (auto& [e, p] : joint) total += p;
    CHECK(total == 1);
}

TEST_CASE("random boxes are no-signaling") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 30; ++t) {
        CHECK(validate(from_lhv(random_lhv_model(Scenario(3, 2, 3), rng))).ok());
        CHECK(validate(random_ns_box(Scenario(4, 2, 2), rng)).ok());
        CHECK(validate(random_ns_box(Scenario(2, 3, 2), rng)).ok());
    }
}

TEST_CASE("box text round trip") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20; ++t) {
        Box b = random_ns_box(Scenario(2, 2, 2), rng);
        CHECK(parse_box(serialize_box(b)) == b);
    }
    Box pr = pr_box();
    CHECK(parse_box(serialize_box(pr)) == pr);
    CHECK(serialize_box(pr).rfind("box 2 2 2\n", 0) == 0);
}

TEST_CASE("box parse errors carry line numbers") {
    try {
        parse_box("box 2 2 2\n00|00 1/2\n# comment\n0|00 1/2\n");
        FAIL("expected an error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_box("box 2 2\n"), InputError);
    CHECK_THROWS_AS(parse_box("box 2 2 2\n00|00 x\n"), InputError);
}

TEST_CASE("named boxes") {
    CHECK(named_box("pr") == pr_box());
    CHECK(named_box("uniform") == uniform_box(Scenario(2, 2, 2)));
    CHECK(named_box("uniform:3,2,3") == uniform_box(Scenario(3, 2, 3)));
    Box d = named_box("det:01,10");
    CHECK(d == deterministic_box(Scenario(2, 2, 2), {{0, 1}, {1, 0}}));
    CHECK_THROWS_AS(named_box("/no/such/file.box"), InputError);
}
