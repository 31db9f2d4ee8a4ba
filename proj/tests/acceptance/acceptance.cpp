#include "locorth/boxes.hpp"
#include "locorth/capacity.hpp"
#include "locorth/classify.hpp"
#include "locorth/errors.hpp"
#include "locorth/inequalities.hpp"
#include "locorth/search.hpp"
#include "locorth/upb.hpp"
#include "locorth/wiring.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace locorth;

namespace {

bool long_running = false;

std::string data(const std::string& name) { return std::string(LOCORTH_TEST_DATA) + "/" + name; }

// Each check appends a line of detail; a false return fails the criterion.
struct Report {
    std::ostringstream detail;
    bool ok = true;
    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string fmt(double x, int digits = 15) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

QuotientVector class_key(const LOInequality& i) { return orbit_minimal_quotient(i.scenario(), ns_quotient(i)); }

std::vector<InequalityClass> classes_422;

void criterion1(Report& r) {
    auto t = std::chrono::steady_clock::now();
    auto v = ns_max(read_inequality_file(data("gyni.loineq")));
    double dt = seconds_since(t);
    r.detail << "ns_max(GYNI) = " << to_string(v) << " in " << fmt(dt, 3) << " s";
    r.require(v == Rational(4, 3), "value 4/3");
    r.require(dt < 10, "under 10 s");
}

void criterion2(Report& r) {
    auto t = std::chrono::steady_clock::now();
    Box pr = pr_box();
    auto verdict = check_lo_k(pr, 2);
    r.require(!verdict.satisfied, "LO^2 violated");
    if (!verdict.satisfied) {
        r.detail << "witness " << verdict.witness->inequality.size() << " terms, value " << to_string(verdict.witness->value);
        r.require(verdict.witness->inequality.size() == 5 && verdict.witness->value == Rational(5, 4), "5 terms, 5/4");
    }

    // Every clique of more than four support events.
    Box pr2 = tensor_power(pr, 2);
    const auto& s = pr2.scenario();
    auto events = support(pr2);
    GraphBuilder builder(events.size());
    for (std::size_t u = 0; u < events.size(); ++u)
        for (std::size_t v = u + 1; v < events.size(); ++v)
            if (are_orthogonal(s, events[u], events[v])) builder.add_edge(u, v);
    builder.set_labels(VertexLabels{s, events});
    Graph g = std::move(builder).build();
    std::vector<LOInequality> big;
    // A clique above four vertices lies in a maximal one above four vertices; all have five.
    for (const auto& c : maximal_cliques(g))
        if (c.size() > 4) big.push_back(from_clique(g, c));
    std::set<LOInequality> forms;
    for (const auto& i : big) forms.insert(canonical_sym(i));
    auto classes = classify(big);
    r.detail << "; " << big.size() << " cliques above 4 terms, " << forms.size() << " normal form(s), " << classes.size()
             << " class(es)";
    r.require(!big.empty(), "some large clique");
    r.require(forms.size() == 1 && classes.size() == 1, "single class");
    for (const auto& i : big) r.require(evaluate(i, pr2) == Rational(5, 4), "every large clique has value 5/4");
    double dt = seconds_since(t);
    r.detail << " in " << fmt(dt, 3) << " s";
    r.require(dt < 30, "under 30 s");
}

void criterion3(Report& r) {
    auto t = std::chrono::steady_clock::now();
    Box pr = pr_box();
    auto events = support(pr);
    const auto& s = pr.scenario();
    GraphBuilder builder(events.size());
    for (std::size_t u = 0; u < events.size(); ++u)
        for (std::size_t v = u + 1; v < events.size(); ++v)
            if (are_orthogonal(s, events[u], events[v])) builder.add_edge(u, v);
    Graph g = std::move(builder).build();
    auto cliques = maximal_cliques(g);
    Rational worst = 0;
    for (const auto& c : cliques) {
        Rational w = 0;
        for (auto v : c) w += pr.probability(events[v]);
        worst = std::max(worst, w);
    }
    r.detail << cliques.size() << " maximal support cliques, largest weight " << to_string(worst);
    r.require(worst <= 1, "no PR clique above 1");

    // Also over the full (2,2,2) orthogonality graph with arbitrary boxes.
    std::mt19937_64 rng(20130101);
    int satisfied = 0;
    for (int j = 0; j < 50; ++j) {
        Box b = random_ns_box(Scenario(2, 2, 2), rng);
        r.require(validate(b).ok(), "random box is no-signaling");
        if (check_lo_k(b, 1).satisfied) ++satisfied;
    }
    r.detail << "; " << satisfied << "/50 random no-signaling boxes satisfy LO^1";
    r.require(satisfied == 50, "all random boxes satisfy LO^1");
    double dt = seconds_since(t);
    r.detail << " in " << fmt(dt, 3) << " s";
    r.require(dt < 60, "under 1 min");
}

void criterion4(Report& r) {
    auto t0 = std::chrono::steady_clock::now();
    auto c322 = enumerate_classes(Scenario(3, 2, 2));
    double t322 = seconds_since(t0);
    r.require(c322.size() == 1, "(3,2,2) one class");

    auto t1 = std::chrono::steady_clock::now();
    auto c323 = enumerate_classes(Scenario(3, 2, 3));
    double t323 = seconds_since(t1);
    std::multiset<std::size_t> sizes323;
    for (const auto& c : c323) sizes323.insert(c.representative.size());
    r.require(sizes323 == std::multiset<std::size_t>{12, 13, 14, 15}, "(3,2,3) terms 12 13 14 15");

    auto t2 = std::chrono::steady_clock::now();
    classes_422 = enumerate_classes(Scenario(4, 2, 2));
    double t422 = seconds_since(t2);
    std::map<std::size_t, int> sizes422;
    for (const auto& c : classes_422) ++sizes422[c.representative.size()];
    r.require(sizes422 == std::map<std::size_t, int>{{8, 30}, {9, 2}, {10, 2}, {12, 1}}, "(4,2,2) 8x30 9x2 10x2 12x1");

    r.detail << "(3,2,2) " << c322.size() << " in " << fmt(t322, 3) << " s; (3,2,3) " << c323.size() << " in "
             << fmt(t323, 3) << " s; (4,2,2) " << classes_422.size() << " in " << fmt(t422, 3) << " s";
    r.require(t322 < 10, "(3,2,2) in seconds");
    r.require(t323 < 3600 && t422 < 3600, "under an hour each");

    // Table inequalities land in distinct produced classes.
    auto match = [&](const std::vector<InequalityClass>& classes, const std::vector<std::string>& files) {
        std::vector<QuotientVector> keys;
        for (const auto& c : classes) keys.push_back(class_key(c.representative));
        std::set<std::size_t> hit;
        for (const auto& f : files) {
            auto key = class_key(read_inequality_file(data("tables/" + f)));
            auto it = std::find(keys.begin(), keys.end(), key);
            if (it == keys.end()) return std::string("no class for ") + f;
            hit.insert(static_cast<std::size_t>(it - keys.begin()));
        }
        if (hit.size() != files.size()) return std::string("two table entries share a class");
        return std::string();
    };
    std::vector<std::string> t323files, t422files;
    for (int j = 1; j <= 4; ++j) t323files.push_back("323_0" + std::to_string(j) + ".loineq");
    for (int j = 1; j <= 30; ++j) t422files.push_back("422_8_" + std::string(j < 10 ? "0" : "") + std::to_string(j) + ".loineq");
    for (int j = 1; j <= 5; ++j) t422files.push_back("422_gt8_0" + std::to_string(j) + ".loineq");
    auto gy = class_key(read_inequality_file(data("gyni.loineq")));
    r.require(!c322.empty() && class_key(c322[0].representative) == gy, "GYNI is the (3,2,2) class");
    auto e2 = match(c323, t323files);
    auto e3 = match(classes_422, t422files);
    r.require(e2.empty(), "(3,2,3) tables: " + e2);
    r.require(e3.empty(), "(4,2,2) tables: " + e3);
    r.detail << "; 4 + 35 table inequalities matched to distinct classes";
}

void criterion5(Report& r) {
    auto t = std::chrono::steady_clock::now();
    Box pr = pr_box();
    std::map<int, std::size_t> alpha;
    for (int k = 1; k <= 2; ++k) {
        alpha[k] = alpha_k(pr, k);
        auto packing = box_packing_count(k);
        r.detail << "k=" << k << " alpha " << alpha[k] << " packing " << packing << "; ";
        r.require(packing == alpha[k], "packing agrees for k=" + std::to_string(k));
    }
    r.require(alpha[1] == 2 && alpha[2] == 5, "alpha_1 = 2, alpha_2 = 5");
    if (long_running) {
        alpha[3] = alpha_k(pr, 3);
        auto packing = box_packing_count(3);
        r.detail << "k=3 alpha " << alpha[3] << " packing " << packing << "; ";
        r.require(packing == alpha[3], "packing agrees for k=3");
    } else {
        r.detail << "k=3 skipped (needs --long-running); ";
    }
    for (auto [j, aj] : alpha)
        for (auto [k, ak] : alpha)
            if (alpha.count(j + k)) r.require(alpha[j + k] >= aj * ak, "super-multiplicativity");
    r.detail << "in " << fmt(seconds_since(t), 4) << " s";
}

void criterion6(Report& r) {
    auto t = std::chrono::steady_clock::now();
    const double q2 = 4 / std::sqrt(5.0) - 1;
    const double q10 = (std::sqrt(10.0) - 1) / 3;
    auto cp = critical_purity(5, 2, Rational(1, 2), 2, 2);
    r.detail << "q*_2 = " << fmt(cp.q) << " (|diff| " << fmt(std::abs(cp.q - q2), 3) << ")";
    r.require(std::abs(cp.q - q2) < 1e-12, "critical purity within 1e-12");
    auto th = violation_threshold(read_inequality_file(data("ten_term.loineq")), pr_family(2));
    r.detail << "; 10-term threshold " << fmt(th.q) << " (|diff| " << fmt(std::abs(th.q - q10), 3) << ")";
    r.require(std::abs(th.q - q10) < 1e-9, "10-term threshold within 1e-9");
    r.require(q10 <= cp.q, "clique threshold below the capacity bound");
    if (long_running) {
        auto best = min_threshold_over_cliques(pr_family(2));
        r.require(best.has_value(), "some clique is violated");
        if (best) {
            r.detail << "; min over cliques " << fmt(best->q) << " (" << best->witness.size() << " terms)";
            r.require(std::abs(best->q - q10) < 1e-9, "minimum over cliques within 1e-9");
        }
    } else {
        r.detail << "; minimum over cliques skipped (needs --long-running)";
    }
    r.detail << " in " << fmt(seconds_since(t), 4) << " s";
}

void criterion7(Report& r) {
    auto q = critical_purity_theta(reference_theta_pr(), Rational(1, 2), 2, 2);
    double diff = std::abs(q.q - 1 / std::sqrt(2.0));
    r.detail << "q*_inf = " << fmt(q.q) << " (|diff| " << fmt(diff, 3) << ")";
    r.require(diff < 1e-12, "within 1e-12");
}

LOInequality random_maximal(const Scenario& s, std::mt19937_64& rng) {
    std::vector<std::uint64_t> order(s.event_count());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::uint64_t> chosen;
    for (auto e : order)
        if (std::all_of(chosen.begin(), chosen.end(), [&](std::uint64_t f) { return are_orthogonal(s, e, f); }))
            chosen.push_back(e);
    return LOInequality(s, chosen);
}

void criterion8(Report& r) {
    auto t = std::chrono::steady_clock::now();
    std::mt19937_64 rng(19);
    const std::vector<Scenario> bases{Scenario(2, 2, 2), Scenario(3, 2, 2), Scenario(2, 3, 2)};
    int closed = 0;
    for (int j = 0; j < 200; ++j) {
        const auto& base = bases[j % bases.size()];
        RandomProtocolOptions o;
        o.groups = 2 + j % 2;
        o.inputs = 2 + (j / 3) % 2;
        o.outputs = 2 + (j / 6) % 2;
        o.dynamic = j % 5 != 0;
        int copies = base.parties() == 3 ? 1 + j % 2 : 2;
        auto p = random_protocol(base, copies, o, rng);
        Box w = wire(from_lhv(random_lhv_model(base, rng)), p);
        if (validate(w).ok() && check_lo_k(w, 1).satisfied) ++closed;
    }
    r.detail << closed << "/200 wired classical boxes no-signaling and LO^1";
    r.require(closed == 200, "all wired classical boxes satisfy LO^1");

    int agree = 0;
    for (int j = 0; j < 100; ++j) {
        const auto& base = bases[j % 2];
        RandomProtocolOptions o;
        o.groups = 2 + j % 2;
        o.outputs = 2 + (j / 2) % 2;
        auto p = random_protocol(base, 2, o, rng);
        auto i = random_maximal(wired_scenario(p), rng);
        auto e = expand_inequality(i, p);
        bool orthogonal = true;
        for (std::size_t a = 0; a < e.events().size(); ++a)
            for (std::size_t b = a + 1; b < e.events().size(); ++b)
                orthogonal = orthogonal && are_orthogonal(e.scenario(), e.events()[a], e.events()[b]);
        Box box = j % 2 ? random_ns_box(base, rng) : from_lhv(random_lhv_model(base, rng));
        if (orthogonal && evaluate(e, tensor_power(box, 2)) == evaluate(i, wire(box, p))) ++agree;
    }
    r.detail << "; " << agree << "/100 expanded inequalities orthogonal with equal values";
    r.require(agree == 100, "every expansion agrees");
    double dt = seconds_since(t);
    r.detail << " in " << fmt(dt, 4) << " s";
    r.require(dt < 300, "under 5 min");
}

std::set<std::string> kets(const ProductVectorSet& s) {
    std::set<std::string> out;
    for (std::size_t j = 0; j < s.members.size(); ++j) out.insert(format_member(s, j));
    return out;
}

void criterion9(Report& r) {
    auto t = std::chrono::steady_clock::now();
    auto shifts = vectors_from_inequality(read_inequality_file(data("gyni.loineq")));
    r.require(kets(shifts) == std::set<std::string>{"|000>", "|1e⊥e>", "|e1e⊥>", "|e⊥e1>"}, "GYNI gives Shifts");
    r.require(gram_orthogonality(shifts).orthogonal && weak_unextendible(shifts), "Shifts orthogonal, weakly unextendible");
    r.require(qubit_upb_check(shifts), "Shifts unextendible");
    r.detail << "Shifts ok";

    auto eight = vectors_from_inequality(read_inequality_file(data("tables/422_8_05.loineq")));
    std::set<std::string> expected8{"|0000>", "|0001>", "|ee10>", "|e1e1>", "|e⊥e1e>", "|1e⊥e0>", "|1e⊥e⊥e>", "|e⊥1e⊥e⊥>"};
    auto got8 = kets(eight);
    r.require(got8 == expected8, "8-vector set as listed");
    r.require(gram_orthogonality(eight).orthogonal, "8-vector set orthogonal");
    r.require(weak_unextendible(eight) && qubit_upb_check(eight), "8-vector set unextendible");
    r.detail << "; 8-vector UPB:";
    for (const auto& k : got8) r.detail << ' ' << k;

    auto twelve = vectors_from_inequality(read_inequality_file(data("tables/323_01.loineq")));
    std::set<std::string> expected12{"|000>", "|001>", "|ee2>",  "|010>",  "|011>",  "|ee⊥2>",
                                     "|e⊥e2>", "|e⊥e⊥2>", "|1e⊤e>", "|2e⊤e>", "|e⊤2e⊥>", "|e⊤2e⊤>"};
    r.require(kets(twelve) == expected12, "12-vector set as listed");
    r.require(gram_orthogonality(twelve).orthogonal && weak_unextendible(twelve), "12-vector weak UPB");
    auto v = find_orthogonal_product_vector(twelve);
    r.require(v.has_value(), "orthogonal product vector found");
    if (v) {
        double worst = 0;
        for (std::size_t j = 0; j < twelve.members.size(); ++j) worst = std::max(worst, std::abs(inner_product(twelve, *v, j)));
        r.require(worst <= upb_tolerance, "certified orthogonal");
        r.detail << "; 12-vector weak UPB extended by";
        for (const auto& d : v->description) r.detail << ' ' << d;
        r.detail << " (max overlap " << fmt(worst, 2) << ")";
        auto all = find_orthogonal_product_vectors(twelve);
        const std::vector<std::string> listed{"perp{0,e}", "perp{2,e⊤}", "perp{2}"};
        r.require(std::any_of(all.begin(), all.end(), [&](const ProductVector& p) { return p.description == listed; }),
                  "the listed orthogonal product vector is found");
    }

    if (classes_422.empty()) classes_422 = enumerate_classes(Scenario(4, 2, 2));
    std::set<std::size_t> sizes;
    for (const auto& c : classes_422) {
        auto s = vectors_from_inequality(c.representative);
        r.require(gram_orthogonality(s).orthogonal, "class UPB orthogonal");
        sizes.insert(s.members.size());
    }
    r.detail << "; (4,2,2) UPB sizes";
    for (auto s : sizes) r.detail << ' ' << s;
    r.require(std::includes(std::set<std::size_t>{8, 9, 10, 12}.begin(), std::set<std::size_t>{8, 9, 10, 12}.end(),
                            sizes.begin(), sizes.end()),
              "sizes within 8 9 10 12");
    double dt = seconds_since(t);
    r.detail << " in " << fmt(dt, 3) << " s";
    r.require(dt < 120, "under 2 min");
}

void criterion10(Report& r) {
    // Read the events directly: the inequality parser would refuse a non-orthogonal set.
    std::ifstream in(data("six_party_17.loineq"));
    std::string line;
    Scenario s(6, 2, 2);
    std::vector<std::uint64_t> events;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("scenario", 0) == 0) continue;
        events.push_back(encode(s, parse_event(line)));
    }
    r.require(events.size() == 17, "17 terms");
    std::vector<std::string> clashes;
    for (std::size_t a = 0; a < events.size(); ++a)
        for (std::size_t b = a + 1; b < events.size(); ++b)
            if (!are_orthogonal(s, events[a], events[b]))
                clashes.push_back(format_event(decode(s, events[a])) + "~" + format_event(decode(s, events[b])));
    Graph g = orthogonality_graph(s);
    std::vector<std::size_t> c(events.begin(), events.end());
    bool clique = is_clique(g, c);
    r.detail << events.size() << " terms, " << clashes.size() << " non-orthogonal pair(s)";
    for (const auto& x : clashes) r.detail << ' ' << x;
    r.require(clashes.empty(), "pairwise orthogonal");
    r.require(clique, "clique of the orthogonality graph");
    if (clique) {
        r.require(from_clique(g, c) == LOInequality(s, events), "accepted by from_clique");
    } else {
        bool rejected = false;
        try {
            LOInequality(s, events);
        } catch (const InputError&) {
            rejected = true;
        }
        r.require(rejected, "constructor rejects the set");
    }
}

} // namespace

int main(int argc, char** argv) {
    for (int a = 1; a < argc; ++a) {
        if (std::string(argv[a]) == "--long-running") long_running = true;
        else {
            std::cerr << "usage: acceptance [--long-running]\n";
            return 2;
        }
    }
    const std::vector<std::function<void(Report&)>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                             criterion6, criterion7, criterion8, criterion9, criterion10};
    int failed = 0;
    for (std::size_t j = 0; j < criteria.size(); ++j) {
        Report r;
        try {
            criteria[j](r);
        } catch (const std::exception& e) {
            r.ok = false;
            r.detail << " [exception: " << e.what() << "]";
        }
        std::cout << (r.ok ? "PASS" : "FAIL") << " criterion " << j + 1 << ": " << r.detail.str() << std::endl;
        if (!r.ok) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
