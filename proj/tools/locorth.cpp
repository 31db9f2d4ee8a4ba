#include "locorth/boxes.hpp"
#include "locorth/capacity.hpp"
#include "locorth/classify.hpp"
#include "locorth/errors.hpp"
#include "locorth/inequalities.hpp"
#include "locorth/search.hpp"
#include "locorth/upb.hpp"
#include "locorth/wiring.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace locorth;

namespace {

struct Common {
    int k = 1;
    std::uint64_t budget_cliques = 100'000'000;
    double budget_seconds = 0;
    std::uint64_t seed = 1;
    bool long_running = false;
    std::string format = "text";
    unsigned threads = 0;

    SearchOptions search() const {
        SearchOptions o;
        o.max_cliques = budget_cliques;
        o.max_seconds = budget_seconds;
        o.threads = threads;
        return o;
    }
    bool csv() const { return format == "csv"; }
    void text_or_csv(const std::string& cmd) const {
        if (format == "dot") throw InputError(cmd + ": --format dot is only available for graph");
    }
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

std::string events_line(const LOInequality& i, const char* sep = " ") {
    std::string out;
    for (const auto& e : i.event_list()) {
        if (!out.empty()) out += sep;
        out += format_event(e);
    }
    return out;
}

void require_long(const Common& c, bool heavy, const std::string& what) {
    if (heavy && !c.long_running) throw InputError(what + " requires --long-running");
}

Graph support_graph(const Box& power) {
    const auto& s = power.scenario();
    auto events = support(power);
    GraphBuilder builder(events.size());
    for (std::size_t u = 0; u < events.size(); ++u)
        for (std::size_t v = u + 1; v < events.size(); ++v)
            if (are_orthogonal(s, events[u], events[v])) builder.add_edge(u, v);
    builder.set_labels(VertexLabels{s, events});
    return std::move(builder).build();
}

void print_graph(const Graph& g, const Common& c) {
    if (c.format == "dot") {
        std::cout << to_dot(g);
    } else if (c.csv()) {
        std::cout << "u,v,event_u,event_v\n";
        for (std::size_t u = 0; u < g.size(); ++u)
            for (std::size_t v = u + 1; v < g.size(); ++v)
                if (g.adjacent(u, v))
                    std::cout << u << ',' << v << ',' << format_event(g.label(u)) << ',' << format_event(g.label(v)) << '\n';
    } else {
        std::cout << "vertices " << g.size() << "\nedges " << g.edge_count() << '\n';
    }
}

int cmd_graph(const Common& c, const std::vector<int>& dims, const std::string& box) {
    if (!box.empty()) {
        if (!dims.empty()) throw InputError("graph: give either n m d or --box, not both");
        print_graph(support_graph(tensor_power(named_box(box), c.k)), c);
        return 0;
    }
    if (dims.size() != 3) throw InputError("graph: expected n m d");
    Scenario s(dims[0], dims[1], dims[2]);
    Graph g = orthogonality_graph(s);
    print_graph(g, c);
    return 0;
}

int cmd_inequalities(const Common& c, const std::vector<int>& dims, bool do_classify, const std::string& out_dir) {
    c.text_or_csv("inequalities");
    if (dims.size() != 3) throw InputError("inequalities: expected n m d");
    Scenario s(dims[0], dims[1], dims[2]);
    if (!do_classify) {
        Graph g = orthogonality_graph(s);
        auto cliques = maximal_cliques(g, c.search());
        if (c.csv()) {
            std::cout << "index,terms,events\n";
            for (std::size_t j = 0; j < cliques.size(); ++j)
                std::cout << j + 1 << ',' << cliques[j].size() << ',' << events_line(from_clique(g, cliques[j])) << '\n';
            return 0;
        }
        std::map<std::size_t, std::size_t> sizes;
        for (const auto& cl : cliques) ++sizes[cl.size()];
        std::cout << cliques.size() << " maximal cliques in " << s.to_string() << '\n';
        for (auto [size, count] : sizes) std::cout << "  " << size << " terms: " << count << '\n';
        return 0;
    }
    ClassifyOptions opts;
    opts.search = c.search();
    auto classes = enumerate_classes(s, opts);
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
    if (c.csv()) std::cout << "class,terms,members,symmetry_forms,ns_max,events\n";
    else std::cout << classes.size() << " classes in " << s.to_string() << '\n';
    for (std::size_t j = 0; j < classes.size(); ++j) {
        const auto& cl = classes[j];
        std::string value = cl.ns_value ? to_string(*cl.ns_value) : "";
        if (c.csv()) {
            std::cout << j + 1 << ',' << cl.representative.size() << ',' << cl.members << ',' << cl.symmetry_forms << ','
                      << value << ',' << events_line(cl.representative) << '\n';
        } else {
            std::cout << "class " << j + 1 << ": " << cl.representative.size() << " terms, " << cl.members
                      << " members, ns_max " << value << '\n'
                      << "  " << events_line(cl.representative) << '\n';
        }
        if (!out_dir.empty()) {
            auto path = std::filesystem::path(out_dir) / class_file_name(s, j + 1);
            write_inequality_file(path.string(), cl.representative,
                                  "class " + std::to_string(j + 1) + ", ns_max " + value);
        }
    }
    return 0;
}

int cmd_classify(const Common& c, const std::vector<std::string>& files) {
    c.text_or_csv("classify");
    if (files.empty()) throw InputError("classify: no inequality files given");
    std::vector<LOInequality> ineqs;
    for (const auto& f : files) {
        try {
            ineqs.push_back(read_inequality_file(f));
        } catch (const InputError& e) {
            throw InputError(f + ": " + e.what());
        }
    }
    ClassifyOptions opts;
    opts.search = c.search();
    std::map<Scenario, std::vector<std::size_t>> by_scenario;
    for (std::size_t j = 0; j < ineqs.size(); ++j) by_scenario[ineqs[j].scenario()].push_back(j);

    struct Row {
        InequalityClass cls;
        std::vector<std::string> inputs;
    };
    std::vector<Row> rows;
    for (const auto& [s, idx] : by_scenario) {
        std::vector<LOInequality> group;
        for (auto j : idx) group.push_back(ineqs[j]);
        auto classes = classify(group, opts);
        std::vector<QuotientVector> keys;
        for (const auto& cl : classes) keys.push_back(orbit_minimal_quotient(s, ns_quotient(cl.representative), opts));
        std::size_t first = rows.size();
        for (auto& cl : classes) rows.push_back(Row{cl, {}});
        for (auto j : idx) {
            auto key = orbit_minimal_quotient(s, ns_quotient(ineqs[j]), opts);
            auto it = std::find(keys.begin(), keys.end(), key);
            if (it == keys.end()) throw InternalError("input " + files[j] + " matches no class");
            rows[first + static_cast<std::size_t>(it - keys.begin())].inputs.push_back(files[j]);
        }
    }
    if (c.csv()) std::cout << "class,scenario,terms,members,ns_max,inputs\n";
    else std::cout << rows.size() << " classes from " << ineqs.size() << " inequalities\n";
    for (std::size_t t = 0; t < rows.size(); ++t) {
        const auto& rep = rows[t].cls.representative;
        std::string value = rep.scenario().event_count() <= ns_max_event_limit ? to_string(ns_max(rep, opts.lp)) : "";
        std::string names;
        for (const auto& f : rows[t].inputs) names += (names.empty() ? "" : " ") + f;
        if (c.csv()) {
            std::cout << t + 1 << ',' << rep.scenario().to_string() << ',' << rep.size() << ',' << rows[t].cls.members << ','
                      << value << ',' << names << '\n';
        } else {
            std::cout << "class " << t + 1 << ": " << rep.scenario().to_string() << ", " << rep.size() << " terms, "
                      << rows[t].cls.members << " inputs, ns_max " << value << '\n'
                      << "  " << events_line(rep) << '\n'
                      << "  " << names << '\n';
        }
    }
    return 0;
}

int cmd_check_box(const Common& c, const std::string& name, bool scan, bool maximize, bool all) {
    c.text_or_csv("check-box");
    Box b = named_box(name);
    if (auto v = validate(b); !v.ok()) std::cerr << "warning: box is not no-signaling: " << v.describe() << '\n';
    LOKOptions opts;
    opts.search = c.search();
    opts.maximize = maximize;
    opts.all_witnesses = all;
    if (c.csv()) std::cout << "k,status,terms,value,events\n";
    for (int k = scan ? 1 : c.k; k <= c.k; ++k) {
        auto verdict = check_lo_k(b, k, opts);
        if (c.csv()) {
            if (verdict.satisfied) {
                std::cout << k << ",SATISFIED,,,\n";
            } else {
                const auto& w = *verdict.witness;
                std::cout << k << ",VIOLATED," << w.inequality.size() << ',' << to_string(w.value) << ','
                          << events_line(w.inequality) << '\n';
            }
        } else {
            std::string prefix = scan ? "copies " + std::to_string(k) + ": " : "";
            if (verdict.satisfied) {
                std::cout << prefix << "SATISFIED LO^" << k << '\n';
            } else {
                const auto& w = *verdict.witness;
                std::cout << prefix << "VIOLATED value " << to_string(w.value) << ", " << w.inequality.size() << " terms\n";
                for (const auto& e : w.inequality.event_list()) std::cout << "  " << format_event(e) << '\n';
                if (all) {
                    std::cout << verdict.all_witnesses.size() << " violated maximal cliques\n";
                    for (const auto& x : verdict.all_witnesses)
                        std::cout << "  " << to_string(x.value) << ": " << events_line(x.inequality) << '\n';
                }
            }
        }
        if (!verdict.satisfied) break;
    }
    return 0;
}

int cmd_ns_max(const Common& c, const std::string& file, const std::string& box_out) {
    c.text_or_csv("ns-max");
    auto i = read_inequality_file(file);
    auto opt = ns_optimum(i);
    if (c.csv()) std::cout << "value,decimal\n" << to_string(opt.value) << ',' << fmt(to_double(opt.value)) << '\n';
    else std::cout << to_string(opt.value) << '\n';
    if (!box_out.empty()) write_box_file(box_out, opt.box);
    return 0;
}

int cmd_wire(const Common& c, const std::vector<std::string>& args, const std::string& ineq_file, bool random,
             int copies, int groups, const std::string& save_wiring, const std::string& out) {
    c.text_or_csv("wire");
    if (args.empty()) throw InputError("wire: expected a box");
    Box b = named_box(args[0]);
    WiringProtocol p;
    if (random) {
        if (args.size() != 1) throw InputError("wire: --random takes no wiring file");
        std::mt19937_64 rng(c.seed);
        RandomProtocolOptions ro;
        ro.groups = groups;
        p = random_protocol(b.scenario(), copies, ro, rng);
    } else {
        if (args.size() != 2) throw InputError("wire: expected a box and a wiring file");
        p = read_wiring_file(args[1]);
    }
    check_protocol(p);
    if (p.base != b.scenario()) throw InputError("wire: wiring base " + p.base.to_string() + " does not match box scenario " + b.scenario().to_string());
    if (!save_wiring.empty()) write_wiring_file(save_wiring, p);
    if (!ineq_file.empty()) {
        auto i = read_inequality_file(ineq_file);
        auto expanded = expand_inequality(i, p);
        std::cout << serialize_inequality(expanded);
        return 0;
    }
    Box w = wire(b, p);
    if (!out.empty()) write_box_file(out, w);
    std::cout << serialize_box(w);
    return 0;
}

int cmd_upb(const Common& c, const std::string& file, bool export_all, std::size_t limit) {
    c.text_or_csv("upb");
    auto i = read_inequality_file(file);
    auto set = vectors_from_inequality(i);
    if (export_all) {
        std::cout << export_upb(set);
        return 0;
    }
    if (c.csv()) {
        std::cout << "member,ket\n";
        for (std::size_t j = 0; j < set.members.size(); ++j) std::cout << j + 1 << ',' << format_member(set, j) << '\n';
        return 0;
    }
    std::cout << set.members.size() << " product vectors\n";
    for (std::size_t j = 0; j < set.members.size(); ++j) std::cout << "  " << format_member(set, j) << '\n';
    auto gram = gram_orthogonality(set);
    std::cout << "orthogonal: " << (gram.orthogonal ? "yes" : "no") << '\n';
    bool weak = weak_unextendible(set);
    std::cout << "weak unextendible: " << (weak ? "yes" : "no") << '\n';
    if (i.scenario().outcomes() == 2 && weak) {
        std::cout << "unextendible (sampled): " << (qubit_upb_check(set, 100000, c.seed) ? "yes" : "no") << '\n';
        return 0;
    }
    auto found = find_orthogonal_product_vectors(set, limit);
    if (found.empty()) {
        std::cout << "orthogonal product vector: none found\n";
    } else {
        std::cout << "orthogonal product vectors: " << found.size() << (found.size() == limit ? "+" : "") << '\n';
        std::string line;
        for (const auto& d : found.front().description) line += (line.empty() ? "" : " ") + d;
        std::cout << "  " << line << '\n';
    }
    return 0;
}

int cmd_capacity(const Common& c, const std::string& name) {
    c.text_or_csv("capacity");
    Box b = named_box(name);
    auto events = support(b);
    if (events.empty()) throw InputError("capacity: box has empty support");
    const Rational prob = b.probability(events.front());
    const auto& s = b.scenario();
    require_long(c, std::pow(static_cast<double>(events.size()), c.k) > 300, "strong powers above 300 vertices");
    bool pr = name == "pr";
    if (c.csv()) std::cout << "k,alpha_k,theta_lower,q_star,reference_theta\n";
    else std::cout << "k alpha_k alpha_k^(1/k) q*_k\n";
    for (int k = 1; k <= c.k; ++k) {
        auto bound = capacity_bound(b, k, c.search());
        auto q = critical_purity(bound.alpha_k, k, prob, s.parties(), s.outcomes());
        std::string qs = fmt(q.q) + (q.clamped ? " (clamped)" : "");
        if (c.csv()) {
            std::cout << k << ',' << bound.alpha_k << ',' << fmt(bound.lower_bound_theta) << ',' << fmt(q.q) << ','
                      << (bound.reference_upper_theta ? fmt(*bound.reference_upper_theta) : "") << '\n';
        } else {
            std::cout << k << ' ' << bound.alpha_k << ' ' << fmt(bound.lower_bound_theta) << ' ' << qs << '\n';
        }
    }
    if (pr && !c.csv()) {
        double theta = reference_theta_pr();
        auto q = critical_purity_theta(theta, prob, s.parties(), s.outcomes());
        std::cout << "reference theta 4(2-sqrt2) = " << fmt(theta) << ", q*_inf = " << fmt(q.q) << '\n';
    }
    return 0;
}

int cmd_threshold(const Common& c, const std::string& file, const std::string& name, bool cliques) {
    c.text_or_csv("threshold");
    Box base = named_box(name);
    NoisyFamily fam{base, uniform_box(base.scenario()), c.k};
    if (cliques) {
        if (!file.empty()) throw InputError("threshold: --cliques takes no inequality file");
        require_long(c, c.k >= 2, "clique threshold search for k >= 2");
        auto best = min_threshold_over_cliques(fam, c.search());
        if (!best) {
            std::cout << "never violated\n";
            return 0;
        }
        if (c.csv()) std::cout << "q,terms,events\n" << fmt(best->q) << ',' << best->witness.size() << ',' << events_line(best->witness) << '\n';
        else std::cout << "threshold " << fmt(best->q) << ", " << best->witness.size() << " terms\n  " << events_line(best->witness) << '\n';
        return 0;
    }
    if (file.empty()) throw InputError("threshold: expected an inequality file or --cliques");
    auto i = read_inequality_file(file);
    auto r = violation_threshold(i, fam);
    auto poly = value_polynomial(i, fam);
    if (c.csv()) {
        std::cout << "q,lower,upper,monotone\n" << fmt(r.q) << ',' << to_string(r.lower) << ',' << to_string(r.upper) << ','
                  << (r.monotone ? 1 : 0) << '\n';
        return 0;
    }
    std::cout << "threshold " << fmt(r.q) << (r.monotone ? "" : " (value not monotone in q)") << '\n';
    std::cout << "value(q) =";
    for (std::size_t p = 0; p < poly.size(); ++p) {
        if (poly[p] == 0) continue;
        std::cout << ' ' << (poly[p] < 0 ? "- " : "+ ") << to_string(abs(poly[p]));
        if (p == 1) std::cout << " q";
        if (p > 1) std::cout << " q^" << p;
    }
    std::cout << '\n';
    return 0;
}

int cmd_pack(const Common& c, int side, int cube) {
    c.text_or_csv("pack");
    require_long(c, std::pow(static_cast<double>(side), c.k) > 300, "packing graphs above 300 vertices");
    auto count = box_packing_count(c.k, side, cube, c.search());
    if (c.csv()) std::cout << "k,side,cube,count\n" << c.k << ',' << side << ',' << cube << ',' << count << '\n';
    else std::cout << count << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local orthogonality toolkit"};
    app.require_subcommand(1);
    Common c;
    app.add_option("--k", c.k, "Number of copies")->check(CLI::PositiveNumber);
    app.add_option("--budget-cliques", c.budget_cliques, "Maximal clique budget");
    app.add_option("--budget-seconds", c.budget_seconds, "Wall-clock budget for searches (0 = none)");
    app.add_option("--seed", c.seed, "Random seed");
    app.add_flag("--long-running", c.long_running, "Allow computations that take minutes or more");
    app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "csv", "dot"}));
    app.add_option("--threads", c.threads, "Search threads (0 = hardware)");
    app.fallthrough();

    std::vector<int> dims;
    std::string box_name, file, out, save_wiring, ineq_file;
    std::vector<std::string> files;
    bool classify_flag = false, scan = false, maximize = false, all = false, random = false, export_all = false,
         cliques = false;
    int copies = 2, groups = 2, side = 8, cube = 3;
    std::size_t limit = 100000;

    auto* graph = app.add_subcommand("graph", "Orthogonality graph of a scenario or of a box support");
    graph->add_option("dims", dims, "n m d");
    graph->add_option("--box", box_name, "Support graph of this box to the power --k");

    auto* ineqs = app.add_subcommand("inequalities", "Maximal cliques of an orthogonality graph");
    ineqs->add_option("dims", dims, "n m d")->required()->expected(3);
    ineqs->add_flag("--classify", classify_flag, "Group into classes violated by no-signaling boxes");
    ineqs->add_option("--out", out, "Directory for class files");

    auto* cls = app.add_subcommand("classify", "Classify inequality files up to symmetry and no-signaling equalities");
    cls->add_option("files", files, "Inequality files")->required();

    auto* check = app.add_subcommand("check-box", "Search for LO^k violations of a box");
    check->add_option("box", box_name, "Box name or file")->required();
    check->add_flag("--scan", scan, "Try k = 1 .. --k and stop at the first violation");
    check->add_flag("--max", maximize, "Report a maximum-weight violated clique");
    check->add_flag("--all", all, "List every violated maximal clique");

    auto* ns = app.add_subcommand("ns-max", "Exact maximum over no-signaling boxes");
    ns->add_option("file", file, "Inequality file")->required();
    ns->add_option("--box-out", out, "Write an optimal box here");

    auto* wr = app.add_subcommand("wire", "Apply a wiring to copies of a box");
    wr->add_option("args", files, "Box and wiring file");
    wr->add_option("--inequality", ineq_file, "Expand this wired-scenario inequality instead");
    wr->add_flag("--random", random, "Use a random protocol drawn from --seed");
    wr->add_option("--copies", copies, "Copies for --random");
    wr->add_option("--groups", groups, "Groups for --random");
    wr->add_option("--save-wiring", save_wiring, "Write the protocol here");
    wr->add_option("--out", out, "Write the wired box here");

    auto* upb = app.add_subcommand("upb", "Product vectors from an inequality");
    upb->add_option("file", file, "Inequality file")->required();
    upb->add_flag("--export", export_all, "Print numeric vectors");
    upb->add_option("--limit", limit, "Cap on orthogonal product vectors listed");

    auto* cap = app.add_subcommand("capacity", "Independence numbers of strong powers and critical purities");
    cap->add_option("box", box_name, "Box name or file (default pr)");

    auto* th = app.add_subcommand("threshold", "Critical purity of a box mixed with uniform noise");
    th->add_option("file", file, "Inequality over the --k copy scenario");
    th->add_option("--box", box_name, "Base box (default pr)");
    th->add_flag("--cliques", cliques, "Minimise over all maximal cliques");

    auto* pk = app.add_subcommand("pack", "Non-overlapping cubes on a torus");
    pk->add_option("--side", side, "Torus side");
    pk->add_option("--cube", cube, "Cube edge");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*graph) return cmd_graph(c, dims, box_name);
        if (*ineqs) return cmd_inequalities(c, dims, classify_flag, out);
        if (*cls) return cmd_classify(c, files);
        if (*check) return cmd_check_box(c, box_name, scan, maximize, all);
        if (*ns) return cmd_ns_max(c, file, out);
        if (*wr) return cmd_wire(c, files, ineq_file, random, copies, groups, save_wiring, out);
        if (*upb) return cmd_upb(c, file, export_all, limit);
        if (*cap) return cmd_capacity(c, box_name.empty() ? "pr" : box_name);
        if (*th) return cmd_threshold(c, file, box_name.empty() ? "pr" : box_name, cliques);
        if (*pk) return cmd_pack(c, side, cube);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
