#include "locorth/graph.hpp"

#include "locorth/errors.hpp"

#include <sstream>

namespace locorth {

std::size_t Graph::degree(std::size_t u) const {
    std::size_t c = 0;
    for (auto w : row(u)) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

std::size_t Graph::edge_count() const {
    std::size_t twice = 0;
    for (std::size_t u = 0; u < n_; ++u) twice += degree(u);
    return twice / 2;
}

Event Graph::label(std::size_t v) const {
    if (!labels_) throw InputError("graph has no event labels");
    return decode(labels_->scenario, labels_->events.at(v));
}

GraphBuilder::GraphBuilder(std::size_t vertices, const GraphLimits& limits) {
    if (vertices > limits.max_vertices) {
        throw BudgetExceeded("graph with " + std::to_string(vertices) + " vertices exceeds the vertex limit of " +
                             std::to_string(limits.max_vertices));
    }
    std::size_t stride = (vertices + 63) / 64;
    if (vertices != 0 && stride * 8 > limits.max_adjacency_bytes / vertices) {
        throw BudgetExceeded("adjacency matrix for " + std::to_string(vertices) + " vertices exceeds the memory budget");
    }
    g_.n_ = vertices;
    g_.stride_ = stride;
    g_.adjacency_.assign(vertices * stride, 0);
}

void GraphBuilder::add_edge(std::size_t u, std::size_t v) {
    if (u >= g_.n_ || v >= g_.n_) throw InputError("edge endpoint out of range");
    if (u == v) return;
    g_.adjacency_[u * g_.stride_ + (v >> 6)] |= std::uint64_t{1} << (v & 63);
    g_.adjacency_[v * g_.stride_ + (u >> 6)] |= std::uint64_t{1} << (u & 63);
}

void GraphBuilder::set_labels(VertexLabels labels) {
    if (labels.events.size() != g_.n_) throw InputError("label count does not match vertex count");
    g_.labels_ = std::move(labels);
}

Graph GraphBuilder::build() && { return std::move(g_); }

Graph orthogonality_graph(const Scenario& s, const GraphLimits& limits) {
    auto count = s.event_count();
    if (count > limits.max_vertices) {
        throw BudgetExceeded("orthogonality graph of " + s.to_string() + " has " + std::to_string(count) +
                             " vertices, above the vertex limit");
    }
    auto n = static_cast<std::size_t>(count);
    GraphBuilder b(n, limits);
    // Two events are orthogonal iff the local labels differ in outcome but not in setting at some party.
    const auto base = s.local_size();
    const auto d = static_cast<std::uint64_t>(s.outcomes());
    std::vector<std::uint64_t> labels(n * s.parties());
    for (std::size_t e = 0; e < n; ++e) {
        auto idx = static_cast<std::uint64_t>(e);
        for (int i = s.parties() - 1; i >= 0; --i) {
            labels[e * s.parties() + i] = idx % base;
            idx /= base;
        }
    }
    for (std::size_t e = 0; e < n; ++e) {
        const auto* le = &labels[e * s.parties()];
        for (std::size_t f = e + 1; f < n; ++f) {
            const auto* lf = &labels[f * s.parties()];
            for (int i = 0; i < s.parties(); ++i) {
                if (le[i] != lf[i] && le[i] / d == lf[i] / d) {
                    b.add_edge(e, f);
                    break;
                }
            }
        }
    }
    VertexLabels vl{s, {}};
    vl.events.resize(n);
    for (std::size_t e = 0; e < n; ++e) vl.events[e] = e;
    b.set_labels(std::move(vl));
    return std::move(b).build();
}

Graph non_orthogonality_graph(const Scenario& s, const GraphLimits& limits) {
    return complement(orthogonality_graph(s, limits));
}

Graph complement(const Graph& g) {
    GraphBuilder b(g.size());
    for (std::size_t u = 0; u < g.size(); ++u) {
        for (std::size_t v = u + 1; v < g.size(); ++v) {
            if (!g.adjacent(u, v)) b.add_edge(u, v);
        }
    }
    if (g.labels()) b.set_labels(*g.labels());
    return std::move(b).build();
}

Graph induced_subgraph(const Graph& g, std::span<const std::size_t> vertices) {
    Bitset seen(g.size());
    for (auto v : vertices) {
        if (v >= g.size()) throw InputError("induced_subgraph: vertex " + std::to_string(v) + " out of range");
        if (seen.test(v)) throw InputError("induced_subgraph: vertex " + std::to_string(v) + " repeated");
        seen.set(v);
    }
    GraphBuilder b(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        for (std::size_t j = i + 1; j < vertices.size(); ++j) {
            if (g.adjacent(vertices[i], vertices[j])) b.add_edge(i, j);
        }
    }
    if (g.labels()) {
        VertexLabels vl{g.labels()->scenario, {}};
        for (auto v : vertices) vl.events.push_back(g.labels()->events[v]);
        b.set_labels(std::move(vl));
    }
    return std::move(b).build();
}

namespace {

template <typename Rule>
Graph product(const Graph& g, const Graph& h, const GraphLimits& limits, Rule rule) {
    const std::size_t gn = g.size();
    const std::size_t hn = h.size();
    if (hn != 0 && gn > limits.max_vertices / hn) throw BudgetExceeded("product graph exceeds the vertex limit");
    GraphBuilder b(gn * hn, limits);
    for (std::size_t u = 0; u < gn; ++u) {
        for (std::size_t u2 = u; u2 < gn; ++u2) {
            const bool eq_g = u == u2;
            const bool adj_g = g.adjacent(u, u2);
            for (std::size_t v = 0; v < hn; ++v) {
                for (std::size_t v2 = eq_g ? v + 1 : 0; v2 < hn; ++v2) {
                    if (rule(eq_g, adj_g, v == v2, h.adjacent(v, v2))) b.add_edge(u * hn + v, u2 * hn + v2);
                }
            }
        }
    }
    return std::move(b).build();
}

} // namespace

Graph strong_product(const Graph& g, const Graph& h, const GraphLimits& limits) {
    return product(g, h, limits, [](bool eq1, bool adj1, bool eq2, bool adj2) {
        return (eq1 || adj1) && (eq2 || adj2);
    });
}

Graph conormal_product(const Graph& g, const Graph& h, const GraphLimits& limits) {
    return product(g, h, limits, [](bool, bool adj1, bool, bool adj2) { return adj1 || adj2; });
}

Graph strong_power(const Graph& g, int k, const GraphLimits& limits) {
    if (k < 1) throw InputError("graph power needs k >= 1");
    Graph result = g;
    for (int i = 1; i < k; ++i) result = strong_product(result, g, limits);
    return result;
}

Graph conormal_power(const Graph& g, int k, const GraphLimits& limits) {
    if (k < 1) throw InputError("graph power needs k >= 1");
    Graph result = g;
    for (int i = 1; i < k; ++i) result = conormal_product(result, g, limits);
    return result;
}

Graph complete_graph(std::size_t n) {
    GraphBuilder b(n);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) b.add_edge(u, v);
    }
    return std::move(b).build();
}

Graph edgeless_graph(std::size_t n) { return GraphBuilder(n).build(); }

Graph cycle_graph(std::size_t n) { return circulant_graph(n, {1}); }

Graph circulant_graph(std::size_t n, const std::vector<std::size_t>& jumps) {
    GraphBuilder b(n);
    for (std::size_t u = 0; u < n; ++u) {
        for (auto j : jumps) {
            if (j % n != 0) b.add_edge(u, (u + j) % n);
        }
    }
    return std::move(b).build();
}

std::string to_dot(const Graph& g, const std::string& name) {
    std::ostringstream out;
    out << "graph " << name << " {\n";
    for (std::size_t v = 0; v < g.size(); ++v) {
        out << "  " << v;
        if (g.labels()) out << " [label=\"" << format_event(g.label(v)) << "\"]";
        out << ";\n";
    }
    for (std::size_t u = 0; u < g.size(); ++u) {
        for (std::size_t v = u + 1; v < g.size(); ++v) {
            if (g.adjacent(u, v)) out << "  " << u << " -- " << v << ";\n";
        }
    }
    out << "}\n";
    return out.str();
}

} // namespace locorth
