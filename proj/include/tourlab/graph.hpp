#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace tourlab {

using Edge = std::pair<VertexId, VertexId>;

class FiniteOrientedGraph {
public:
    FiniteOrientedGraph() = default;

    FiniteOrientedGraph(std::size_t n, std::vector<Edge> edges)
        : n_(n), out_(n), in_(n)
    {
        for (const auto& [u, v] : edges) {
            if (u >= n || v >= n)
                throw Error(ErrorCode::invalid_graph, "edge (" + std::to_string(u + 1) + ","
                                                          + std::to_string(v + 1) + ") outside [1,"
                                                          + std::to_string(n) + "]");
            if (u == v)
                throw Error(ErrorCode::invalid_graph, "loop at vertex " + std::to_string(u + 1));
            out_[u].push_back(v);
            in_[v].push_back(u);
        }
        for (std::size_t v = 0; v < n; ++v) {
            std::sort(out_[v].begin(), out_[v].end());
            std::sort(in_[v].begin(), in_[v].end());
            if (std::adjacent_find(out_[v].begin(), out_[v].end()) != out_[v].end())
                throw Error(ErrorCode::invalid_graph, "duplicate edge out of " + std::to_string(v + 1));
        }
        for (const auto& [u, v] : edges)
            if (has_edge(v, u))
                throw Error(ErrorCode::invalid_graph, "both (" + std::to_string(u + 1) + ","
                                                          + std::to_string(v + 1)
                                                          + ") and its reverse are present");
        std::sort(edges.begin(), edges.end());
        edges_ = std::move(edges);
    }

    std::size_t size() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<VertexId>& out(VertexId v) const { return out_.at(v); }
    const std::vector<VertexId>& in(VertexId v) const { return in_.at(v); }

    bool has_edge(VertexId u, VertexId v) const
    {
        const auto& o = out_.at(u);
        return std::binary_search(o.begin(), o.end(), v);
    }

    // Subgraph induced on `vertices`, relabelled 0..k-1 in the given order.
    FiniteOrientedGraph induced(const std::vector<VertexId>& vertices) const
    {
        std::vector<std::size_t> local(n_, SIZE_MAX);
        for (std::size_t a = 0; a < vertices.size(); ++a)
            local.at(vertices[a]) = a;
        std::vector<Edge> e;
        for (std::size_t a = 0; a < vertices.size(); ++a)
            for (auto w : out_[vertices[a]])
                if (local[w] != SIZE_MAX)
                    e.emplace_back(a, local[w]);
        return FiniteOrientedGraph(vertices.size(), std::move(e));
    }

private:
    std::size_t n_ = 0;
    std::vector<std::vector<VertexId>> out_;
    std::vector<std::vector<VertexId>> in_;
    std::vector<Edge> edges_;
};

struct Adjacency {
    std::vector<VertexId> in;
    std::vector<VertexId> out;
};

// A locally finite oriented graph on N (or on [size]) given by a generator.
struct PresentedGraph {
    std::string name;
    std::function<Adjacency(VertexId)> adjacency;
    std::optional<std::uint64_t> size;
    // Smallest vertex of the weak component of v; absent means "weakly connected".
    std::function<VertexId(VertexId)> component_root;
    // Generator-side certificate that Gamma^sign(v) is infinite.
    std::function<bool(VertexId, Sign)> closure_is_infinite;

    Adjacency operator()(VertexId v) const { return adjacency(v); }

    bool contains(VertexId v) const { return !size || v < *size; }

    std::vector<VertexId> neighbors(VertexId v, Sign s) const
    {
        auto a = adjacency(v);
        return s == Sign::plus ? a.out : a.in;
    }
};

inline PresentedGraph present(const FiniteOrientedGraph& g, std::string name = "finite")
{
    auto shared = std::make_shared<const FiniteOrientedGraph>(g);
    // weak components labelled by their smallest vertex
    std::vector<VertexId> root(g.size());
    std::iota(root.begin(), root.end(), VertexId{0});
    std::function<VertexId(VertexId)> find = [&](VertexId x) {
        while (root[x] != x)
            x = root[x] = root[root[x]];
        return x;
    };
    for (const auto& [u, v] : g.edges()) {
        auto a = find(u), b = find(v);
        if (a != b)
            root[std::max(a, b)] = std::min(a, b);
    }
    for (VertexId v = 0; v < g.size(); ++v)
        root[v] = find(v);
    auto roots = std::make_shared<const std::vector<VertexId>>(std::move(root));

    PresentedGraph p;
    p.name = std::move(name);
    p.size = g.size();
    p.adjacency = [shared](VertexId v) { return Adjacency{shared->in(v), shared->out(v)}; };
    p.component_root = [roots](VertexId v) { return roots->at(v); };
    return p;
}

// Consistency of in/out lists on the prefix [n]; returns the first offending vertex.
inline std::optional<VertexId> check_adjacency_consistency(const PresentedGraph& g, std::uint64_t n)
{
    for (VertexId v = 0; v < n && g.contains(v); ++v) {
        auto a = g(v);
        for (auto w : a.out) {
            auto b = g(w);
            if (std::find(b.in.begin(), b.in.end(), v) == b.in.end() || w == v)
                return v;
        }
        for (auto w : a.in) {
            auto b = g(w);
            if (std::find(b.out.begin(), b.out.end(), v) == b.out.end() || w == v)
                return v;
        }
    }
    return std::nullopt;
}

} // namespace tourlab
