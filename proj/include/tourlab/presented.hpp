#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graph.hpp"

// Generator-presented infinite graphs used by the CLI, the tests and the examples.
namespace tourlab::families {

// 0 -> 1 -> 2 -> ...; the generator certifies that Gamma^+ never closes.
inline PresentedGraph forward_path(bool certified = true)
{
    PresentedGraph g;
    g.name = "forward-path";
    g.adjacency = [](VertexId v) {
        Adjacency a;
        if (v > 0)
            a.in.push_back(v - 1);
        a.out.push_back(v + 1);
        return a;
    };
    if (certified)
        g.closure_is_infinite = [](VertexId, Sign s) { return s == Sign::plus; };
    return g;
}

// Even vertices are sources, odd vertices sinks: 0 -> 1 <- 2 -> 3 <- ...
inline PresentedGraph anti_path()
{
    PresentedGraph g;
    g.name = "anti-path";
    g.adjacency = [](VertexId v) {
        Adjacency a;
        auto& side = (v % 2 == 0) ? a.out : a.in;
        if (v > 0)
            side.push_back(v - 1);
        side.push_back(v + 1);
        return a;
    };
    return g;
}

inline FiniteOrientedGraph finite_anti_path(std::size_t n)
{
    std::vector<Edge> e;
    for (VertexId v = 0; v + 1 < n; ++v)
        e.push_back(v % 2 == 0 ? Edge{v, v + 1} : Edge{v + 1, v});
    return FiniteOrientedGraph(n, std::move(e));
}

// Disjoint 3-vertex out-stars {3k -> 3k+1, 3k -> 3k+2}.
inline PresentedGraph out_stars()
{
    PresentedGraph g;
    g.name = "out-stars";
    g.adjacency = [](VertexId v) {
        Adjacency a;
        VertexId c = v - v % 3;
        if (v == c)
            a.out = {c + 1, c + 2};
        else
            a.in = {c};
        return a;
    };
    g.component_root = [](VertexId v) { return v - v % 3; };
    return g;
}

// Blocks of 8 consecutive vertices hold two 4-vertex trees whose indices
// interleave: the even slots form the anti-path a0 -> a1 <- a2 -> a3, the odd
// slots the tree b3 -> b0 -> {b1, b2}.
inline PresentedGraph forest()
{
    PresentedGraph g;
    g.name = "forest";
    g.adjacency = [](VertexId v) {
        Adjacency a;
        VertexId base = v - v % 8;
        unsigned slot = v % 8;
        auto at = [&](unsigned s) { return base + s; };
        switch (slot) {
        case 0: a.out = {at(2)}; break;                 // a0
        case 2: a.in = {at(0), at(4)}; break;           // a1
        case 4: a.out = {at(2), at(6)}; break;          // a2
        case 6: a.in = {at(4)}; break;                  // a3
        case 1: a.in = {at(7)}; a.out = {at(3), at(5)}; break; // b0
        case 3: a.in = {at(1)}; break;                  // b1
        case 5: a.in = {at(1)}; break;                  // b2
        case 7: a.out = {at(1)}; break;                 // b3
        }
        return a;
    };
    g.component_root = [](VertexId v) { return v - v % 8 + v % 2; };
    return g;
}

// Random acyclic locally finite graph: edges only between vertices at most
// `reach` apart, oriented from the lower to the higher of 2*levels levels, so
// every directed path has fewer than 2*levels vertices. Consecutive vertices
// are always joined, which keeps the graph weakly connected.
inline PresentedGraph random_dag(std::uint64_t seed, unsigned reach = 4, unsigned levels = 4)
{
    if (reach == 0 || levels == 0)
        throw Error(ErrorCode::invalid_argument, "random-dag needs reach and levels >= 1");
    auto level = [seed, levels](VertexId v) {
        return 2 * (detail::mix64(seed ^ detail::mix64(v)) % levels) + v % 2;
    };
    auto joined = [seed, level](VertexId a, VertexId b) {
        if (b == a + 1)
            return true;
        if (level(a) == level(b))
            return false;
        return (detail::mix64(detail::mix64(seed + 0x5bd1e995) ^ detail::mix64(a) ^ (b << 17)) & 1) != 0;
    };
    PresentedGraph g;
    g.name = "random-dag:" + std::to_string(seed);
    g.adjacency = [reach, level, joined](VertexId v) {
        Adjacency adj;
        auto add = [&](VertexId w) {
            (level(v) < level(w) ? adj.out : adj.in).push_back(w);
        };
        for (VertexId w = v >= reach ? v - reach : 0; w < v; ++w)
            if (joined(w, v))
                add(w);
        for (VertexId w = v + 1; w <= v + reach; ++w)
            if (joined(v, w))
                add(w);
        return adj;
    };
    return g;
}

} // namespace tourlab::families
