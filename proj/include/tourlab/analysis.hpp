#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "graph.hpp"

namespace tourlab {

inline constexpr std::uint64_t default_budget = 10000;

struct AcyclicityResult {
    bool acyclic = true;
    std::vector<VertexId> cycle; // v0 -> v1 -> ... -> v0, smallest vertex first
};

inline std::vector<VertexId> normalize_cycle(std::vector<VertexId> c)
{
    auto it = std::min_element(c.begin(), c.end());
    std::rotate(c.begin(), it, c.end());
    return c;
}

inline AcyclicityResult is_acyclic(const FiniteOrientedGraph& g)
{
    const std::size_t n = g.size();
    std::vector<unsigned char> color(n, 0); // 0 white, 1 on stack, 2 done
    std::vector<VertexId> parent(n);
    std::vector<std::pair<VertexId, std::size_t>> stack;
    for (VertexId s = 0; s < n; ++s) {
        if (color[s])
            continue;
        stack.emplace_back(s, 0);
        color[s] = 1;
        while (!stack.empty()) {
            auto& [v, idx] = stack.back();
            const auto& out = g.out(v);
            if (idx == out.size()) {
                color[v] = 2;
                stack.pop_back();
                continue;
            }
            VertexId w = out[idx++];
            if (color[w] == 0) {
                parent[w] = v;
                color[w] = 1;
                stack.emplace_back(w, 0);
            } else if (color[w] == 1) {
                std::vector<VertexId> cyc{w};
                for (VertexId x = v; x != w; x = parent[x])
                    cyc.push_back(x);
                std::reverse(cyc.begin() + 1, cyc.end());
                return {false, normalize_cycle(std::move(cyc))};
            }
        }
    }
    return {};
}

inline std::string format_vertices(const std::vector<VertexId>& vs, char sep = ',')
{
    std::string s;
    for (std::size_t k = 0; k < vs.size(); ++k) {
        if (k)
            s += sep;
        s += std::to_string(vs[k] + 1);
    }
    return s;
}

[[noreturn]] inline void throw_cyclic(const std::vector<VertexId>& cycle)
{
    throw Error(ErrorCode::cyclic_input, "graph has a directed cycle " + format_vertices(cycle));
}

// Kahn's algorithm, smallest available vertex first.
inline std::vector<VertexId> topological_order(const FiniteOrientedGraph& g)
{
    const std::size_t n = g.size();
    std::vector<std::size_t> indeg(n);
    std::priority_queue<VertexId, std::vector<VertexId>, std::greater<>> ready;
    for (VertexId v = 0; v < n; ++v)
        if ((indeg[v] = g.in(v).size()) == 0)
            ready.push(v);
    std::vector<VertexId> order;
    order.reserve(n);
    while (!ready.empty()) {
        auto v = ready.top();
        ready.pop();
        order.push_back(v);
        for (auto w : g.out(v))
            if (--indeg[w] == 0)
                ready.push(w);
    }
    if (order.size() != n)
        throw_cyclic(is_acyclic(g).cycle);
    return order;
}

inline FiniteOrientedGraph transitive_closure(const FiniteOrientedGraph& g)
{
    const std::size_t n = g.size();
    auto order = topological_order(g);
    const std::size_t words = (n + 63) / 64;
    std::vector<std::uint64_t> reach(n * words, 0);
    auto row = [&](VertexId v) { return reach.data() + v * words; };
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        auto* r = row(*it);
        for (auto w : g.out(*it)) {
            const auto* rw = row(w);
            for (std::size_t k = 0; k < words; ++k)
                r[k] |= rw[k];
            r[w / 64] |= std::uint64_t{1} << (w % 64);
        }
    }
    std::vector<Edge> edges;
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = 0; v < n; ++v)
            if (row(u)[v / 64] >> (v % 64) & 1)
                edges.emplace_back(u, v);
    return FiniteOrientedGraph(n, std::move(edges));
}

struct ClosureResult {
    VertexId vertex = 0;
    std::vector<VertexId> members; // sorted, includes vertex
    std::uint64_t budget_spent = 0;
};

namespace detail {

template <class Neighbors>
ClosureResult bounded_closure(VertexId v, Neighbors&& next, std::uint64_t budget, const std::string& what)
{
    if (budget == 0)
        throw Error(ErrorCode::invalid_argument, "closure budget must be at least 1");
    ClosureResult r{v, {v}, 0};
    std::unordered_set<VertexId> seen{v};
    std::deque<VertexId> queue{v};
    while (!queue.empty()) {
        if (r.budget_spent == budget)
            throw Error(ErrorCode::budget_exhausted,
                        what + " did not close within " + std::to_string(budget) + " expansions");
        auto x = queue.front();
        queue.pop_front();
        ++r.budget_spent;
        for (auto w : next(x))
            if (seen.insert(w).second) {
                r.members.push_back(w);
                queue.push_back(w);
            }
    }
    std::sort(r.members.begin(), r.members.end());
    return r;
}

inline std::string closure_name(VertexId v, Sign s)
{
    return std::string("Gamma") + to_char(s) + "(" + std::to_string(v + 1) + ")";
}

} // namespace detail

// Gamma^+(v) (reachable from v) or Gamma^-(v) (reaching v), reflexive.
inline ClosureResult gamma(const PresentedGraph& g, VertexId v, Sign s, std::uint64_t budget = default_budget)
{
    return detail::bounded_closure(
        v, [&](VertexId x) { return g.neighbors(x, s); }, budget, detail::closure_name(v, s));
}

inline ClosureResult gamma(const FiniteOrientedGraph& g, VertexId v, Sign s, std::uint64_t budget = default_budget)
{
    return detail::bounded_closure(
        v, [&](VertexId x) -> const std::vector<VertexId>& { return s == Sign::plus ? g.out(x) : g.in(x); },
        budget, detail::closure_name(v, s));
}

struct RankFunction {
    std::vector<std::uint64_t> h;
};

// h(x) = length of the longest directed path ending at x.
inline RankFunction rank(const FiniteOrientedGraph& g)
{
    RankFunction r{std::vector<std::uint64_t>(g.size(), 0)};
    for (auto v : topological_order(g))
        for (auto w : g.in(v))
            r.h[v] = std::max(r.h[v], r.h[w] + 1);
    return r;
}

enum class Verdict { unavoidable, avoidable, inconclusive };
enum class WitnessKind { none, cycle, unbounded_path };

struct Classification {
    Verdict verdict = Verdict::inconclusive;
    WitnessKind witness = WitnessKind::none;
    std::vector<VertexId> vertices; // cycle, or the start of the unbounded path
    Sign direction = Sign::plus;
    std::string reason;

    std::string summary() const
    {
        std::string s = "verdict=";
        s += verdict == Verdict::unavoidable ? "unavoidable"
             : verdict == Verdict::avoidable ? "avoidable"
                                             : "inconclusive";
        s += " witness=";
        switch (witness) {
        case WitnessKind::none: s += "none"; break;
        case WitnessKind::cycle: s += "cycle:" + format_vertices(vertices); break;
        case WitnessKind::unbounded_path:
            s += std::string("path") + to_char(direction) + ":" + format_vertices(vertices);
            break;
        }
        if (!reason.empty())
            s += " reason=" + reason;
        return s;
    }
};

inline Classification classify_unavoidability(const FiniteOrientedGraph& g)
{
    auto a = is_acyclic(g);
    if (a.acyclic)
        return {Verdict::unavoidable, WitnessKind::none, {}, Sign::plus, ""};
    return {Verdict::avoidable, WitnessKind::cycle, a.cycle, Sign::plus, ""};
}

// Certifies finite closures for every vertex below min(budget, |G|), then looks
// for a cycle among everything the closures touched.
inline Classification classify_unavoidability(const PresentedGraph& g, std::uint64_t budget = default_budget)
{
    if (budget == 0)
        throw Error(ErrorCode::invalid_argument, "budget must be at least 1");
    std::uint64_t limit = g.size ? std::min(*g.size, budget) : budget;
    std::vector<VertexId> explored;
    std::unordered_set<VertexId> seen;
    for (VertexId v = 0; v < limit; ++v) {
        for (Sign s : {Sign::plus, Sign::minus}) {
            try {
                for (auto w : gamma(g, v, s, budget).members)
                    if (seen.insert(w).second)
                        explored.push_back(w);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::budget_exhausted)
                    throw;
                if (g.closure_is_infinite && g.closure_is_infinite(v, s))
                    return {Verdict::avoidable, WitnessKind::unbounded_path, {v}, s, "certified-infinite-closure"};
                return {Verdict::inconclusive, WitnessKind::none, {}, s,
                        "budget-exhausted:" + detail::closure_name(v, s)};
            }
        }
    }
    std::sort(explored.begin(), explored.end());
    std::unordered_map<VertexId, VertexId> local;
    for (std::size_t k = 0; k < explored.size(); ++k)
        local[explored[k]] = k;
    std::vector<Edge> edges;
    for (auto v : explored)
        for (auto w : g(v).out)
            if (auto it = local.find(w); it != local.end())
                edges.emplace_back(local[v], it->second);
    auto a = is_acyclic(FiniteOrientedGraph(explored.size(), std::move(edges)));
    if (!a.acyclic) {
        std::vector<VertexId> cyc;
        for (auto x : a.cycle)
            cyc.push_back(explored[x]);
        return {Verdict::avoidable, WitnessKind::cycle, normalize_cycle(cyc), Sign::plus, ""};
    }
    return {Verdict::unavoidable, WitnessKind::none, {}, Sign::plus, ""};
}

} // namespace tourlab
