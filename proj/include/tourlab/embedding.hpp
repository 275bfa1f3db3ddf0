#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "analysis.hpp"

namespace tourlab {

class EmbeddingMap {
public:
    void assign(VertexId g, VertexId k)
    {
        if (fwd_.count(g))
            throw Error(ErrorCode::internal_consistency, "G-vertex " + std::to_string(g + 1) + " mapped twice");
        if (inv_.count(k))
            throw Error(ErrorCode::internal_consistency, "K-vertex " + std::to_string(k + 1) + " used twice");
        fwd_.emplace(g, k);
        inv_.emplace(k, g);
    }

    bool contains(VertexId g) const { return fwd_.count(g) != 0; }
    bool covers(VertexId k) const { return inv_.count(k) != 0; }
    VertexId at(VertexId g) const { return fwd_.at(g); }
    VertexId preimage(VertexId k) const { return inv_.at(k); }
    std::size_t size() const { return fwd_.size(); }

    std::vector<std::pair<VertexId, VertexId>> pairs() const
    {
        std::vector<std::pair<VertexId, VertexId>> p(fwd_.begin(), fwd_.end());
        std::sort(p.begin(), p.end());
        return p;
    }

    const std::unordered_map<VertexId, VertexId>& forward_map() const { return fwd_; }

private:
    std::unordered_map<VertexId, VertexId> fwd_;
    std::unordered_map<VertexId, VertexId> inv_;
};

struct ValidityReport {
    bool valid = true;
    std::optional<Edge> bad_edge; // G-edge whose image is not a K-edge
    std::uint64_t edges_checked = 0;
};

// Every G-edge with both ends mapped must land on a K-edge. Injectivity is
// enforced by EmbeddingMap itself.
inline ValidityReport check_embedding(const EmbeddingMap& phi, const PresentedGraph& g, const TournamentOracle& K)
{
    ValidityReport r;
    for (const auto& [u, k] : phi.pairs())
        for (auto w : g(u).out) {
            if (!phi.contains(w))
                continue;
            ++r.edges_checked;
            if (!has_edge(K, k, phi.at(w))) {
                r.valid = false;
                r.bad_edge = Edge{u, w};
                return r;
            }
        }
    return r;
}

inline ValidityReport check_embedding(const EmbeddingMap& phi, const FiniteOrientedGraph& g, const TournamentOracle& K)
{
    return check_embedding(phi, present(g), K);
}

enum class TransitiveTarget { omega, omega_star };

// Minimal-index greedy: position p goes to the smallest vertex with in-degree 0
// (out-degree 0 for omega*) among the still unassigned vertices.
inline EmbeddingMap greedy_embed_transitive(const FiniteOrientedGraph& g, TransitiveTarget target)
{
    const std::size_t n = g.size();
    const bool up = target == TransitiveTarget::omega;
    std::vector<std::size_t> deg(n);
    std::priority_queue<VertexId, std::vector<VertexId>, std::greater<>> ready;
    for (VertexId v = 0; v < n; ++v)
        if ((deg[v] = (up ? g.in(v) : g.out(v)).size()) == 0)
            ready.push(v);
    EmbeddingMap phi;
    VertexId pos = 0;
    while (!ready.empty()) {
        auto v = ready.top();
        ready.pop();
        phi.assign(v, pos++);
        for (auto w : up ? g.out(v) : g.in(v))
            if (--deg[w] == 0)
                ready.push(w);
    }
    if (phi.size() != n)
        throw_cyclic(is_acyclic(g).cycle);
    return phi;
}

// Lazy form for presented graphs, run for `horizon` assignments. The smallest
// ready vertex always lies between the smallest unassigned vertex u0 and the
// largest unassigned member of Gamma^-(u0), so only that window is scanned.
inline EmbeddingMap greedy_embed_transitive(const PresentedGraph& g, TransitiveTarget target, std::uint64_t horizon,
                                            std::uint64_t budget = default_budget)
{
    const Sign back = target == TransitiveTarget::omega ? Sign::minus : Sign::plus;
    EmbeddingMap phi;
    VertexId u0 = 0;
    for (std::uint64_t step = 0; step < horizon; ++step) {
        while (phi.contains(u0))
            ++u0;
        if (!g.contains(u0))
            break;
        auto cl = gamma(g, u0, back, budget);
        VertexId hi = u0;
        for (auto w : cl.members)
            if (!phi.contains(w))
                hi = std::max(hi, w);
        bool placed = false;
        for (VertexId u = u0; u <= hi && !placed; ++u) {
            if (phi.contains(u))
                continue;
            auto pred = g.neighbors(u, back);
            if (std::all_of(pred.begin(), pred.end(), [&](VertexId w) { return phi.contains(w); })) {
                phi.assign(u, step);
                placed = true;
            }
        }
        if (!placed) {
            // every unassigned member of the closure has an unassigned predecessor
            throw Error(ErrorCode::cyclic_input, "no ready vertex in " + detail::closure_name(u0, back)
                                                     + "; the closure contains a cycle");
        }
    }
    return phi;
}

enum class Flavor { plus_minus, minus_plus };

// Type of the 1-based cell C_i: + for odd i under the plus-minus flavour.
inline Sign cell_type(Flavor f, std::size_t i)
{
    Sign odd = f == Flavor::plus_minus ? Sign::plus : Sign::minus;
    return i % 2 == 1 ? odd : opposite(odd);
}

inline std::string to_string(Flavor f) { return f == Flavor::plus_minus ? "+-" : "-+"; }

struct PMPartition {
    Flavor flavor = Flavor::plus_minus;
    std::vector<std::vector<VertexId>> cells; // cells[0] is C_1
    bool complete = false;                    // an empty cell was reached
};

// Incremental construction: C_i = Gamma^{type(C_{i-1})}(C_{i-1}) minus C_{i-1}, C_{i-2}.
class PMPartitionBuilder {
public:
    PMPartitionBuilder(PresentedGraph g, VertexId v, Flavor flavor, std::uint64_t budget = default_budget)
        : g_(std::move(g)), budget_(budget)
    {
        part_.flavor = flavor;
        auto a = g_(v);
        if (flavor == Flavor::plus_minus && !a.in.empty())
            throw Error(ErrorCode::invalid_argument, "+- partition needs C_1 = {v} with in-degree 0; vertex "
                                                         + std::to_string(v + 1) + " has in-neighbours");
        if (flavor == Flavor::minus_plus && !a.out.empty())
            throw Error(ErrorCode::invalid_argument, "-+ partition needs C_1 = {v} with out-degree 0; vertex "
                                                         + std::to_string(v + 1) + " has out-neighbours");
        part_.cells.push_back({v});
        where_[v] = 1;
    }

    Flavor flavor() const { return part_.flavor; }

    // 1-based; an empty result means the partition has ended before cell i.
    const std::vector<VertexId>& cell(std::size_t i)
    {
        while (part_.cells.size() < i && !part_.complete)
            extend();
        static const std::vector<VertexId> none;
        return i <= part_.cells.size() ? part_.cells[i - 1] : none;
    }

    std::optional<std::size_t> cell_of(VertexId v) const
    {
        auto it = where_.find(v);
        if (it == where_.end())
            return std::nullopt;
        return it->second;
    }

    const PMPartition& partition() const { return part_; }

private:
    void extend()
    {
        const std::size_t i = part_.cells.size() + 1;
        const Sign s = cell_type(part_.flavor, i - 1);
        std::vector<VertexId> next;
        for (auto v : part_.cells[i - 2])
            for (auto w : gamma(g_, v, s, budget_).members) {
                auto it = where_.find(w);
                if (it != where_.end()) {
                    if (it->second + 2 < i)
                        throw Error(ErrorCode::internal_consistency,
                                    "closure of cell " + std::to_string(i - 1) + " reaches back to cell "
                                        + std::to_string(it->second));
                    continue;
                }
                where_[w] = i;
                next.push_back(w);
            }
        if (next.empty()) {
            part_.complete = true;
            return;
        }
        std::sort(next.begin(), next.end());
        part_.cells.push_back(std::move(next));
    }

    PresentedGraph g_;
    std::uint64_t budget_;
    PMPartition part_;
    std::unordered_map<VertexId, std::size_t> where_;
};

// For finite graphs `max_cells` may be 0 (run to the first empty cell); the
// union of the cells must then be all of V(G), i.e. G weakly connected.
inline PMPartition pm_partition(const PresentedGraph& g, VertexId v, Flavor flavor,
                                std::uint64_t budget = default_budget, std::size_t max_cells = 0)
{
    if (!g.size && max_cells == 0)
        throw Error(ErrorCode::invalid_argument, "an infinite graph needs a cell limit");
    PMPartitionBuilder b(g, v, flavor, budget);
    for (std::size_t i = 1; max_cells == 0 || i <= max_cells; ++i)
        if (b.cell(i).empty())
            break;
    auto p = b.partition();
    if (p.complete && g.size) {
        std::size_t total = 0;
        for (const auto& c : p.cells)
            total += c.size();
        if (total != *g.size)
            throw Error(ErrorCode::invalid_graph, "graph is not weakly connected: partition from vertex "
                                                      + std::to_string(v + 1) + " covers " + std::to_string(total)
                                                      + " of " + std::to_string(*g.size) + " vertices");
    }
    return p;
}

inline PMPartition pm_partition(const FiniteOrientedGraph& g, VertexId v, Flavor flavor,
                                std::uint64_t budget = default_budget)
{
    return pm_partition(present(g), v, flavor, budget, 0);
}

struct PartitionCheck {
    bool ok = true;
    std::string failure;
};

// A1-A4 on the produced cells. Unless the partition is complete, the last
// cell may still have neighbours in the next, unproduced cell.
inline PartitionCheck check_pm_partition(const PresentedGraph& g, const PMPartition& p)
{
    auto fail = [](std::string why) { return PartitionCheck{false, std::move(why)}; };
    std::unordered_map<VertexId, std::size_t> where;
    const std::size_t L = p.cells.size();
    for (std::size_t i = 1; i <= L; ++i) {
        if (p.cells[i - 1].empty())
            return fail("A1: cell " + std::to_string(i) + " is empty");
        for (auto v : p.cells[i - 1])
            if (!where.emplace(v, i).second)
                return fail("cells overlap at vertex " + std::to_string(v + 1));
    }
    for (std::size_t i = 1; i <= L; ++i) {
        const Sign t = cell_type(p.flavor, i);
        bool extremal = false;
        for (auto v : p.cells[i - 1]) {
            auto a = g(v);
            // A4: a + cell holds a vertex of in-degree 0 in G, a - cell one of out-degree 0
            if ((t == Sign::plus ? a.in : a.out).empty())
                extremal = true;
            for (Sign s : {Sign::plus, Sign::minus})
                for (auto w : s == Sign::plus ? a.out : a.in) {
                    auto it = where.find(w);
                    if (it == where.end()) {
                        if (i == L && !p.complete)
                            continue;
                        return fail("A2: edge at " + std::to_string(v + 1) + " leaves the cells around C_"
                                    + std::to_string(i));
                    }
                    std::size_t k = it->second;
                    if (k + 1 < i || k > i + 1)
                        return fail("A2: edge " + std::to_string(v + 1) + "," + std::to_string(w + 1)
                                    + " spans cells " + std::to_string(i) + " and " + std::to_string(k));
                    // A3: in-degree 0 (out-degree 0 for a - cell) towards the neighbouring cells
                    if (k != i && s != t)
                        return fail("A3: vertex " + std::to_string(v + 1) + " in C_" + std::to_string(i)
                                    + " has a " + to_char(s) + "-neighbour in C_" + std::to_string(k));
                }
        }
        if (!extremal)
            return fail("A4: cell " + std::to_string(i) + " has no extremal vertex");
    }
    if (p.complete && g.size && where.size() != *g.size)
        return fail("cells do not cover V(G)");
    return {};
}

inline PartitionCheck check_pm_partition(const FiniteOrientedGraph& g, const PMPartition& p)
{
    return check_pm_partition(present(g), p);
}

enum class PairColor { red, blue };

struct PairColoring {
    std::vector<VertexId> slice;
    std::vector<PairColor> colors; // upper triangle, row-major over slice indices a<b

    PairColor at(std::size_t a, std::size_t b) const
    {
        if (a > b)
            std::swap(a, b);
        const std::size_t n = slice.size();
        return colors.at(a * n - a * (a + 1) / 2 + (b - a - 1));
    }
};

// Red iff K orients the pair the way phi orders it; a red clique is then
// transitive of type tau, a blue one of type tau*.
inline PairColoring tournament_to_coloring(const TournamentOracle& K, const std::vector<VertexId>& slice,
                                           const std::vector<std::size_t>& phi)
{
    const std::size_t n = slice.size();
    if (phi.size() != n)
        throw Error(ErrorCode::invalid_argument, "phi must assign one position per slice vertex");
    std::vector<bool> hit(n, false);
    for (auto p : phi) {
        if (p >= n || hit[p])
            throw Error(ErrorCode::invalid_argument, "phi is not a bijection onto [0," + std::to_string(n) + ")");
        hit[p] = true;
    }
    PairColoring c{slice, {}};
    c.colors.reserve(n * (n - (n > 0)) / 2);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            bool ab = has_edge(K, slice[a], slice[b]);
            bool agrees = (phi[a] < phi[b]) == ab;
            c.colors.push_back(agrees ? PairColor::red : PairColor::blue);
        }
    return c;
}

// Greedy median split: keep the larger of N^+(x) and N^-(x) inside the pool.
// Every pool of 2^(t-1) vertices yields t vertices w_1..w_t with w_a -> w_b for a < b.
inline std::vector<VertexId> find_transitive_subtournament(const TournamentOracle& K, std::vector<VertexId> pool,
                                                           std::size_t target)
{
    if (target == 0)
        return {};
    if (target > 63 || pool.size() < (std::uint64_t{1} << (target - 1)))
        throw Error(ErrorCode::pool_too_small,
                    "a transitive subtournament of order " + std::to_string(target) + " needs a pool of 2^"
                        + std::to_string(target - 1) + " vertices, got " + std::to_string(pool.size()));
    std::vector<VertexId> front, back;
    while (!pool.empty()) {
        VertexId x = pool.front();
        std::vector<VertexId> outs, ins;
        for (std::size_t k = 1; k < pool.size(); ++k)
            (has_edge(K, x, pool[k]) ? outs : ins).push_back(pool[k]);
        if (outs.size() >= ins.size()) {
            front.push_back(x);
            pool = std::move(outs);
        } else {
            back.push_back(x);
            pool = std::move(ins);
        }
    }
    front.insert(front.end(), back.rbegin(), back.rend());
    if (front.size() < target)
        throw Error(ErrorCode::internal_consistency, "median split produced fewer vertices than guaranteed");
    front.resize(target);
    return front;
}

// Pinned vertices keep their images; the rest go, in topological order, onto a
// transitive subtournament of the pool.
inline EmbeddingMap embed_finite_acyclic(const FiniteOrientedGraph& g, const TournamentOracle& K,
                                         const std::vector<VertexId>& pool,
                                         const std::map<VertexId, VertexId>& pins = {})
{
    EmbeddingMap phi;
    std::unordered_set<VertexId> pinned_images;
    for (const auto& [v, k] : pins) {
        if (v >= g.size())
            throw Error(ErrorCode::invalid_argument, "pin on a vertex outside G");
        phi.assign(v, k);
        pinned_images.insert(k);
    }
    std::vector<VertexId> free_vertices;
    for (auto v : topological_order(g))
        if (!pins.count(v))
            free_vertices.push_back(v);
    std::vector<VertexId> candidates;
    for (auto k : pool)
        if (!pinned_images.count(k))
            candidates.push_back(k);
    auto t = find_transitive_subtournament(K, candidates, free_vertices.size());
    for (std::size_t a = 0; a < t.size(); ++a)
        phi.assign(free_vertices[a], t[a]);
    for (const auto& [u, v] : g.edges())
        if (!has_edge(K, phi.at(u), phi.at(v))) {
            bool pinned = pins.count(u) || pins.count(v);
            throw Error(pinned ? ErrorCode::pin_incompatible : ErrorCode::internal_consistency,
                        "edge " + std::to_string(u + 1) + "->" + std::to_string(v + 1) + " maps to "
                            + std::to_string(phi.at(u) + 1) + "," + std::to_string(phi.at(v) + 1)
                            + ", which K orients the other way");
        }
    return phi;
}

struct Constraint {
    VertexId vertex;
    Sign sign;
};

// Decides whether the intersection of N^{sign}(vertex) over the constraints is
// infinite, and which vertices belong to V^+ / V^-.
class InfinitenessOracle {
public:
    virtual ~InfinitenessOracle() = default;
    virtual std::string name() const = 0;
    virtual bool decide(const std::vector<Constraint>& c) const = 0;
    // Same question restricted to V^{cls}.
    virtual bool decide_in_class(const std::vector<Constraint>& c, Sign cls) const = 0;
    virtual Sign star_sign(VertexId v) const = 0;
    virtual bool probabilistic() const { return false; }

    std::vector<VertexId> enumerate(const TournamentOracle& K, const std::vector<Constraint>& c,
                                    const std::unordered_set<VertexId>& exclusions, std::size_t count,
                                    std::optional<Sign> cls = std::nullopt,
                                    std::uint64_t scan_limit = std::uint64_t{1} << 22) const
    {
        std::vector<VertexId> out;
        std::unordered_set<VertexId> pinned;
        for (const auto& x : c)
            pinned.insert(x.vertex);
        for (VertexId w = 0; out.size() < count; ++w) {
            if (w >= scan_limit)
                throw Error(ErrorCode::oracle_failure,
                            name() + " promised an infinite intersection but only " + std::to_string(out.size())
                                + " of " + std::to_string(count) + " vertices appeared below "
                                + std::to_string(scan_limit));
            if (exclusions.count(w) || pinned.count(w))
                continue;
            if (cls && star_sign(w) != *cls)
                continue;
            if (std::all_of(c.begin(), c.end(), [&](const Constraint& x) { return in_neighborhood(K, x.vertex, x.sign, w); }))
                out.push_back(w);
        }
        return out;
    }
};

// Every vertex has N^{sigma} cofinite: K_omega (+), and K_omega*, factorial
// blocks, the exponential threshold (-).
class CofiniteSignOracle : public InfinitenessOracle {
public:
    explicit CofiniteSignOracle(Sign sigma) : sigma_(sigma) {}
    std::string name() const override { return std::string("cofinite") + to_char(sigma_); }
    bool decide(const std::vector<Constraint>& c) const override
    {
        return std::all_of(c.begin(), c.end(), [&](const Constraint& x) { return x.sign == sigma_; });
    }
    bool decide_in_class(const std::vector<Constraint>& c, Sign cls) const override
    {
        return cls == sigma_ && decide(c);
    }
    Sign star_sign(VertexId) const override { return sigma_; }

private:
    Sign sigma_;
};

// K_{f*} where all but finitely many values share the major `cofinal_major`
// and grow without bound: vertices above that major have cofinite
// out-neighbourhoods, all others cofinite in-neighbourhoods.
class TailSignOracle : public InfinitenessOracle {
public:
    explicit TailSignOracle(InjectionSpec f) : f_(std::move(f))
    {
        if (!f_.cofinal_major)
            throw Error(ErrorCode::oracle_failure, "injection " + f_.description + " has no known cofinal major");
    }
    std::string name() const override { return "tail-sign@" + std::to_string(*f_.cofinal_major); }
    Sign star_sign(VertexId v) const override
    {
        return f_(v).major > *f_.cofinal_major ? Sign::plus : Sign::minus;
    }
    bool decide(const std::vector<Constraint>& c) const override
    {
        return std::all_of(c.begin(), c.end(), [&](const Constraint& x) { return x.sign == star_sign(x.vertex); });
    }
    // V^+ is finite here.
    bool decide_in_class(const std::vector<Constraint>& c, Sign cls) const override
    {
        return cls == Sign::minus && decide(c);
    }

private:
    InjectionSpec f_;
};

// For SeededRandom every finite sign pattern has an infinite intersection
// with probability 1; this oracle assumes so.
class AlwaysInfiniteOracle : public InfinitenessOracle {
public:
    std::string name() const override { return "always-infinite"; }
    bool decide(const std::vector<Constraint>&) const override { return true; }
    bool decide_in_class(const std::vector<Constraint>&, Sign cls) const override { return cls == Sign::plus; }
    Sign star_sign(VertexId) const override { return Sign::plus; }
    bool probabilistic() const override { return true; }
};

inline std::unique_ptr<InfinitenessOracle> auto_oracle(const TournamentOracle& K)
{
    struct V {
        std::unique_ptr<InfinitenessOracle> operator()(const family::TransitiveOmega&) const
        {
            return std::make_unique<CofiniteSignOracle>(Sign::plus);
        }
        std::unique_ptr<InfinitenessOracle> operator()(const family::TransitiveOmegaStar&) const
        {
            return std::make_unique<CofiniteSignOracle>(Sign::minus);
        }
        std::unique_ptr<InfinitenessOracle> operator()(const family::FactorialBlock&) const
        {
            return std::make_unique<CofiniteSignOracle>(Sign::minus);
        }
        std::unique_ptr<InfinitenessOracle> operator()(const family::ExponentialThreshold&) const
        {
            return std::make_unique<CofiniteSignOracle>(Sign::minus);
        }
        std::unique_ptr<InfinitenessOracle> operator()(const family::SeededRandom&) const
        {
            return std::make_unique<AlwaysInfiniteOracle>();
        }
        std::unique_ptr<InfinitenessOracle> operator()(const family::OrdinalInjection& o) const
        {
            return std::make_unique<TailSignOracle>(o.f);
        }
        std::unique_ptr<InfinitenessOracle> operator()(const family::Tabulated&) const
        {
            return std::make_unique<CofiniteSignOracle>(Sign::plus);
        }
    };
    return std::visit(V{}, K.family());
}

struct StarSigns {
    std::vector<Sign> signs;
};

// Left to right: *_i = + iff the running intersection meets N^+(u_i) infinitely.
// Decisions with at most `probe_limit` constraints are cross-checked by
// enumerating a witness.
inline StarSigns classify_vertices(const TournamentOracle& K, const InfinitenessOracle& oracle, std::uint64_t n,
                                   std::size_t probe_limit = 12)
{
    StarSigns s;
    std::vector<Constraint> c;
    for (VertexId i = 0; i < n; ++i) {
        c.push_back({i, Sign::plus});
        if (!oracle.decide(c))
            c.back().sign = Sign::minus;
        if (c.size() <= probe_limit)
            oracle.enumerate(K, c, {}, 1);
        s.signs.push_back(c.back().sign);
    }
    return s;
}

struct SpanningOptions {
    std::uint64_t budget = default_budget;
    std::size_t max_chunk = 16;
    std::uint64_t scan_limit = std::uint64_t{1} << 22;
};

// One B2 obligation: phi(C_cell) must lie in V^{sign}.
struct CellRecord {
    std::size_t component;
    std::size_t cell;
    Sign sign;
    std::vector<VertexId> images;
};

struct SpanningResult {
    EmbeddingMap map;
    std::uint64_t horizon = 0;
    std::size_t components = 0;     // components touched
    std::size_t cells_embedded = 0; // partition cells of infinite components
    std::vector<CellRecord> frontier_cells;
};

namespace detail {

inline FiniteOrientedGraph induced_presented(const PresentedGraph& g, const std::vector<VertexId>& vs)
{
    std::unordered_map<VertexId, VertexId> local;
    for (std::size_t a = 0; a < vs.size(); ++a)
        local[vs[a]] = a;
    std::vector<Edge> e;
    for (std::size_t a = 0; a < vs.size(); ++a)
        for (auto w : g(vs[a]).out)
            if (auto it = local.find(w); it != local.end())
                e.emplace_back(a, it->second);
    return FiniteOrientedGraph(vs.size(), std::move(e));
}

struct Component {
    VertexId root = 0;
    bool finite = false;
    std::vector<VertexId> members; // finite components only
    bool started = false;
    bool finished = false;
    std::unique_ptr<PMPartitionBuilder> cells;
    std::size_t frontier = 0;
};

class SpanningEngine {
public:
    SpanningEngine(const PresentedGraph& g, const TournamentOracle& K, const InfinitenessOracle& oracle,
                   SpanningOptions opt)
        : g_(g), K_(K), oracle_(oracle), opt_(opt)
    {
    }

    SpanningResult run(std::uint64_t horizon)
    {
        res_.horizon = horizon;
        for (VertexId u = 0; u < horizon; ++u) {
            if (res_.map.covers(u))
                continue;
            auto& c = next_component();
            if (!c.started)
                start(c, u);
            else
                step(c, u);
        }
        res_.components = comps_.size();
        return std::move(res_);
    }

private:
    // Round robin 1; 1,2; 1,2,3; ... skipping finished components.
    Component& next_component()
    {
        for (std::size_t guard = 0;; ++guard) {
            std::size_t p = pos_;
            if (++pos_ > round_) {
                pos_ = 0;
                ++round_;
            }
            if (p >= comps_.size() && !discover()) {
                if (std::all_of(comps_.begin(), comps_.end(), [](const auto& c) { return c->finished; }))
                    throw Error(ErrorCode::invalid_argument,
                                "graph " + g_.name + " is exhausted; a finite graph cannot span an infinite tournament");
                continue;
            }
            if (p < comps_.size() && !comps_[p]->finished)
                return *comps_[p];
            if (guard > 64 * (comps_.size() + 2) * (comps_.size() + 2))
                throw Error(ErrorCode::internal_consistency, "component schedule stalled");
        }
    }

    bool discover()
    {
        if (!g_.component_root) {
            if (!comps_.empty())
                return false;
            add_component(0);
            return true;
        }
        // a new root must turn up within `budget` further vertices
        for (VertexId stop = scan_ + opt_.budget; g_.contains(scan_) && scan_ < stop; ++scan_)
            if (g_.component_root(scan_) == scan_) {
                add_component(scan_++);
                return true;
            }
        return false;
    }

    void add_component(VertexId root)
    {
        auto c = std::make_unique<Component>();
        c->root = root;
        // weak exploration; if it closes within budget the component is finite
        std::unordered_set<VertexId> seen{root};
        std::vector<VertexId> queue{root};
        bool closed = true;
        for (std::size_t k = 0; k < queue.size(); ++k) {
            if (k == opt_.budget) {
                closed = false;
                break;
            }
            auto a = g_(queue[k]);
            for (auto* side : {&a.in, &a.out})
                for (auto w : *side)
                    if (seen.insert(w).second)
                        queue.push_back(w);
        }
        if (closed) {
            c->finite = true;
            std::sort(queue.begin(), queue.end());
            c->members = std::move(queue);
        }
        comps_.push_back(std::move(c));
    }

    std::size_t index_of(const Component& c) const
    {
        for (std::size_t k = 0; k < comps_.size(); ++k)
            if (comps_[k].get() == &c)
                return k;
        return comps_.size();
    }

    void record_cell(Component& c, std::size_t i)
    {
        CellRecord r{index_of(c), i, cell_type(c.cells->flavor(), i), {}};
        for (auto v : c.cells->cell(i))
            r.images.push_back(res_.map.at(v));
        res_.frontier_cells.push_back(std::move(r));
    }

    std::unordered_set<VertexId> used(VertexId u) const
    {
        std::unordered_set<VertexId> s{u};
        for (const auto& [g, k] : res_.map.forward_map())
            s.insert(k);
        return s;
    }

    void embed_chunk(const std::vector<VertexId>& chunk, VertexId pin, VertexId u,
                     const std::vector<Constraint>& constraints, std::optional<Sign> cls)
    {
        const std::size_t m = chunk.size() - 1;
        if (m == 0) {
            res_.map.assign(pin, u);
            return;
        }
        if (m > opt_.max_chunk)
            throw Error(ErrorCode::pool_too_small, "chunk of " + std::to_string(m)
                                                       + " vertices exceeds the cap of " + std::to_string(opt_.max_chunk));
        auto pool = oracle_.enumerate(K_, constraints, used(u), std::size_t{1} << (m - 1), cls, opt_.scan_limit);
        auto sub = induced_presented(g_, chunk);
        auto local_pin = static_cast<VertexId>(std::lower_bound(chunk.begin(), chunk.end(), pin) - chunk.begin());
        auto phi = embed_finite_acyclic(sub, K_, pool, {{local_pin, u}});
        for (const auto& [a, k] : phi.pairs())
            res_.map.assign(chunk[a], k);
    }

    // Vertex with only s-neighbours: in-degree 0 for +, out-degree 0 for -.
    bool only(VertexId v, Sign s) const { return g_.neighbors(v, opposite(s)).empty(); }

    void start(Component& c, VertexId u)
    {
        const Sign star = oracle_.star_sign(u);
        c.started = true;
        if (c.finite) {
            auto it = std::find_if(c.members.begin(), c.members.end(), [&](VertexId v) { return only(v, star); });
            if (it == c.members.end())
                throw Error(ErrorCode::cyclic_input, "component of " + std::to_string(c.root + 1) + " has no "
                                                         + (star == Sign::plus ? "source" : "sink"));
            if (!oracle_.decide({{u, star}}))
                throw Error(ErrorCode::oracle_failure, "N^" + std::string(1, to_char(star)) + "("
                                                           + std::to_string(u + 1) + ") declared finite");
            embed_chunk(c.members, *it, u, {{u, star}}, std::nullopt);
            c.finished = true;
            return;
        }
        // walk against the edges until an extremal vertex appears
        VertexId v = c.root;
        for (std::uint64_t k = 0; !only(v, star); ++k) {
            if (k == opt_.budget)
                throw Error(ErrorCode::budget_exhausted, "no extremal vertex found from " + std::to_string(c.root + 1));
            auto back = g_.neighbors(v, opposite(star));
            v = *std::min_element(back.begin(), back.end());
        }
        c.cells = std::make_unique<PMPartitionBuilder>(
            g_, v, star == Sign::plus ? Flavor::plus_minus : Flavor::minus_plus, opt_.budget);
        res_.map.assign(v, u);
        c.frontier = 1;
        res_.cells_embedded += 1;
        record_cell(c, 1);
    }

    void step(Component& c, VertexId u)
    {
        const Sign star = oracle_.star_sign(u);
        const std::size_t i = c.frontier;
        const Flavor fl = c.cells->flavor();
        const Sign dia = cell_type(fl, i);

        std::vector<Constraint> constraints{{u, star}};
        for (auto v : c.cells->cell(i))
            constraints.push_back({res_.map.at(v), dia});
        Sign cls;
        if (oracle_.decide_in_class(constraints, Sign::plus))
            cls = Sign::plus;
        else if (oracle_.decide_in_class(constraints, Sign::minus))
            cls = Sign::minus;
        else
            throw Error(ErrorCode::oracle_failure, "U_{j-1} is finite in both classes at u_" + std::to_string(u + 1));

        std::size_t next = i + 5;
        while (cell_type(fl, next) != cls)
            ++next;
        const std::size_t pin_cell = star == dia ? i + 2 : i + 3;

        std::vector<VertexId> chunk;
        for (std::size_t k = i + 1; k <= next; ++k) {
            const auto& cell = c.cells->cell(k);
            if (cell.empty())
                throw Error(ErrorCode::internal_consistency, "component of " + std::to_string(c.root + 1)
                                                                 + " ended at cell " + std::to_string(k)
                                                                 + " although it was explored as infinite");
            chunk.insert(chunk.end(), cell.begin(), cell.end());
        }
        std::sort(chunk.begin(), chunk.end());
        const auto& pc = c.cells->cell(pin_cell);
        auto it = std::find_if(pc.begin(), pc.end(), [&](VertexId v) { return only(v, star); });
        if (it == pc.end())
            throw Error(ErrorCode::internal_consistency,
                        "cell " + std::to_string(pin_cell) + " has no vertex with only " + to_char(star)
                            + "-neighbours (A4 violated)");
        embed_chunk(chunk, *it, u, constraints, cls);
        res_.cells_embedded += next - i;
        c.frontier = next;
        record_cell(c, next);
    }

    const PresentedGraph& g_;
    const TournamentOracle& K_;
    const InfinitenessOracle& oracle_;
    SpanningOptions opt_;
    SpanningResult res_;
    std::vector<std::unique_ptr<Component>> comps_;
    VertexId scan_ = 0;
    std::size_t round_ = 0, pos_ = 0;
};

} // namespace detail

// Covers u_1..u_horizon following the strongly-unavoidable construction;
// disconnected graphs are handled component by component in round robin.
inline SpanningResult spanning_embed(const PresentedGraph& g, const TournamentOracle& K,
                                     const InfinitenessOracle& oracle, std::uint64_t horizon,
                                     SpanningOptions opt = {})
{
    return detail::SpanningEngine(g, K, oracle, opt).run(horizon);
}

struct SpanningCheck {
    bool b1 = true;
    bool b2 = true;
    bool valid = true;
    std::uint64_t covered = 0;
    std::string detail;

    bool ok() const { return b1 && b2 && valid; }
};

// B2 is checked against signs recomputed from the definition.
inline SpanningCheck check_spanning(const SpanningResult& r, const PresentedGraph& g, const TournamentOracle& K,
                                    const InfinitenessOracle& oracle)
{
    SpanningCheck c;
    for (VertexId u = 0; u < r.horizon; ++u) {
        if (r.map.covers(u))
            ++c.covered;
        else if (c.b1) {
            c.b1 = false;
            c.detail += "B1: u_" + std::to_string(u + 1) + " uncovered; ";
        }
    }
    VertexId top = 0;
    for (const auto& rec : r.frontier_cells)
        for (auto k : rec.images)
            top = std::max(top, k + 1);
    auto signs = classify_vertices(K, oracle, top, 0);
    for (const auto& rec : r.frontier_cells)
        for (auto k : rec.images)
            if (signs.signs[k] != rec.sign && c.b2) {
                c.b2 = false;
                c.detail += "B2: cell " + std::to_string(rec.cell) + " image " + std::to_string(k + 1)
                            + " outside V^" + to_char(rec.sign) + "; ";
            }
    auto v = check_embedding(r.map, g, K);
    if (!v.valid) {
        c.valid = false;
        c.detail += "edge " + std::to_string(v.bad_edge->first + 1) + "->" + std::to_string(v.bad_edge->second + 1)
                    + " not preserved; ";
    }
    return c;
}

// Any finite acyclic G sits inside the first 2^(|G|-1) vertices of K.
inline EmbeddingMap embed_finite_into(const FiniteOrientedGraph& g, const TournamentOracle& K)
{
    if (g.size() > 24)
        throw Error(ErrorCode::pool_too_small, "finite graphs above 24 vertices need a transitive target");
    std::vector<VertexId> pool(g.size() ? std::size_t{1} << (g.size() - 1) : 0);
    std::iota(pool.begin(), pool.end(), VertexId{0});
    return embed_finite_acyclic(g, K, pool);
}

} // namespace tourlab
