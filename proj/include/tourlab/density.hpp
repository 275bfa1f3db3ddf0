#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "core.hpp"

namespace tourlab {

// Counts stay below C(2^32, 2) here, so 64-bit numerators with 128-bit cross
// products are exact.
struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    Rational reduced() const
    {
        auto g = std::gcd(num, den);
        return g ? Rational{num / g, den / g} : *this;
    }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const
    {
        auto r = reduced();
        return std::to_string(r.num) + "/" + std::to_string(r.den);
    }

    friend bool operator==(const Rational& a, const Rational& b)
    {
        return static_cast<unsigned __int128>(a.num) * b.den == static_cast<unsigned __int128>(b.num) * a.den;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        auto l = static_cast<unsigned __int128>(a.num) * b.den;
        auto r = static_cast<unsigned __int128>(b.num) * a.den;
        return l < r ? std::strong_ordering::less : l > r ? std::strong_ordering::greater : std::strong_ordering::equal;
    }
};

inline std::uint64_t pairs(std::uint64_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

class FenwickTree {
public:
    explicit FenwickTree(std::size_t n) : t_(n + 1, 0) {}
    void add(std::size_t i, std::uint64_t d = 1)
    {
        for (++i; i < t_.size(); i += i & (~i + 1))
            t_[i] += d;
    }
    // sum over [0, i)
    std::uint64_t prefix(std::size_t i) const
    {
        std::uint64_t s = 0;
        for (; i > 0; i -= i & (~i + 1))
            s += t_[i];
        return s;
    }

private:
    std::vector<std::uint64_t> t_;
};

// I[m] for m = 0..n where `ranks` is a permutation-like rank sequence < bound.
inline std::vector<std::uint64_t> cumulative_inversions(const std::vector<std::uint64_t>& ranks, std::size_t bound)
{
    FenwickTree fw(bound);
    std::vector<std::uint64_t> I(ranks.size() + 1, 0);
    for (std::size_t m = 0; m < ranks.size(); ++m) {
        I[m + 1] = I[m] + (m - fw.prefix(ranks[m] + 1));
        fw.add(ranks[m]);
    }
    return I;
}

// Coordinate compression of f on [n]; equal values are a malformed injection.
inline std::vector<std::uint64_t> injection_ranks(const InjectionSpec& f, std::uint64_t n)
{
    std::vector<OrdinalValue> vals(n);
    for (VertexId i = 0; i < n; ++i)
        vals[i] = f(i);
    std::vector<std::uint64_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return vals[a] < vals[b]; });
    std::vector<std::uint64_t> rank(n);
    for (std::uint64_t k = 0; k < n; ++k) {
        if (k && vals[idx[k]] == vals[idx[k - 1]])
            throw Error(ErrorCode::malformed_injection,
                        "f(" + std::to_string(std::min(idx[k], idx[k - 1]) + 1) + ") = f("
                            + std::to_string(std::max(idx[k], idx[k - 1]) + 1) + ") = " + to_string(vals[idx[k]]));
        rank[idx[k]] = k;
    }
    return rank;
}

inline std::uint64_t inversion_count(const InjectionSpec& f, std::uint64_t n)
{
    return cumulative_inversions(injection_ranks(f, n), n).back();
}

enum class CountingPath { Auto, Direct };

namespace detail {

inline std::uint64_t ceil_log2(std::uint64_t q)
{
    std::uint64_t p = 0;
    while ((std::uint64_t{1} << p) < q)
        ++p;
    return p;
}

inline std::vector<std::uint64_t> direct_counts(const TournamentOracle& K, std::uint64_t n_max)
{
    std::vector<std::uint64_t> F(n_max + 1, 0);
    for (VertexId j = 1; j < n_max; ++j) {
        std::uint64_t add = 0;
        for (VertexId i = 0; i < j; ++i)
            add += K.forward(i, j);
        F[j + 1] = F[j] + add;
    }
    return F;
}

} // namespace detail

// F[n] = number of forward pairs inside [n], for n = 0..n_max.
inline std::vector<std::uint64_t> forward_counts(const TournamentOracle& K, std::uint64_t n_max,
                                                 CountingPath path = CountingPath::Auto)
{
    if (path == CountingPath::Direct)
        return detail::direct_counts(K, n_max);
    const auto& fam = K.family();
    std::vector<std::uint64_t> F(n_max + 1, 0);
    if (std::holds_alternative<family::TransitiveOmega>(fam)) {
        for (std::uint64_t n = 0; n <= n_max; ++n)
            F[n] = pairs(n);
    } else if (std::holds_alternative<family::TransitiveOmegaStar>(fam)) {
    } else if (std::holds_alternative<family::ExponentialThreshold>(fam)) {
        // 1-based q gains the forward pairs p -> q with ceil(log2 q) <= p < q
        for (std::uint64_t q = 2; q <= n_max; ++q) {
            std::uint64_t lo = std::max<std::uint64_t>(1, detail::ceil_log2(q));
            F[q] = F[q - 1] + (q - 1 >= lo ? q - lo : 0);
        }
    } else if (const auto* f = K.injection()) {
        return cumulative_inversions(injection_ranks(*f, n_max), n_max);
    } else {
        return detail::direct_counts(K, n_max);
    }
    return F;
}

inline std::uint64_t forward_pair_count(const TournamentOracle& K, std::uint64_t n, CountingPath path = CountingPath::Auto)
{
    if (n < 2)
        throw Error(ErrorCode::invalid_argument, "forward pair counts need n >= 2");
    return forward_counts(K, n, path)[n];
}

struct DensitySample {
    std::uint64_t n;
    std::uint64_t forward;
    std::uint64_t total;
    Rational density() const { return {forward, total}; }
};

struct DensityProfile {
    std::vector<DensitySample> samples;
};

// Samples at every multiple of `stride` and at n_max, for n >= 2.
inline DensityProfile profile_from_counts(const std::vector<std::uint64_t>& F, std::uint64_t stride)
{
    if (stride == 0)
        throw Error(ErrorCode::invalid_argument, "stride must be positive");
    DensityProfile p;
    const std::uint64_t n_max = F.size() - 1;
    for (std::uint64_t n = 2; n <= n_max; ++n)
        if (n % stride == 0 || n == n_max)
            p.samples.push_back({n, F[n], pairs(n)});
    return p;
}

inline DensityProfile density_profile(const TournamentOracle& K, std::uint64_t n_max, std::uint64_t stride = 1,
                                      CountingPath path = CountingPath::Auto)
{
    if (n_max < 2)
        throw Error(ErrorCode::invalid_argument, "density profiles need n_max >= 2");
    return profile_from_counts(forward_counts(K, n_max, path), stride);
}

inline DensityProfile inversion_density_profile(const InjectionSpec& f, std::uint64_t n_max, std::uint64_t stride = 1)
{
    if (n_max < 2)
        throw Error(ErrorCode::invalid_argument, "density profiles need n_max >= 2");
    return profile_from_counts(cumulative_inversions(injection_ranks(f, n_max), n_max), stride);
}

struct WindowMinimum {
    Rational density;
    std::uint64_t n = 0;
};

// Minimum of F[n]/C(n,2) over lo <= n <= hi; first minimiser wins.
inline WindowMinimum window_minimum(const std::vector<std::uint64_t>& F, std::uint64_t lo, std::uint64_t hi)
{
    lo = std::max<std::uint64_t>(lo, 2);
    if (hi >= F.size() || lo > hi)
        throw Error(ErrorCode::invalid_argument, "window [" + std::to_string(lo) + "," + std::to_string(hi)
                                                     + "] outside the counted prefix");
    WindowMinimum w{{F[lo], pairs(lo)}, lo};
    for (std::uint64_t n = lo + 1; n <= hi; ++n) {
        Rational d{F[n], pairs(n)};
        if (d < w.density)
            w = {d, n};
    }
    w.density = w.density.reduced();
    return w;
}

struct RankDecomposition {
    std::uint64_t n = 0;
    std::vector<std::uint64_t> alpha;
    std::uint64_t lambda = 0;
    InjectionSpec induced_injection;
};

// Levels of the peeling A_0 = {} subset A_1 subset ...: alpha(i) = 0 without forward
// out-neighbours in [n], else 1 + the largest level among them. The induced
// injection compares level first: f(i) = (alpha(i), i), tail (lambda, i).
inline RankDecomposition rank_decompose(const TournamentOracle& K, std::uint64_t n)
{
    if (n < 1)
        throw Error(ErrorCode::invalid_argument, "rank decomposition needs n >= 1");
    RankDecomposition d;
    d.n = n;
    d.alpha.assign(n, 0);
    for (VertexId i = n; i-- > 0;)
        for (VertexId j = i + 1; j < n; ++j)
            if (K.forward(i, j))
                d.alpha[i] = std::max(d.alpha[i], d.alpha[j] + 1);
    d.lambda = *std::max_element(d.alpha.begin(), d.alpha.end()) + 1;
    auto alpha = std::make_shared<const std::vector<std::uint64_t>>(d.alpha);
    auto lambda = d.lambda;
    d.induced_injection = {[alpha, lambda](VertexId i) {
                               return i < alpha->size() ? OrdinalValue{(*alpha)[i], i} : OrdinalValue{lambda, i};
                           },
                           InjectionKind::rank_derived, "rank-derived:" + std::to_string(n), lambda};
    return d;
}

// Empty result means every invariant holds.
inline std::vector<std::string> check_rank_decomposition(const TournamentOracle& K, const RankDecomposition& d)
{
    std::vector<std::string> bad;
    const std::uint64_t n = d.n;
    if (d.alpha.size() != n)
        return {"alpha has " + std::to_string(d.alpha.size()) + " entries for n = " + std::to_string(n)};
    std::uint64_t top = 0;
    for (VertexId i = 0; i < n; ++i) {
        top = std::max(top, d.alpha[i]);
        bool has_forward = false, hits_below = false;
        for (VertexId j = i + 1; j < n; ++j) {
            if (!K.forward(i, j))
                continue;
            has_forward = true;
            if (d.alpha[j] >= d.alpha[i])
                bad.push_back("forward edge " + std::to_string(i + 1) + "->" + std::to_string(j + 1)
                              + " does not descend in level");
            if (d.alpha[j] + 1 == d.alpha[i])
                hits_below = true;
        }
        if (d.alpha[i] == 0 && has_forward)
            bad.push_back("level-0 vertex " + std::to_string(i + 1) + " has a forward out-neighbour");
        if (d.alpha[i] > 0 && !hits_below)
            bad.push_back("vertex " + std::to_string(i + 1) + " has no forward out-neighbour one level down");
        if (d.induced_injection(i) != OrdinalValue{d.alpha[i], i})
            bad.push_back("induced injection disagrees with alpha at " + std::to_string(i + 1));
    }
    if (d.lambda != top + 1)
        bad.push_back("lambda is not the number of levels");
    return bad;
}

// Every forward pair of K inside [n] is forward in K_{f*}, f the induced injection.
inline bool dominance_check(const TournamentOracle& K, const RankDecomposition& d, std::uint64_t n)
{
    if (d.n != n || d.alpha.size() != n)
        throw Error(ErrorCode::invalid_argument, "decomposition was built for n = " + std::to_string(d.n));
    const auto& f = d.induced_injection;
    for (VertexId i = 0; i < n; ++i)
        for (VertexId j = i + 1; j < n; ++j)
            if (K.forward(i, j) && !(f(i) > f(j)))
                return false;
    return true;
}

enum class Pattern { factorial, single_high, paired_high_low, k_phase, identity };

inline std::string to_string(Pattern p)
{
    switch (p) {
    case Pattern::factorial: return "factorial";
    case Pattern::single_high: return "single-high";
    case Pattern::paired_high_low: return "paired-high-low";
    case Pattern::k_phase: return "k-phase";
    case Pattern::identity: return "identity";
    }
    return "?";
}

struct SchemeParams {
    Pattern pattern = Pattern::factorial;
    double r = 2.0;            // block growth ratio
    std::uint64_t base = 1;    // size of the first geometric block
    double beta = 0.5;         // paired-high-low: share of the high part
    std::vector<int> phases{}; // k-phase: per-cell release delay in blocks
};

inline constexpr double min_block_growth = 1.05;

// Consecutive index runs (segments) are assigned to value bands ordered by key;
// a band takes the values just above all bands with smaller keys and fills
// them top-down. Blocks have nondecreasing minimum key, so every band sits
// above finitely many others and the injection is fixed in advance.
class BlockScheme {
public:
    struct Segment {
        std::uint64_t start;
        std::uint64_t len;
        std::uint64_t key;
        std::uint64_t base = 0;
    };

    static constexpr std::uint64_t coverage = std::uint64_t{1} << 40;

    explicit BlockScheme(SchemeParams p) : p_(std::move(p))
    {
        validate();
        build();
    }

    const SchemeParams& params() const { return p_; }

    std::string description() const
    {
        char buf[64];
        std::string s = to_string(p_.pattern);
        switch (p_.pattern) {
        case Pattern::factorial:
        case Pattern::identity: break;
        case Pattern::single_high:
            std::snprintf(buf, sizeof buf, ":r=%.6g,base=%llu", p_.r, static_cast<unsigned long long>(p_.base));
            s += buf;
            break;
        case Pattern::paired_high_low:
            std::snprintf(buf, sizeof buf, ":r=%.6g,beta=%.6g", p_.r, p_.beta);
            s += buf;
            break;
        case Pattern::k_phase:
            std::snprintf(buf, sizeof buf, ":r=%.6g,q=", p_.r);
            s += buf;
            for (std::size_t c = 0; c < p_.phases.size(); ++c)
                s += (c ? "/" : "") + std::to_string(p_.phases[c]);
            break;
        }
        return s;
    }

    const std::vector<Segment>& segments() const { return *segs_; }

    std::uint64_t value(VertexId i) const
    {
        if (i >= coverage)
            throw Error(ErrorCode::invalid_argument, "vertex beyond the precommitted block table");
        if (p_.pattern == Pattern::identity)
            return i;
        const auto& s = *segs_;
        auto it = std::upper_bound(s.begin(), s.end(), i, [](VertexId x, const Segment& g) { return x < g.start; });
        const auto& g = *std::prev(it);
        return g.base + g.len - 1 - (i - g.start);
    }

    InjectionSpec injection() const
    {
        auto self = std::make_shared<const BlockScheme>(*this);
        return {[self](VertexId i) { return OrdinalValue{0, self->value(i)}; }, InjectionKind::block_scheme,
                description(), 0};
    }

    // Ranks of value(0..n-1) among themselves: same order, values in [0, n).
    std::vector<std::uint64_t> prefix_ranks(std::uint64_t n) const
    {
        if (p_.pattern == Pattern::identity) {
            std::vector<std::uint64_t> r(n);
            std::iota(r.begin(), r.end(), std::uint64_t{0});
            return r;
        }
        std::vector<const Segment*> live;
        for (const auto& g : *segs_)
            if (g.start < n)
                live.push_back(&g);
        std::sort(live.begin(), live.end(), [](auto a, auto b) { return a->key < b->key; });
        std::vector<std::uint64_t> r(n);
        std::uint64_t base = 0;
        for (const auto* g : live) {
            std::uint64_t len = std::min(g->start + g->len, n) - g->start;
            for (std::uint64_t k = 0; k < len; ++k)
                r[g->start + k] = base + len - 1 - k;
            base += len;
        }
        return r;
    }

private:
    void validate() const
    {
        bool geometric = p_.pattern != Pattern::factorial && p_.pattern != Pattern::identity;
        if (!geometric)
            return;
        if (!(p_.r > 1.0))
            throw Error(ErrorCode::invalid_argument, "block growth ratio must exceed 1");
        if (p_.r < min_block_growth)
            throw Error(ErrorCode::invalid_argument, "block growth ratio below the minimum of 1.05");
        if (p_.r > 64)
            throw Error(ErrorCode::invalid_argument, "block growth ratio above 64");
        if (p_.base == 0)
            throw Error(ErrorCode::invalid_argument, "first block must be non-empty");
        if (p_.pattern == Pattern::paired_high_low && !(p_.beta > 0 && p_.beta < 1))
            throw Error(ErrorCode::invalid_argument, "beta must lie in (0,1)");
        if (p_.pattern == Pattern::k_phase) {
            if (p_.phases.empty() || p_.phases.size() > 8)
                throw Error(ErrorCode::invalid_argument, "k-phase needs 1 to 8 phases");
            for (int q : p_.phases)
                if (q < -3 || q > 3)
                    throw Error(ErrorCode::invalid_argument, "phase delays must lie in [-3,3]");
        }
    }

    std::uint64_t block_size(std::uint64_t k, double& geo) const
    {
        switch (p_.pattern) {
        case Pattern::identity: return 1;
        case Pattern::factorial:
            // |I_1| = |I_2| = 1, |I_k| = k! - (k-1)!
            return k < 2 ? 1 : detail::factorials.at(k + 1) - detail::factorials.at(k);
        default: {
            double s = geo;
            geo *= p_.r;
            return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(s)));
        }
        }
    }

    // Segments of block k as (length, key) pairs.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> split(std::uint64_t k, std::uint64_t L) const
    {
        switch (p_.pattern) {
        case Pattern::paired_high_low: {
            // U_k high, D_k low: U_{k-1} < D_{k+1} < U_k
            auto u = std::min<std::uint64_t>(L, static_cast<std::uint64_t>(std::ceil(p_.beta * L)));
            return {{u, 2 * k + 4}, {L - u, 2 * k + 1}};
        }
        case Pattern::k_phase: {
            const std::uint64_t P = p_.phases.size();
            const int shift = -*std::min_element(p_.phases.begin(), p_.phases.end());
            std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
            for (std::uint64_t c = 0; c < P; ++c) {
                std::uint64_t len = L / P + (c < L % P);
                out.push_back({len, P * (k + p_.phases[c] + shift) + c});
            }
            return out;
        }
        default: return {{L, k}};
        }
    }

    void build()
    {
        std::vector<Segment> segs;
        if (p_.pattern == Pattern::identity) {
            segs_ = std::make_shared<const std::vector<Segment>>();
            return;
        }
        std::uint64_t start = 0, max_key = 0;
        double geo = static_cast<double>(p_.base);
        bool covered = false;
        for (std::uint64_t k = 0;; ++k) {
            auto L = block_size(k, geo);
            auto parts = split(k, L);
            std::uint64_t block_min = UINT64_MAX;
            for (const auto& [len, key] : parts)
                block_min = std::min(block_min, key);
            if (covered && block_min > max_key)
                break;
            for (const auto& [len, key] : parts) {
                if (len == 0)
                    continue;
                segs.push_back({start, len, key});
                start += len;
                if (!covered)
                    max_key = std::max(max_key, key);
            }
            if (start >= coverage)
                covered = true;
        }
        std::vector<Segment*> by_key;
        for (auto& g : segs)
            by_key.push_back(&g);
        std::sort(by_key.begin(), by_key.end(), [](auto a, auto b) { return a->key < b->key; });
        unsigned __int128 base = 0;
        for (auto* g : by_key) {
            g->base = static_cast<std::uint64_t>(base);
            base += g->len;
        }
        if (base >> 63)
            throw Error(ErrorCode::invalid_argument, "block values overflow; lower the growth ratio");
        segs_ = std::make_shared<const std::vector<Segment>>(std::move(segs));
    }

    SchemeParams p_;
    std::shared_ptr<const std::vector<Segment>> segs_;
};

inline BlockScheme make_block_scheme(SchemeParams p) { return BlockScheme(std::move(p)); }
inline BlockScheme factorial_scheme() { return BlockScheme(SchemeParams{Pattern::factorial}); }

struct DensityBoundsReport {
    std::string identifier;
    Rational min_window_density;
    std::uint64_t argmin = 0;
    std::uint64_t n_lo = 0;
    std::uint64_t n_hi = 0;
    Rational target{3, 4};
};

inline WindowMinimum scheme_window_minimum(const BlockScheme& s, std::uint64_t lo, std::uint64_t hi)
{
    return window_minimum(cumulative_inversions(s.prefix_ranks(hi), hi), lo, hi);
}

using PatternSpace = std::vector<Pattern>;

struct OptimizeResult {
    BlockScheme scheme;
    DensityBoundsReport report;
    std::size_t evaluations = 0;
};

inline const std::vector<double>& ratio_grid()
{
    static const std::vector<double> g{1.5, 2, 3, 4, 6, 8};
    return g;
}

inline const std::vector<std::vector<int>>& phase_grid()
{
    static const std::vector<std::vector<int>> g{{1, 0, -1}, {0, 1, -1}, {1, -1, 0}, {2, 1, 0},
                                                 {0, -1, -2}, {1, 0, -2}, {2, -1, 0}, {1, -1}};
    return g;
}

inline std::vector<SchemeParams> grid_candidates(const PatternSpace& space)
{
    std::vector<SchemeParams> c;
    for (auto p : space) {
        switch (p) {
        case Pattern::factorial:
        case Pattern::identity: c.push_back({p}); break;
        case Pattern::single_high:
            for (double r : ratio_grid())
                for (std::uint64_t b : {1, 4})
                    c.push_back({p, r, b});
            break;
        case Pattern::paired_high_low:
            for (double r : ratio_grid())
                for (double beta : {0.25, 0.5, 0.75})
                    c.push_back({p, r, 1, beta});
            break;
        case Pattern::k_phase:
            for (double r : ratio_grid())
                for (const auto& q : phase_grid())
                    c.push_back({p, r, 1, 0.5, q});
            break;
        }
    }
    return c;
}

// Grid search, then coordinate refinement of r (and beta); only strict
// improvements are accepted, so the first optimum in grid order is kept.
inline OptimizeResult optimize_scheme(const PatternSpace& space, std::uint64_t horizon, std::uint64_t lo,
                                      std::uint64_t hi)
{
    if (space.empty())
        throw Error(ErrorCode::invalid_argument, "empty pattern space");
    if (lo < 2 || lo > hi || hi > horizon)
        throw Error(ErrorCode::invalid_argument, "window must satisfy 2 <= lo <= hi <= horizon");
    std::size_t evals = 0;
    auto eval = [&](const SchemeParams& p) {
        ++evals;
        return scheme_window_minimum(BlockScheme(p), lo, hi);
    };
    auto cands = grid_candidates(space);
    SchemeParams best = cands.front();
    WindowMinimum best_w = eval(best);
    for (std::size_t k = 1; k < cands.size(); ++k) {
        auto w = eval(cands[k]);
        if (w.density > best_w.density) {
            best = cands[k];
            best_w = w;
        }
    }
    const bool geometric = best.pattern != Pattern::factorial && best.pattern != Pattern::identity;
    if (geometric) {
        double dr = best.r * 0.25, db = 0.1;
        for (int round = 0; round < 6; ++round) {
            bool improved = false;
            std::vector<SchemeParams> moves;
            for (double s : {-1.0, 1.0}) {
                SchemeParams m = best;
                m.r = std::clamp(best.r + s * dr, min_block_growth, 64.0);
                moves.push_back(m);
                if (best.pattern == Pattern::paired_high_low) {
                    m = best;
                    m.beta = std::clamp(best.beta + s * db, 0.05, 0.95);
                    moves.push_back(m);
                }
            }
            for (const auto& m : moves) {
                if (m.r == best.r && m.beta == best.beta)
                    continue;
                auto w = eval(m);
                if (w.density > best_w.density) {
                    best = m;
                    best_w = w;
                    improved = true;
                }
            }
            if (!improved) {
                dr /= 2;
                db /= 2;
            }
        }
    }
    BlockScheme scheme(best);
    DensityBoundsReport rep{scheme.description(), best_w.density, best_w.n, lo, hi};
    return {std::move(scheme), rep, evals};
}

} // namespace tourlab
