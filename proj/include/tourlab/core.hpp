#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "error.hpp"

namespace tourlab {

// 0-based everywhere inside the library; the 1-based name u_i is vertex i-1.
using VertexId = std::uint64_t;

enum class Direction { Forward, Backward };

inline Direction inverse(Direction d)
{
    return d == Direction::Forward ? Direction::Backward : Direction::Forward;
}

enum class Sign { plus, minus };

inline Sign opposite(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }
inline char to_char(Sign s) { return s == Sign::plus ? '+' : '-'; }

struct OrdinalValue {
    std::uint64_t major = 0;
    std::uint64_t minor = 0;

    friend auto operator<=>(const OrdinalValue&, const OrdinalValue&) = default;
};

inline std::strong_ordering ordinal_compare(const OrdinalValue& a, const OrdinalValue& b)
{
    return a <=> b;
}

inline std::string to_string(const OrdinalValue& v)
{
    return "(" + std::to_string(v.major) + "," + std::to_string(v.minor) + ")";
}

enum class InjectionKind { identity, block_scheme, rank_derived, explicit_table, custom };

// f : N -> omega*lambda. `cofinal_major` is the major component taken by all
// but finitely many values (when known); the sign oracles rely on it.
struct InjectionSpec {
    std::function<OrdinalValue(VertexId)> eval;
    InjectionKind kind = InjectionKind::custom;
    std::string description;
    std::optional<std::uint64_t> cofinal_major;

    OrdinalValue operator()(VertexId i) const { return eval(i); }
};

namespace detail {

inline constexpr std::array<std::uint64_t, 21> factorials = [] {
    std::array<std::uint64_t, 21> f{};
    f[0] = 1;
    for (std::size_t k = 1; k < f.size(); ++k)
        f[k] = f[k - 1] * k;
    return f;
}();

struct FactorialBlock {
    unsigned k;
    std::uint64_t lo; // 1-based, inclusive
    std::uint64_t hi;
};

// Block I_k = [k!] \ [(k-1)!] holding the 1-based vertex p; vertex 1 sits alone.
inline FactorialBlock factorial_block(std::uint64_t p)
{
    if (p == 0)
        throw Error(ErrorCode::invalid_argument, "factorial blocks are 1-based");
    if (p == 1)
        return {1, 1, 1};
    for (unsigned k = 2; k < factorials.size(); ++k)
        if (p <= factorials[k])
            return {k, factorials[k - 1] + 1, factorials[k]};
    throw Error(ErrorCode::invalid_argument, "vertex beyond 20! in factorial family");
}

inline std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

inline InjectionSpec identity_injection()
{
    return {[](VertexId i) { return OrdinalValue{0, i}; }, InjectionKind::identity, "identity", 0};
}

// Within-block descending, blocks increasing: K_{f*} is the factorial-block family.
inline InjectionSpec factorial_injection()
{
    return {[](VertexId i) {
                auto b = detail::factorial_block(i + 1);
                return OrdinalValue{0, b.lo + b.hi - (i + 1)};
            },
            InjectionKind::block_scheme, "factorial", 0};
}

// f(i) = (0, n-1-i) on [n], then (1, i): every pair inside the prefix is an inversion.
inline InjectionSpec reversed_prefix_injection(std::uint64_t n)
{
    return {[n](VertexId i) {
                return i < n ? OrdinalValue{0, n - 1 - i} : OrdinalValue{1, i};
            },
            InjectionKind::explicit_table, "reversed-prefix:" + std::to_string(n), 1};
}

enum class TailScheme { identity, factorial };

// Explicit values for vertices 0..m-1 followed by a tail living in major `tail_major`.
inline InjectionSpec table_injection(std::vector<OrdinalValue> head, TailScheme tail,
                                     std::optional<std::uint64_t> tail_major = std::nullopt)
{
    std::uint64_t major = 0;
    if (tail_major) {
        major = *tail_major;
    } else {
        for (const auto& v : head)
            major = std::max(major, v.major + 1);
    }
    auto values = std::make_shared<const std::vector<OrdinalValue>>(std::move(head));
    std::string desc = "table:" + std::to_string(values->size()) + ",tail="
                       + (tail == TailScheme::identity ? "identity" : "factorial") + "@"
                       + std::to_string(major);
    return {[values, tail, major](VertexId i) {
                if (i < values->size())
                    return (*values)[i];
                if (tail == TailScheme::identity)
                    return OrdinalValue{major, i};
                auto b = detail::factorial_block(i + 1);
                return OrdinalValue{major, b.lo + b.hi - (i + 1)};
            },
            InjectionKind::explicit_table, desc, major};
}

// Throws malformed-injection naming the first colliding pair in [n].
inline void check_injective_prefix(const InjectionSpec& f, std::uint64_t n)
{
    std::vector<std::pair<OrdinalValue, VertexId>> v;
    v.reserve(n);
    for (VertexId i = 0; i < n; ++i)
        v.emplace_back(f(i), i);
    std::sort(v.begin(), v.end());
    for (std::size_t k = 1; k < v.size(); ++k)
        if (v[k].first == v[k - 1].first)
            throw Error(ErrorCode::malformed_injection,
                        "f(" + std::to_string(v[k - 1].second + 1) + ") = f("
                            + std::to_string(v[k].second + 1) + ") = " + to_string(v[k].first));
}

namespace family {
struct TransitiveOmega {};
struct TransitiveOmegaStar {};
struct FactorialBlock {};
struct ExponentialThreshold {};
struct SeededRandom {
    std::uint64_t seed;
};
struct OrdinalInjection {
    InjectionSpec f;
};
// Explicit orientations on [n]; every pair leaving [n] is forward.
struct Tabulated {
    std::uint64_t n;
    std::shared_ptr<const std::vector<bool>> fwd; // upper triangle, row-major
};
} // namespace family

class TournamentOracle {
public:
    using Family = std::variant<family::TransitiveOmega, family::TransitiveOmegaStar,
                                family::FactorialBlock, family::ExponentialThreshold,
                                family::SeededRandom, family::OrdinalInjection, family::Tabulated>;

    explicit TournamentOracle(Family f) : family_(std::move(f))
    {
        if (std::holds_alternative<family::TransitiveOmegaStar>(family_))
            view_ = std::make_shared<const InjectionSpec>(identity_injection());
        else if (std::holds_alternative<family::FactorialBlock>(family_))
            view_ = std::make_shared<const InjectionSpec>(factorial_injection());
        else if (auto* inj = std::get_if<family::OrdinalInjection>(&family_))
            view_ = std::make_shared<const InjectionSpec>(inj->f);
    }

    const Family& family() const { return family_; }

    // Forward on i < j, i.e. the edge i -> j.
    bool forward(VertexId i, VertexId j) const
    {
        return std::visit([&](const auto& fam) { return forward_impl(fam, i, j); }, family_);
    }

    // When K = K_{f*} for a known injection f, the counting fast paths use f.
    const InjectionSpec* injection() const { return view_.get(); }

    std::string name() const
    {
        struct V {
            std::string operator()(const family::TransitiveOmega&) const { return "transitive-omega"; }
            std::string operator()(const family::TransitiveOmegaStar&) const { return "transitive-omega-star"; }
            std::string operator()(const family::FactorialBlock&) const { return "factorial-block"; }
            std::string operator()(const family::ExponentialThreshold&) const { return "exp-threshold"; }
            std::string operator()(const family::SeededRandom& r) const { return "random:" + std::to_string(r.seed); }
            std::string operator()(const family::OrdinalInjection& o) const { return "injection:" + o.f.description; }
            std::string operator()(const family::Tabulated& t) const { return "table:" + std::to_string(t.n); }
        };
        return std::visit(V{}, family_);
    }

private:
    static bool forward_impl(const family::TransitiveOmega&, VertexId, VertexId) { return true; }
    static bool forward_impl(const family::TransitiveOmegaStar&, VertexId, VertexId) { return false; }

    static bool forward_impl(const family::FactorialBlock&, VertexId i, VertexId j)
    {
        return detail::factorial_block(i + 1).k == detail::factorial_block(j + 1).k;
    }

    // 1-based: p -> q forward iff q <= 2^p.
    static bool forward_impl(const family::ExponentialThreshold&, VertexId i, VertexId j)
    {
        std::uint64_t p = i + 1, q = j + 1;
        if (p >= 63)
            return true;
        return q <= (std::uint64_t{1} << p);
    }

    static bool forward_impl(const family::SeededRandom& r, VertexId i, VertexId j)
    {
        using detail::mix64;
        return (mix64(mix64(mix64(r.seed) ^ i) + j) >> 63) != 0;
    }

    static bool forward_impl(const family::OrdinalInjection& o, VertexId i, VertexId j)
    {
        auto a = o.f(i), b = o.f(j);
        if (a == b)
            throw Error(ErrorCode::malformed_injection,
                        "f(" + std::to_string(i + 1) + ") = f(" + std::to_string(j + 1)
                            + ") = " + to_string(a));
        return a > b;
    }

    static bool forward_impl(const family::Tabulated& t, VertexId i, VertexId j)
    {
        if (j >= t.n)
            return true;
        return (*t.fwd)[i * t.n - i * (i + 1) / 2 + (j - i - 1)];
    }

    Family family_;
    std::shared_ptr<const InjectionSpec> view_;
};

inline Direction orient(const TournamentOracle& K, VertexId i, VertexId j)
{
    if (i == j)
        throw Error(ErrorCode::loop_query, "orientation queried on the loop (" + std::to_string(i + 1)
                                               + "," + std::to_string(i + 1) + ")");
    if (i < j)
        return K.forward(i, j) ? Direction::Forward : Direction::Backward;
    return inverse(orient(K, j, i));
}

// The edge u -> v is present.
inline bool has_edge(const TournamentOracle& K, VertexId u, VertexId v)
{
    return orient(K, u, v) == Direction::Forward;
}

// w lies in N^s(v): an out-neighbour for +, an in-neighbour for -.
inline bool in_neighborhood(const TournamentOracle& K, VertexId v, Sign s, VertexId w)
{
    return s == Sign::plus ? has_edge(K, v, w) : has_edge(K, w, v);
}

inline TournamentOracle make_ordinal_injection_tournament(InjectionSpec f)
{
    return TournamentOracle(family::OrdinalInjection{std::move(f)});
}

inline TournamentOracle transitive_omega() { return TournamentOracle(family::TransitiveOmega{}); }
inline TournamentOracle transitive_omega_star() { return TournamentOracle(family::TransitiveOmegaStar{}); }
inline TournamentOracle factorial_block_tournament() { return TournamentOracle(family::FactorialBlock{}); }
inline TournamentOracle exponential_threshold() { return TournamentOracle(family::ExponentialThreshold{}); }
inline TournamentOracle seeded_random(std::uint64_t seed) { return TournamentOracle(family::SeededRandom{seed}); }

// fwd(i, j) for i < j < n.
inline TournamentOracle tabulated_tournament(std::uint64_t n, const std::function<bool(VertexId, VertexId)>& fwd)
{
    auto bits = std::make_shared<std::vector<bool>>();
    bits->reserve(n * (n - (n > 0)) / 2);
    for (VertexId i = 0; i < n; ++i)
        for (VertexId j = i + 1; j < n; ++j)
            bits->push_back(fwd(i, j));
    return TournamentOracle(family::Tabulated{n, std::move(bits)});
}

} // namespace tourlab
