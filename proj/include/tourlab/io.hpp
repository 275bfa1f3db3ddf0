#pragma once

#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "density.hpp"
#include "graph.hpp"
#include "presented.hpp"

// Text formats and CLI names. Everything at this boundary is 1-based.
namespace tourlab::io {

namespace detail {

// Next non-empty line with '#' comments stripped; false at end of input.
inline bool next_line(std::istream& in, std::string& line, std::size_t& lineno)
{
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos)
            line.erase(h);
        if (line.find_first_not_of(" \t\r") != std::string::npos)
            return true;
    }
    return false;
}

[[noreturn]] inline void fail(const std::string& src, std::size_t lineno, const std::string& what)
{
    throw Error(ErrorCode::parse_error, src + ":" + std::to_string(lineno) + ": " + what);
}

inline std::ifstream open(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw Error(ErrorCode::parse_error, "cannot open " + path);
    return f;
}

inline std::uint64_t to_u64(const std::string& s, const std::string& what)
{
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty() || s[0] == '-')
        throw Error(ErrorCode::parse_error, what + ": expected a natural number, got '" + s + "'");
    return v;
}

inline double to_double(const std::string& s, const std::string& what)
{
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty())
        throw Error(ErrorCode::parse_error, what + ": expected a number, got '" + s + "'");
    return v;
}

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        out.push_back(cur);
    if (!s.empty() && s.back() == sep)
        out.emplace_back();
    return out;
}

} // namespace detail

// "n m" then m lines "u v" for the edge u -> v.
inline FiniteOrientedGraph read_graph(std::istream& in, const std::string& src = "<graph>")
{
    std::string line;
    std::size_t lineno = 0;
    if (!detail::next_line(in, line, lineno))
        detail::fail(src, lineno, "missing header 'n m'");
    std::istringstream hs(line);
    long long n = -1, m = -1;
    std::string extra;
    if (!(hs >> n >> m) || (hs >> extra) || n < 0 || m < 0)
        detail::fail(src, lineno, "header must be 'n m'");
    std::vector<Edge> edges;
    for (long long k = 0; k < m; ++k) {
        if (!detail::next_line(in, line, lineno))
            detail::fail(src, lineno, "expected " + std::to_string(m) + " edges, found " + std::to_string(k));
        std::istringstream es(line);
        long long u = 0, v = 0;
        if (!(es >> u >> v) || (es >> extra))
            detail::fail(src, lineno, "edge line must be 'u v'");
        if (u < 1 || v < 1 || u > n || v > n)
            detail::fail(src, lineno, "vertex outside [1," + std::to_string(n) + "]");
        edges.emplace_back(u - 1, v - 1);
    }
    if (detail::next_line(in, line, lineno))
        detail::fail(src, lineno, "trailing content after the edge list");
    try {
        return FiniteOrientedGraph(static_cast<std::size_t>(n), std::move(edges));
    } catch (const Error& e) {
        throw Error(e.code(), src + ": " + e.what());
    }
}

inline FiniteOrientedGraph load_graph(const std::string& path)
{
    auto f = detail::open(path);
    return read_graph(f, path);
}

inline void write_graph(std::ostream& out, const FiniteOrientedGraph& g)
{
    out << g.size() << ' ' << g.edges().size() << '\n';
    for (const auto& [u, v] : g.edges())
        out << u + 1 << ' ' << v + 1 << '\n';
}

// Lines "i major minor" for i = 1..m, then "tail identity [major]" or
// "tail factorial [major]" for the values from m+1 on.
inline InjectionSpec read_injection(std::istream& in, const std::string& src = "<injection>")
{
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::optional<OrdinalValue>> head;
    std::optional<TailScheme> tail;
    std::optional<std::uint64_t> tail_major;
    while (detail::next_line(in, line, lineno)) {
        std::istringstream ls(line);
        std::string first;
        ls >> first;
        if (first == "tail") {
            std::string kind, extra;
            ls >> kind;
            if (kind == "identity")
                tail = TailScheme::identity;
            else if (kind == "factorial")
                tail = TailScheme::factorial;
            else
                detail::fail(src, lineno, "unknown tail scheme '" + kind + "'");
            std::string major;
            if (ls >> major)
                tail_major = detail::to_u64(major, src + ":" + std::to_string(lineno));
            if (ls >> extra)
                detail::fail(src, lineno, "trailing tokens after tail");
            continue;
        }
        if (tail)
            detail::fail(src, lineno, "values after the tail line");
        std::string a, b, extra;
        if (!(ls >> a >> b) || (ls >> extra))
            detail::fail(src, lineno, "value line must be 'i major minor'");
        auto where = src + ":" + std::to_string(lineno);
        auto i = detail::to_u64(first, where);
        if (i == 0)
            detail::fail(src, lineno, "indices are 1-based");
        if (i > 10000000)
            detail::fail(src, lineno, "index too large for an explicit table");
        if (head.size() < i)
            head.resize(i);
        if (head[i - 1])
            detail::fail(src, lineno, "index " + first + " listed twice");
        head[i - 1] = OrdinalValue{detail::to_u64(a, where), detail::to_u64(b, where)};
    }
    if (!tail)
        detail::fail(src, lineno, "missing 'tail identity|factorial' line");
    std::vector<OrdinalValue> values;
    for (std::size_t k = 0; k < head.size(); ++k) {
        if (!head[k])
            throw Error(ErrorCode::parse_error, src + ": no value for index " + std::to_string(k + 1));
        values.push_back(*head[k]);
    }
    auto f = table_injection(std::move(values), *tail, tail_major);
    f.description = src;
    return f;
}

inline InjectionSpec load_injection(const std::string& path)
{
    auto f = detail::open(path);
    return read_injection(f, path);
}

inline std::optional<std::string> strip_prefix(const std::string& s, const std::string& prefix)
{
    if (s.rfind(prefix, 0) == 0)
        return s.substr(prefix.size());
    return std::nullopt;
}

// transitive-omega | transitive-omega-star | factorial-block | exp-threshold |
// random:<seed> | injection:<file or scheme>
inline InjectionSpec parse_injection(const std::string& spec);

inline TournamentOracle parse_tournament(const std::string& spec)
{
    if (spec == "transitive-omega")
        return transitive_omega();
    if (spec == "transitive-omega-star")
        return transitive_omega_star();
    if (spec == "factorial-block")
        return factorial_block_tournament();
    if (spec == "exp-threshold")
        return exponential_threshold();
    if (auto s = strip_prefix(spec, "random:"))
        return seeded_random(detail::to_u64(*s, "random seed"));
    if (auto s = strip_prefix(spec, "injection:"))
        return make_ordinal_injection_tournament(parse_injection(*s));
    throw Error(ErrorCode::unknown_family, "unknown tournament family '" + spec + "'");
}

inline SchemeParams parse_scheme_params(const std::string& spec)
{
    auto parts = detail::split(spec, ':');
    const std::string& head = parts[0];
    auto need = [&](std::size_t lo, std::size_t hi) {
        if (parts.size() < lo || parts.size() > hi)
            throw Error(ErrorCode::parse_error, "scheme '" + spec + "' has the wrong number of fields");
    };
    SchemeParams p;
    if (head == "factorial") {
        need(1, 1);
        p.pattern = Pattern::factorial;
    } else if (head == "single-high") {
        need(2, 3);
        p.pattern = Pattern::single_high;
        p.r = detail::to_double(parts[1], "ratio");
        if (parts.size() == 3)
            p.base = detail::to_u64(parts[2], "base");
    } else if (head == "paired-high-low") {
        need(3, 3);
        p.pattern = Pattern::paired_high_low;
        p.r = detail::to_double(parts[1], "ratio");
        p.beta = detail::to_double(parts[2], "beta");
    } else if (head == "k-phase") {
        need(3, 3);
        p.pattern = Pattern::k_phase;
        p.r = detail::to_double(parts[1], "ratio");
        for (const auto& q : detail::split(parts[2], ',')) {
            bool neg = !q.empty() && q[0] == '-';
            auto v = detail::to_u64(neg ? q.substr(1) : q, "phase");
            p.phases.push_back(neg ? -static_cast<int>(v) : static_cast<int>(v));
        }
    } else {
        throw Error(ErrorCode::unknown_family, "unknown block scheme '" + spec + "'");
    }
    return p;
}

inline bool is_scheme_name(const std::string& spec)
{
    auto head = detail::split(spec, ':')[0];
    return head == "factorial" || head == "single-high" || head == "paired-high-low" || head == "k-phase";
}

// identity | reversed:<n> | a block scheme | a path to an injection file
inline InjectionSpec parse_injection(const std::string& spec)
{
    if (spec == "identity")
        return identity_injection();
    if (auto s = strip_prefix(spec, "reversed:"))
        return reversed_prefix_injection(detail::to_u64(*s, "reversed prefix length"));
    if (is_scheme_name(spec))
        return make_block_scheme(parse_scheme_params(spec)).injection();
    std::ifstream probe(spec);
    if (!probe)
        throw Error(ErrorCode::unknown_family, "'" + spec + "' is neither a known injection scheme nor a readable file");
    return read_injection(probe, spec);
}

// forward-path | forward-path-uncertified | anti-path | out-stars | forest |
// random-dag:<seed>; anything else is read as a graph file.
inline std::optional<PresentedGraph> parse_presented_family(const std::string& spec)
{
    if (spec == "forward-path")
        return families::forward_path(true);
    if (spec == "forward-path-uncertified")
        return families::forward_path(false);
    if (spec == "anti-path")
        return families::anti_path();
    if (spec == "out-stars")
        return families::out_stars();
    if (spec == "forest")
        return families::forest();
    if (auto s = strip_prefix(spec, "random-dag:"))
        return families::random_dag(detail::to_u64(*s, "random-dag seed"));
    return std::nullopt;
}

inline Pattern parse_pattern(const std::string& s)
{
    for (auto p : {Pattern::factorial, Pattern::single_high, Pattern::paired_high_low, Pattern::k_phase,
                   Pattern::identity})
        if (to_string(p) == s)
            return p;
    throw Error(ErrorCode::unknown_family, "unknown pattern '" + s + "'");
}

} // namespace tourlab::io
