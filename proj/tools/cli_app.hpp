#pragma once

#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tourlab/tourlab.hpp"

namespace tourlab::cli {

inline std::string fmt_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::uint64_t resolve_budget(std::uint64_t flag)
{
    if (flag)
        return flag;
    if (const char* env = std::getenv("TOURLAB_BUDGET"))
        return io::detail::to_u64(env, "TOURLAB_BUDGET");
    return default_budget;
}

inline void emit_csv(std::ostream& out, const DensityProfile& p)
{
    out << "n,forward_pairs,total_pairs,density\n";
    for (const auto& s : p.samples)
        out << s.n << ',' << s.forward << ',' << s.total << ',' << fmt_double(s.density().to_double()) << '\n';
}

inline void emit_profile_summary(std::ostream& out, const DensityProfile& p)
{
    const DensitySample* lo = &p.samples.front();
    for (const auto& s : p.samples)
        if (s.density() < lo->density())
            lo = &s;
    out << "#RESULT samples=" << p.samples.size() << " min_density=" << lo->density().str() << " at_n=" << lo->n
        << '\n';
}

inline int analyze(const std::string& source, std::uint64_t budget, const std::string& expect, std::ostream& out)
{
    Classification c;
    if (auto p = io::parse_presented_family(source)) {
        out << "graph: " << p->name << " (presented, infinite)\n";
        out << "budget: " << budget << " expansions per closure\n";
        c = classify_unavoidability(*p, budget);
    } else {
        auto g = io::load_graph(source);
        out << "graph: " << source << " (" << g.size() << " vertices, " << g.edges().size() << " edges)\n";
        c = classify_unavoidability(g);
    }
    switch (c.verdict) {
    case Verdict::unavoidable: out << "verdict: unavoidable (acyclic, locally finite, closures finite)\n"; break;
    case Verdict::avoidable:
        if (c.witness == WitnessKind::cycle)
            out << "verdict: avoidable, directed cycle " << format_vertices(c.vertices, ' ') << '\n';
        else
            out << "verdict: avoidable, certified infinite directed path through " << c.vertices.front() + 1 << '\n';
        break;
    case Verdict::inconclusive: out << "verdict: inconclusive (" << c.reason << ")\n"; break;
    }
    out << "#RESULT " << c.summary() << '\n';
    if (expect.empty())
        return 0;
    std::string got = c.verdict == Verdict::unavoidable ? "unavoidable"
                      : c.verdict == Verdict::avoidable ? "avoidable"
                                                        : "inconclusive";
    return got == expect ? 0 : 1;
}

inline int embed(const std::string& graph, const std::string& tournament, std::uint64_t horizon,
                 const std::string& oracle_name, std::uint64_t budget, std::ostream& out)
{
    auto K = io::parse_tournament(tournament);
    if (auto p = io::parse_presented_family(graph)) {
        const auto& g = *p;
        std::unique_ptr<InfinitenessOracle> oracle;
        if (oracle_name == "auto")
            oracle = auto_oracle(K);
        else if (oracle_name == "always-infinite")
            oracle = std::make_unique<AlwaysInfiniteOracle>();
        else
            throw Error(ErrorCode::invalid_argument, "unknown oracle '" + oracle_name + "'");
        SpanningOptions opt;
        opt.budget = budget;
        auto r = spanning_embed(g, K, *oracle, horizon, opt);
        auto chk = check_spanning(r, g, K, *oracle);
        for (const auto& [v, k] : r.map.pairs())
            out << v + 1 << ' ' << k + 1 << '\n';
        out << "#RESULT covered=" << chk.covered << " valid=" << (chk.valid ? "true" : "false")
            << " cells=" << r.cells_embedded << " components=" << r.components
            << " b1=" << (chk.b1 ? "true" : "false") << " b2=" << (chk.b2 ? "true" : "false")
            << " oracle=" << oracle->name() << '\n';
        return chk.ok() ? 0 : 1;
    }
    auto g = io::load_graph(graph);
    EmbeddingMap phi;
    std::string method;
    if (std::holds_alternative<family::TransitiveOmega>(K.family())) {
        phi = greedy_embed_transitive(g, TransitiveTarget::omega);
        method = "greedy";
    } else if (std::holds_alternative<family::TransitiveOmegaStar>(K.family())) {
        phi = greedy_embed_transitive(g, TransitiveTarget::omega_star);
        method = "greedy";
    } else {
        phi = embed_finite_into(g, K);
        method = "transitive-subtournament";
    }
    auto v = check_embedding(phi, g, K);
    for (const auto& [a, k] : phi.pairs())
        out << a + 1 << ' ' << k + 1 << '\n';
    out << "#RESULT mapped=" << phi.size() << " valid=" << (v.valid ? "true" : "false") << " method=" << method
        << '\n';
    return v.valid ? 0 : 1;
}

inline int optimize(const std::string& window, std::uint64_t horizon, const std::string& patterns,
                    const std::string& target, std::ostream& out)
{
    auto w = io::detail::split(window, ':');
    if (w.size() != 2)
        throw Error(ErrorCode::parse_error, "window must be lo:hi");
    auto lo = io::detail::to_u64(w[0], "window"), hi = io::detail::to_u64(w[1], "window");
    if (horizon == 0)
        horizon = hi;
    PatternSpace space;
    for (const auto& p : io::detail::split(patterns, ','))
        space.push_back(io::parse_pattern(p));
    auto res = optimize_scheme(space, horizon, lo, hi);
    const auto& rep = res.report;
    out << "patterns: " << patterns << '\n';
    out << "evaluations: " << res.evaluations << '\n';
    out << "scheme: " << rep.identifier << '\n';
    out << "window: [" << rep.n_lo << ',' << rep.n_hi << "]\n";
    out << "min_density: " << rep.min_window_density.str() << " ~ "
        << fmt_double(rep.min_window_density.to_double()) << " at n=" << rep.argmin << '\n';
    out << "target: " << rep.target.str() << '\n';
    out << "#RESULT min_density=" << rep.min_window_density.str() << " n=" << rep.argmin
        << " scheme=" << rep.identifier << '\n';
    if (target.empty())
        return 0;
    auto t = io::detail::split(target, '/');
    if (t.size() != 2)
        throw Error(ErrorCode::parse_error, "target must be p/q");
    Rational goal{io::detail::to_u64(t[0], "target"), io::detail::to_u64(t[1], "target")};
    if (goal.den == 0)
        throw Error(ErrorCode::parse_error, "target denominator is zero");
    return rep.min_window_density < goal ? 1 : 0;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"tourlab: unavoidable subgraphs of infinite tournaments and forward-edge densities", "tourlab"};
    app.require_subcommand(1);

    std::string source, expect, graph, tournament, oracle = "auto", injection, window, patterns, target;
    std::uint64_t budget = 0, horizon = 0, opt_horizon = 0, nmax = 0, stride = 1;
    bool direct = false;

    auto* an = app.add_subcommand("analyze", "classify a graph file or presented family as (un)avoidable");
    an->add_option("source", source, "graph file or presented family")->required();
    an->add_option("--budget", budget, "closure budget (vertex expansions)");
    an->add_option("--expect", expect, "exit 1 unless the verdict matches")
        ->check(CLI::IsMember({"unavoidable", "avoidable", "inconclusive"}));

    auto* em = app.add_subcommand("embed", "embed a graph into a tournament");
    em->add_option("--graph", graph, "graph file or presented family")->required();
    em->add_option("--tournament", tournament, "tournament family")->required();
    em->add_option("--horizon", horizon, "cover u_1..u_N")->default_val(30);
    em->add_option("--oracle", oracle, "infiniteness oracle")->check(CLI::IsMember({"auto", "always-infinite"}));
    em->add_option("--budget", budget, "closure budget (vertex expansions)");

    auto* de = app.add_subcommand("density", "forward-pair density profile of a tournament");
    de->add_option("--tournament", tournament, "tournament family")->required();
    de->add_option("--nmax", nmax, "largest prefix")->required();
    de->add_option("--stride", stride, "sample every s prefixes");
    de->add_flag("--direct", direct, "force the O(n^2) pair scan");

    auto* in = app.add_subcommand("inversions", "inversion density profile of an injection");
    in->add_option("--injection", injection, "scheme name or injection file")->required();
    in->add_option("--nmax", nmax, "largest prefix")->required();
    in->add_option("--stride", stride, "sample every s prefixes");

    auto* op = app.add_subcommand("optimize", "search block schemes for a high window-minimum inversion density");
    op->add_option("--window", window, "lo:hi")->required();
    op->add_option("--horizon", opt_horizon, "prefix length to evaluate (defaults to hi)");
    op->add_option("--patterns", patterns, "comma-separated pattern names")
        ->default_val("factorial,single-high,paired-high-low,k-phase,identity");
    op->add_option("--target", target, "exit 1 when the minimum is below p/q");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: code=invalid-argument message=" << e.what() << '\n';
        return 2;
    }

    try {
        if (*an)
            return analyze(source, resolve_budget(budget), expect, out);
        if (*em)
            return embed(graph, tournament, horizon, oracle, resolve_budget(budget), out);
        if (*de) {
            auto p = density_profile(io::parse_tournament(tournament), nmax, stride,
                                     direct ? CountingPath::Direct : CountingPath::Auto);
            emit_csv(out, p);
            emit_profile_summary(out, p);
            return 0;
        }
        if (*in) {
            auto p = inversion_density_profile(io::parse_injection(injection), nmax, stride);
            emit_csv(out, p);
            emit_profile_summary(out, p);
            return 0;
        }
        if (*op)
            return optimize(window, opt_horizon, patterns, target, out);
    } catch (const Error& e) {
        err << "error: code=" << to_string(e.code()) << " message=" << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: code=internal message=" << e.what() << '\n';
        return 2;
    }
    return 2;
}

} // namespace tourlab::cli
