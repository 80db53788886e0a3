#include "cayley/commands.hpp"

#include <fstream>
#include <iostream>

#include "cayley/gibbs.hpp"
#include "cayley/operators.hpp"
#include "cayley/report.hpp"
#include "cayley/solver.hpp"

namespace cayley {

using nlohmann::json;

namespace {

std::ostream& out_of(const CommandContext& ctx) { return ctx.out ? *ctx.out : std::cout; }
std::ostream& err_of(const CommandContext& ctx) { return ctx.err ? *ctx.err : std::cerr; }

void require_k_at_least_two(const RunConfig& cfg, const char* command) {
    if (cfg.k < 2) throw ConfigError(std::string(command) + " requires k >= 2");
}

std::ofstream open_output(const CommandContext& ctx, const char* name) {
    std::filesystem::create_directories(ctx.out_dir);
    std::ofstream f(ctx.out_dir / name);
    if (!f) throw std::runtime_error("cannot write " + (ctx.out_dir / name).string());
    return f;
}

void write_text(const CommandContext& ctx, const char* name, const std::string& text) { open_output(ctx, name) << text; }

void emit_report(const CommandContext& ctx, const json& report) {
    const std::string text = dump_json(report);
    write_text(ctx, "report.json", text);
    out_of(ctx) << text;
}

void write_solution(const CommandContext& ctx, const GridFunction& f, const char* column = "f") {
    auto file = open_output(ctx, "solution.csv");
    write_csv(file, f, column);
}

struct Setup {
    DiscretizedKernel dk;
    Bounds bounds;
};

Setup setup(const RunConfig& cfg) {
    return {discretize(cfg.kernel, make_grid(cfg.grid)), kernel_bounds(cfg.kernel, cfg.bounds_resolution)};
}

SolveOptions solver_options(const RunConfig& cfg, const DiscretizedKernel& dk) {
    SolveOptions o = cfg.solver;
    if (cfg.init_csv) {
        std::ifstream in(*cfg.init_csv);
        if (!in) throw ConfigError("cannot open initial guess " + cfg.init_csv->string());
        try {
            o.init = InitGiven{read_csv(in, dk.grid())};
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("initial guess: ") + e.what());
        }
    }
    return o;
}

SolveReport solve(const RunConfig& cfg, const DiscretizedKernel& dk) {
    const SolveOptions o = solver_options(cfg, dk);
    return cfg.k == 1 ? solve_k1(dk, o) : solve_Ak(dk, cfg.k, o);
}

json base_report(const char* command, const RunConfig& cfg, const Setup& s) {
    json r = {{"command", command},
              {"kernel", cfg.kernel.name()},
              {"k", cfg.k},
              {"grid", {{"points_per_panel", cfg.grid.points_per_panel}, {"panels", cfg.grid.panels}}},
              {"bounds", to_json(s.bounds)}};
    if (cfg.k >= 2) r["certificate"] = to_json(uniqueness_certificate(s.bounds, cfg.k));
    return r;
}

}  // namespace

int cmd_certify(const RunConfig& cfg, const CommandContext& ctx) {
    require_k_at_least_two(cfg, "certify");
    const Bounds b = kernel_bounds(cfg.kernel, cfg.bounds_resolution);
    const Certificate c = uniqueness_certificate(b, cfg.k);
    json r = {{"command", "certify"}, {"kernel", cfg.kernel.name()}, {"k", cfg.k},
              {"bounds", to_json(b)},  {"certificate", to_json(c)}};
    if (cfg.kernel.as<PolynomialK1Kernel>()) r["k1_example_verdict"] = k1_example_verdict(cfg.kernel, cfg.k);
    emit_report(ctx, r);
    return c.pass ? kExitOk : kExitCertificateFail;
}

int cmd_solve(const RunConfig& cfg, const CommandContext& ctx) {
    const Setup s = setup(cfg);
    const SolveReport rep = solve(cfg, s.dk);
    const RangeBounds range = ak_range_bounds(s.bounds, cfg.k);
    json r = base_report("solve", cfg, s);
    r["solve"] = to_json(rep);
    r["range_bounds"] = {{"lower", range.lower}, {"upper", range.upper}};
    write_solution(ctx, rep.solution);
    emit_report(ctx, r);
    return rep.converged ? kExitOk : kExitNonConvergence;
}

int cmd_eigen(const RunConfig& cfg, const CommandContext& ctx) {
    require_k_at_least_two(cfg, "eigen");
    const Setup s = setup(cfg);
    const SolveReport rep = solve(cfg, s.dk);
    Eigenpair pair = convert_Ak_to_Hk(rep.solution, s.dk, cfg.k);
    const double lambda0 = pair.lambda;
    if (cfg.eigen.target_lambda) pair = rescale_eigenpair(pair, *cfg.eigen.target_lambda, cfg.k);

    const Eigenpair unit = rescale_eigenpair(pair, 1.0, cfg.k);
    const RangeBounds pk = hk_fixed_point_bounds(s.bounds, cfg.k);

    json r = base_report("eigen", cfg, s);
    r["solve"] = to_json(rep, false);
    r["lambda0"] = lambda0;
    r["eigenpair"] = to_json(pair);
    r["eigen_residual"] = eigen_residual(s.dk, pair, cfg.k);
    r["fixed_point"] = {{"residual", eigen_residual(s.dk, unit, cfg.k)},
                        {"min", unit.h.min_value()},
                        {"max", unit.h.max_value()},
                        {"p_k_lower", pk.lower},
                        {"p_k_upper", pk.upper}};
    write_solution(ctx, pair.h, "h");
    emit_report(ctx, r);
    return rep.converged ? kExitOk : kExitNonConvergence;
}

int cmd_probe(const RunConfig& cfg, const CommandContext& ctx) {
    require_k_at_least_two(cfg, "probe");
    if (cfg.probe.n_starts < 2) throw ConfigError("probe.n_starts must be >= 2");
    const Setup s = setup(cfg);
    const ProbeReport probe = uniqueness_probe(s.dk, cfg.k, cfg.probe.n_starts, cfg.probe.seed, solver_options(cfg, s.dk));
    json r = base_report("probe", cfg, s);
    r["probe"] = to_json(probe);
    emit_report(ctx, r);
    if (!probe.all_converged) return kExitNonConvergence;
    return probe.unique_within_tol ? kExitOk : kExitProbeMismatch;
}

int cmd_sample(const RunConfig& cfg, const CommandContext& ctx) {
    const Setup s = setup(cfg);
    const SolveReport rep = solve(cfg, s.dk);
    json r = base_report("sample", cfg, s);
    r["solve"] = to_json(rep, false);
    if (!rep.converged) {
        emit_report(ctx, r);
        return kExitNonConvergence;
    }
    const TreeShape shape{cfg.k, cfg.sample.depth};
    const Tree tree(shape);
    const auto samples = sample_tree(rep.solution, s.dk, shape, cfg.sample.n_samples, cfg.sample.seed);
    {
        auto csv = open_output(ctx, "samples.csv");
        csv << "sample,vertex,spin\n";
        char buf[40];
        for (std::size_t i = 0; i < samples.size(); ++i) {
            for (std::size_t v = 0; v < tree.size(); ++v) {
                std::snprintf(buf, sizeof buf, "%.17g", samples[i].spins[v]);
                csv << i << ',' << tree.path(v) << ',' << buf << '\n';
            }
        }
    }
    const Histogram h = root_histogram(samples, cfg.sample.bins);
    write_text(ctx, "histogram.json", dump_json(to_json(h)));
    r["sample"] = {{"depth", shape.depth},
                   {"vertices", tree.size()},
                   {"n_samples", cfg.sample.n_samples},
                   {"seed", cfg.sample.seed},
                   {"root_histogram", to_json(h)}};
    emit_report(ctx, r);
    return kExitOk;
}

int cmd_compare(const RunConfig& cfg, const CommandContext& ctx) {
    const Setup s = setup(cfg);
    const SolveReport rep = solve(cfg, s.dk);
    json r = base_report("compare", cfg, s);
    r["solve"] = to_json(rep, false);
    if (!rep.converged) {
        emit_report(ctx, r);
        return kExitNonConvergence;
    }
    const TreeShape shape{cfg.k, cfg.compare.depth};
    const Histogram mc = mc_finite_volume_marginal(rep.solution, s.dk, shape, cfg.compare.n_mc, cfg.compare.seed,
                                                   cfg.compare.bins);
    if (mc.low_ess) err_of(ctx) << "warning: effective sample size " << mc.ess << " below " << kMinEffectiveSampleSize << '\n';
    const auto expected =
        root_marginal_bins(rep.solution, s.dk, cfg.k, cfg.compare.bins, cfg.compare.exponent_override);
    const MarginalComparison cmp = compare_marginal(mc, expected);
    const bool ok = cmp.sup_abs_z <= cfg.compare.z_threshold;

    write_text(ctx, "histogram.json", dump_json(to_json(mc)));
    r["compare"] = {{"depth", shape.depth},
                    {"n_mc", cfg.compare.n_mc},
                    {"seed", cfg.compare.seed},
                    {"exponent", cfg.compare.exponent_override.value_or((cfg.k + 1.0) / cfg.k)},
                    {"z_threshold", cfg.compare.z_threshold},
                    {"agree", ok},
                    {"histogram", to_json(mc)},
                    {"comparison", to_json(cmp)}};
    emit_report(ctx, r);
    return ok ? kExitOk : kExitMarginalMismatch;
}

int run_command(const std::string& name, const std::filesystem::path& config_path, const CommandContext& ctx,
                std::optional<std::uint64_t> seed_override) {
    try {
        RunConfig cfg = load_config(config_path);
        if (seed_override) override_seeds(cfg, *seed_override);
        if (name == "certify") return cmd_certify(cfg, ctx);
        if (name == "solve") return cmd_solve(cfg, ctx);
        if (name == "eigen") return cmd_eigen(cfg, ctx);
        if (name == "probe") return cmd_probe(cfg, ctx);
        if (name == "sample") return cmd_sample(cfg, ctx);
        if (name == "compare") return cmd_compare(cfg, ctx);
        throw ConfigError("unknown subcommand '" + name + "'");
    } catch (const ConfigError& e) {
        err_of(ctx) << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        err_of(ctx) << "invalid input: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err_of(ctx) << "error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace cayley
