// Command-line front end for the nodal solver.
//
//   nodal_cli solve --domain disk --p 3 --q 3 --nr 64 --ntheta 128 --out run1
//   nodal_cli sweep --config sweep.json --workers 4
//
// Command-line flags override values from --config. Exit status: 0 on success,
// 2 for configuration errors, 3 when a solve did not converge.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

#include "nodal/errors.hpp"
#include "nodal/experiment.hpp"

namespace {

using nodal::ExperimentConfig;
using nodal::RunMode;

constexpr int exit_config = 2;
constexpr int exit_convergence = 3;

struct Overrides {
    std::string config;
    std::optional<std::string> domain;
    std::optional<double> R, inner;
    std::optional<double> p, q, alpha, beta;
    std::optional<int> nr, ntheta, nr_radial;
    std::optional<std::string> out;
    std::optional<int> max_iter;
    std::optional<double> tol, step;
    std::optional<int> workers, fs_samples;
    std::optional<int> seed_mode;
    std::optional<double> asymmetry, rotation;
    std::optional<std::string> seed_u, seed_v;
    std::vector<double> eps, sweep_p, sweep_q, sweep_alpha, sweep_beta;
    bool zip = false;
    std::optional<std::string> u_field, v_field;
};

void add_options(CLI::App& sub, Overrides& o, RunMode mode) {
    sub.add_option("--config", o.config, "JSON configuration file");
    sub.add_option("--domain", o.domain, "interval, disk or annulus");
    sub.add_option("--R", o.R, "outer radius (interval length)");
    sub.add_option("--inner", o.inner, "inner radius of the annulus");
    sub.add_option("--p", o.p);
    sub.add_option("--q", o.q);
    sub.add_option("--alpha", o.alpha);
    sub.add_option("--beta", o.beta);
    sub.add_option("--nr", o.nr, "radial (or 1D) cells");
    sub.add_option("--ntheta", o.ntheta, "angular cells");
    sub.add_option("--out", o.out, "output directory");
    sub.add_option("--max-iter", o.max_iter);
    sub.add_option("--tol", o.tol, "relative gradient tolerance");
    sub.add_option("--step", o.step, "initial descent step");
    sub.add_option("--seed-mode", o.seed_mode, "eigenmode / angular wave number of the seed");
    sub.add_option("--asymmetry", o.asymmetry);
    sub.add_option("--rotation", o.rotation);
    sub.add_option("--seed-u", o.seed_u, "field dump used as the u seed");
    sub.add_option("--seed-v", o.seed_v, "field dump used as the v seed");
    if (mode == RunMode::sweep) {
        sub.add_option("--workers", o.workers);
        sub.add_option("--nr-radial", o.nr_radial, "cells of the radial grid");
        sub.add_option("--sweep-p", o.sweep_p)->delimiter(',');
        sub.add_option("--sweep-q", o.sweep_q)->delimiter(',');
        sub.add_option("--sweep-alpha", o.sweep_alpha)->delimiter(',');
        sub.add_option("--sweep-beta", o.sweep_beta)->delimiter(',');
        sub.add_flag("--zip", o.zip, "walk the sweep lists in lockstep");
    }
    if (mode == RunMode::radial) sub.add_option("--nr-radial", o.nr_radial, "cells of the radial grid");
    if (mode == RunMode::eps_sweep) sub.add_option("--eps", o.eps, "decreasing positive eps values")->delimiter(',');
    if (mode == RunMode::symmetry_check) {
        sub.add_option("--u-field", o.u_field);
        sub.add_option("--v-field", o.v_field);
    }
    if (mode == RunMode::symmetry_check || mode == RunMode::sweep || mode == RunMode::solve ||
        mode == RunMode::ground || mode == RunMode::radial)
        sub.add_option("--fs-samples", o.fs_samples, "half-spaces sampled by the symmetry score");
}

ExperimentConfig build_config(const Overrides& o, RunMode mode) {
    ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : nodal::load_config(o.config);
    cfg.mode = mode;
    if (o.domain) {
        const double R = cfg.domain.outer_radius, a = cfg.domain.inner_radius;
        cfg.domain.kind = nodal::domain_kind_from_string(*o.domain);
        cfg.domain.outer_radius = R;
        cfg.domain.inner_radius = cfg.domain.kind == nodal::DomainKind::annulus ? (a > 0 ? a : 0.5 * R) : 0.0;
    }
    if (o.R) cfg.domain.outer_radius = *o.R;
    if (o.inner) cfg.domain.inner_radius = *o.inner;
    if (o.p) cfg.params.p = *o.p;
    if (o.q) cfg.params.q = *o.q;
    if (o.alpha) cfg.params.alpha = *o.alpha;
    if (o.beta) cfg.params.beta = *o.beta;
    if (o.nr) cfg.n_r = *o.nr;
    if (o.ntheta) cfg.n_theta = *o.ntheta;
    if (o.nr_radial) cfg.n_r_radial = *o.nr_radial;
    if (o.out) cfg.output_dir = *o.out;
    if (o.max_iter) cfg.solver.max_iterations = *o.max_iter;
    if (o.tol) cfg.solver.gradient_tolerance = *o.tol;
    if (o.step) cfg.solver.step = *o.step;
    if (o.workers) cfg.workers = *o.workers;
    if (o.fs_samples) cfg.fs_samples = *o.fs_samples;
    if (o.seed_mode) cfg.solver.seed.mode = *o.seed_mode;
    if (o.asymmetry) cfg.solver.seed.asymmetry = *o.asymmetry;
    if (o.rotation) cfg.solver.seed.rotation = *o.rotation;
    if (o.seed_u || o.seed_v) {
        if (!o.seed_u || !o.seed_v) throw nodal::ConfigError("--seed-u and --seed-v must be given together");
        cfg.solver.seed.kind = nodal::SeedSpec::Kind::file;
        cfg.solver.seed.u_path = *o.seed_u;
        cfg.solver.seed.v_path = *o.seed_v;
    }
    if (!o.eps.empty()) cfg.eps = o.eps;
    if (!o.sweep_p.empty()) cfg.sweep.p = o.sweep_p;
    if (!o.sweep_q.empty()) cfg.sweep.q = o.sweep_q;
    if (!o.sweep_alpha.empty()) cfg.sweep.alpha = o.sweep_alpha;
    if (!o.sweep_beta.empty()) cfg.sweep.beta = o.sweep_beta;
    if (o.zip) cfg.sweep.zip = true;
    if (o.u_field) cfg.u_field = *o.u_field;
    if (o.v_field) cfg.v_field = *o.v_field;
    return cfg;
}

int run(const ExperimentConfig& cfg) {
    const auto dir = nodal::output_directory(cfg).string();
    switch (cfg.mode) {
    case RunMode::solve:
    case RunMode::ground:
    case RunMode::radial: {
        const auto rep = nodal::run_solve(cfg);
        const auto& s = rep.solution;
        std::printf("%s %s: level %.12g, %d iterations, %s, pde residual %.3g, component gap %.3g\n",
                    nodal::to_string(cfg.mode).c_str(), nodal::describe(cfg.params).c_str(), s.level, s.iterations,
                    nodal::to_string(s.termination).c_str(), s.pde_residual, rep.symmetry.component_gap);
        std::printf("output: %s\n", rep.directory.string().c_str());
        if (!s.converged) {
            std::fprintf(stderr, "solver did not converge (%s); diagnostics kept in %s\n",
                         nodal::to_string(s.termination).c_str(), rep.directory.string().c_str());
            return exit_convergence;
        }
        return 0;
    }
    case RunMode::sweep: {
        const auto rows = nodal::run_sweep(cfg);
        std::fputs(nodal::format_sweep_csv(rows).c_str(), stdout);
        int failed = 0;
        for (const auto& r : rows)
            if (!r.converged) {
                ++failed;
                std::fprintf(stderr, "row %s failed: %s\n", nodal::describe(r.params).c_str(), r.error.c_str());
            }
        std::printf("output: %s\n", dir.c_str());
        return failed ? exit_convergence : 0;
    }
    case RunMode::eps_sweep: {
        const auto rows = nodal::run_eps_sweep(cfg);
        std::printf("eps,c_eps,gap,converged\n");
        bool ok = true;
        for (const auto& r : rows) {
            std::printf("%.17g,%.17g,%.17g,%d\n", r.eps, r.level, r.gap, r.converged ? 1 : 0);
            ok = ok && r.converged;
        }
        std::printf("output: %s\n", dir.c_str());
        return ok ? 0 : exit_convergence;
    }
    case RunMode::oracle_compare: {
        const auto j = nodal::run_oracle_compare(cfg);
        std::printf("%s\n", j.dump(2).c_str());
        const bool ok = j["system_converged"].get<bool>() && j["scalar_converged"].get<bool>();
        return ok ? 0 : exit_convergence;
    }
    case RunMode::symmetry_check: {
        const auto j = nodal::run_symmetry_check(cfg);
        std::printf("%s\n", j["symmetry"].dump(2).c_str());
        return 0;
    }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Least energy nodal solutions of Henon-Lane-Emden systems"};
    app.require_subcommand(1);
    Overrides o;
    const std::pair<RunMode, const char*> subs[] = {
        {RunMode::solve, "least energy nodal solution"},
        {RunMode::ground, "ground state (one-signed) solution"},
        {RunMode::radial, "least energy nodal solution among radial functions"},
        {RunMode::sweep, "parameter sweep writing sweep.csv"},
        {RunMode::eps_sweep, "regularised levels for decreasing eps"},
        {RunMode::symmetry_check, "symmetry diagnostics of saved fields"},
        {RunMode::oracle_compare, "compare against the scalar equation solver (p = q, alpha = beta)"},
    };
    std::vector<std::pair<CLI::App*, RunMode>> commands;
    for (const auto& [mode, help] : subs) {
        auto* sub = app.add_subcommand(nodal::to_string(mode), help);
        add_options(*sub, o, mode);
        commands.emplace_back(sub, mode);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    RunMode mode = RunMode::solve;
    for (const auto& [sub, m] : commands)
        if (sub->parsed()) mode = m;

    try {
        return run(build_config(o, mode));
    } catch (const nodal::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return exit_config;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return exit_config;
    } catch (const nodal::ConvergenceError& e) {
        std::fprintf(stderr, "convergence failure: %s\n", e.what());
        return exit_convergence;
    } catch (const nodal::PreconditionError& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return exit_convergence;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
