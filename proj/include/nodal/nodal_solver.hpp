#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "nodal/dual_energy.hpp"
#include "nodal/projection.hpp"

namespace nodal {

struct SeedSpec {
    enum class Kind { eigenmode, file };
    Kind kind = Kind::eigenmode;
    // Eigenfunction index on 1D and radial grids, angular wave number on polar
    // grids. 0 selects the default (2 for nodal and 1 for ground solves on 1D and
    // radial grids, wave number 1 on polar grids).
    int mode = 0;
    // The second component is the first times (1 + asymmetry sin(pi rho)), rho the
    // normalised radial coordinate, so the seed does not start on the diagonal.
    double asymmetry = 0.2;
    // Angle of the cos mode on polar grids.
    double rotation = 0.0;
    std::string u_path;
    std::string v_path;
};

struct SolveOptions {
    double step = 0.1;
    double max_step = 1.0;
    double step_floor = 1e-8;
    int max_iterations = 5000;
    // Relative max-norm of the gradient, |g|_inf / max(|u|_inf, |v|_inf).
    double gradient_tolerance = 1e-10;
    // Minimal share of each sign part in integrate(|x|^alpha |u|^{p+1}) (and for v).
    double sign_mass_floor = 1e-6;
    // Level changes below this fraction of the level count as rounding noise.
    double level_noise = 1e-12;
    SeedSpec seed;
    bool record_trace = true;
};

enum class Termination { gradient_tolerance, level_stationary, max_iterations, sign_collapse };
std::string to_string(Termination t);

struct TraceEntry {
    int iteration = 0;
    double level = 0.0;
    double residual = 0.0;
    double step = 0.0;
};

struct NodalSolution {
    Params params;
    Exponents exps;
    PrimalPair primal;
    DualPair dual;
    double level = 0.0;
    double eps = 0.0;
    double pde_residual = 0.0;
    std::pair<double, double> nehari_residuals{0.0, 0.0};
    double gradient_norm = 0.0;
    int iterations = 0;
    int reseeds = 0;
    double t_last = 1.0;
    double s_last = 1.0;
    // Shares of the positive and negative parts: u+, u-, v+, v-.
    std::array<double, 4> sign_shares{};
    Termination termination = Termination::max_iterations;
    bool converged = false;
    std::vector<TraceEntry> trace;
};

NodalSolution minimize_nodal(const DualSystem& sys, const SolveOptions& opts);
NodalSolution minimize_nodal(const Params& params, const GridPtr& grid, const SolveOptions& opts);
NodalSolution minimize_nodal_eps(const DualSystem& sys, double eps, const SolveOptions& opts);

// Same descent with the scalar Nehari projection; the result has one-signed components.
NodalSolution minimize_ground(const DualSystem& sys, const SolveOptions& opts);
NodalSolution minimize_ground(const Params& params, const GridPtr& grid, const SolveOptions& opts);

// Nodal solve restricted to radial functions: `grid` must be a radial grid
// (or an interval, where every function is trivially admissible).
NodalSolution minimize_nodal_radial(const Params& params, const GridPtr& grid, const SolveOptions& opts);

struct EpsRow {
    double eps = 0.0;
    double level = 0.0;
    double gap = 0.0;  // |level - level at eps = 0|
    int iterations = 0;
    bool converged = false;
    std::string termination;
    std::string error;
};

// First row is eps = 0; `eps_list` must be positive and strictly decreasing.
std::vector<EpsRow> eps_sweep(const Params& params, const GridPtr& grid, const std::vector<double>& eps_list,
                              const SolveOptions& opts);

// The seed pair used by the solvers (attempt > 0 mixes in the next mode).
DualPair make_seed(const DualSystem& sys, bool ground, const SeedSpec& seed, int attempt = 0);

// max(|-Delta_h u - |x|^beta |v|^{q-1} v|_inf / |w2|_inf, same for v).
double pde_residual(const DualSystem& sys, const PrimalPair& uv);

}  // namespace nodal
