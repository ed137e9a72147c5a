#pragma once

#include "nodal/green.hpp"
#include "nodal/grid.hpp"

namespace nodal {

// Reference solver for the scalar equation -Delta u = |x|^alpha |u|^{p-1} u, used
// to cross-check the system solver on the diagonal. It works on the primal
// functional J(u) = 1/2 integrate(u (-Delta_h u)) - 1/(p+1) integrate(|x|^alpha |u|^{p+1})
// over the nodal Nehari set {J'(u)u+ = J'(u)u- = 0} (or the ordinary Nehari set
// for ground states), with steepest descent in the H^1_0 metric.
struct ScalarOracleOptions {
    double step = 0.1;
    double max_step = 1.0;
    double step_floor = 1e-10;
    int max_iterations = 20000;
    double gradient_tolerance = 1e-10;
    double level_noise = 1e-12;
};

struct ScalarOracleResult {
    ScalarField u;
    double level = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

ScalarOracleResult scalar_nodal_oracle(const GreenSolver& green, double p, double alpha, const ScalarField& seed,
                                       const ScalarOracleOptions& opts = {});
ScalarOracleResult scalar_ground_oracle(const GreenSolver& green, double p, double alpha, const ScalarField& seed,
                                        const ScalarOracleOptions& opts = {});

// Default sign-changing seed: second eigenfunction on 1D and radial grids,
// r(R - r) cos(theta) on the disk and sin(pi rho) cos(theta) on the annulus.
ScalarField scalar_nodal_seed(const GreenSolver& green);

}  // namespace nodal
