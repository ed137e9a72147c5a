#pragma once

#include "nodal/dual_energy.hpp"

namespace nodal {

struct FiberMaximum {
    double t = 1.0;
    double s = 1.0;
    double value = 0.0;
    int iterations = 0;
    bool hessian_negdef = false;
    bool used_fallback = false;
    double grad_norm = 0.0;  // max-norm of the (t,s) gradient of theta at the maximum
};

// Maximises theta over t, s > 0 by damped Newton in (log t, log s) started at
// (t_start, s_start); a coarse log-grid search over [1e-3, 1e3]^2 supplies a new
// start if Newton stalls. Throws ConvergenceError with a table of theta values
// when neither converges.
FiberMaximum maximize_fiber(const Coeffs& c, const Exponents& e, double t_start = 1.0, double s_start = 1.0);

struct ProjectionResult {
    double t0 = 1.0;
    double s0 = 1.0;
    DualPair projected;
    double theta_value = 0.0;
    int newton_iterations = 0;
    bool hessian_negdef = false;
    Coeffs coeffs;  // of the input pair
    N0Check n0;
};

// Nehari projection of a pair with four nontrivial sign parts lying in N0.
// Throws PreconditionError (with the N0 margins) otherwise.
ProjectionResult project_nehari(const DualSystem& sys, const DualPair& w);
// Same fiber maximisation for I_eps: A+- gain the eps gradient terms.
ProjectionResult project_nehari_eps(const DualSystem& sys, const DualPair& w, double eps);

struct GroundProjection {
    double t_star = 1.0;
    DualPair projected;
    double level = 0.0;
};

// Maximiser of t -> A t^gamma - B t^2: t* = (gamma A / 2B)^{1/(2-gamma)}.
double ground_scaling(double A, double B, const Exponents& e);
// Scalar Nehari projection (t^lambda w1, t^mu w2) of a pair with integrate(w1 K w2) > 0.
GroundProjection project_ground(const DualSystem& sys, const DualPair& w);

}  // namespace nodal
