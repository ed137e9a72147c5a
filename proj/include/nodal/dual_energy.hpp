#pragma once

#include <array>
#include <memory>
#include <utility>

#include "nodal/green.hpp"
#include "nodal/grid.hpp"
#include "nodal/params.hpp"

namespace nodal {

struct DualPair {
    ScalarField w1;
    ScalarField w2;
};

struct PrimalPair {
    ScalarField u;
    ScalarField v;
};

// w1 = |x|^alpha |u|^{p-1} u, w2 = |x|^beta |v|^{q-1} v, and its inverse.
DualPair dual_from_primal(const PrimalPair& uv, const Params& params);
PrimalPair primal_from_dual(const DualPair& w, const Params& params);

struct Coeffs {
    double A_plus = 0.0;
    double A_minus = 0.0;
    double B_plus = 0.0;
    double B_minus = 0.0;
    double C1 = 0.0;
    double C2 = 0.0;

    double scale() const;
};

struct ThetaEval {
    double value = 0.0;
    std::array<double, 2> grad{};
    std::array<std::array<double, 2>, 2> hess{};
};

// theta(t,s) = A+ t^g + A- s^g - B+ t^2 - B- s^2 + C1 t^l s^m + C2 t^m s^l with its
// analytic gradient and Hessian. Derivatives require t, s > 0.
ThetaEval theta_eval(const Coeffs& c, const Exponents& e, double t, double s);
double theta_value(const Coeffs& c, const Exponents& e, double t, double s);

struct N0Check {
    bool inside = false;
    double margin_plus = 0.0;   // 2B+ - (lambda C1 + mu C2)
    double margin_minus = 0.0;  // 2B- - (mu C1 + lambda C2)
    explicit operator bool() const { return inside; }
};

N0Check in_N0(const Coeffs& c, const Exponents& e);

// Discrete gradient by forward differences with zero extension past the outer
// boundary (and the inner annulus boundary), periodic in theta.
// Returns sum_nodes weight * |grad_h f|^r.
double gradient_power(const ScalarField& f, double r);
// Riesz representative (quadrature inner product) of the derivative of
// gradient_power(f+, r) + gradient_power(f-, r) with respect to f.
ScalarField split_gradient_power_derivative(const ScalarField& f, double r);

// The dual functional for fixed parameters on a fixed grid.
class DualSystem {
public:
    DualSystem(std::shared_ptr<const GreenSolver> green, Params params);

    const Params& params() const { return params_; }
    const Exponents& exps() const { return exps_; }
    const GreenSolver& green() const { return *green_; }
    const std::shared_ptr<const GreenSolver>& green_ptr() const { return green_; }
    const GridPtr& grid_ptr() const { return green_->grid_ptr(); }
    const ScalarField& weight_alpha() const { return weight_alpha_; }
    const ScalarField& weight_beta() const { return weight_beta_; }

    PrimalPair primal(const DualPair& w) const;
    DualPair dual(const PrimalPair& uv) const;

    // E(u,v) with the Dirichlet form evaluated as integrate(u * (-Delta_h v)).
    double energy_E(const PrimalPair& uv) const;
    double energy_I(const DualPair& w) const;
    DualPair grad_I(const DualPair& w) const;
    Coeffs coefficients(const DualPair& w) const;
    N0Check in_N0(const DualPair& w) const;
    std::pair<double, double> nehari_residuals(const DualPair& w) const;
    double energy_I_eps(const DualPair& w, double eps) const;
    DualPair grad_I_eps(const DualPair& w, double eps) const;

    // integrate(|x|^alpha |u|^{p+1}) and integrate(|x|^beta |v|^{q+1}).
    double power_integral_u(const ScalarField& u) const;
    double power_integral_v(const ScalarField& v) const;
    // The epsilon part of I_eps divided by eps.
    double eps_term(const DualPair& w) const;

private:
    std::shared_ptr<const GreenSolver> green_;
    Params params_;
    Exponents exps_;
    ScalarField weight_alpha_;
    ScalarField weight_beta_;
};

}  // namespace nodal
