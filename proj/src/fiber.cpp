#include "fiber.hpp"

#include <cmath>
#include <tuple>

namespace nodal::detail {

namespace {
ScalarField combine(const ScalarField& a, double ca, const ScalarField& b, double cb) {
    ScalarField out(a.grid_ptr());
    for (std::size_t n = 0; n < a.size(); ++n) out[n] = ca * a[n] - cb * b[n];
    return out;
}
}  // namespace

Fiber make_fiber(const DualSystem& sys, const DualPair& w, double eps) {
    const auto& prm = sys.params();
    const double p = prm.p, q = prm.q;
    Fiber f;
    std::tie(f.w1p, f.w1m) = split_signs(w.w1);
    std::tie(f.w2p, f.w2m) = split_signs(w.w2);
    const auto& K = sys.green();
    f.Kw1p = K.apply_K(f.w1p);
    f.Kw1m = K.apply_K(f.w1m);
    f.Kw2p = K.apply_K(f.w2p);
    f.Kw2m = K.apply_K(f.w2m);

    const auto up = sys.primal({f.w1p, f.w2p});
    const auto um = sys.primal({f.w1m, f.w2m});
    Coeffs& c = f.coeffs;
    c.A_plus = p / (p + 1.0) * sys.power_integral_u(up.u) + q / (q + 1.0) * sys.power_integral_v(up.v);
    c.A_minus = p / (p + 1.0) * sys.power_integral_u(um.u) + q / (q + 1.0) * sys.power_integral_v(um.v);
    c.B_plus = inner(f.w1p, f.Kw2p);
    c.B_minus = inner(f.w1m, f.Kw2m);
    c.C1 = inner(f.w1p, f.Kw2m);
    c.C2 = inner(f.w1m, f.Kw2p);

    f.eps = eps;
    if (eps > 0.0) {
        const double r1 = (p + 1.0) / p, r2 = (q + 1.0) / q;
        c.A_plus += eps * (p / (p + 1.0) * gradient_power(f.w1p, r1) + q / (q + 1.0) * gradient_power(f.w2p, r2));
        c.A_minus += eps * (p / (p + 1.0) * gradient_power(f.w1m, r1) + q / (q + 1.0) * gradient_power(f.w2m, r2));
    }
    return f;
}

DualPair fiber_point(const Fiber& f, const Exponents& e, double t, double s) {
    return {combine(f.w1p, std::pow(t, e.lambda), f.w1m, std::pow(s, e.lambda)),
            combine(f.w2p, std::pow(t, e.mu), f.w2m, std::pow(s, e.mu))};
}

DualPair fiber_K(const Fiber& f, const Exponents& e, double t, double s) {
    return {combine(f.Kw1p, std::pow(t, e.lambda), f.Kw1m, std::pow(s, e.lambda)),
            combine(f.Kw2p, std::pow(t, e.mu), f.Kw2m, std::pow(s, e.mu))};
}

}  // namespace nodal::detail
