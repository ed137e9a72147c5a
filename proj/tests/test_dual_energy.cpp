#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nodal/dual_energy.hpp"
#include "nodal/errors.hpp"

using namespace nodal;

namespace {

std::shared_ptr<const GreenSolver> interval_green(int n) {
    return std::make_shared<GreenSolver>(build_grid(Domain::interval(), n, 1));
}

ScalarField smooth_random(const GridPtr& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-1, 1);
    const double a = U(rng), b = U(rng), c = U(rng), d = U(rng);
    const double R = g->domain().outer_radius;
    return ScalarField::from_function(g, [=](double r, double th) {
        const double x = r / R;
        return (1 - x * x) * (a + b * std::cos(th) * x + c * std::sin(3 * x) + d * std::sin(th) * x * x);
    });
}

}  // namespace

TEST_CASE("exponents") {
    auto e = exponents({3, 3, 0, 0});
    CHECK(e.lambda == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e.mu == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e.gamma == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

    auto f = exponents({2, 3, 0, 0});
    CHECK(f.lambda == doctest::Approx(16.0 / 17.0).epsilon(1e-15));
    CHECK(f.mu == doctest::Approx(18.0 / 17.0).epsilon(1e-15));
    CHECK(f.gamma == doctest::Approx(24.0 / 17.0).epsilon(1e-15));
    CHECK(f.gamma == doctest::Approx(f.mu * 4.0 / 3.0).epsilon(1e-15));

    auto near = exponents({1.1, 1, 0, 0});
    CHECK(near.gamma == doctest::Approx(2 * 2.1 * 2 / (2.1 + 2.2)).epsilon(1e-14));
}

TEST_CASE("hypothesis check names the failing inequality") {
    CHECK_NOTHROW(check_hypothesis({3, 3, 0, 0}, 2));
    CHECK_NOTHROW(check_hypothesis({1.01, 1, 0, 0}, 2));
    try {
        check_hypothesis({0.5, 1.5, 0, 0}, 2);
        FAIL("accepted pq < 1");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("pq > 1") != std::string::npos);
    }
    CHECK_THROWS_AS(check_hypothesis({1, 1, 0, 0}, 2), ConfigError);
    try {
        // 1/(p+1) + 1/(q+1) = 0.2 < 1/3 in dimension 3.
        check_hypothesis({4, 9, 0, 0}, 3);
        FAIL("accepted a supercritical pair");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("subcritical") != std::string::npos);
    }
    CHECK_THROWS_AS(check_hypothesis({3, 3, -0.5, 0}, 2), ConfigError);
}

TEST_CASE("primal and dual variables") {
    auto g = build_grid(Domain::interval(), 8, 1);
    Params P{3, 3, 0, 0};
    PrimalPair uv{ScalarField(g, 2.0), ScalarField(g, 0.0)};
    auto w = dual_from_primal(uv, P);
    CHECK(w.w1[3] == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(w.w2.max_abs() == 0.0);
    auto back = primal_from_dual(w, P);
    CHECK(back.u[3] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(back.v.max_abs() == 0.0);

    Params W{2, 5, 0.5, 1.5};
    std::mt19937_64 rng(1);
    auto gd = build_grid(Domain::disk(), 8, 16);
    PrimalPair r{smooth_random(gd, rng), smooth_random(gd, rng)};
    auto rt = primal_from_dual(dual_from_primal(r, W), W);
    CHECK((rt.u - r.u).max_abs() <= 1e-13 * r.u.max_abs());
    CHECK((rt.v - r.v).max_abs() <= 1e-13 * r.v.max_abs());
}

TEST_CASE("energies vanish at zero") {
    auto K = interval_green(32);
    DualSystem sys(K, {3, 3, 0, 0});
    ScalarField z(K->grid_ptr());
    CHECK(sys.energy_E({z, z}) == 0.0);
    CHECK(sys.energy_I({z, z}) == 0.0);
    auto g = sys.grad_I({z, z});
    CHECK(g.w1.max_abs() == 0.0);
    CHECK(g.w2.max_abs() == 0.0);
}

TEST_CASE("E is symmetric in the components when p = q and alpha = beta") {
    auto K = std::make_shared<GreenSolver>(build_grid(Domain::disk(), 12, 24));
    DualSystem sys(K, {2.5, 2.5, 0.3, 0.3});
    std::mt19937_64 rng(2);
    auto u = smooth_random(K->grid_ptr(), rng), v = smooth_random(K->grid_ptr(), rng);
    const double a = sys.energy_E({u, v}), b = sys.energy_E({v, u});
    CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
}

TEST_CASE("I at (phi2, phi2) against term-by-term quadrature") {
    auto K = interval_green(256);
    DualSystem sys(K, {3, 3, 0, 0});
    auto e2 = eigenpair(*K, 2);
    const auto& phi = e2.function;
    double pow43 = 0.0, sq = 0.0;
    const auto w = K->grid().weights();
    for (std::size_t n = 0; n < phi.size(); ++n) {
        pow43 += w[n] * std::pow(std::abs(phi[n]), 4.0 / 3.0);
        sq += w[n] * phi[n] * phi[n];
    }
    const double oracle = 0.75 * 2.0 * pow43 - sq / e2.value;
    CHECK(std::abs(sys.energy_I({phi, phi}) - oracle) <= 1e-9 * std::abs(oracle));
}

TEST_CASE("grad_I matches central differences of I") {
    std::mt19937_64 rng(4);
    for (auto P : {Params{3, 3, 0, 0}, Params{2, 4, 0.5, 1.0}}) {
        auto K = std::make_shared<GreenSolver>(build_grid(Domain::disk(), 12, 24));
        DualSystem sys(K, P);
        const auto& g = K->grid_ptr();
        DualPair w{smooth_random(g, rng), smooth_random(g, rng)};
        auto grad = sys.grad_I(w);
        for (int trial = 0; trial < 5; ++trial) {
            DualPair d{smooth_random(g, rng), smooth_random(g, rng)};
            const double h = 1e-5;
            DualPair wp{w.w1 + h * d.w1, w.w2 + h * d.w2}, wm{w.w1 - h * d.w1, w.w2 - h * d.w2};
            const double fd = (sys.energy_I(wp) - sys.energy_I(wm)) / (2 * h);
            const double an = inner(grad.w1, d.w1) + inner(grad.w2, d.w2);
            CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
        }
    }
}

TEST_CASE("grad_I_eps matches central differences of I_eps") {
    std::mt19937_64 rng(6);
    auto K = interval_green(64);
    DualSystem sys(K, {3, 3, 0, 0});
    const auto& g = K->grid_ptr();
    auto phi = eigenpair(*K, 2).function;
    DualPair w{phi, phi + 0.2 * smooth_random(g, rng)};
    auto grad = sys.grad_I_eps(w, 0.01);
    DualPair d{smooth_random(g, rng), smooth_random(g, rng)};
    const double h = 1e-6;
    DualPair wp{w.w1 + h * d.w1, w.w2 + h * d.w2}, wm{w.w1 - h * d.w1, w.w2 - h * d.w2};
    const double fd = (sys.energy_I_eps(wp, 0.01) - sys.energy_I_eps(wm, 0.01)) / (2 * h);
    const double an = inner(grad.w1, d.w1) + inner(grad.w2, d.w2);
    CHECK(std::abs(fd - an) <= 1e-5 * std::abs(an));
}

TEST_CASE("coefficients at (phi2, phi2) on the interval") {
    auto K = interval_green(256);
    DualSystem sys(K, {3, 3, 0, 0});
    auto e2 = eigenpair(*K, 2);
    const auto& phi = e2.function;
    auto c = sys.coefficients({phi, phi});
    auto [pp, pm] = split_signs(phi);
    // B+ - C1 = integrate(phi+ K phi) = integrate((phi+)^2) / lambda_2.
    const double oracle = inner(pp, pp) / e2.value;
    CHECK(std::abs((c.B_plus - c.C1) - oracle) <= 1e-9 * oracle);
    CHECK(c.C1 > 0.0);
    CHECK(c.C2 > 0.0);
    CHECK(std::abs(c.C1 - c.C2) <= 1e-12 * c.C1);
    for (double v : {c.A_plus, c.A_minus, c.B_plus, c.B_minus}) CHECK(v > 0.0);
    CHECK(sys.in_N0({phi, phi}).inside);
}

TEST_CASE("coefficients scale homogeneously") {
    Params P{2, 4, 0.5, 0.5};
    auto K = std::make_shared<GreenSolver>(build_grid(Domain::disk(), 12, 24));
    DualSystem sys(K, P);
    const auto& g = K->grid_ptr();
    auto w1 = ScalarField::from_function(g, [](double r, double th) { return (1 - r * r) * std::cos(th); });
    auto w2 = ScalarField::from_function(g, [](double r, double th) { return (1 - r) * std::cos(th - 0.3); });
    auto c1 = sys.coefficients({w1, w2});
    const double k = 2.0;
    auto c2 = sys.coefficients({k * w1, k * w2});
    CHECK(c2.B_plus == doctest::Approx(k * k * c1.B_plus).epsilon(1e-12));
    CHECK(c2.B_minus == doctest::Approx(k * k * c1.B_minus).epsilon(1e-12));
    CHECK(c2.C1 == doctest::Approx(k * k * c1.C1).epsilon(1e-12));
    CHECK(c2.C2 == doctest::Approx(k * k * c1.C2).epsilon(1e-12));

    // A+ splits into the w1 and w2 contributions, which scale with different powers.
    auto a_of = [&](const ScalarField& a, const ScalarField& b) { return sys.coefficients({a, b}).A_plus; };
    ScalarField z(g);
    const double a1 = a_of(w1, z), a2 = a_of(z, w2);
    CHECK(a_of(k * w1, z) == doctest::Approx(std::pow(k, (P.p + 1) / P.p) * a1).epsilon(1e-12));
    CHECK(a_of(z, k * w2) == doctest::Approx(std::pow(k, (P.q + 1) / P.q) * a2).epsilon(1e-12));
    CHECK(c2.A_plus == doctest::Approx(std::pow(k, (P.p + 1) / P.p) * a1 + std::pow(k, (P.q + 1) / P.q) * a2)
                           .epsilon(1e-12));
}

TEST_CASE("T is symmetric") {
    std::mt19937_64 rng(8);
    auto K = std::make_shared<GreenSolver>(build_grid(Domain::annulus(0.3, 1.0), 16, 32));
    const auto& g = K->grid_ptr();
    for (int t = 0; t < 10; ++t) {
        auto a = smooth_random(g, rng), b = smooth_random(g, rng);
        const double ab = inner(a, K->apply_K(b)), ba = inner(b, K->apply_K(a));
        CHECK(std::abs(ab - ba) <= 1e-10 * std::sqrt(inner(a, K->apply_K(a)) * inner(b, K->apply_K(b))));
    }
}

TEST_CASE("theta value, gradient and Hessian") {
    Coeffs c{1, 1, 1, 1, 0.25, 0.25};
    Exponents e{1, 1, 1.5};
    CHECK(theta_value(c, e, 1, 1) == doctest::Approx(0.5).epsilon(1e-15));

    Coeffs r{0.7, 1.3, 0.9, 1.1, 0.2, 0.35};
    Exponents f = exponents({2, 3, 0, 0});
    const double t = 1.3, s = 0.7, h = 1e-5;
    auto ev = theta_eval(r, f, t, s);
    const double gt = (theta_value(r, f, t + h, s) - theta_value(r, f, t - h, s)) / (2 * h);
    const double gs = (theta_value(r, f, t, s + h) - theta_value(r, f, t, s - h)) / (2 * h);
    CHECK(std::abs(ev.grad[0] - gt) <= 1e-6 * std::abs(gt));
    CHECK(std::abs(ev.grad[1] - gs) <= 1e-6 * std::abs(gs));
    auto hp = theta_eval(r, f, t + h, s), hm = theta_eval(r, f, t - h, s);
    const double htt = (hp.grad[0] - hm.grad[0]) / (2 * h), hts = (hp.grad[1] - hm.grad[1]) / (2 * h);
    CHECK(std::abs(ev.hess[0][0] - htt) <= 1e-6 * std::abs(htt));
    CHECK(std::abs(ev.hess[0][1] - hts) <= 1e-6 * std::abs(hts));
    CHECK_THROWS(theta_eval(r, f, 0.0, 1.0));
}

TEST_CASE("N0 membership") {
    auto K = interval_green(128);
    DualSystem sys(K, {3, 3, 0, 0});
    auto phi = eigenpair(*K, 2).function;
    auto in = sys.in_N0({phi, phi});
    CHECK(in.inside);
    CHECK(in.margin_plus > 0.0);

    // w2 = -w1 with the negative part of w1 inflated: the cross terms then
    // outweigh B+ and the pair leaves N0.
    auto [pp, pm] = split_signs(phi);
    bool left = false;
    for (double k = 1.0; k < 1e6 && !left; k *= 2.0) {
        auto w1 = pp - k * pm;
        auto chk = sys.in_N0({w1, -1.0 * w1});
        left = !chk.inside;
    }
    CHECK(left);
}

TEST_CASE("theta tends to minus infinity along the diagonal inside N0") {
    Coeffs c{2.0, 1.0, 1.0, 0.8, 0.3, 0.4};
    Exponents e = exponents({2, 3, 0, 0});
    REQUIRE(in_N0(c, e).inside);
    // For t = s = R: theta <= (A+ + A-) R^gamma - (B+ + B- - C1 - C2) R^2, negative once
    // R^{2-gamma} exceeds (A+ + A-)/(B+ + B- - C1 - C2).
    const double R = 2.0 * std::pow((c.A_plus + c.A_minus) / (c.B_plus + c.B_minus - c.C1 - c.C2), 1 / (2 - e.gamma));
    CHECK(theta_value(c, e, R, R) < 0.0);
}

TEST_CASE("Nehari residuals are the fiber derivatives at (1,1)") {
    auto K = interval_green(128);
    Params P{2, 3, 0, 0};
    DualSystem sys(K, P);
    auto phi = eigenpair(*K, 2).function;
    DualPair w{phi, phi + 0.3 * eigenpair(*K, 3).function};
    auto [rp, rm] = sys.nehari_residuals(w);
    auto ev = theta_eval(sys.coefficients(w), sys.exps(), 1.0, 1.0);
    CHECK(std::abs(rp - ev.grad[0]) <= 1e-10 * std::abs(ev.grad[0]));
    CHECK(std::abs(rm - ev.grad[1]) <= 1e-10 * std::abs(ev.grad[1]));
}

TEST_CASE("I_eps") {
    auto K = interval_green(64);
    DualSystem sys(K, {3, 3, 0, 0});
    auto phi = eigenpair(*K, 2).function;
    DualPair w{phi, phi};
    CHECK(sys.energy_I_eps(w, 0.0) == sys.energy_I(w));
    CHECK(sys.energy_I_eps(w, 1e-3) > sys.energy_I(w));
}

TEST_CASE("pointwise monotonicity of the inverse power") {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> U(-10, 10);
    auto root = [](double x, double p) { return std::copysign(std::pow(std::abs(x), 1 / p), x); };
    for (double p : {0.5, 0.8, 1.0}) {
        for (int k = 0; k < 1000; ++k) {
            const double x = U(rng), y = U(rng);
            const double lhs = (root(x, p) - root(y, p)) * (x - y);
            CHECK(lhs >= std::pow(2.0, (p - 1) / p) * std::pow(std::abs(x - y), (p + 1) / p) * (1 - 1e-12));
        }
    }
    for (double p : {1.0, 2.0, 3.0, 5.0}) {
        for (int k = 0; k < 1000; ++k) {
            const double x = U(rng), y = U(rng);
            const double lhs = (root(x, p) - root(y, p)) * (x - y);
            CHECK(lhs >= (1 / p) * (x - y) * (x - y) * std::pow(std::abs(x) + std::abs(y), 1 / p - 1) * (1 - 1e-12));
        }
    }
}
