#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nodal/symmetry.hpp"

using namespace nodal;
using std::numbers::pi;

namespace {

GridPtr disk() { return build_grid(Domain::disk(), 24, 64); }

ScalarField smooth_random(const GridPtr& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-1, 1);
    double c[7];
    for (double& x : c) x = U(rng);
    return ScalarField::from_function(g, [&](double r, double th) {
        return (1 - r * r) * (c[0] + c[1] * r * std::cos(th) + c[2] * r * std::sin(th) + c[3] * r * r * std::cos(2 * th) +
                              c[4] * r * r * std::sin(2 * th) + c[5] * std::sin(4 * r) + c[6] * r * r * r * std::cos(3 * th));
    });
}

double max_diff(const ScalarField& a, const ScalarField& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("polarisation fixes fields that decrease away from the normal") {
    auto g = disk();
    const double a = 0.6;
    auto f = ScalarField::from_function(g, [&](double r, double th) { return (1 - r) * (2 + std::cos(th - a)); });
    auto H = snapped_half_space(*g, a);
    CHECK(max_diff(polarize(f, H), f) <= 1e-12 * f.max_abs());
}

TEST_CASE("polarisation identities at exact nodes") {
    auto g = disk();
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> U(0, 2 * pi);
    for (int t = 0; t < 20; ++t) {
        auto f = smooth_random(g, rng);
        auto H = snapped_half_space(*g, U(rng));
        auto fH = polarize(f, H);
        const double s = f.max_abs();
        CHECK(max_diff(polarize(fH, H), fH) <= 1e-12 * s);

        auto [fp, fm] = split_signs(f);
        auto [hp, hm] = split_signs(fH);
        CHECK(max_diff(hp, polarize(fp, H)) <= 1e-12 * s);
        CHECK(max_diff(hm, -1.0 * polarize(-1.0 * fm, H)) <= 1e-12 * s);

        const double A = 1.7, B = 0.4;
        CHECK(max_diff(polarize(A * fp - B * fm, H), A * hp - B * hm) <= 1e-12 * s);

        // Polarisation permutes values on each circle, so radial integrands are preserved.
        auto w = henon_weight(g, 0.5);
        for (double pw : {2.0, 4.0}) {
            auto F = [&](const ScalarField& x) {
                ScalarField y = x;
                for (std::size_t n = 0; n < y.size(); ++n) y[n] = w[n] * std::pow(std::abs(x[n]), pw);
                return integrate(y);
            };
            CHECK(std::abs(F(fH) - F(f)) <= 1e-12 * F(f));
        }
    }
}

TEST_CASE("key estimate") {
    auto g = disk();
    GreenSolver K(g);
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> U(0, 2 * pi);
    for (int t = 0; t < 30; ++t) {
        auto u = smooth_random(g, rng), v = smooth_random(g, rng);
        auto k = key_estimate(K, u, v, snapped_half_space(*g, U(rng)));
        const double scale = std::sqrt(inner(u, K.apply_K(u)) * inner(v, K.apply_K(v)));
        CHECK(k.lhs <= k.rhs + 1e-8 * scale);
    }

    // Fields symmetric across the boundary line are fixed, so both sides agree.
    auto H = snapped_half_space(*g, 0.0);
    const double b = H.boundary_angle();
    auto sym = ScalarField::from_function(g, [&](double r, double th) { return (1 - r * r) * (1 + std::cos(2 * (th - b))); });
    auto ks = key_estimate(K, sym, sym, H);
    CHECK(std::abs(ks.lhs - ks.rhs) <= 1e-10 * std::abs(ks.lhs));

    // u = -v odd across the boundary: polarisation strictly raises the pairing.
    auto odd = ScalarField::from_function(g, [&](double r, double th) { return (1 - r * r) * std::sin(th - b); });
    auto ko = key_estimate(K, odd, -1.0 * odd, H);
    CHECK(ko.rhs - ko.lhs > 1e-3 * std::abs(ko.lhs));
}

TEST_CASE("axis detection") {
    auto g = disk();
    for (double th0 : {0.3, 2.0, 4.5}) {
        auto w = ScalarField::from_function(g, [&](double r, double th) { return r * (1 - r) * std::cos(th - th0); });
        auto ax = detect_axis(w);
        CHECK_FALSE(ax.degenerate);
        const double d = std::abs(std::remainder(ax.angle - th0, 2 * pi));
        CHECK(d <= g->dtheta());
        CHECK(std::hypot(ax.direction[0] - std::cos(th0), ax.direction[1] - std::sin(th0)) <= g->dtheta());
    }
    // Rotating the field by a whole number of cells rotates the axis by the same angle.
    auto f = ScalarField::from_function(g, [](double r, double th) { return r * (1 - r) * std::exp(std::cos(th - 1.0)); });
    const int shift = 5;
    ScalarField rot(g);
    for (int i = 0; i < g->n_r(); ++i)
        for (int j = 0; j < g->n_theta(); ++j) rot[g->index(i, (j + shift) % g->n_theta())] = f[g->index(i, j)];
    const double moved = detect_axis(rot).angle - detect_axis(f).angle;
    CHECK(std::abs(std::remainder(moved - shift * g->dtheta(), 2 * pi)) <= g->dtheta());

    auto radial = ScalarField::from_function(g, [](double r, double) { return 1 - r * r; });
    CHECK(detect_axis(radial).degenerate);
}

TEST_CASE("foliated Schwarz score") {
    auto g = disk();
    const double a = 0.9;
    auto good = ScalarField::from_function(g, [&](double r, double th) { return r * (1 - r) * std::cos(th - a); });
    CHECK(foliated_schwarz_score(good, a) <= 1e-12);
    auto bad = ScalarField::from_function(g, [&](double r, double th) { return r * (1 - r) * std::cos(2 * (th - a)); });
    CHECK(foliated_schwarz_score(bad, a) > 0.1);
    // Rotation equivariance.
    auto rotated = ScalarField::from_function(g, [&](double r, double th) { return r * (1 - r) * std::cos(th - a - 1.3); });
    CHECK(foliated_schwarz_score(rotated, a + 1.3) <= 1e-12);
}

TEST_CASE("radial deviation and component gap") {
    auto g = disk();
    auto radial = ScalarField::from_function(g, [](double r, double) { return std::cos(r); });
    CHECK(radial_deviation(radial) <= 1e-14);
    auto c = ScalarField::from_function(g, [](double, double th) { return std::cos(th); });
    CHECK(radial_deviation(c) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(radial_deviation(ScalarField(g)) == 0.0);
    CHECK(component_gap({c, c}) == 0.0);
    CHECK(component_gap({ScalarField(g), ScalarField(g)}) == 0.0);
    CHECK(component_gap({c, 0.5 * c}) == doctest::Approx(0.5));
}

TEST_CASE("polarisation needs a polar grid") {
    auto g = build_grid(Domain::interval(), 16, 1);
    CHECK_THROWS_AS(polarize(ScalarField(g, 1.0), HalfSpace{0.0}), std::invalid_argument);
}
