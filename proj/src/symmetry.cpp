#include "nodal/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nodal {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double wrap(double a) {
    a = std::fmod(a, two_pi);
    return a < 0.0 ? a + two_pi : a;
}

void require_polar(const Grid& g, const char* what) {
    if (!g.is_polar())
        throw std::invalid_argument(std::string(what) + " needs a 2D polar grid (reflections through the origin)");
}

}  // namespace

std::array<double, 2> HalfSpace::normal() const { return {std::cos(normal_angle), std::sin(normal_angle)}; }
double HalfSpace::boundary_angle() const { return normal_angle + 0.5 * std::numbers::pi; }
bool HalfSpace::contains(double theta) const { return std::cos(theta - normal_angle) >= -1e-12; }

HalfSpace snapped_half_space(const Grid& grid, double normal_angle) {
    require_polar(grid, "snapped_half_space");
    const double b = normal_angle + 0.5 * std::numbers::pi;
    const double snapped = std::round(b / grid.dtheta()) * grid.dtheta();
    return {snapped - 0.5 * std::numbers::pi};
}

double reflect_angle(const HalfSpace& H, double theta) { return wrap(2.0 * H.boundary_angle() - theta); }

double sample_ring(const ScalarField& f, int i, double theta) {
    const Grid& g = f.grid();
    const int nt = g.n_theta();
    const double pos = wrap(theta) / g.dtheta() - 0.5;
    double fl = std::floor(pos);
    double frac = pos - fl;
    // Snap sub-roundoff offsets so node-to-node reflections are exact.
    if (frac < 1e-9) frac = 0.0;
    if (frac > 1.0 - 1e-9) {
        frac = 0.0;
        fl += 1.0;
    }
    const int j0 = ((static_cast<int>(fl) % nt) + nt) % nt;
    const int j1 = (j0 + 1) % nt;
    const double a = f[g.index(i, j0)];
    return frac == 0.0 ? a : (1.0 - frac) * a + frac * f[g.index(i, j1)];
}

ScalarField polarize(const ScalarField& f, const HalfSpace& H) {
    const Grid& g = f.grid();
    require_polar(g, "polarize");
    ScalarField out(f.grid_ptr());
    for (int j = 0; j < g.n_theta(); ++j) {
        const double th = g.theta(j);
        const double c = std::cos(th - H.normal_angle);
        const double refl = reflect_angle(H, th);
        for (int i = 0; i < g.n_r(); ++i) {
            const std::size_t n = g.index(i, j);
            if (std::abs(c) <= 1e-12) {
                out[n] = f[n];
                continue;
            }
            const double other = sample_ring(f, i, refl);
            out[n] = c > 0.0 ? std::max(f[n], other) : std::min(f[n], other);
        }
    }
    return out;
}

KeyEstimate key_estimate(const GreenSolver& green, const ScalarField& u, const ScalarField& v, const HalfSpace& H) {
    require_polar(u.grid(), "key_estimate");
    const auto uH = polarize(u, H);
    const auto vH = polarize(v, H);
    return {inner(u, green.apply_K(v)), inner(uH, green.apply_K(vH))};
}

Axis detect_axis(const ScalarField& w1, int ring) {
    const Grid& g = w1.grid();
    require_polar(g, "detect_axis");
    const int nt = g.n_theta();
    Axis ax;
    ax.ring = ring < 0 ? g.n_r() / 2 : ring;
    if (ax.ring >= g.n_r()) throw std::invalid_argument("ring index out of range");

    int jmax = 0;
    double vmax = -INFINITY, vmin = INFINITY, amax = 0.0;
    for (int j = 0; j < nt; ++j) {
        const double v = w1[g.index(ax.ring, j)];
        if (v > vmax) {
            vmax = v;
            jmax = j;
        }
        vmin = std::min(vmin, v);
        amax = std::max(amax, std::abs(v));
    }
    ax.degenerate = vmax - vmin <= 1e-10 * amax;

    const double fm = w1[g.index(ax.ring, (jmax + nt - 1) % nt)];
    const double f0 = vmax;
    const double fp = w1[g.index(ax.ring, (jmax + 1) % nt)];
    const double curv = fm - 2.0 * f0 + fp;
    double offset = 0.0;
    if (!ax.degenerate && curv < 0.0) offset = std::clamp(0.5 * (fm - fp) / curv, -0.5, 0.5);
    ax.angle = wrap(g.theta(jmax) + offset * g.dtheta());
    ax.direction = {std::cos(ax.angle), std::sin(ax.angle)};
    return ax;
}

double foliated_schwarz_score(const ScalarField& f, double axis_angle, int samples, bool snap) {
    const Grid& g = f.grid();
    require_polar(g, "foliated_schwarz_score");
    if (samples < 1) throw std::invalid_argument("need at least one half-space sample");
    const double scale = f.max_abs();
    if (scale == 0.0) return 0.0;

    double score = 0.0;
    for (int m = 1; m <= samples; ++m) {
        const double offset = -0.5 * std::numbers::pi + std::numbers::pi * m / (samples + 1);
        HalfSpace H{axis_angle + offset};
        if (snap) {
            H = snapped_half_space(g, H.normal_angle);
            // Keep the axis strictly inside H after snapping.
            if (std::cos(H.normal_angle - axis_angle) <= 1e-12) continue;
        }
        const auto fH = polarize(f, H);
        for (int j = 0; j < g.n_theta(); ++j) {
            if (!H.contains(g.theta(j))) continue;
            for (int i = 0; i < g.n_r(); ++i) {
                const std::size_t n = g.index(i, j);
                score = std::max(score, std::abs(fH[n] - f[n]) / scale);
            }
        }
    }
    return score;
}

double radial_deviation(const ScalarField& f) {
    const Grid& g = f.grid();
    require_polar(g, "radial_deviation");
    const auto w = g.weights();
    double num = 0.0, den = 0.0;
    for (int i = 0; i < g.n_r(); ++i) {
        double mean = 0.0;
        for (int j = 0; j < g.n_theta(); ++j) mean += f[g.index(i, j)];
        mean /= g.n_theta();
        for (int j = 0; j < g.n_theta(); ++j) {
            const std::size_t n = g.index(i, j);
            num += w[n] * (f[n] - mean) * (f[n] - mean);
            den += w[n] * f[n] * f[n];
        }
    }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

double component_gap(const PrimalPair& uv) {
    const double scale = std::max(uv.u.max_abs(), uv.v.max_abs());
    if (scale == 0.0) return 0.0;
    return (uv.u - uv.v).max_abs() / scale;
}

SymmetryReport analyze_symmetry(const PrimalPair& uv, const DualPair& w, int samples) {
    SymmetryReport rep;
    rep.component_gap = component_gap(uv);
    if (!uv.u.grid().is_polar()) return rep;
    rep.axis = detect_axis(w.w1);
    rep.fs_score_u = foliated_schwarz_score(uv.u, rep.axis.angle, samples);
    rep.fs_score_v = foliated_schwarz_score(uv.v, rep.axis.angle, samples);
    rep.fs_score = std::max(rep.fs_score_u, rep.fs_score_v);
    rep.radial_deviation_u = radial_deviation(uv.u);
    rep.radial_deviation_v = radial_deviation(uv.v);
    return rep;
}

}  // namespace nodal
