#pragma once

#include <array>

#include "nodal/dual_energy.hpp"
#include "nodal/green.hpp"

namespace nodal {

// Closed half-plane {x : x . n >= 0} through the origin, n = (cos a, sin a).
struct HalfSpace {
    double normal_angle = 0.0;
    std::array<double, 2> normal() const;
    // Polar angle of the boundary line (one of its two directions).
    double boundary_angle() const;
    bool contains(double theta) const;
};

// Half-space whose boundary line runs along angular cell faces, so the
// reflection maps grid nodes onto grid nodes and no node lies on the boundary.
HalfSpace snapped_half_space(const Grid& grid, double normal_angle);

// Reflection across the boundary of H, theta -> 2 theta_b - theta, in [0, 2 pi).
double reflect_angle(const HalfSpace& H, double theta);

// Value of f at (r_i, theta), linear in theta between the two nearest angular
// nodes of ring i (periodic).
double sample_ring(const ScalarField& f, int i, double theta);

// f_H = max(f, f o sigma_H) on H and min(f, f o sigma_H) off H.
ScalarField polarize(const ScalarField& f, const HalfSpace& H);

struct KeyEstimate {
    double lhs = 0.0;  // integrate(u K v)
    double rhs = 0.0;  // integrate(u_H K v_H)
};

KeyEstimate key_estimate(const GreenSolver& green, const ScalarField& u, const ScalarField& v, const HalfSpace& H);

struct Axis {
    double angle = 0.0;
    std::array<double, 2> direction{1.0, 0.0};
    bool degenerate = false;
    int ring = 0;
};

// Direction of the maximum of w1 on one ring (default: the middle ring), refined
// below the angular cell size by a parabola through the three nodes around it.
Axis detect_axis(const ScalarField& w1, int ring = -1);

// max over `samples` half-spaces H whose normal lies strictly within pi/2 of
// the axis of |f_H - f|_inf on H, relative to |f|_inf. With `snap` the boundary
// lines are moved onto angular cell faces.
double foliated_schwarz_score(const ScalarField& f, double axis_angle, int samples = 32, bool snap = true);

// |f - angular mean of f|_2 / |f|_2 in the quadrature norm (0 for f = 0).
double radial_deviation(const ScalarField& f);

// |u - v|_inf / max(|u|_inf, |v|_inf) (0 for the zero pair).
double component_gap(const PrimalPair& uv);

struct SymmetryReport {
    Axis axis;
    double fs_score_u = 0.0;
    double fs_score_v = 0.0;
    double fs_score = 0.0;  // max of the two
    double radial_deviation_u = 0.0;
    double radial_deviation_v = 0.0;
    double component_gap = 0.0;
};

// Axis from w1; scores for u and v. On non-polar grids only the component gap
// is computed.
SymmetryReport analyze_symmetry(const PrimalPair& uv, const DualPair& w, int samples = 32);

}  // namespace nodal
