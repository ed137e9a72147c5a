#pragma once

#include "nodal/dual_energy.hpp"

namespace nodal::detail {

// Sign parts of a dual pair together with their images under K, so that any
// point of the two-parameter fiber and its gradient can be formed without
// further linear solves.
struct Fiber {
    ScalarField w1p, w1m, w2p, w2m;
    ScalarField Kw1p, Kw1m, Kw2p, Kw2m;
    Coeffs coeffs;  // A+- include the eps gradient terms when eps > 0
    double eps = 0.0;
};

Fiber make_fiber(const DualSystem& sys, const DualPair& w, double eps);

// (t^l w1+ - s^l w1-, t^m w2+ - s^m w2-)
DualPair fiber_point(const Fiber& f, const Exponents& e, double t, double s);
// (K w1, K w2) at the same fiber point.
DualPair fiber_K(const Fiber& f, const Exponents& e, double t, double s);

}  // namespace nodal::detail

#include "nodal/projection.hpp"

namespace nodal::detail {

struct ProjectedFiber {
    Fiber fiber;
    FiberMaximum max;
    N0Check n0;
    DualPair projected;
    DualPair K_projected;
};

// Throws PreconditionError when a sign part vanishes or the pair is outside N0.
ProjectedFiber project_fiber(const DualSystem& sys, const DualPair& w, double eps);

}  // namespace nodal::detail
