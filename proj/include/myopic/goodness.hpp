#ifndef MYOPIC_GOODNESS_HPP
#define MYOPIC_GOODNESS_HPP

#include <functional>
#include <utility>

#include "myopic/types.hpp"

namespace myopic {

/**
 * Region of the state space described by a signed distance: negative inside,
 * positive outside, zero on the boundary. `gradient` may be empty; consumers
 * fall back to a one-sided finite difference when it is.
 */
struct Region {
    std::function<double(const Vector&)> signed_distance;
    std::function<Vector(const Vector&)> gradient; // optional, may be null
    std::string label;

    bool contains(const Vector& x) const { return signed_distance(x) <= 0.0; }

    /// Plain (unsigned) distance to the region: max(signed_distance, 0).
    double outside_distance(const Vector& x) const;

    static Region ball(Vector center, double radius);
    /// Half-space {x : normal . x <= offset}.
    static Region halfspace(Vector normal, double offset);
    static Region box(Vector lower, Vector upper);
    /// Slab lo <= x[axis] <= hi in a dim-dimensional state space.
    static Region axis_band(int axis, double lo, double hi);
};

/**
 * Score of (trajectory so far, candidate velocity): larger means the motion
 * looks better for the control objective. `lipschitz`, when present, bounds
 * |G(a,v1) - G(b,v2)| by L * (trajectory_distance(a,b) + |v1 - v2|).
 */
struct GoodnessFunction {
    std::function<double(const Trajectory&, const Vector&)> eval;
    std::optional<double> lipschitz;
    std::string label;

    double operator()(const Trajectory& history, const Vector& v) const { return eval(history, v); }
};

/**
 * Pseudo-metric between two sampled paths:
 *   |T1 - T2| + max over [0, min(T1,T2)] of |phi1(t) - phi2(t)|,
 * the sup taken on the union of the two sample grids with piecewise-linear
 * interpolation in between.
 */
double trajectory_distance(const Trajectory& a, const Trajectory& b);

/// v2 / v1, the climb slope of a 2-D path; returns -1e12 when v1 <= 1e-9.
GoodnessFunction slope_goodness();

/**
 * Rate of change of the distance to `region` along v at the current state:
 * gradient . v where an analytic gradient exists and the state is outside,
 * otherwise the forward difference (d(x + v dt) - d(x)) / dt with dt = probe_dt.
 * Positive values mean the motion recedes from the region.
 */
GoodnessFunction distance_rate_goodness(Region region, double probe_dt = 1e-6);

/**
 * Two-zone reach-avoid score: in the boundary zone (outside `interior`) reward
 * approaching the interior; inside it reward approaching `target`.
 */
GoodnessFunction zone_goodness(Region interior, Region target, double probe_dt = 1e-6);

/**
 * Blended reach-avoid score: (1 - lambda) * (rate away from `bad`)
 * - lambda * (rate toward `target`), lambda = clamp(d_bad(x) / d_bad_max, 0, 1).
 */
GoodnessFunction mixed_goodness(Region bad, Region target, double d_bad_max,
                                double probe_dt = 1e-6);

/**
 * Sequential reach score: delegates to the stage with the smallest index whose
 * target the trajectory has never visited; after all targets are visited the
 * final stage's score applies permanently.
 */
GoodnessFunction sequential_goodness(std::vector<std::pair<Region, GoodnessFunction>> stages);

/**
 * Piecewise score for the damaged-aircraft benchmark, on the 5-state model
 * (w_l, w_v, q, theta, h) with climb rate hdot = -x2 + 2.21 x4:
 *
 *   h < 100                                   ->  v3 - v2
 *   |theta| > 40 or |hdot| > 30
 *     or h in [900, 1100]                     ->  m1 + m2 with
 *        m1 = -v2 sign(x2) if |x2| > 2 else 0,
 *        m2 = -v3 sign(x4) if |x4| > 2 else 0
 *   otherwise                                 ->  (v3 - v2) * sign(1000 - h)
 */
GoodnessFunction aircraft_goodness();

/// -v2 * atan(x2(T)) for the Van der Pol benchmark; Lipschitz constant 29 on [-5,5]^2.
GoodnessFunction vanderpol_goodness();

} // namespace myopic

#endif
