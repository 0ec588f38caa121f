#ifndef MYOPIC_DYNAMICS_HPP
#define MYOPIC_DYNAMICS_HPP

#include <functional>
#include <utility>

#include "myopic/types.hpp"

namespace myopic {

/**
 * Control-affine plant  xdot = f(x) + sum_i g_i(x) u_i.
 *
 * bound_norm (M0) and bound_lipschitz (M1) are declared for the plant seen
 * through the normalized control cube [-1,1]^m: the effective input maps
 * absorb the per-axis half-widths of the control box, and the effective
 * drift absorbs the box center. Both bounds are declared over the operating
 * box [box_lower, box_upper] when one is given; outside it they carry no
 * guarantee and the integrator flags the exit on the trajectory.
 */
struct ControlAffineSystem {
    int state_dim = 0;
    int input_dim = 0;
    std::function<Vector(const Vector&)> drift;
    std::vector<std::function<Vector(const Vector&)>> input_maps;
    double bound_norm = 0.0;      // M0
    double bound_lipschitz = 0.0; // M1
    std::optional<Vector> box_lower;
    std::optional<Vector> box_upper;

    bool in_operating_box(const Vector& x) const;
};

/// Right-hand side f(x) + sum g_i(x) u_i for a physical control u.
Vector evaluate_rhs(const ControlAffineSystem& sys, const Vector& x, const Vector& u);

/**
 * Fixed-step classical RK4 under a piecewise-constant law.
 *
 * Steps never cross a law breakpoint: within each law interval the stepper
 * marches at `step` and the final step of the interval is clipped so the
 * breakpoint (and t_end) appear exactly as sample times. Deterministic for
 * identical inputs. Throws DivergenceError when the state stops being finite,
 * carrying the last finite sample and the partial trajectory.
 */
Trajectory integrate(const ControlAffineSystem& sys, const Vector& x0,
                     const PiecewiseConstantLaw& law, double t_end, double step);

/**
 * Fold a time-varying disturbance N(t, x) into an autonomous control-affine
 * system on the extended state [x; tau], tau(0) = 0:
 *
 *   drift      = [f(x) + N(tau, x); 1]
 *   input maps = [g_i(x); 0]
 *   M0' = max(M0 + M0*, 1),  M1' = M1 + M1*.
 */
ControlAffineSystem augment_with_disturbance(
    const ControlAffineSystem& sys,
    std::function<Vector(double, const Vector&)> disturbance,
    double bound_norm_star, double bound_lipschitz_star);

/// Damaged-aircraft benchmark: 5 states, inputs (elevator, thrust) in [-30,30]x[-1,1].
std::pair<ControlAffineSystem, ControlSpace> make_aircraft();

/// Controlled Van der Pol oscillator: 2 states, scalar input in [-2,2];
/// M0 = 250, M1 = 99 on the operating box [-5,5]^2.
std::pair<ControlAffineSystem, ControlSpace> make_vanderpol();

} // namespace myopic

#endif
