#ifndef MYOPIC_LEARNER_HPP
#define MYOPIC_LEARNER_HPP

#include "myopic/dynamics.hpp"
#include "myopic/types.hpp"

namespace myopic {

/**
 * Probe plan for one learning cycle, in normalized control coordinates.
 * deltas[0] = 0 and deltas[i] = +-wiggle * e_{i-1}, so the m+1 probes
 * base + deltas[j] are affinely independent and stay inside [-1,1]^m.
 */
struct PerturbationSchedule {
    Vector base;                // u* in [-1,1]^m
    std::vector<Vector> deltas; // m+1 entries
    double wiggle = 0.0;        // delta in (0,1]

    int input_dim() const { return static_cast<int>(base.size()); }
    Vector probe(std::size_t j) const { return base + deltas[j]; }
};

/**
 * Affine approximation v(u) = f_tilde + sum_i g_tilde_i u_i of the velocity
 * field at anchor_state, valid for normalized controls.
 */
struct LocalAffineModel {
    Vector f_tilde;
    std::vector<Vector> g_tilde;
    Vector anchor_state;
    double anchor_time = 0.0;

    Vector predict(const Vector& u_normalized) const;
};

/// Wiggle directions around u*: -delta e_i when u*_i >= 0, +delta e_i otherwise.
PerturbationSchedule choose_perturbations(const Vector& u_star, double delta);

struct LearningCycle {
    std::vector<Vector> probe_states; // x^0 ... x^{m+1}
    Trajectory trajectory;            // local time [0, (m+1) epsilon]
};

/**
 * Apply probe j on [j epsilon, (j+1) epsilon) for j = 0..m, starting from x0.
 * Controls are denormalized through `space` before they reach the plant.
 */
LearningCycle run_learning_cycle(const ControlAffineSystem& sys, const ControlSpace& space,
                                 const Vector& x0, const PerturbationSchedule& schedule,
                                 double epsilon, double step);

/**
 * Unique affine interpolant through the probe finite differences
 * (x^{j+1} - x^j) / epsilon at the probe controls. Throws SingularFitError
 * when the schedule is not of the canonical affinely-independent form.
 */
LocalAffineModel fit_local_model(const std::vector<Vector>& probe_states,
                                 const PerturbationSchedule& schedule, double epsilon,
                                 double anchor_time = -1.0);

/// Learning error bound 2 M0 M1 (m+1)^3 epsilon (4 m^{3/2} + delta) / delta.
double learning_error_bound(double M0, double M1, int m, double epsilon, double delta);

/// Probe displacement bound M0 (m+1) |j - k| epsilon.
double displacement_bound(double M0, int m, double epsilon, int j, int k);

} // namespace myopic

#endif
