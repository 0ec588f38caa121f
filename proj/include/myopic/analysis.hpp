#ifndef MYOPIC_ANALYSIS_HPP
#define MYOPIC_ANALYSIS_HPP

#include "myopic/controller.hpp"
#include "myopic/goodness.hpp"

namespace myopic {

/// Constants entering the closed-form performance bounds.
struct BoundInputs {
    double L = 0.0;  // goodness Lipschitz constant
    double M0 = 0.0; // plant norm bound
    double M1 = 0.0; // plant Lipschitz bound
    int m = 0;       // input dimension
    double epsilon = 0.0;
    double delta = 0.0;
};

/**
 * Per-cycle myopic suboptimality bound
 *   6 L (M0+1)(M1+1)(m+1)^3 (1 + 4 m sqrt(m) / delta) epsilon
 *   + L M0 (m+1) delta.
 */
double suboptimality_bound(const BoundInputs& b);

/**
 * Bound for a chosen control carried to another point of the run:
 *   2 L traj_dist + 2 L M1 (m+1) state_dist + 2 L nu,
 * plus L M0 (m+1) delta when the applied control still carries the wiggle.
 */
double intermediate_bound(const BoundInputs& b, double traj_dist, double state_dist, double nu,
                          bool include_wiggle);

/**
 * Smallest-effort (epsilon, delta) with suboptimality_bound <= eta: half the
 * budget goes to each bound term, delta = min(1, eta / (2 L M0 (m+1))) and
 * epsilon chosen to spend the other half.
 */
std::pair<double, double> select_parameters(double L, double M0, double M1, int m, double eta);

/**
 * First time the sampled path is inside `bad` (signed distance <= 0), with the
 * crossing refined by bisection on the linear interpolant to 1/100 of the
 * sample spacing. Empty when the path never enters.
 */
std::optional<double> first_bad_time(const Trajectory& traj, const Region& bad);

/**
 * Smallest sample time T' such that every sample in [T', t_end] lies inside
 * `target`; empty when the final sample is outside.
 */
std::optional<double> reach_time(const Trajectory& traj, const Region& target, double t_end);

struct GapEntry {
    double time = 0.0;
    double realized = 0.0;
    double oracle_max = 0.0;
    double gap = 0.0; // oracle_max - realized
};

/// Realized-vs-ideal goodness per cycle, measured with the true dynamics.
struct GapTrace {
    std::vector<GapEntry> entries;
    std::optional<double> bound; // suboptimality_bound when the constants are known

    double max_gap() const;
};

/**
 * For each cycle anchor (t, x): the best true-dynamics goodness over the
 * normalized cube (oracle_grid points per axis plus all vertices) against the
 * goodness realized by the chosen control, both via evaluate_rhs. Only this
 * oracle touches the true dynamics; the controller never does.
 */
GapTrace oracle_gap_trace(const ControlAffineSystem& sys, const ControlSpace& space,
                          const std::vector<CycleRecord>& records, const Trajectory& traj,
                          const GoodnessFunction& G, int oracle_grid = 101,
                          std::optional<BoundInputs> bound_inputs = std::nullopt);

} // namespace myopic

#endif
