#ifndef MYOPIC_CONTROLLER_HPP
#define MYOPIC_CONTROLLER_HPP

#include "myopic/goodness.hpp"
#include "myopic/learner.hpp"

namespace myopic {

enum class OptimizerMode { vertex, grid, vertex_then_grid };

OptimizerMode optimizer_mode_from_string(const std::string& name);
std::string to_string(OptimizerMode mode);

/**
 * How the per-cycle argmax over [-1,1]^m is taken. Vertex mode scans the 2^m
 * cube vertices and is exact whenever the score is affine in the velocity;
 * grid mode scans a full lattice and is the fallback for other scores.
 * Ties always go to the lexicographically smallest control.
 */
struct OptimizerSpec {
    OptimizerMode mode = OptimizerMode::vertex;
    int grid_points_per_axis = 33;
};

/**
 * Learn-control cycle parameters. `epsilon`/`delta` drive the coupled loop;
 * the decoupled loop probes for (m+1) * learn_window seconds and then holds
 * the chosen control until cycle_period has elapsed. When integrator_step is
 * unset the coupled loop uses min(epsilon / 10, 1e-4) and the decoupled loop
 * min(learn_window, 1e-3).
 */
struct CycleConfig {
    double epsilon = 0.0;
    double delta = 0.0;
    std::optional<double> learn_window; // per-probe duration of the decoupled loop
    double cycle_period = 0.0;          // decoupled loop only
    std::optional<double> integrator_step;
    OptimizerSpec optimizer;

    double resolved_step(bool decoupled) const;
};

struct CycleRecord {
    int cycle_index = 0;
    double anchor_time = 0.0;
    Vector anchor_state;
    LocalAffineModel model;
    Vector chosen_control; // normalized
    double chosen_goodness = 0.0;
    std::vector<Vector> probe_states;
};

struct DivergenceReport {
    double time = 0.0;
    Vector last_state;
    std::string message;
};

struct ControllerRun {
    Trajectory trajectory;
    std::vector<CycleRecord> records;
    std::optional<DivergenceReport> divergence;
};

/**
 * argmax of G(history, model.predict(u)) over the configured candidate set.
 * Returns the winning normalized control and its score. Vertex modes refuse
 * m > 20.
 */
std::pair<Vector, double> maximize_goodness(const GoodnessFunction& G, const Trajectory& history,
                                            const LocalAffineModel& model,
                                            const OptimizerSpec& spec);

/**
 * Coupled learn-control loop: starting from u* = 0, each (m+1) epsilon cycle
 * applies the wiggled probes around the current u*, fits the local model and
 * re-selects u*. On divergence the partial trajectory and records are
 * returned with the report attached.
 */
ControllerRun run_myopic_controller(const ControlAffineSystem& sys, const ControlSpace& space,
                                    const Vector& x0, const GoodnessFunction& G,
                                    const CycleConfig& config, double t_end);

/**
 * Decoupled variant: per cycle, probe for (m+1) * learn_window seconds, then
 * hold the freshly selected u* unperturbed for the rest of cycle_period.
 */
ControllerRun run_decoupled_controller(const ControlAffineSystem& sys, const ControlSpace& space,
                                       const Vector& x0, const GoodnessFunction& G,
                                       const CycleConfig& config, double t_end);

} // namespace myopic

#endif
