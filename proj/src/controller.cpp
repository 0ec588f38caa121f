#include "myopic/controller.hpp"

#include <cmath>
#include <limits>

namespace myopic {

OptimizerMode optimizer_mode_from_string(const std::string& name) {
    if (name == "vertex") return OptimizerMode::vertex;
    if (name == "grid") return OptimizerMode::grid;
    if (name == "vertex-then-grid") return OptimizerMode::vertex_then_grid;
    throw std::invalid_argument("unknown optimizer mode: " + name);
}

std::string to_string(OptimizerMode mode) {
    switch (mode) {
        case OptimizerMode::vertex: return "vertex";
        case OptimizerMode::grid: return "grid";
        case OptimizerMode::vertex_then_grid: return "vertex-then-grid";
    }
    return "?";
}

double CycleConfig::resolved_step(bool decoupled) const {
    if (integrator_step) {
        if (*integrator_step <= 0.0)
            throw std::invalid_argument("CycleConfig: integrator_step must be positive");
        return *integrator_step;
    }
    if (decoupled) {
        if (!learn_window)
            throw std::invalid_argument("CycleConfig: learn_window required for the decoupled loop");
        return std::min(*learn_window, 1e-3);
    }
    return std::min(epsilon / 10.0, 1e-4);
}

namespace {

bool lex_less(const Vector& a, const Vector& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

// ties go to the least actuation (smallest max-norm), then lexicographic;
// degenerate scores (for instance a total tie inside a satisfied objective)
// then hold the trim control instead of slamming an arbitrary vertex
struct Best {
    Vector u;
    double value = -std::numeric_limits<double>::infinity();
    bool any = false;

    void offer(const Vector& cand, double val) {
        bool better = false;
        if (!any || val > value) {
            better = true;
        } else if (val == value) {
            double cn = cand.cwiseAbs().maxCoeff();
            double bn = u.cwiseAbs().maxCoeff();
            better = cn < bn || (cn == bn && lex_less(cand, u));
        }
        if (better) {
            u = cand;
            value = val;
            any = true;
        }
    }
};

} // namespace

std::pair<Vector, double> maximize_goodness(const GoodnessFunction& G, const Trajectory& history,
                                            const LocalAffineModel& model,
                                            const OptimizerSpec& spec) {
    int m = static_cast<int>(model.g_tilde.size());
    double t = history.duration();
    if (std::abs(t - model.anchor_time) > 1e-9 * std::max(1.0, std::abs(model.anchor_time)))
        throw std::invalid_argument("maximize_goodness: history must end at the model anchor time");

    bool use_vertices = spec.mode != OptimizerMode::grid;
    bool use_grid = spec.mode != OptimizerMode::vertex;
    if (use_vertices && m > 20)
        throw std::invalid_argument("maximize_goodness: vertex scan refuses m > 20 inputs");
    if (use_grid && spec.grid_points_per_axis < 2)
        throw std::invalid_argument("maximize_goodness: grid needs at least 2 points per axis");
    if (use_grid && m * std::log(static_cast<double>(spec.grid_points_per_axis)) > std::log(2e7))
        throw std::invalid_argument("maximize_goodness: grid lattice too large");

    Best best;
    Vector u(m);
    auto offer = [&](const Vector& cand) { best.offer(cand, G.eval(history, model.predict(cand))); };

    offer(Vector::Zero(m)); // trim is always a candidate
    if (use_vertices) {
        // counter bits map to axes with axis 0 most significant: ascending
        // counter order is ascending lexicographic order over vertices
        unsigned long count = 1ul << m;
        for (unsigned long c = 0; c < count; ++c) {
            for (int i = 0; i < m; ++i)
                u[i] = (c >> (m - 1 - i)) & 1ul ? 1.0 : -1.0;
            offer(u);
        }
    }
    if (use_grid) {
        int g = spec.grid_points_per_axis;
        std::vector<int> digit(static_cast<std::size_t>(m), 0);
        bool done = false;
        while (!done) {
            for (int i = 0; i < m; ++i)
                u[i] = -1.0 + 2.0 * digit[static_cast<std::size_t>(i)] / (g - 1);
            offer(u);
            int axis = m - 1;
            while (axis >= 0) {
                if (++digit[static_cast<std::size_t>(axis)] < g) break;
                digit[static_cast<std::size_t>(axis)] = 0;
                --axis;
            }
            if (axis < 0) done = true;
        }
    }
    return {best.u, best.value};
}

namespace {

// splice a locally-timed trajectory onto the end of the global one; the local
// first sample duplicates the global last sample and is dropped
void append_shifted(Trajectory& global, const Trajectory& local, double t_offset) {
    if (local.empty()) return;
    if (!global.empty() && !local.controls.empty())
        global.controls.back() = local.controls.front();
    for (std::size_t i = 1; i < local.size(); ++i)
        global.append(t_offset + local.times[i], local.states[i], local.controls[i]);
    if (!global.first_box_exit && local.first_box_exit)
        global.first_box_exit = t_offset + *local.first_box_exit;
}

// probe sequence truncated at t_left; used for run tails shorter than a cycle
Trajectory integrate_truncated_probes(const ControlAffineSystem& sys, const ControlSpace& space,
                                      const Vector& x0, const PerturbationSchedule& schedule,
                                      double epsilon, double step, double t_left) {
    PiecewiseConstantLaw law;
    for (int j = 0; j <= schedule.input_dim(); ++j) {
        law.breakpoints.push_back(static_cast<double>(j) * epsilon);
        law.values.push_back(space.denormalize(schedule.probe(static_cast<std::size_t>(j))));
    }
    return integrate(sys, x0, law, t_left, std::min(step, epsilon));
}

} // namespace

ControllerRun run_myopic_controller(const ControlAffineSystem& sys, const ControlSpace& space,
                                    const Vector& x0, const GoodnessFunction& G,
                                    const CycleConfig& config, double t_end) {
    if (config.epsilon <= 0.0)
        throw std::invalid_argument("run_myopic_controller: epsilon must be positive");
    if (!(config.delta > 0.0 && config.delta <= 1.0))
        throw std::invalid_argument("run_myopic_controller: delta must lie in (0,1]");
    int m = sys.input_dim;
    double cycle_len = static_cast<double>(m + 1) * config.epsilon;
    double time_tol = 1e-9 * std::max(1.0, t_end);
    if (t_end + time_tol < cycle_len)
        throw std::invalid_argument("run_myopic_controller: t_end must cover one full cycle");
    double step = config.resolved_step(false);

    ControllerRun out;
    Trajectory& traj = out.trajectory;
    traj.reserve(static_cast<std::size_t>(t_end / step * 1.05) + 64);

    Vector u_star = Vector::Zero(m);
    traj.append(0.0, x0, space.denormalize(u_star));
    if (!sys.in_operating_box(x0)) traj.first_box_exit = 0.0;

    double t0 = 0.0;
    int k = 0;
    while (t0 + cycle_len <= t_end + time_tol) {
        auto schedule = choose_perturbations(u_star, config.delta);
        LearningCycle cycle;
        try {
            cycle = run_learning_cycle(sys, space, traj.states.back(), schedule, config.epsilon,
                                       std::min(step, config.epsilon));
        } catch (const DivergenceError& e) {
            append_shifted(traj, e.partial, t0);
            out.divergence = DivergenceReport{t0 + e.time, e.last_state, e.what()};
            return out;
        }
        append_shifted(traj, cycle.trajectory, t0);
        double anchor_time = traj.times.back();
        auto model = fit_local_model(cycle.probe_states, schedule, config.epsilon, anchor_time);
        auto [u_next, value] = maximize_goodness(G, traj, model, config.optimizer);
        out.records.push_back(CycleRecord{k, anchor_time, model.anchor_state, model, u_next, value,
                                          cycle.probe_states});
        u_star = std::move(u_next);
        t0 = anchor_time;
        ++k;
    }

    double remaining = t_end - t0;
    if (remaining > time_tol) {
        auto schedule = choose_perturbations(u_star, config.delta);
        try {
            Trajectory tail = integrate_truncated_probes(sys, space, traj.states.back(), schedule,
                                                         config.epsilon, step, remaining);
            append_shifted(traj, tail, t0);
        } catch (const DivergenceError& e) {
            append_shifted(traj, e.partial, t0);
            out.divergence = DivergenceReport{t0 + e.time, e.last_state, e.what()};
        }
    }
    return out;
}

ControllerRun run_decoupled_controller(const ControlAffineSystem& sys, const ControlSpace& space,
                                       const Vector& x0, const GoodnessFunction& G,
                                       const CycleConfig& config, double t_end) {
    if (!config.learn_window || *config.learn_window <= 0.0)
        throw std::invalid_argument("run_decoupled_controller: positive learn_window required");
    if (!(config.delta > 0.0 && config.delta <= 1.0))
        throw std::invalid_argument("run_decoupled_controller: delta must lie in (0,1]");
    int m = sys.input_dim;
    double probe_len = static_cast<double>(m + 1) * (*config.learn_window);
    if (!(probe_len < config.cycle_period))
        throw std::invalid_argument(
            "run_decoupled_controller: (m+1) * learn_window must be smaller than cycle_period");
    double time_tol = 1e-9 * std::max(1.0, t_end);
    if (t_end + time_tol < config.cycle_period)
        throw std::invalid_argument("run_decoupled_controller: t_end must cover one full cycle");
    double step = config.resolved_step(true);
    double eps_prime = *config.learn_window;

    ControllerRun out;
    Trajectory& traj = out.trajectory;
    traj.reserve(static_cast<std::size_t>(t_end / step * 1.05) + 64);

    Vector u_star = Vector::Zero(m);
    traj.append(0.0, x0, space.denormalize(u_star));
    if (!sys.in_operating_box(x0)) traj.first_box_exit = 0.0;

    auto probe_and_choose = [&](double t0, int k) -> bool {
        auto schedule = choose_perturbations(u_star, config.delta);
        LearningCycle cycle;
        try {
            cycle = run_learning_cycle(sys, space, traj.states.back(), schedule, eps_prime,
                                       std::min(step, eps_prime));
        } catch (const DivergenceError& e) {
            append_shifted(traj, e.partial, t0);
            out.divergence = DivergenceReport{t0 + e.time, e.last_state, e.what()};
            return false;
        }
        append_shifted(traj, cycle.trajectory, t0);
        double anchor_time = traj.times.back();
        auto model = fit_local_model(cycle.probe_states, schedule, eps_prime, anchor_time);
        auto [u_next, value] = maximize_goodness(G, traj, model, config.optimizer);
        out.records.push_back(CycleRecord{k, anchor_time, model.anchor_state, model, u_next, value,
                                          cycle.probe_states});
        u_star = std::move(u_next);
        return true;
    };

    auto hold = [&](double t0, double duration) -> bool {
        PiecewiseConstantLaw law;
        law.breakpoints.push_back(0.0);
        law.values.push_back(space.denormalize(u_star));
        try {
            Trajectory held = integrate(sys, traj.states.back(), law, duration, step);
            append_shifted(traj, held, t0);
        } catch (const DivergenceError& e) {
            append_shifted(traj, e.partial, t0);
            out.divergence = DivergenceReport{t0 + e.time, e.last_state, e.what()};
            return false;
        }
        return true;
    };

    double t0 = 0.0;
    int k = 0;
    while (t0 + config.cycle_period <= t_end + time_tol) {
        if (!probe_and_choose(t0, k)) return out;
        double probe_end = traj.times.back();
        if (!hold(probe_end, t0 + config.cycle_period - probe_end)) return out;
        t0 = traj.times.back();
        ++k;
    }

    // tail: complete the probe window and hold if it fits, else truncated probes
    double remaining = t_end - t0;
    if (remaining > time_tol) {
        if (remaining >= probe_len - time_tol) {
            if (!probe_and_choose(t0, k)) return out;
            double probe_end = traj.times.back();
            double hold_left = t_end - probe_end;
            if (hold_left > time_tol && !hold(probe_end, hold_left)) return out;
        } else {
            auto schedule = choose_perturbations(u_star, config.delta);
            try {
                Trajectory tail = integrate_truncated_probes(sys, space, traj.states.back(),
                                                             schedule, eps_prime, step, remaining);
                append_shifted(traj, tail, t0);
            } catch (const DivergenceError& e) {
                append_shifted(traj, e.partial, t0);
                out.divergence = DivergenceReport{t0 + e.time, e.last_state, e.what()};
            }
        }
    }
    return out;
}

} // namespace myopic
