#include "myopic/learner.hpp"

#include <algorithm>
#include <cmath>

namespace myopic {

Vector LocalAffineModel::predict(const Vector& u_normalized) const {
    if (u_normalized.size() != static_cast<Eigen::Index>(g_tilde.size()))
        throw std::invalid_argument("LocalAffineModel::predict: control dimension mismatch");
    Vector v = f_tilde;
    for (std::size_t i = 0; i < g_tilde.size(); ++i)
        v += g_tilde[i] * u_normalized[static_cast<Eigen::Index>(i)];
    return v;
}

PerturbationSchedule choose_perturbations(const Vector& u_star, double delta) {
    if (!(delta > 0.0 && delta <= 1.0))
        throw std::invalid_argument("choose_perturbations: delta must lie in (0,1]");
    for (int i = 0; i < u_star.size(); ++i)
        if (u_star[i] < -1.0 || u_star[i] > 1.0)
            throw std::invalid_argument("choose_perturbations: u_star outside [-1,1]^m");

    PerturbationSchedule s;
    s.base = u_star;
    s.wiggle = delta;
    int m = static_cast<int>(u_star.size());
    s.deltas.reserve(static_cast<std::size_t>(m) + 1);
    s.deltas.push_back(Vector::Zero(m));
    for (int i = 0; i < m; ++i) {
        Vector d = Vector::Zero(m);
        d[i] = u_star[i] >= 0.0 ? -delta : delta;
        s.deltas.push_back(std::move(d));
    }
    return s;
}

LearningCycle run_learning_cycle(const ControlAffineSystem& sys, const ControlSpace& space,
                                 const Vector& x0, const PerturbationSchedule& schedule,
                                 double epsilon, double step) {
    if (epsilon <= 0.0) throw std::invalid_argument("run_learning_cycle: epsilon must be positive");
    if (step <= 0.0 || step > epsilon * (1.0 + 1e-12))
        throw std::invalid_argument("run_learning_cycle: need 0 < step <= epsilon");
    int m = schedule.input_dim();
    if (m != sys.input_dim)
        throw std::invalid_argument("run_learning_cycle: schedule/plant input dimension mismatch");

    PiecewiseConstantLaw law;
    for (int j = 0; j <= m; ++j) {
        law.breakpoints.push_back(static_cast<double>(j) * epsilon);
        law.values.push_back(space.denormalize(schedule.probe(static_cast<std::size_t>(j))));
    }
    double t_end = static_cast<double>(m + 1) * epsilon;

    LearningCycle cycle;
    cycle.trajectory = integrate(sys, x0, law, t_end, step);

    // probe endpoints land exactly on the breakpoint times by construction
    cycle.probe_states.reserve(static_cast<std::size_t>(m) + 2);
    cycle.probe_states.push_back(x0);
    const auto& times = cycle.trajectory.times;
    for (int j = 1; j <= m + 1; ++j) {
        double t = j <= m ? static_cast<double>(j) * epsilon : t_end;
        auto it = std::lower_bound(times.begin(), times.end(), t);
        if (it == times.end() || *it != t)
            throw std::logic_error("run_learning_cycle: probe boundary missing from trajectory");
        cycle.probe_states.push_back(
            cycle.trajectory.states[static_cast<std::size_t>(it - times.begin())]);
    }
    return cycle;
}

LocalAffineModel fit_local_model(const std::vector<Vector>& probe_states,
                                 const PerturbationSchedule& schedule, double epsilon,
                                 double anchor_time) {
    int m = schedule.input_dim();
    if (probe_states.size() != static_cast<std::size_t>(m) + 2)
        throw std::invalid_argument("fit_local_model: exactly m+2 probe states required");
    if (epsilon <= 0.0) throw std::invalid_argument("fit_local_model: epsilon must be positive");
    if (schedule.deltas.size() != static_cast<std::size_t>(m) + 1)
        throw std::invalid_argument("fit_local_model: schedule must hold m+1 deltas");

    // canonical form check: delta^0 = 0, delta^j = +-wiggle e_{j-1}
    if (schedule.deltas[0].norm() != 0.0 || schedule.wiggle <= 0.0)
        throw SingularFitError("fit_local_model: schedule has no zero base probe");
    std::vector<double> signs(static_cast<std::size_t>(m));
    for (int j = 1; j <= m; ++j) {
        const Vector& d = schedule.deltas[static_cast<std::size_t>(j)];
        for (int i = 0; i < m; ++i) {
            double want = i == j - 1 ? schedule.wiggle : 0.0;
            if (std::abs(std::abs(d[i]) - want) > 1e-15 * std::max(1.0, schedule.wiggle))
                throw SingularFitError("fit_local_model: probes are not affinely independent");
        }
        signs[static_cast<std::size_t>(j - 1)] = d[j - 1] >= 0.0 ? 1.0 : -1.0;
    }

    std::vector<Vector> slopes(static_cast<std::size_t>(m) + 1);
    for (int j = 0; j <= m; ++j)
        slopes[static_cast<std::size_t>(j)] =
            (probe_states[static_cast<std::size_t>(j) + 1] - probe_states[static_cast<std::size_t>(j)]) /
            epsilon;

    LocalAffineModel model;
    model.g_tilde.resize(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j)
        model.g_tilde[static_cast<std::size_t>(j)] =
            (slopes[static_cast<std::size_t>(j) + 1] - slopes[0]) *
            (signs[static_cast<std::size_t>(j)] / schedule.wiggle);
    Vector f = slopes[0];
    for (int j = 0; j < m; ++j) f -= model.g_tilde[static_cast<std::size_t>(j)] * schedule.base[j];
    model.f_tilde = std::move(f);
    model.anchor_state = probe_states.back();
    model.anchor_time = anchor_time >= 0.0 ? anchor_time : static_cast<double>(m + 1) * epsilon;
    return model;
}

double learning_error_bound(double M0, double M1, int m, double epsilon, double delta) {
    if (!(delta > 0.0 && delta <= 1.0))
        throw std::invalid_argument("learning_error_bound: delta must lie in (0,1]");
    double mp1 = static_cast<double>(m + 1);
    double m_d = static_cast<double>(m);
    return 2.0 * M0 * M1 * mp1 * mp1 * mp1 * epsilon * (4.0 * std::pow(m_d, 1.5) + delta) / delta;
}

double displacement_bound(double M0, int m, double epsilon, int j, int k) {
    return M0 * static_cast<double>(m + 1) * std::abs(j - k) * epsilon;
}

} // namespace myopic
