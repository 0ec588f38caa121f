#include "myopic/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace myopic {

double suboptimality_bound(const BoundInputs& b) {
    if (!(b.delta > 0.0 && b.delta <= 1.0))
        throw std::invalid_argument("suboptimality_bound: delta must lie in (0,1]");
    double mp1 = static_cast<double>(b.m + 1);
    double m_d = static_cast<double>(b.m);
    double learn_term = 6.0 * b.L * (b.M0 + 1.0) * (b.M1 + 1.0) * mp1 * mp1 * mp1 *
                        (1.0 + 4.0 * m_d * std::sqrt(m_d) / b.delta) * b.epsilon;
    double wiggle_term = b.L * b.M0 * mp1 * b.delta;
    return learn_term + wiggle_term;
}

double intermediate_bound(const BoundInputs& b, double traj_dist, double state_dist, double nu,
                          bool include_wiggle) {
    double mp1 = static_cast<double>(b.m + 1);
    double v = 2.0 * b.L * traj_dist + 2.0 * b.L * b.M1 * mp1 * state_dist + 2.0 * b.L * nu;
    if (include_wiggle) v += b.L * b.M0 * mp1 * b.delta;
    return v;
}

std::pair<double, double> select_parameters(double L, double M0, double M1, int m, double eta) {
    if (eta <= 0.0) throw std::invalid_argument("select_parameters: eta must be positive");
    if (L <= 0.0 || M0 <= 0.0)
        throw std::invalid_argument("select_parameters: L and M0 must be positive");
    double mp1 = static_cast<double>(m + 1);
    double m_d = static_cast<double>(m);
    double delta = std::min(1.0, eta / (2.0 * L * M0 * mp1));
    double denom =
        6.0 * L * (M0 + 1.0) * (M1 + 1.0) * mp1 * mp1 * mp1 * (1.0 + 4.0 * m_d * std::sqrt(m_d) / delta);
    double epsilon = (eta / 2.0) / denom;
    return {epsilon, delta};
}

std::optional<double> first_bad_time(const Trajectory& traj, const Region& bad) {
    if (traj.empty()) throw std::invalid_argument("first_bad_time: empty trajectory");
    std::size_t hit = traj.size();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (bad.signed_distance(traj.states[i]) <= 0.0) {
            hit = i;
            break;
        }
    }
    if (hit == traj.size()) return std::nullopt;
    if (hit == 0) return 0.0;

    // refine on the linear interpolant to 1/100 of the sample spacing
    double lo = traj.times[hit - 1], hi = traj.times[hit];
    double resolution = (hi - lo) / 100.0;
    const Vector& a = traj.states[hit - 1];
    const Vector& b = traj.states[hit];
    double ta = lo, tb = hi;
    while (tb - ta > resolution) {
        double tm = 0.5 * (ta + tb);
        double w = (tm - lo) / (hi - lo);
        Vector xm = (1.0 - w) * a + w * b;
        if (bad.signed_distance(xm) <= 0.0)
            tb = tm;
        else
            ta = tm;
    }
    return 0.5 * (ta + tb);
}

std::optional<double> reach_time(const Trajectory& traj, const Region& target, double t_end) {
    if (traj.empty()) throw std::invalid_argument("reach_time: empty trajectory");
    double tol = 1e-9 * std::max(1.0, t_end);
    std::optional<double> entry;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj.times[i] > t_end + tol) break;
        if (target.contains(traj.states[i])) {
            if (!entry) entry = traj.times[i];
        } else {
            entry.reset();
        }
    }
    return entry;
}

double GapTrace::max_gap() const {
    double g = -std::numeric_limits<double>::infinity();
    for (const auto& e : entries) g = std::max(g, e.gap);
    return entries.empty() ? 0.0 : g;
}

GapTrace oracle_gap_trace(const ControlAffineSystem& sys, const ControlSpace& space,
                          const std::vector<CycleRecord>& records, const Trajectory& traj,
                          const GoodnessFunction& G, int oracle_grid,
                          std::optional<BoundInputs> bound_inputs) {
    if (oracle_grid < 2) throw std::invalid_argument("oracle_gap_trace: oracle_grid must be >= 2");
    GapTrace trace;
    trace.entries.reserve(records.size());
    if (bound_inputs) trace.bound = suboptimality_bound(*bound_inputs);
    if (records.empty()) return trace;

    int m = sys.input_dim;

    // candidate set: full lattice plus every cube vertex, in normalized coordinates
    std::vector<Vector> candidates;
    {
        std::vector<int> digit(static_cast<std::size_t>(m), 0);
        bool done = false;
        Vector u(m);
        while (!done) {
            for (int i = 0; i < m; ++i)
                u[i] = -1.0 + 2.0 * digit[static_cast<std::size_t>(i)] / (oracle_grid - 1);
            candidates.push_back(u);
            int axis = m - 1;
            while (axis >= 0) {
                if (++digit[static_cast<std::size_t>(axis)] < oracle_grid) break;
                digit[static_cast<std::size_t>(axis)] = 0;
                --axis;
            }
            if (axis < 0) done = true;
        }
        unsigned long count = 1ul << m;
        for (unsigned long c = 0; c < count; ++c) {
            for (int i = 0; i < m; ++i) u[i] = (c >> (m - 1 - i)) & 1ul ? 1.0 : -1.0;
            candidates.push_back(u);
        }
    }

    // one forward pass shares the growing history prefix across all anchors
    Trajectory prefix;
    prefix.reserve(traj.size());
    std::size_t next_sample = 0;
    for (const auto& rec : records) {
        while (next_sample < traj.size() && traj.times[next_sample] <= rec.anchor_time) {
            prefix.append(traj.times[next_sample], traj.states[next_sample],
                          traj.controls[next_sample]);
            ++next_sample;
        }

        const Vector& x = rec.anchor_state;
        Vector f = sys.drift(x);
        std::vector<Vector> g(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) g[static_cast<std::size_t>(i)] = sys.input_maps[static_cast<std::size_t>(i)](x);
        auto true_velocity = [&](const Vector& u_norm) {
            Vector u_phys = space.denormalize(u_norm);
            Vector v = f;
            for (int i = 0; i < m; ++i) v += g[static_cast<std::size_t>(i)] * u_phys[i];
            return v;
        };

        double oracle_max = -std::numeric_limits<double>::infinity();
        for (const auto& u_norm : candidates)
            oracle_max = std::max(oracle_max, G.eval(prefix, true_velocity(u_norm)));
        double realized = G.eval(prefix, true_velocity(rec.chosen_control));

        trace.entries.push_back(
            GapEntry{rec.anchor_time, realized, oracle_max, oracle_max - realized});
    }
    return trace;
}

} // namespace myopic
