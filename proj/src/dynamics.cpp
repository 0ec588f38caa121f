#include "myopic/dynamics.hpp"

#include <cmath>
#include <limits>

namespace myopic {

bool ControlAffineSystem::in_operating_box(const Vector& x) const {
    if (!box_lower || !box_upper) return true;
    for (int i = 0; i < state_dim; ++i)
        if (x[i] < (*box_lower)[i] || x[i] > (*box_upper)[i]) return false;
    return true;
}

Vector evaluate_rhs(const ControlAffineSystem& sys, const Vector& x, const Vector& u) {
    if (x.size() != sys.state_dim)
        throw std::invalid_argument("evaluate_rhs: state dimension mismatch");
    if (u.size() != sys.input_dim)
        throw std::invalid_argument("evaluate_rhs: control dimension mismatch");
    Vector v = sys.drift(x);
    if (v.size() != sys.state_dim)
        throw std::invalid_argument("evaluate_rhs: drift returned wrong dimension");
    for (int i = 0; i < sys.input_dim; ++i) {
        Vector gi = sys.input_maps[static_cast<std::size_t>(i)](x);
        if (gi.size() != sys.state_dim)
            throw std::invalid_argument("evaluate_rhs: input map returned wrong dimension");
        v += gi * u[i];
    }
    return v;
}

namespace {

Vector rk4_step(const ControlAffineSystem& sys, const Vector& x, const Vector& u, double h) {
    Vector k1 = evaluate_rhs(sys, x, u);
    Vector k2 = evaluate_rhs(sys, x + 0.5 * h * k1, u);
    Vector k3 = evaluate_rhs(sys, x + 0.5 * h * k2, u);
    Vector k4 = evaluate_rhs(sys, x + h * k3, u);
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace

Trajectory integrate(const ControlAffineSystem& sys, const Vector& x0,
                     const PiecewiseConstantLaw& law, double t_end, double step) {
    if (step <= 0.0) throw std::invalid_argument("integrate: step must be positive");
    if (t_end <= 0.0) throw std::invalid_argument("integrate: t_end must be positive");
    if (x0.size() != sys.state_dim)
        throw std::invalid_argument("integrate: initial state dimension mismatch");
    law.validate(sys.input_dim);

    Trajectory traj;
    traj.reserve(static_cast<std::size_t>(t_end / step) + law.breakpoints.size() + 2);
    traj.append(0.0, x0, law.value_at(0.0));
    if (!sys.in_operating_box(x0)) traj.first_box_exit = 0.0;

    Vector x = x0;
    // march segment by segment; a segment is a law interval clipped to [0, t_end]
    for (std::size_t seg = 0; seg < law.breakpoints.size(); ++seg) {
        double a = law.breakpoints[seg];
        if (a >= t_end) break;
        double b = seg + 1 < law.breakpoints.size() ? std::min(law.breakpoints[seg + 1], t_end) : t_end;
        if (b <= a) continue;
        const Vector& u = law.values[seg];

        double len = b - a;
        auto n_full = static_cast<long>(std::floor(len / step * (1.0 + 1e-12)));
        double tail = len - static_cast<double>(n_full) * step;
        bool has_tail = tail > 1e-9 * step;
        long n_steps = n_full + (has_tail ? 1 : 0);
        if (n_steps == 0) n_steps = 1; // segment shorter than step: one clipped step

        double t_prev = a;
        for (long i = 1; i <= n_steps; ++i) {
            double t_next = i == n_steps ? b : a + static_cast<double>(i) * step;
            double h = t_next - t_prev;
            Vector x_next = rk4_step(sys, x, u, h);
            if (!x_next.allFinite())
                throw DivergenceError("integrate: state diverged (non-finite) near t=" +
                                          std::to_string(t_next),
                                      t_prev, x, std::move(traj));
            x = std::move(x_next);
            traj.append(t_next, x, u);
            if (!traj.first_box_exit && !sys.in_operating_box(x)) traj.first_box_exit = t_next;
            t_prev = t_next;
        }
        if (b >= t_end) break;
    }
    return traj;
}

ControlAffineSystem augment_with_disturbance(
    const ControlAffineSystem& sys,
    std::function<Vector(double, const Vector&)> disturbance,
    double bound_norm_star, double bound_lipschitz_star) {
    ControlAffineSystem aug;
    aug.state_dim = sys.state_dim + 1;
    aug.input_dim = sys.input_dim;
    int n = sys.state_dim;

    auto base_drift = sys.drift;
    aug.drift = [base_drift, disturbance, n](const Vector& xe) {
        Vector x = xe.head(n);
        double tau = xe[n];
        Vector nx = disturbance(tau, x);
        if (nx.size() != n)
            throw std::invalid_argument("augment_with_disturbance: disturbance returned wrong dimension");
        Vector out(n + 1);
        out.head(n) = base_drift(x) + nx;
        out[n] = 1.0;
        return out;
    };
    for (const auto& g : sys.input_maps) {
        aug.input_maps.push_back([g, n](const Vector& xe) {
            Vector out(n + 1);
            out.head(n) = g(xe.head(n));
            out[n] = 0.0;
            return out;
        });
    }
    aug.bound_norm = std::max(sys.bound_norm + bound_norm_star, 1.0);
    aug.bound_lipschitz = sys.bound_lipschitz + bound_lipschitz_star;
    if (sys.box_lower && sys.box_upper) {
        Vector lo(n + 1), hi(n + 1);
        lo.head(n) = *sys.box_lower;
        hi.head(n) = *sys.box_upper;
        lo[n] = -std::numeric_limits<double>::infinity();
        hi[n] = std::numeric_limits<double>::infinity();
        aug.box_lower = lo;
        aug.box_upper = hi;
    }
    return aug;
}

std::pair<ControlAffineSystem, ControlSpace> make_aircraft() {
    ControlAffineSystem sys;
    sys.state_dim = 5;
    sys.input_dim = 2;
    sys.drift = [](const Vector& x) {
        Vector v(5);
        v[0] = -0.021 * x[0] + 0.122 * x[1] - 0.322 * x[2];
        v[1] = -0.209 * x[0] - 0.53 * x[1] + 2.21 * x[2];
        v[2] = 0.017 * x[0] + 0.01 * std::cos(x[0]) * x[0] - 0.164 * x[1] +
               0.15 * std::sin(x[0]) * x[1] - 0.421 * x[2];
        v[3] = x[2];
        v[4] = -x[1] + 2.21 * x[3];
        return v;
    };
    sys.input_maps.push_back([](const Vector&) {
        Vector g(5);
        g << 0.01, -0.064, -0.378, 0.0, 0.0;
        return g;
    });
    sys.input_maps.push_back([](const Vector& x) {
        Vector g(5);
        g << 1.0, -0.044, 0.544 + 0.5 * std::sin(x[1]), 0.0, 0.0;
        return g;
    });
    // conservative bounds on the box below, with the input half-widths absorbed
    sys.bound_norm = 280.0;
    sys.bound_lipschitz = 12.0;
    Vector lo(5), hi(5);
    lo << -60.0, -60.0, -60.0, -60.0, -100.0;
    hi << 60.0, 60.0, 60.0, 60.0, 1300.0;
    sys.box_lower = lo;
    sys.box_upper = hi;

    Vector ulo(2), uhi(2);
    ulo << -30.0, -1.0;
    uhi << 30.0, 1.0;
    return {sys, ControlSpace(ulo, uhi)};
}

std::pair<ControlAffineSystem, ControlSpace> make_vanderpol() {
    ControlAffineSystem sys;
    sys.state_dim = 2;
    sys.input_dim = 1;
    sys.drift = [](const Vector& x) {
        Vector v(2);
        v[0] = x[1];
        v[1] = -x[0] - 2.0 * (1.0 - x[0] * x[0]) * x[1];
        return v;
    };
    sys.input_maps.push_back([](const Vector&) {
        Vector g(2);
        g << 0.0, 1.0;
        return g;
    });
    sys.bound_norm = 250.0;
    sys.bound_lipschitz = 99.0;
    Vector lo(2), hi(2);
    lo << -5.0, -5.0;
    hi << 5.0, 5.0;
    sys.box_lower = lo;
    sys.box_upper = hi;

    Vector ulo(1), uhi(1);
    ulo << -2.0;
    uhi << 2.0;
    return {sys, ControlSpace(ulo, uhi)};
}

} // namespace myopic
