#include "myopic/goodness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace myopic {

namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

constexpr double kSlopeFloor = 1e-9;
constexpr double kSlopeSentinel = -1e12;

} // namespace

double Region::outside_distance(const Vector& x) const {
    return std::max(signed_distance(x), 0.0);
}

Region Region::ball(Vector center, double radius) {
    if (radius <= 0.0) throw std::invalid_argument("Region::ball: radius must be positive");
    Region r;
    r.label = "ball";
    r.signed_distance = [center, radius](const Vector& x) { return (x - center).norm() - radius; };
    r.gradient = [center](const Vector& x) {
        Vector d = x - center;
        double n = d.norm();
        if (n == 0.0) return Vector(Vector::Zero(x.size()));
        return Vector(d / n);
    };
    return r;
}

Region Region::halfspace(Vector normal, double offset) {
    double n = normal.norm();
    if (n == 0.0) throw std::invalid_argument("Region::halfspace: zero normal");
    Region r;
    r.label = "halfspace";
    Vector unit = normal / n;
    double off = offset / n;
    r.signed_distance = [unit, off](const Vector& x) { return unit.dot(x) - off; };
    r.gradient = [unit](const Vector&) { return unit; };
    return r;
}

Region Region::box(Vector lower, Vector upper) {
    if (lower.size() != upper.size())
        throw std::invalid_argument("Region::box: dimension mismatch");
    Region r;
    r.label = "box";
    r.signed_distance = [lower, upper](const Vector& x) {
        // Euclidean distance outside, max face deficit inside
        double inside = -std::numeric_limits<double>::infinity();
        double out_sq = 0.0;
        for (int i = 0; i < x.size(); ++i) {
            double q = std::max(lower[i] - x[i], x[i] - upper[i]);
            inside = std::max(inside, q);
            if (q > 0.0) out_sq += q * q;
        }
        return out_sq > 0.0 ? std::sqrt(out_sq) : inside;
    };
    return r;
}

Region Region::axis_band(int axis, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("Region::axis_band: lo < hi required");
    Region r;
    r.label = "band";
    r.signed_distance = [axis, lo, hi](const Vector& x) {
        return std::max(lo - x[axis], x[axis] - hi);
    };
    r.gradient = [axis, lo, hi](const Vector& x) {
        Vector g = Vector::Zero(x.size());
        g[axis] = (lo - x[axis]) > (x[axis] - hi) ? -1.0 : 1.0;
        return g;
    };
    return r;
}

double trajectory_distance(const Trajectory& a, const Trajectory& b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("trajectory_distance: empty trajectory");
    double t1 = a.times.back();
    double t2 = b.times.back();
    double t_min = std::min(t1, t2);

    double sup = 0.0;
    auto visit = [&](double t) {
        double d = (a.state_at(t) - b.state_at(t)).norm();
        sup = std::max(sup, d);
    };
    for (double t : a.times) {
        if (t > t_min) break;
        visit(t);
    }
    for (double t : b.times) {
        if (t > t_min) break;
        visit(t);
    }
    visit(t_min);
    return std::abs(t1 - t2) + sup;
}

GoodnessFunction slope_goodness() {
    GoodnessFunction g;
    g.label = "slope";
    g.eval = [](const Trajectory&, const Vector& v) {
        if (v.size() < 2) throw std::invalid_argument("slope_goodness: 2-D velocity required");
        if (v[0] <= kSlopeFloor) return kSlopeSentinel;
        return v[1] / v[0];
    };
    return g;
}

namespace {

double distance_rate(const Region& region, const Vector& x, const Vector& v, double probe_dt) {
    if (region.gradient && region.signed_distance(x) > 0.0)
        return region.gradient(x).dot(v);
    double d0 = region.outside_distance(x);
    double d1 = region.outside_distance(x + v * probe_dt);
    return (d1 - d0) / probe_dt;
}

} // namespace

GoodnessFunction distance_rate_goodness(Region region, double probe_dt) {
    if (probe_dt <= 0.0)
        throw std::invalid_argument("distance_rate_goodness: probe_dt must be positive");
    GoodnessFunction g;
    g.label = "distance-rate(" + region.label + ")";
    g.eval = [region = std::move(region), probe_dt](const Trajectory& traj, const Vector& v) {
        return distance_rate(region, traj.final_state(), v, probe_dt);
    };
    return g;
}

GoodnessFunction zone_goodness(Region interior, Region target, double probe_dt) {
    if (probe_dt <= 0.0)
        throw std::invalid_argument("zone_goodness: probe_dt must be positive");
    GoodnessFunction g;
    g.label = "zone(" + interior.label + "," + target.label + ")";
    g.eval = [interior = std::move(interior), target = std::move(target),
              probe_dt](const Trajectory& traj, const Vector& v) {
        const Vector& x = traj.final_state();
        if (!interior.contains(x)) // boundary zone: head for the interior
            return -distance_rate(interior, x, v, probe_dt);
        return -distance_rate(target, x, v, probe_dt);
    };
    return g;
}

GoodnessFunction mixed_goodness(Region bad, Region target, double d_bad_max, double probe_dt) {
    if (d_bad_max <= 0.0)
        throw std::invalid_argument("mixed_goodness: d_bad_max must be positive");
    if (probe_dt <= 0.0)
        throw std::invalid_argument("mixed_goodness: probe_dt must be positive");
    GoodnessFunction g;
    g.label = "mixed(" + bad.label + "," + target.label + ")";
    g.eval = [bad = std::move(bad), target = std::move(target), d_bad_max,
              probe_dt](const Trajectory& traj, const Vector& v) {
        const Vector& x = traj.final_state();
        double lambda = std::clamp(bad.outside_distance(x) / d_bad_max, 0.0, 1.0);
        double away = distance_rate(bad, x, v, probe_dt);
        double toward = distance_rate(target, x, v, probe_dt);
        return (1.0 - lambda) * away - lambda * toward;
    };
    return g;
}

GoodnessFunction sequential_goodness(std::vector<std::pair<Region, GoodnessFunction>> stages) {
    if (stages.empty())
        throw std::invalid_argument("sequential_goodness: at least one stage required");
    GoodnessFunction g;
    g.label = "sequential";
    g.eval = [stages = std::move(stages)](const Trajectory& traj, const Vector& v) {
        for (const auto& [target, stage_g] : stages) {
            bool visited = false;
            for (const auto& x : traj.states) {
                if (target.contains(x)) {
                    visited = true;
                    break;
                }
            }
            if (!visited) return stage_g.eval(traj, v);
        }
        return stages.back().second.eval(traj, v);
    };
    return g;
}

GoodnessFunction aircraft_goodness() {
    GoodnessFunction g;
    g.label = "aircraft";
    g.eval = [](const Trajectory& traj, const Vector& v) {
        const Vector& x = traj.final_state();
        if (x.size() != 5 || v.size() != 5)
            throw std::invalid_argument("aircraft_goodness: 5-D state and velocity required");
        double climb_rate = -x[1] + 2.21 * x[3];
        if (x[4] < 100.0) return v[2] - v[1];
        if (std::abs(x[3]) > 40.0 || std::abs(climb_rate) > 30.0 ||
            (x[4] >= 900.0 && x[4] <= 1100.0)) {
            double m1 = std::abs(x[1]) > 2.0 ? -v[1] * sign(x[1]) : 0.0;
            double m2 = std::abs(x[3]) > 2.0 ? -v[2] * sign(x[3]) : 0.0;
            return m1 + m2;
        }
        return (v[2] - v[1]) * sign(1000.0 - x[4]);
    };
    return g;
}

GoodnessFunction vanderpol_goodness() {
    GoodnessFunction g;
    g.label = "vanderpol";
    g.lipschitz = 29.0;
    g.eval = [](const Trajectory& traj, const Vector& v) {
        const Vector& x = traj.final_state();
        if (x.size() < 2 || v.size() < 2)
            throw std::invalid_argument("vanderpol_goodness: 2-D state and velocity required");
        return -v[1] * std::atan(x[1]);
    };
    return g;
}

} // namespace myopic
