#include "myopic/types.hpp"

#include <algorithm>
#include <cmath>

namespace myopic {

double Trajectory::duration() const {
    if (empty()) throw std::invalid_argument("Trajectory::duration: empty trajectory");
    return times.back();
}

const Vector& Trajectory::final_state() const {
    if (empty()) throw std::invalid_argument("Trajectory::final_state: empty trajectory");
    return states.back();
}

Vector Trajectory::state_at(double t) const {
    if (empty()) throw std::invalid_argument("Trajectory::state_at: empty trajectory");
    if (t <= times.front()) return states.front();
    if (t >= times.back()) return states.back();
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t hi = static_cast<std::size_t>(it - times.begin());
    std::size_t lo = hi - 1;
    double span = times[hi] - times[lo];
    double w = span > 0.0 ? (t - times[lo]) / span : 0.0;
    return (1.0 - w) * states[lo] + w * states[hi];
}

void Trajectory::reserve(std::size_t n) {
    times.reserve(n);
    states.reserve(n);
    controls.reserve(n);
}

void Trajectory::append(double t, Vector state, Vector control) {
    if (!times.empty() && t <= times.back())
        throw std::invalid_argument("Trajectory::append: times must be strictly increasing");
    times.push_back(t);
    states.push_back(std::move(state));
    controls.push_back(std::move(control));
}

ControlSpace::ControlSpace(Vector lo, Vector hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size())
        throw std::invalid_argument("ControlSpace: lower/upper dimension mismatch");
    for (int i = 0; i < lower.size(); ++i)
        if (!(lower[i] < upper[i]))
            throw std::invalid_argument("ControlSpace: lower_i < upper_i required on every axis");
}

bool ControlSpace::contains(const Vector& u, double tol) const {
    if (u.size() != lower.size()) return false;
    for (int i = 0; i < u.size(); ++i) {
        double slack = tol * std::max(1.0, upper[i] - lower[i]);
        if (u[i] < lower[i] - slack || u[i] > upper[i] + slack) return false;
    }
    return true;
}

Vector ControlSpace::normalize(const Vector& u) const {
    if (u.size() != lower.size())
        throw std::invalid_argument("ControlSpace::normalize: dimension mismatch");
    Vector out(u.size());
    for (int i = 0; i < u.size(); ++i)
        out[i] = (2.0 * u[i] - upper[i] - lower[i]) / (upper[i] - lower[i]);
    return out;
}

Vector ControlSpace::denormalize(const Vector& u_norm) const {
    if (u_norm.size() != lower.size())
        throw std::invalid_argument("ControlSpace::denormalize: dimension mismatch");
    Vector out(u_norm.size());
    for (int i = 0; i < u_norm.size(); ++i)
        out[i] = 0.5 * (u_norm[i] * (upper[i] - lower[i]) + upper[i] + lower[i]);
    return out;
}

const Vector& PiecewiseConstantLaw::value_at(double t) const {
    if (breakpoints.empty())
        throw std::invalid_argument("PiecewiseConstantLaw::value_at: empty law");
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
    std::size_t idx = it == breakpoints.begin() ? 0 : static_cast<std::size_t>(it - breakpoints.begin()) - 1;
    return values[idx];
}

void PiecewiseConstantLaw::validate(int input_dim) const {
    if (breakpoints.empty() || values.size() != breakpoints.size())
        throw std::invalid_argument("PiecewiseConstantLaw: one value per breakpoint interval required");
    if (breakpoints.front() != 0.0)
        throw std::invalid_argument("PiecewiseConstantLaw: first breakpoint must be 0");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i] > breakpoints[i - 1]))
            throw std::invalid_argument("PiecewiseConstantLaw: breakpoints must be strictly increasing");
    for (const auto& v : values)
        if (v.size() != input_dim)
            throw std::invalid_argument("PiecewiseConstantLaw: control value dimension mismatch");
}

} // namespace myopic
