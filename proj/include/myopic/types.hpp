#ifndef MYOPIC_TYPES_HPP
#define MYOPIC_TYPES_HPP

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace myopic {

using Vector = Eigen::VectorXd;

/**
 * Time-stamped state path produced by the integrator.
 *
 * `controls[i]` is the physical control in effect on [times[i], times[i+1]);
 * the last entry repeats the control in effect at the final sample so every
 * sample carries a control column.
 */
struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;
    std::vector<Vector> controls;

    // first sample time outside the plant's declared operating box, if any
    std::optional<double> first_box_exit;

    bool empty() const { return times.empty(); }
    std::size_t size() const { return times.size(); }

    double duration() const;
    const Vector& final_state() const;

    /// State at time t by piecewise-linear interpolation between samples.
    Vector state_at(double t) const;

    void reserve(std::size_t n);
    void append(double t, Vector state, Vector control);
};

/// Box of admissible physical controls, with the affine rescale to [-1,1]^m.
struct ControlSpace {
    Vector lower;
    Vector upper;

    ControlSpace() = default;
    ControlSpace(Vector lo, Vector hi);

    int dim() const { return static_cast<int>(lower.size()); }
    bool contains(const Vector& u, double tol = 1e-12) const;

    /// Physical -> normalized: u_norm_i = (2u_i - hi_i - lo_i) / (hi_i - lo_i).
    Vector normalize(const Vector& u) const;
    /// Normalized -> physical, inverse of normalize().
    Vector denormalize(const Vector& u_norm) const;
};

/// Piecewise-constant control law: values[i] holds on [breakpoints[i], breakpoints[i+1]),
/// the final value extending to +infinity. First breakpoint must be 0.
struct PiecewiseConstantLaw {
    std::vector<double> breakpoints;
    std::vector<Vector> values;

    const Vector& value_at(double t) const;
    void validate(int input_dim) const;
};

/// Thrown when the integrator produces a non-finite state.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& msg, double t, Vector last, Trajectory partial_traj)
        : std::runtime_error(msg), time(t), last_state(std::move(last)),
          partial(std::move(partial_traj)) {}

    double time;        // time of the last finite sample
    Vector last_state;  // last finite state
    Trajectory partial; // trajectory up to the last finite sample
};

/// Thrown by the model fit when the probe set is not affinely independent.
class SingularFitError : public std::runtime_error {
public:
    explicit SingularFitError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown on malformed experiment configuration (missing keys, bad values).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace myopic

#endif
