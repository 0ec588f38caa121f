#ifndef MYOPIC_CONFIG_HPP
#define MYOPIC_CONFIG_HPP

#include <map>
#include <string>

#include "myopic/controller.hpp"
#include "myopic/dynamics.hpp"
#include "myopic/goodness.hpp"

namespace myopic {

/// One metric request from the [metrics] section.
struct MetricSpec {
    enum class Kind { first_bad_time, reach_time, gap_trace, settle } kind;
    Region region;       // first_bad_time / reach_time
    int oracle_grid = 101; // gap_trace
    int settle_axis = 0;   // settle
    double settle_tol = 0.0;
};

/**
 * Fully parsed experiment: plant, goodness, controller mode, cycle
 * parameters, metrics and output paths. See configs/*.cfg for the schema.
 */
struct ExperimentConfig {
    std::string plant_name; // vanderpol | aircraft | linear
    ControlAffineSystem system;
    ControlSpace space;

    std::string goodness_name;
    GoodnessFunction goodness;

    bool decoupled = false;
    CycleConfig cycle;
    double t_end = 0.0;
    Vector x0;

    std::vector<MetricSpec> metrics;

    std::string trajectory_csv; // empty = do not write
    std::string cycles_csv;
    std::string summary_path;

    long seed = 0;
};

/// Parse a key/value config file with [section] headers. Throws ConfigError.
ExperimentConfig load_config(const std::string& path);

/// Parse config text directly (same grammar as load_config).
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin = "<memory>");

/// Region grammar shared by config metrics: "ball c1..cn r",
/// "halfspace a1..an b", "band axis lo hi", "box l1..ln h1..hn".
Region parse_region(const std::string& tokens, int state_dim);

} // namespace myopic

#endif
