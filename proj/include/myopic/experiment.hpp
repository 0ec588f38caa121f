#ifndef MYOPIC_EXPERIMENT_HPP
#define MYOPIC_EXPERIMENT_HPP

#include "myopic/analysis.hpp"
#include "myopic/config.hpp"

namespace myopic {

/// Thrown when an output file cannot be written.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ExperimentResult {
    ControllerRun run;
    std::optional<GapTrace> gap;
    std::optional<double> first_bad;
    std::optional<double> reach;
    std::optional<double> settle_time;
    std::optional<double> settle_tail_peak; // max |x_axis| after settle_time
    // ordered summary lines, 6 significant digits
    std::vector<std::pair<std::string, std::string>> summary;
};

/// Run the configured controller and evaluate the requested metrics.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Write the configured CSV and summary files. Throws IoError on failure.
void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result);

void write_trajectory_csv(const std::string& path, const Trajectory& traj);
void write_cycles_csv(const std::string& path, const std::vector<CycleRecord>& records,
                      const GapTrace* gap);

struct SweepRow {
    double value = 0.0;
    int status = 0; // 0 ok, 2 config error, 3 divergence
    std::optional<double> settle_time;
    std::optional<double> settle_tail_peak;
    std::optional<double> max_gap;
    std::string message;
};

/// One experiment per value of `param` (epsilon | delta | cycle_period);
/// failed rows are recorded and the sweep continues.
std::vector<SweepRow> run_sweep(const ExperimentConfig& base, const std::string& param,
                                const std::vector<double>& values, bool write_row_outputs);

void write_sweep_csv(const std::string& path, const std::string& param,
                     const std::vector<SweepRow>& rows);

/// 17-significant-digit decimal form, round-trip exact for doubles.
std::string format_full(double v);
/// 6-significant-digit form for human-facing summaries.
std::string format_summary(double v);

} // namespace myopic

#endif
