#include "myopic/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace myopic {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_summary(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

namespace {

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file '" + path + "'");
    return out;
}

std::optional<BoundInputs> bound_inputs_for(const ExperimentConfig& cfg) {
    if (!cfg.goodness.lipschitz || cfg.decoupled) return std::nullopt;
    BoundInputs b;
    b.L = *cfg.goodness.lipschitz;
    b.M0 = cfg.system.bound_norm;
    b.M1 = cfg.system.bound_lipschitz;
    b.m = cfg.system.input_dim;
    b.epsilon = cfg.cycle.epsilon;
    b.delta = cfg.cycle.delta;
    return b;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    ExperimentResult result;
    result.run = cfg.decoupled
                     ? run_decoupled_controller(cfg.system, cfg.space, cfg.x0, cfg.goodness,
                                                cfg.cycle, cfg.t_end)
                     : run_myopic_controller(cfg.system, cfg.space, cfg.x0, cfg.goodness, cfg.cycle,
                                             cfg.t_end);
    const Trajectory& traj = result.run.trajectory;

    auto& summary = result.summary;
    summary.emplace_back("plant", cfg.plant_name);
    summary.emplace_back("goodness", cfg.goodness_name);
    summary.emplace_back("mode", cfg.decoupled ? "decoupled" : "coupled");
    summary.emplace_back("t_end", format_summary(cfg.t_end));
    summary.emplace_back("cycles", std::to_string(result.run.records.size()));
    summary.emplace_back("samples", std::to_string(traj.size()));
    if (!traj.empty()) {
        std::string fs;
        for (int i = 0; i < traj.states.back().size(); ++i) {
            if (i) fs += " ";
            fs += format_summary(traj.states.back()[i]);
        }
        summary.emplace_back("final_state", fs);
    }
    if (traj.first_box_exit)
        summary.emplace_back("left_operating_box_at", format_summary(*traj.first_box_exit));
    if (result.run.divergence) {
        summary.emplace_back("diverged_at", format_summary(result.run.divergence->time));
        summary.emplace_back("divergence", result.run.divergence->message);
    }

    for (const auto& ms : cfg.metrics) {
        switch (ms.kind) {
            case MetricSpec::Kind::first_bad_time: {
                result.first_bad = first_bad_time(traj, ms.region);
                summary.emplace_back("first_bad_time", result.first_bad
                                                           ? format_summary(*result.first_bad)
                                                           : std::string("none"));
                break;
            }
            case MetricSpec::Kind::reach_time: {
                result.reach = reach_time(traj, ms.region, cfg.t_end);
                summary.emplace_back(
                    "reach_time", result.reach ? format_summary(*result.reach) : std::string("none"));
                break;
            }
            case MetricSpec::Kind::gap_trace: {
                result.gap = oracle_gap_trace(cfg.system, cfg.space, result.run.records, traj,
                                              cfg.goodness, ms.oracle_grid, bound_inputs_for(cfg));
                summary.emplace_back("max_gap", format_summary(result.gap->max_gap()));
                if (result.gap->bound)
                    summary.emplace_back("gap_bound", format_summary(*result.gap->bound));
                break;
            }
            case MetricSpec::Kind::settle: {
                int axis = ms.settle_axis - 1;
                Region band = Region::axis_band(axis, -ms.settle_tol, ms.settle_tol);
                result.settle_time = reach_time(traj, band, cfg.t_end);
                summary.emplace_back("settle_time", result.settle_time
                                                        ? format_summary(*result.settle_time)
                                                        : std::string("none"));
                if (result.settle_time) {
                    double peak = 0.0;
                    for (std::size_t i = 0; i < traj.size(); ++i)
                        if (traj.times[i] >= *result.settle_time)
                            peak = std::max(peak, std::abs(traj.states[i][axis]));
                    result.settle_tail_peak = peak;
                    summary.emplace_back("settle_tail_peak", format_summary(peak));
                }
                break;
            }
        }
    }
    return result;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    auto out = open_output(path);
    int n = traj.empty() ? 0 : static_cast<int>(traj.states.front().size());
    int m = traj.empty() ? 0 : static_cast<int>(traj.controls.front().size());
    out << "t";
    for (int i = 1; i <= n; ++i) out << ",x" << i;
    for (int i = 1; i <= m; ++i) out << ",u" << i;
    out << "\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        out << format_full(traj.times[i]);
        for (int j = 0; j < n; ++j) out << "," << format_full(traj.states[i][j]);
        for (int j = 0; j < m; ++j) out << "," << format_full(traj.controls[i][j]);
        out << "\n";
    }
    if (!out) throw IoError("failed while writing '" + path + "'");
}

void write_cycles_csv(const std::string& path, const std::vector<CycleRecord>& records,
                      const GapTrace* gap) {
    auto out = open_output(path);
    int n = records.empty() ? 0 : static_cast<int>(records.front().anchor_state.size());
    int m = records.empty() ? 0 : static_cast<int>(records.front().chosen_control.size());
    out << "cycle,t0";
    for (int i = 1; i <= n; ++i) out << ",x_anchor" << i;
    for (int i = 1; i <= m; ++i) out << ",u_star" << i;
    out << ",goodness";
    bool with_gap = gap && gap->entries.size() == records.size();
    if (with_gap) out << ",gap";
    out << "\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        out << r.cycle_index << "," << format_full(r.anchor_time);
        for (int j = 0; j < n; ++j) out << "," << format_full(r.anchor_state[j]);
        for (int j = 0; j < m; ++j) out << "," << format_full(r.chosen_control[j]);
        out << "," << format_full(r.chosen_goodness);
        if (with_gap) out << "," << format_full(gap->entries[i].gap);
        out << "\n";
    }
    if (!out) throw IoError("failed while writing '" + path + "'");
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result) {
    if (!cfg.trajectory_csv.empty()) write_trajectory_csv(cfg.trajectory_csv, result.run.trajectory);
    if (!cfg.cycles_csv.empty())
        write_cycles_csv(cfg.cycles_csv, result.run.records,
                         result.gap ? &*result.gap : nullptr);
    if (!cfg.summary_path.empty()) {
        auto out = open_output(cfg.summary_path);
        for (const auto& [key, value] : result.summary) out << key << " = " << value << "\n";
        if (!out) throw IoError("failed while writing '" + cfg.summary_path + "'");
    }
}

namespace {

std::string with_suffix(const std::string& path, const std::string& suffix) {
    if (path.empty()) return path;
    auto dot = path.find_last_of('.');
    auto slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + suffix;
    return path.substr(0, dot) + suffix + path.substr(dot);
}

} // namespace

std::vector<SweepRow> run_sweep(const ExperimentConfig& base, const std::string& param,
                                const std::vector<double>& values, bool write_row_outputs) {
    if (param != "epsilon" && param != "delta" && param != "cycle_period")
        throw ConfigError("sweep parameter must be epsilon, delta or cycle_period");
    if (values.empty()) throw ConfigError("sweep needs at least one value");

    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        SweepRow row;
        row.value = values[i];
        ExperimentConfig cfg = base;
        if (param == "epsilon")
            cfg.cycle.epsilon = values[i];
        else if (param == "delta")
            cfg.cycle.delta = values[i];
        else
            cfg.cycle.cycle_period = values[i];
        std::string suffix = "_" + std::to_string(i);
        cfg.trajectory_csv = with_suffix(base.trajectory_csv, suffix);
        cfg.cycles_csv = with_suffix(base.cycles_csv, suffix);
        cfg.summary_path = with_suffix(base.summary_path, suffix);
        try {
            if (!(param == "delta" ? (cfg.cycle.delta > 0.0 && cfg.cycle.delta <= 1.0)
                                   : values[i] > 0.0))
                throw ConfigError("invalid sweep value " + format_summary(values[i]));
            ExperimentResult result = run_experiment(cfg);
            row.settle_time = result.settle_time;
            row.settle_tail_peak = result.settle_tail_peak;
            if (result.gap) row.max_gap = result.gap->max_gap();
            if (result.run.divergence) {
                row.status = 3;
                row.message = result.run.divergence->message;
            }
            if (write_row_outputs) write_outputs(cfg, result);
        } catch (const ConfigError& e) {
            row.status = 2;
            row.message = e.what();
        } catch (const std::invalid_argument& e) {
            row.status = 2;
            row.message = e.what();
        } catch (const DivergenceError& e) {
            row.status = 3;
            row.message = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_sweep_csv(const std::string& path, const std::string& param,
                     const std::vector<SweepRow>& rows) {
    auto out = open_output(path);
    out << "param,value,status,settle_time,settle_tail_peak,max_gap,message\n";
    for (const auto& row : rows) {
        out << param << "," << format_full(row.value) << "," << row.status << ",";
        out << (row.settle_time ? format_full(*row.settle_time) : "") << ",";
        out << (row.settle_tail_peak ? format_full(*row.settle_tail_peak) : "") << ",";
        out << (row.max_gap ? format_full(*row.max_gap) : "") << ",";
        out << row.message << "\n";
    }
    if (!out) throw IoError("failed while writing '" + path + "'");
}

} // namespace myopic
