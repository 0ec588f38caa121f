// Command-line front end: `run` drives a configured experiment, `bounds`
// evaluates or inverts the suboptimality bound, `sweep` repeats a run over a
// parameter list. Exit codes: 0 success, 2 config error, 3 divergence,
// 4 output I/O error.

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "myopic/experiment.hpp"

using namespace myopic;

namespace {

int cmd_run(const std::string& config_path, bool quiet) {
    ExperimentConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    ExperimentResult result;
    try {
        result = run_experiment(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        write_outputs(cfg, result);
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    }

    if (result.run.trajectory.first_box_exit)
        std::cerr << "warning: trajectory left the declared operating box at t="
                  << format_summary(*result.run.trajectory.first_box_exit)
                  << "; the declared bounds carry no guarantee beyond that point\n";
    if (!quiet)
        for (const auto& [key, value] : result.summary) std::cout << key << " = " << value << "\n";
    if (result.run.divergence) {
        std::cerr << "divergence: " << result.run.divergence->message << "\n";
        return 3;
    }
    return 0;
}

int cmd_bounds(double L, double M0, double M1, int m, double epsilon, double delta, double eta,
               bool have_eps_delta, bool have_eta) {
    if (have_eta == have_eps_delta) {
        std::cerr << "config error: give either --epsilon and --delta, or --eta\n";
        return 2;
    }
    try {
        if (have_eta) {
            auto [eps, del] = select_parameters(L, M0, M1, m, eta);
            std::printf("epsilon = %s\n", format_full(eps).c_str());
            std::printf("delta = %s\n", format_full(del).c_str());
            BoundInputs b{L, M0, M1, m, eps, del};
            std::printf("bound = %.6f\n", suboptimality_bound(b));
        } else {
            BoundInputs b{L, M0, M1, m, epsilon, delta};
            std::printf("bound = %.6f\n", suboptimality_bound(b));
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<double>& values, const std::string& out_path) {
    ExperimentConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    std::vector<SweepRow> rows;
    try {
        rows = run_sweep(cfg, param, values, true);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    try {
        write_sweep_csv(out_path, param, rows);
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    }
    for (const auto& row : rows) {
        std::cout << param << "=" << format_summary(row.value) << " status=" << row.status;
        if (row.settle_time) std::cout << " settle=" << format_summary(*row.settle_time);
        if (row.max_gap) std::cout << " max_gap=" << format_summary(*row.max_gap);
        std::cout << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Myopic learn-control for unknown control-affine systems"};
    app.require_subcommand(1);

    std::string config_path;
    bool quiet = false;
    auto* run = app.add_subcommand("run", "run a configured experiment");
    run->add_option("config", config_path, "experiment config file")->required();
    run->add_flag("--quiet", quiet, "suppress the summary on stdout");

    double L = 0, M0 = 0, M1 = 0, epsilon = 0, delta = 0, eta = 0;
    int m = 0;
    auto* bounds = app.add_subcommand("bounds", "evaluate or invert the suboptimality bound");
    bounds->add_option("--L", L, "goodness Lipschitz constant")->required();
    bounds->add_option("--M0", M0, "plant norm bound")->required();
    bounds->add_option("--M1", M1, "plant Lipschitz bound")->required();
    bounds->add_option("--m", m, "input dimension")->required();
    auto* eps_opt = bounds->add_option("--epsilon", epsilon, "probe duration");
    auto* del_opt = bounds->add_option("--delta", delta, "wiggle size");
    auto* eta_opt = bounds->add_option("--eta", eta, "target bound for selection mode");

    std::string sweep_config, sweep_param, sweep_out = "sweep_summary.csv";
    std::vector<double> sweep_values;
    auto* sweep = app.add_subcommand("sweep", "run one experiment per parameter value");
    sweep->add_option("config", sweep_config, "experiment config file")->required();
    sweep->add_option("--param", sweep_param, "epsilon | delta | cycle_period")->required();
    sweep->add_option("--values", sweep_values, "parameter values")->required()->delimiter(',');
    sweep->add_option("--out", sweep_out, "summary CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (run->parsed()) return cmd_run(config_path, quiet);
    if (bounds->parsed()) {
        bool have_eps_delta = eps_opt->count() > 0 && del_opt->count() > 0;
        bool have_eta = eta_opt->count() > 0;
        return cmd_bounds(L, M0, M1, m, epsilon, delta, eta, have_eps_delta, have_eta);
    }
    if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_param, sweep_values, sweep_out);
    return 2;
}
