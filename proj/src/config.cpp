#include "myopic/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace myopic {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        // allow commas between numbers
        if (!tok.empty() && tok.back() == ',') tok.pop_back();
        if (tok.empty()) continue;
        try {
            std::size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError("invalid number '" + tok + "' in " + what);
        }
    }
    return out;
}

Vector to_vector(const std::vector<double>& v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
    return out;
}

// flat key/value store with consumption tracking so typos surface as errors
class KeyStore {
public:
    explicit KeyStore(const std::string& origin) : origin_(origin) {}

    void insert(const std::string& key, const std::string& value, int line) {
        if (map_.count(key))
            throw ConfigError(origin_ + ":" + std::to_string(line) + ": duplicate key '" + key + "'");
        map_[key] = value;
    }

    std::optional<std::string> take(const std::string& key) {
        auto it = map_.find(key);
        if (it == map_.end()) return std::nullopt;
        consumed_.insert(key);
        return it->second;
    }

    std::string require(const std::string& key) {
        auto v = take(key);
        if (!v) throw ConfigError(origin_ + ": missing required key '" + key + "'");
        return *v;
    }

    double require_double(const std::string& key) {
        auto nums = parse_numbers(require(key), "key '" + key + "'");
        if (nums.size() != 1) throw ConfigError(origin_ + ": key '" + key + "' must hold one number");
        return nums[0];
    }

    std::optional<double> take_double(const std::string& key) {
        auto v = take(key);
        if (!v) return std::nullopt;
        auto nums = parse_numbers(*v, "key '" + key + "'");
        if (nums.size() != 1) throw ConfigError(origin_ + ": key '" + key + "' must hold one number");
        return nums[0];
    }

    std::optional<Vector> take_vector(const std::string& key) {
        auto v = take(key);
        if (!v) return std::nullopt;
        return to_vector(parse_numbers(*v, "key '" + key + "'"));
    }

    Vector require_vector(const std::string& key) {
        auto v = take_vector(key);
        if (!v) throw ConfigError(origin_ + ": missing required key '" + key + "'");
        return *v;
    }

    void finish() const {
        for (const auto& [key, value] : map_)
            if (!consumed_.count(key))
                throw ConfigError(origin_ + ": unknown key '" + key + "'");
    }

    const std::string& origin() const { return origin_; }

private:
    std::string origin_;
    std::map<std::string, std::string> map_;
    std::set<std::string> consumed_;
};

KeyStore read_key_store(const std::string& text, const std::string& origin) {
    KeyStore store(origin);
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        store.insert(section.empty() ? key : section + "." + key, value, lineno);
    }
    return store;
}

GoodnessFunction approach_goodness(Region target, double probe_dt) {
    auto rate = distance_rate_goodness(std::move(target), probe_dt);
    GoodnessFunction g;
    g.label = "approach(" + rate.label + ")";
    g.eval = [rate](const Trajectory& traj, const Vector& v) { return -rate.eval(traj, v); };
    return g;
}

} // namespace

Region parse_region(const std::string& tokens, int state_dim) {
    std::istringstream in(tokens);
    std::string kind;
    in >> kind;
    std::string rest;
    std::getline(in, rest);
    auto nums = parse_numbers(rest, "region '" + tokens + "'");
    auto need = [&](std::size_t n) {
        if (nums.size() != n)
            throw ConfigError("region '" + tokens + "': expected " + std::to_string(n) +
                              " numbers, got " + std::to_string(nums.size()));
    };
    std::size_t dim = static_cast<std::size_t>(state_dim);
    if (kind == "ball") {
        need(dim + 1);
        Vector c = to_vector({nums.begin(), nums.end() - 1});
        return Region::ball(c, nums.back());
    }
    if (kind == "halfspace") {
        need(dim + 1);
        Vector a = to_vector({nums.begin(), nums.end() - 1});
        return Region::halfspace(a, nums.back());
    }
    if (kind == "band") {
        need(3);
        int axis = static_cast<int>(nums[0]);
        if (axis < 1 || axis > state_dim)
            throw ConfigError("region '" + tokens + "': axis must lie in 1.." +
                              std::to_string(state_dim));
        return Region::axis_band(axis - 1, nums[1], nums[2]);
    }
    if (kind == "box") {
        need(2 * dim);
        Vector lo = to_vector({nums.begin(), nums.begin() + static_cast<long>(dim)});
        Vector hi = to_vector({nums.begin() + static_cast<long>(dim), nums.end()});
        return Region::box(lo, hi);
    }
    throw ConfigError("unknown region kind '" + kind + "' (ball | halfspace | band | box)");
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    KeyStore kv = read_key_store(text, origin);
    ExperimentConfig cfg;

    // plant
    cfg.plant_name = kv.require("plant.type");
    if (cfg.plant_name == "vanderpol") {
        std::tie(cfg.system, cfg.space) = make_vanderpol();
    } else if (cfg.plant_name == "aircraft") {
        std::tie(cfg.system, cfg.space) = make_aircraft();
    } else if (cfg.plant_name == "linear") {
        int n = static_cast<int>(kv.require_double("plant.state_dim"));
        int m = static_cast<int>(kv.require_double("plant.input_dim"));
        if (n <= 0 || m <= 0) throw ConfigError(origin + ": plant dimensions must be positive");
        Vector a_flat = kv.require_vector("plant.A");
        Vector b_flat = kv.require_vector("plant.B");
        if (a_flat.size() != n * n) throw ConfigError(origin + ": plant.A must hold n*n numbers");
        if (b_flat.size() != n * m) throw ConfigError(origin + ": plant.B must hold n*m numbers");
        Eigen::MatrixXd A(n, n), B(n, m);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) A(r, c) = a_flat[r * n + c];
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < m; ++c) B(r, c) = b_flat[r * m + c];
        cfg.system.state_dim = n;
        cfg.system.input_dim = m;
        cfg.system.drift = [A](const Vector& x) { return Vector(A * x); };
        for (int c = 0; c < m; ++c)
            cfg.system.input_maps.push_back(
                [col = Vector(B.col(c))](const Vector&) { return col; });
        cfg.system.bound_norm = kv.require_double("plant.M0");
        cfg.system.bound_lipschitz = kv.require_double("plant.M1");
        Vector ulo = kv.require_vector("plant.u_lower");
        Vector uhi = kv.require_vector("plant.u_upper");
        if (ulo.size() != m || uhi.size() != m)
            throw ConfigError(origin + ": plant.u_lower/u_upper must hold m numbers");
        cfg.space = ControlSpace(ulo, uhi);
        auto blo = kv.take_vector("plant.box_lower");
        auto bhi = kv.take_vector("plant.box_upper");
        if (blo && bhi) {
            if (blo->size() != n || bhi->size() != n)
                throw ConfigError(origin + ": plant.box_lower/box_upper must hold n numbers");
            cfg.system.box_lower = *blo;
            cfg.system.box_upper = *bhi;
        }
    } else {
        throw ConfigError(origin + ": unknown plant '" + cfg.plant_name +
                          "' (vanderpol | aircraft | linear)");
    }
    int n = cfg.system.state_dim;

    // goodness
    cfg.goodness_name = kv.require("goodness.type");
    double probe_dt = kv.take_double("goodness.probe_dt").value_or(1e-6);
    if (probe_dt <= 0.0) throw ConfigError(origin + ": goodness.probe_dt must be positive");
    if (cfg.goodness_name == "vanderpol") {
        cfg.goodness = vanderpol_goodness();
    } else if (cfg.goodness_name == "aircraft") {
        cfg.goodness = aircraft_goodness();
    } else if (cfg.goodness_name == "slope") {
        cfg.goodness = slope_goodness();
    } else if (cfg.goodness_name == "distance_rate") {
        cfg.goodness = distance_rate_goodness(parse_region(kv.require("goodness.region"), n), probe_dt);
    } else if (cfg.goodness_name == "zone") {
        cfg.goodness = zone_goodness(parse_region(kv.require("goodness.interior"), n),
                                     parse_region(kv.require("goodness.target"), n), probe_dt);
    } else if (cfg.goodness_name == "mixed") {
        cfg.goodness = mixed_goodness(parse_region(kv.require("goodness.bad"), n),
                                      parse_region(kv.require("goodness.target"), n),
                                      kv.require_double("goodness.d_bad_max"), probe_dt);
    } else if (cfg.goodness_name == "sequential") {
        int stages = static_cast<int>(kv.require_double("goodness.stages"));
        if (stages < 1) throw ConfigError(origin + ": goodness.stages must be >= 1");
        std::vector<std::pair<Region, GoodnessFunction>> list;
        for (int s = 1; s <= stages; ++s) {
            Region target = parse_region(kv.require("goodness.stage" + std::to_string(s)), n);
            GoodnessFunction stage_g = approach_goodness(target, probe_dt);
            list.emplace_back(std::move(target), std::move(stage_g));
        }
        cfg.goodness = sequential_goodness(std::move(list));
    } else {
        throw ConfigError(origin + ": unknown goodness '" + cfg.goodness_name +
                          "' (vanderpol | aircraft | slope | distance_rate | zone | mixed | sequential)");
    }
    auto lipschitz = kv.take_double("goodness.lipschitz");
    if (lipschitz) cfg.goodness.lipschitz = *lipschitz;

    // controller
    std::string mode = kv.require("controller.mode");
    if (mode == "coupled")
        cfg.decoupled = false;
    else if (mode == "decoupled")
        cfg.decoupled = true;
    else
        throw ConfigError(origin + ": controller.mode must be coupled or decoupled");
    cfg.cycle.delta = kv.require_double("controller.delta");
    if (!(cfg.cycle.delta > 0.0 && cfg.cycle.delta <= 1.0))
        throw ConfigError(origin + ": controller.delta must lie in (0,1]");
    if (cfg.decoupled) {
        cfg.cycle.learn_window = kv.require_double("controller.learn_window");
        cfg.cycle.cycle_period = kv.require_double("controller.cycle_period");
        if (*cfg.cycle.learn_window <= 0.0 || cfg.cycle.cycle_period <= 0.0)
            throw ConfigError(origin + ": decoupled cycle times must be positive");
        cfg.cycle.epsilon = kv.take_double("controller.epsilon").value_or(*cfg.cycle.learn_window);
    } else {
        cfg.cycle.epsilon = kv.require_double("controller.epsilon");
    }
    if (cfg.cycle.epsilon <= 0.0) throw ConfigError(origin + ": controller.epsilon must be positive");
    cfg.cycle.integrator_step = kv.take_double("controller.step");
    if (cfg.cycle.integrator_step && *cfg.cycle.integrator_step <= 0.0)
        throw ConfigError(origin + ": controller.step must be positive");
    cfg.t_end = kv.require_double("controller.t_end");
    if (cfg.t_end <= 0.0) throw ConfigError(origin + ": controller.t_end must be positive");
    auto opt = kv.take("controller.optimizer");
    if (opt) {
        try {
            cfg.cycle.optimizer.mode = optimizer_mode_from_string(*opt);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(origin + ": " + e.what());
        }
    }
    auto grid_points = kv.take_double("controller.grid_points");
    if (grid_points) {
        cfg.cycle.optimizer.grid_points_per_axis = static_cast<int>(*grid_points);
        if (cfg.cycle.optimizer.grid_points_per_axis < 2)
            throw ConfigError(origin + ": controller.grid_points must be >= 2");
    }

    // initial state
    cfg.x0 = kv.require_vector("initial.x0");
    if (cfg.x0.size() != n)
        throw ConfigError(origin + ": initial.x0 must hold state_dim numbers");

    // metrics
    if (auto v = kv.take("metrics.first_bad_time")) {
        MetricSpec ms;
        ms.kind = MetricSpec::Kind::first_bad_time;
        ms.region = parse_region(*v, n);
        cfg.metrics.push_back(std::move(ms));
    }
    if (auto v = kv.take("metrics.reach_time")) {
        MetricSpec ms;
        ms.kind = MetricSpec::Kind::reach_time;
        ms.region = parse_region(*v, n);
        cfg.metrics.push_back(std::move(ms));
    }
    if (auto v = kv.take("metrics.gap_trace")) {
        MetricSpec ms;
        ms.kind = MetricSpec::Kind::gap_trace;
        auto nums = parse_numbers(*v, "metrics.gap_trace");
        if (nums.size() != 1 || nums[0] < 2)
            throw ConfigError(origin + ": metrics.gap_trace takes the oracle grid size (>= 2)");
        ms.oracle_grid = static_cast<int>(nums[0]);
        cfg.metrics.push_back(std::move(ms));
    }
    if (auto v = kv.take("metrics.settle")) {
        MetricSpec ms;
        ms.kind = MetricSpec::Kind::settle;
        auto nums = parse_numbers(*v, "metrics.settle");
        if (nums.size() != 2)
            throw ConfigError(origin + ": metrics.settle takes '<axis> <tolerance>'");
        ms.settle_axis = static_cast<int>(nums[0]);
        if (ms.settle_axis < 1 || ms.settle_axis > n)
            throw ConfigError(origin + ": metrics.settle axis must lie in 1.." + std::to_string(n));
        ms.settle_tol = nums[1];
        if (ms.settle_tol <= 0.0)
            throw ConfigError(origin + ": metrics.settle tolerance must be positive");
        cfg.metrics.push_back(std::move(ms));
    }

    // output
    cfg.trajectory_csv = kv.take("output.trajectory").value_or("");
    cfg.cycles_csv = kv.take("output.cycles").value_or("");
    cfg.summary_path = kv.take("output.summary").value_or("");

    cfg.seed = static_cast<long>(kv.take_double("misc.seed").value_or(0.0));

    kv.finish();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

} // namespace myopic
