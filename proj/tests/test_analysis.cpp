#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "myopic/analysis.hpp"

using namespace myopic;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

Trajectory line_path(const Vector& from, const Vector& to, double t_end, int samples) {
    Trajectory traj;
    for (int i = 0; i < samples; ++i) {
        double w = static_cast<double>(i) / (samples - 1);
        traj.append(w * t_end, (1.0 - w) * from + w * to, Vector::Zero(1));
    }
    return traj;
}

} // namespace

TEST_CASE("suboptimality_bound reproduces the oscillator instantiation") {
    // 6 L (M0+1)(M1+1)(m+1)^3 = 34,939,200 and L M0 (m+1) = 14,500
    for (auto [eps, del] : std::vector<std::pair<double, double>>{
             {1e-4, 1e-3}, {1e-7, 1e-4}, {2e-5, 5e-3}, {1e-6, 1.0}, {3.3e-8, 2.7e-2}}) {
        BoundInputs b{29.0, 250.0, 99.0, 1, eps, del};
        double expected = 34939200.0 * (1.0 + 4.0 / del) * eps + 14500.0 * del;
        CHECK(suboptimality_bound(b) == doctest::Approx(expected).epsilon(1e-9));
    }
    CHECK(suboptimality_bound(BoundInputs{1.0, 1.0, 1.0, 1, 0.0, 0.1}) ==
          doctest::Approx(1.0 * 1.0 * 2.0 * 0.1).epsilon(1e-12));
    CHECK(suboptimality_bound(BoundInputs{0.0, 0.0, 0.0, 0, 0.0, 0.5}) == 0.0);
}

TEST_CASE("suboptimality_bound is monotone and has one interior minimum in delta") {
    BoundInputs base{2.0, 3.0, 4.0, 2, 1e-4, 0.05};
    double v0 = suboptimality_bound(base);
    auto bump = [&](auto field) {
        BoundInputs b = base;
        field(b);
        return suboptimality_bound(b);
    };
    CHECK(bump([](BoundInputs& b) { b.L *= 2.0; }) >= v0);
    CHECK(bump([](BoundInputs& b) { b.M0 *= 2.0; }) >= v0);
    CHECK(bump([](BoundInputs& b) { b.M1 *= 2.0; }) >= v0);
    CHECK(bump([](BoundInputs& b) { b.m += 1; }) >= v0);
    CHECK(bump([](BoundInputs& b) { b.epsilon *= 2.0; }) >= v0);

    // scan delta: strictly decreasing, then strictly increasing
    std::vector<double> values;
    for (double d = 1e-4; d <= 1.0; d *= 1.12)
        values.push_back(suboptimality_bound(BoundInputs{2.0, 3.0, 4.0, 2, 1e-4, d}));
    std::size_t argmin = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] < values[argmin]) argmin = i;
    CHECK(argmin > 0);
    CHECK(argmin < values.size() - 1);
    for (std::size_t i = 1; i <= argmin; ++i) CHECK(values[i] < values[i - 1]);
    for (std::size_t i = argmin + 1; i < values.size(); ++i) CHECK(values[i] > values[i - 1]);
}

TEST_CASE("intermediate_bound closed form") {
    BoundInputs b{1.0, 2.0, 3.0, 1, 0.0, 0.1};
    CHECK(intermediate_bound(b, 0.0, 0.0, 0.0, false) == 0.0);
    CHECK(intermediate_bound(b, 0.0, 0.0, 0.5, false) == doctest::Approx(1.0));
    CHECK(intermediate_bound(b, 0.0, 0.0, 0.5, true) == doctest::Approx(1.4));
    CHECK(intermediate_bound(b, 0.25, 0.5, 0.0, false) ==
          doctest::Approx(2.0 * 0.25 + 2.0 * 3.0 * 2.0 * 0.5));
}

TEST_CASE("select_parameters always lands under the target") {
    std::mt19937 rng(47);
    std::uniform_real_distribution<double> logu(-2.0, 2.0);
    for (int trial = 0; trial < 1000; ++trial) {
        double L = std::pow(10.0, logu(rng));
        double M0 = std::pow(10.0, logu(rng));
        double M1 = std::pow(10.0, logu(rng));
        int m = 1 + trial % 5;
        double eta = std::pow(10.0, logu(rng));
        auto [eps, del] = select_parameters(L, M0, M1, m, eta);
        CHECK(eps > 0.0);
        CHECK(del > 0.0);
        CHECK(del <= 1.0);
        CHECK(suboptimality_bound(BoundInputs{L, M0, M1, m, eps, del}) <= eta * (1.0 + 1e-12));
    }
}

TEST_CASE("select_parameters matches the oscillator conservatism scale") {
    // target: the best initial goodness at the benchmark start state
    double eta = std::atan(2.0);
    auto [eps, del] = select_parameters(29.0, 250.0, 99.0, 1, eta);
    CHECK(eps < 1e-7);
    CHECK(del < 1e-4);

    auto [eps_huge, del_huge] = select_parameters(1.0, 1.0, 1.0, 1, 1e9);
    CHECK(del_huge == 1.0);
    CHECK(std::isfinite(eps_huge));
}

TEST_CASE("first_bad_time scans and refines crossings") {
    Region bad = Region::halfspace(vec({1.0, 0.0}), 0.0); // x1 <= 0
    Trajectory outside = line_path(vec({3.0, 0.0}), vec({1.0, 0.0}), 1.0, 11);
    CHECK(!first_bad_time(outside, bad).has_value());

    Trajectory inside_start = line_path(vec({-1.0, 0.0}), vec({-2.0, 0.0}), 1.0, 11);
    CHECK(first_bad_time(inside_start, bad) == 0.0);

    // crossing exactly halfway through the run
    Trajectory crossing = line_path(vec({1.0, 0.0}), vec({-1.0, 0.0}), 2.0, 21);
    auto t = first_bad_time(crossing, bad);
    REQUIRE(t.has_value());
    CHECK(*t == doctest::Approx(1.0).epsilon(2e-3));

    CHECK_THROWS_AS(first_bad_time(Trajectory{}, bad), std::invalid_argument);
}

TEST_CASE("reach_time finds the last entry with no later exit") {
    Region target = Region::ball(vec({0.0, 0.0}), 1.0);
    Trajectory inside = line_path(vec({0.1, 0.0}), vec({-0.1, 0.0}), 1.0, 5);
    CHECK(reach_time(inside, target, 1.0) == 0.0);

    Trajectory never = line_path(vec({5.0, 0.0}), vec({3.0, 0.0}), 1.0, 5);
    CHECK(!reach_time(never, target, 1.0).has_value());

    // enters at t = 3 of a 6 second run and stays
    Trajectory enters;
    for (int i = 0; i <= 60; ++i) {
        double t = 0.1 * i;
        double x = t < 3.0 ? 4.0 - t : 1.0 - 0.01 * (t - 3.0);
        enters.append(t, vec({x, 0.0}), Vector::Zero(1));
    }
    auto t = reach_time(enters, target, 6.0);
    REQUIRE(t.has_value());
    CHECK(*t == doctest::Approx(3.0).epsilon(0.04));

    // dips out near the end: no reach
    Trajectory dips = inside;
    dips.append(2.0, vec({5.0, 0.0}), Vector::Zero(1));
    CHECK(!reach_time(dips, target, 2.0).has_value());
}

TEST_CASE("first_bad_time is never later than reach_time into the same set") {
    Region set = Region::ball(vec({0.0, 0.0}), 0.5);
    Trajectory traj = line_path(vec({2.0, 0.0}), vec({0.0, 0.0}), 4.0, 81);
    auto bad = first_bad_time(traj, set);
    auto reach = reach_time(traj, set, 4.0);
    REQUIRE(bad.has_value());
    REQUIRE(reach.has_value());
    CHECK(*bad <= *reach + 1e-12);
}

TEST_CASE("oracle_gap_trace: exact model gives zero gap, and gaps are never negative") {
    auto [sys, space] = make_vanderpol();
    auto g = vanderpol_goodness();

    // hand-build records whose model is the true local dynamics in normalized
    // coordinates; the chosen control is then the true argmax
    std::mt19937 rng(53);
    std::uniform_real_distribution<double> unit(-2.0, 2.0);
    Trajectory traj;
    std::vector<CycleRecord> records;
    double half = 0.5 * (space.upper[0] - space.lower[0]);
    traj.append(0.0, vec({1.0, -2.0}), vec({0.0}));
    for (int k = 0; k < 25; ++k) {
        double t = 0.1 * (k + 1);
        Vector x = vec({unit(rng), unit(rng)});
        traj.append(t, x, vec({0.0}));

        LocalAffineModel model;
        model.f_tilde = sys.drift(x);
        model.g_tilde = {sys.input_maps[0](x) * half};
        model.anchor_state = x;
        model.anchor_time = t;
        Trajectory prefix;
        for (std::size_t i = 0; i < traj.size(); ++i)
            prefix.append(traj.times[i], traj.states[i], traj.controls[i]);
        auto [u, val] = maximize_goodness(g, prefix, model, OptimizerSpec{});
        records.push_back(CycleRecord{k, t, x, model, u, val, {}});
    }
    auto trace = oracle_gap_trace(sys, space, records, traj, g, 101,
                                  BoundInputs{29.0, 250.0, 99.0, 1, 1e-4, 1e-3});
    REQUIRE(trace.entries.size() == records.size());
    for (const auto& e : trace.entries) {
        CHECK(e.gap >= -1e-12);
        CHECK(e.gap <= 1e-9); // exact model: realized equals the oracle max
    }
    REQUIRE(trace.bound.has_value());
    CHECK(*trace.bound == doctest::Approx(34939200.0 * 4001.0 * 1e-4 + 14.5));
    CHECK(trace.max_gap() <= 1e-9);
}
