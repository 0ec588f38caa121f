#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "myopic/dynamics.hpp"

using namespace myopic;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

ControlAffineSystem zero_system(int n, int m) {
    ControlAffineSystem sys;
    sys.state_dim = n;
    sys.input_dim = m;
    sys.drift = [n](const Vector&) { return Vector(Vector::Zero(n)); };
    for (int i = 0; i < m; ++i)
        sys.input_maps.push_back([n](const Vector&) { return Vector(Vector::Zero(n)); });
    return sys;
}

PiecewiseConstantLaw constant_law(const Vector& u) {
    PiecewiseConstantLaw law;
    law.breakpoints = {0.0};
    law.values = {u};
    return law;
}

} // namespace

TEST_CASE("evaluate_rhs matches hand-evaluated benchmark values") {
    auto [vdp, vdp_space] = make_vanderpol();
    CHECK(evaluate_rhs(vdp, vec({1.0, -2.0}), vec({0.0})).isApprox(vec({-2.0, -1.0}), 1e-15));

    auto [air, air_space] = make_aircraft();
    Vector level = vec({0.0, 0.0, 0.0, 0.0, 100.0});
    CHECK(evaluate_rhs(air, level, vec({0.0, 0.0})).norm() == doctest::Approx(0.0).epsilon(1e-15));

    ControlAffineSystem sys = zero_system(3, 1);
    sys.input_maps[0] = [](const Vector&) {
        Vector g(3);
        g << 1.0, 0.0, 0.0;
        return g;
    };
    CHECK(evaluate_rhs(sys, Vector::Zero(3), vec({1.0})).isApprox(vec({1.0, 0.0, 0.0})));
}

TEST_CASE("evaluate_rhs rejects dimension mismatches") {
    auto [vdp, space] = make_vanderpol();
    CHECK_THROWS_AS(evaluate_rhs(vdp, Vector::Zero(3), vec({0.0})), std::invalid_argument);
    CHECK_THROWS_AS(evaluate_rhs(vdp, Vector::Zero(2), Vector::Zero(2)), std::invalid_argument);
}

TEST_CASE("make_vanderpol returns the benchmark oscillator") {
    auto [sys, space] = make_vanderpol();
    CHECK(sys.state_dim == 2);
    CHECK(sys.input_dim == 1);
    CHECK(sys.input_maps[0](vec({3.7, -1.2})).isApprox(vec({0.0, 1.0})));
    CHECK(sys.drift(vec({0.0, 0.0})).norm() == 0.0);
    CHECK(sys.drift(vec({1.0, -2.0})).isApprox(vec({-2.0, -1.0})));
    CHECK(sys.bound_norm == 250.0);
    CHECK(sys.bound_lipschitz == 99.0);
    CHECK(space.lower[0] == -2.0);
    CHECK(space.upper[0] == 2.0);
}

TEST_CASE("make_aircraft returns the damaged-aircraft model") {
    auto [sys, space] = make_aircraft();
    CHECK(sys.state_dim == 5);
    CHECK(sys.input_dim == 2);
    Vector x = vec({4.0, 0.0, -2.0, 7.0, 350.0});
    CHECK(sys.input_maps[0](x).isApprox(vec({0.01, -0.064, -0.378, 0.0, 0.0})));
    CHECK(sys.input_maps[1](x).isApprox(vec({1.0, -0.044, 0.544, 0.0, 0.0})));
    CHECK(space.lower.isApprox(vec({-30.0, -1.0})));
    CHECK(space.upper.isApprox(vec({30.0, 1.0})));
    // declared bounds cover the effective (normalized-input) plant on the box
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        Vector xs(5);
        for (int i = 0; i < 5; ++i)
            xs[i] = 0.5 * ((*sys.box_lower)[i] + (*sys.box_upper)[i]) +
                    0.5 * unit(rng) * ((*sys.box_upper)[i] - (*sys.box_lower)[i]);
        Vector center = 0.5 * (space.lower + space.upper);
        Vector eff_f = evaluate_rhs(sys, xs, center);
        CHECK(eff_f.norm() <= sys.bound_norm);
        for (int i = 0; i < 2; ++i) {
            double half = 0.5 * (space.upper[i] - space.lower[i]);
            CHECK((sys.input_maps[i](xs) * half).norm() <= sys.bound_norm);
        }
    }
}

TEST_CASE("control space normalization round-trips") {
    auto [sys, space] = make_aircraft();
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Vector> pts;
    for (int c = 0; c < 4; ++c)
        pts.push_back(vec({c & 1 ? 30.0 : -30.0, c & 2 ? 1.0 : -1.0}));
    for (int i = 0; i < 50; ++i)
        pts.push_back(vec({-30.0 + 60.0 * unit(rng), -1.0 + 2.0 * unit(rng)}));
    for (const auto& u : pts) {
        Vector round = space.denormalize(space.normalize(u));
        CHECK((round - u).cwiseAbs().maxCoeff() <= 1e-12);
        Vector norm = space.normalize(u);
        CHECK(norm.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
    }
    CHECK(space.normalize(vec({30.0, 1.0})).isApprox(vec({1.0, 1.0})));
    CHECK(space.normalize(vec({-30.0, -1.0})).isApprox(vec({-1.0, -1.0})));
}

TEST_CASE("integrate: zero dynamics stay put") {
    ControlAffineSystem sys = zero_system(2, 1);
    Vector x0 = vec({0.4, -1.5});
    Trajectory traj = integrate(sys, x0, constant_law(vec({0.7})), 1.0, 0.01);
    for (const auto& x : traj.states) CHECK((x - x0).norm() == 0.0);
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == 1.0);
}

TEST_CASE("integrate: constant drift is exact") {
    ControlAffineSystem sys = zero_system(1, 1);
    sys.drift = [](const Vector&) { return vec({1.0}); };
    Trajectory traj = integrate(sys, vec({0.0}), constant_law(vec({0.0})), 1.0, 0.013);
    CHECK(traj.final_state()[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("integrate: Van der Pol agrees with a half-step rerun") {
    auto [sys, space] = make_vanderpol();
    Vector x0 = vec({1.0, -2.0});
    Trajectory coarse = integrate(sys, x0, constant_law(vec({0.0})), 0.1, 1e-4);
    Trajectory fine = integrate(sys, x0, constant_law(vec({0.0})), 0.1, 5e-5);
    CHECK((coarse.final_state() - fine.final_state()).norm() <= 1e-8);
}

TEST_CASE("integrate is deterministic bit for bit") {
    auto [sys, space] = make_vanderpol();
    Vector x0 = vec({0.3, 0.9});
    PiecewiseConstantLaw law;
    law.breakpoints = {0.0, 0.05, 0.11};
    law.values = {vec({1.0}), vec({-2.0}), vec({0.5})};
    Trajectory a = integrate(sys, x0, law, 0.2, 1e-3);
    Trajectory b = integrate(sys, x0, law, 0.2, 1e-3);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.times[i] == b.times[i]);
        CHECK(a.states[i] == b.states[i]);
    }
}

TEST_CASE("integrate never steps across a law breakpoint") {
    // x' = u makes the final state the exact time-weighted sum of controls
    ControlAffineSystem sys = zero_system(1, 1);
    sys.input_maps[0] = [](const Vector&) { return vec({1.0}); };
    PiecewiseConstantLaw law;
    law.breakpoints = {0.0, 0.35, 0.5};
    law.values = {vec({1.0}), vec({-1.0}), vec({2.0})};
    Trajectory traj = integrate(sys, vec({0.0}), law, 0.8, 0.1);
    double expected = 0.35 * 1.0 + 0.15 * (-1.0) + 0.3 * 2.0;
    CHECK(traj.final_state()[0] == doctest::Approx(expected).epsilon(1e-13));
    // the breakpoints appear exactly as sample times
    for (double b : {0.35, 0.5})
        CHECK(std::find(traj.times.begin(), traj.times.end(), b) != traj.times.end());
}

TEST_CASE("integrate reports divergence with the last finite sample") {
    ControlAffineSystem sys = zero_system(1, 1);
    sys.drift = [](const Vector& x) { return vec({x[0] * x[0] * x[0]}); };
    try {
        integrate(sys, vec({10.0}), constant_law(vec({0.0})), 5.0, 1e-3);
        FAIL("expected DivergenceError");
    } catch (const DivergenceError& e) {
        CHECK(e.time < 5.0);
        CHECK(std::isfinite(e.last_state[0]));
        CHECK(!e.partial.empty());
        CHECK(e.partial.times.back() == e.time);
    }
}

TEST_CASE("integrate flags leaving the operating box as a warning, not an error") {
    ControlAffineSystem sys = zero_system(1, 1);
    sys.drift = [](const Vector&) { return vec({1.0}); };
    sys.box_lower = vec({-1.0});
    sys.box_upper = vec({1.0});
    Trajectory traj = integrate(sys, vec({0.0}), constant_law(vec({0.0})), 2.0, 0.01);
    REQUIRE(traj.first_box_exit.has_value());
    CHECK(*traj.first_box_exit == doctest::Approx(1.01).epsilon(1e-9));
    CHECK(traj.final_state()[0] == doctest::Approx(2.0));
}

TEST_CASE("displacement along any admissible trajectory obeys M0 (m+1) |t1-t2|") {
    auto [sys, space] = make_vanderpol();
    PiecewiseConstantLaw law;
    law.breakpoints = {0.0, 0.02, 0.07};
    law.values = {vec({2.0}), vec({-2.0}), vec({1.3})};
    Trajectory traj = integrate(sys, vec({1.0, -2.0}), law, 0.1, 1e-4);
    CHECK(!traj.first_box_exit.has_value());
    double rate = sys.bound_norm * (sys.input_dim + 1);
    for (std::size_t i = 1; i < traj.size(); ++i) {
        double dt = traj.times[i] - traj.times[i - 1];
        CHECK((traj.states[i] - traj.states[i - 1]).norm() <= rate * dt + 1e-12);
    }
}

TEST_CASE("augment_with_disturbance: zero disturbance reproduces the base system") {
    auto [sys, space] = make_vanderpol();
    auto aug = augment_with_disturbance(
        sys, [](double, const Vector& x) { return Vector(Vector::Zero(x.size())); }, 0.0, 0.0);
    CHECK(aug.state_dim == 3);
    CHECK(aug.input_dim == 1);

    Vector x0 = vec({1.0, -2.0});
    Vector x0_aug = vec({1.0, -2.0, 0.0});
    PiecewiseConstantLaw law = constant_law(vec({0.8}));
    Trajectory base = integrate(sys, x0, law, 0.2, 1e-3);
    Trajectory lifted = integrate(aug, x0_aug, law, 0.2, 1e-3);
    REQUIRE(base.size() == lifted.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK((lifted.states[i].head(2) - base.states[i]).norm() <= 1e-12);
        CHECK(lifted.states[i][2] == doctest::Approx(lifted.times[i]).epsilon(1e-12));
    }
}

TEST_CASE("augment_with_disturbance bound arithmetic") {
    ControlAffineSystem sys = zero_system(2, 1);
    auto zero_n = [](double, const Vector& x) { return Vector(Vector::Zero(x.size())); };
    sys.bound_norm = 2.0;
    sys.bound_lipschitz = 1.5;
    auto a = augment_with_disturbance(sys, zero_n, 0.5, 0.25);
    CHECK(a.bound_norm == 2.5);
    CHECK(a.bound_lipschitz == 1.75);

    sys.bound_norm = 0.3;
    auto b = augment_with_disturbance(sys, zero_n, 0.1, 0.0);
    CHECK(b.bound_norm == 1.0);
}
