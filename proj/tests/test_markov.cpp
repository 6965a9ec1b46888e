#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "ggf/markov.hpp"

using namespace ggf;

static const std::function<double(const Face&)> half = [](const Face&) { return 0.5; };

TEST_CASE("stationary measure from the zero potential is the volume measure") {
    const Tessellation t = build_lattice(0.25, 2, {1.0, 1.0});
    const StationaryMeasure pi = pi_from_potential(t, [](const Vec&) { return 0.0; });
    CHECK(pi.total() == doctest::Approx(1.0).epsilon(1e-13));
    for (const Cell& c : t.cells)
        CHECK(pi.mass[c.id] == doctest::Approx(0.0625).epsilon(1e-13));
}

TEST_CASE("stationary measure from a linear potential in 1-D") {
    const Tessellation t = build_lattice(0.5, 1, {1.0});
    const StationaryMeasure pi = pi_from_potential(t, [](const Vec& x) { return x[0]; });
    // closed-form cell masses of e^{-x} on [0, 1/2] and [1/2, 1]
    const double m0 = 1.0 - std::exp(-0.5);
    const double m1 = std::exp(-0.5) - std::exp(-1.0);
    CHECK(pi.mass[0] / pi.mass[1] == doctest::Approx(std::exp(0.5)).epsilon(1e-12));
    CHECK(pi.mass[0] == doctest::Approx(m0 / (m0 + m1)).epsilon(1e-12));
}

TEST_CASE("conductance kernel rates on the square lattice") {
    const double h = 0.25;
    const Tessellation t = build_lattice(h, 2, {1.0, 1.0});
    const StationaryMeasure pi = pi_from_potential(t, [](const Vec&) { return 0.0; });
    const auto [kappa, theta] = kernel_from_conductance(t, pi, half);
    for (std::size_t f = 0; f < t.n_faces(); ++f) {
        CHECK(theta.weight[f] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(kappa.rate[f][0] == doctest::Approx(1.0 / (2.0 * h * h)).epsilon(1e-12));
        CHECK(kappa.rate[f][1] == doctest::Approx(1.0 / (2.0 * h * h)).epsilon(1e-12));
    }
}

TEST_CASE("axis-dependent conductance gives direction-dependent rates") {
    const double h = 0.25;
    const Tessellation t = build_lattice(h, 2, {1.0, 1.0});
    const StationaryMeasure pi = pi_from_potential(t, [](const Vec&) { return 0.0; });
    const auto c_axis = [](const Face& f) {
        return std::abs(f.normal[0]) >= std::abs(f.normal[1]) ? 0.5 : 1.5;
    };
    const auto [kappa, theta] = kernel_from_conductance(t, pi, c_axis);
    for (std::size_t f = 0; f < t.n_faces(); ++f) {
        // kappa = c / h^2 since theta = c and pi(K) = h^2
        const double expected = (std::abs(t.faces[f].normal[0]) > 0.5 ? 0.5 : 1.5) / (h * h);
        CHECK(kappa.rate[f][0] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("conductance kernel on the 1-D mixed tessellation") {
    const Tessellation t = build_1d_mixed(0.5);
    const StationaryMeasure pi = pi_from_potential(t, [](const Vec&) { return 0.0; });
    const auto [kappa, theta] = kernel_from_conductance(t, pi, half);
    for (std::size_t f = 0; f < t.n_faces(); ++f) {
        // theta = 0.5 / dist with unit face area in d=1
        CHECK(theta.weight[f] == doctest::Approx(0.5 / t.faces[f].center_distance));
        CHECK(kappa.rate[f][0] ==
              doctest::Approx(theta.weight[f] / pi.mass[t.faces[f].k]).epsilon(1e-13));
    }
    CHECK(check_detailed_balance(t, pi, kappa) <= 1e-14);
}

TEST_CASE("explicit kernel round-trip and validation") {
    const Tessellation t = build_lattice(0.5, 2, {1.0, 1.0});
    const StationaryMeasure pi = pi_from_potential(t, [](const Vec&) { return 0.0; });
    const auto [kappa, theta] = kernel_from_conductance(t, pi, half);

    std::map<std::pair<int, int>, double> rates;
    for (std::size_t f = 0; f < t.n_faces(); ++f) {
        rates[{t.faces[f].k, t.faces[f].l}] = kappa.rate[f][0];
        rates[{t.faces[f].l, t.faces[f].k}] = kappa.rate[f][1];
    }
    const JumpKernel back = kernel_explicit(t, rates);
    for (std::size_t f = 0; f < t.n_faces(); ++f) {
        CHECK(back.rate[f][0] == kappa.rate[f][0]);
        CHECK(back.rate[f][1] == kappa.rate[f][1]);
    }
    rates.erase(rates.begin());
    CHECK_THROWS(kernel_explicit(t, rates));
}

TEST_CASE("detailed balance residual") {
    const Tessellation t = build_lattice(0.5, 1, {1.0});
    StationaryMeasure pi;
    pi.mass = {0.5, 0.5};

    SUBCASE("conductance construction balances exactly") {
        const auto [kappa, theta] = kernel_from_conductance(t, pi, half);
        CHECK(check_detailed_balance(t, pi, kappa) <= 1e-14);
    }
    SUBCASE("asymmetric rates are detected") {
        JumpKernel kappa = kernel_explicit(t, {{{0, 1}, 3.0}, {{1, 0}, 1.0}});
        // flows are pi k = 1.5 vs 0.5, relative residual 1/1.5 = 2/3
        CHECK(check_detailed_balance(t, pi, kappa) == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("zero kernel balances trivially") {
        JumpKernel kappa = kernel_explicit(t, {{{0, 1}, 0.0}, {{1, 0}, 0.0}});
        CHECK(check_detailed_balance(t, pi, kappa) == 0.0);
    }
}

TEST_CASE("assumption report on the uniform lattice") {
    const Tessellation t = build_lattice(0.125, 2, {1.0, 1.0});
    const StationaryMeasure pi = pi_from_potential(t, [](const Vec&) { return 0.0; });
    const auto [kappa, theta] = kernel_from_conductance(t, pi, half);
    AssumptionReport r = check_assumptions(t, pi, theta);
    r.db_residual = check_detailed_balance(t, pi, kappa);

    CHECK(r.pi_min == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.pi_max == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.c_lower == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.c_upper == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.c_kappa == doctest::Approx(2.0).epsilon(1e-12));  // 4 faces / (2 h^2) * h^2
    CHECK(r.db_residual <= 1e-14);
    for (const auto& [id, v] : r.aloc_residual) CHECK(v <= 1e-13);
    CHECK(!r.aloc_residual.empty());
}

TEST_CASE("jump-rate bound follows the covering chain inequality") {
    // c_kappa <= c_upper * card_max / (C_d zeta^d pi_min), C_d the unit-ball volume
    struct Fix {
        Tessellation t;
        double cd;
    };
    std::vector<Fix> fixtures;
    fixtures.push_back({build_lattice(0.125, 2, {1.0, 1.0}), M_PI});
    fixtures.push_back({build_tilted_lattice(0.125, 0.5, 8, 8), M_PI});
    fixtures.push_back({build_lattice(0.125, 1, {1.0}), 2.0});
    for (const Fix& fix : fixtures) {
        const Tessellation& t = fix.t;
        const StationaryMeasure pi = pi_from_potential(t, [](const Vec&) { return 0.0; });
        const auto [kappa, theta] = kernel_from_conductance(t, pi, half);
        const AssumptionReport r = check_assumptions(t, pi, theta);
        const NondegeneracyReport nd = check_nondegeneracy(t, 0.0);
        const double bound = r.c_upper * nd.card_max /
                             (fix.cd * std::pow(t.zeta, t.dim) * r.pi_min);
        CHECK(r.c_kappa <= bound * (1.0 + 1e-9));
    }
}

TEST_CASE("kernel scales linearly with the conductance") {
    const Tessellation t = build_lattice(0.25, 2, {1.0, 1.0});
    const StationaryMeasure pi = pi_from_potential(t, [](const Vec&) { return 0.0; });
    const auto [k1, th1] = kernel_from_conductance(t, pi, half);
    const auto [k3, th3] =
        kernel_from_conductance(t, pi, [](const Face&) { return 1.5; });
    for (std::size_t f = 0; f < t.n_faces(); ++f) {
        CHECK(k3.rate[f][0] == doctest::Approx(3.0 * k1.rate[f][0]).epsilon(1e-13));
        CHECK(th3.weight[f] == doctest::Approx(3.0 * th1.weight[f]).epsilon(1e-13));
    }
    CHECK(check_detailed_balance(t, pi, k3) <= 1e-14);
}

TEST_CASE("joint measure reproduces the conductance weights under DB") {
    const Tessellation t = build_1d_mixed(0.25);
    const StationaryMeasure pi =
        pi_from_potential(t, [](const Vec& x) { return 0.3 * x[0]; });
    const auto [kappa, theta] = kernel_from_conductance(t, pi, half);
    const JointMeasure again = joint_from(t, pi, kappa);
    for (std::size_t f = 0; f < t.n_faces(); ++f)
        CHECK(again.weight[f] == doctest::Approx(theta.weight[f]).epsilon(1e-13));
}

TEST_CASE("assumption report serializes to JSON") {
    const Tessellation t = build_lattice(0.5, 2, {1.0, 1.0});
    const StationaryMeasure pi = pi_from_potential(t, [](const Vec&) { return 0.0; });
    const auto [kappa, theta] = kernel_from_conductance(t, pi, half);
    const AssumptionReport r = check_assumptions(t, pi, theta);
    const std::string s = r.to_json();
    CHECK(s.find("\"pi_min\":") != std::string::npos);
    CHECK(s.find("\"c_kappa\":") != std::string::npos);
    CHECK(s.find("\"zeta\":") != std::string::npos);
}
