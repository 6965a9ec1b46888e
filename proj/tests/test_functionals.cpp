#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "ggf/cosh_pair.hpp"
#include "ggf/dynamics.hpp"
#include "ggf/functionals.hpp"

using namespace ggf;

// Two- and three-cell 1-D fixtures with explicit data, owned by the harness.
struct Fixture {
    Tessellation t;
    MarkovData md;

    Fixture(double h, std::vector<double> pi_mass, double rate)
        : t(build_lattice(h, 1, {1.0})) {
        StationaryMeasure pi;
        pi.mass = std::move(pi_mass);
        std::map<std::pair<int, int>, double> rates;
        for (const Face& f : t.faces) {
            // detailed-balance symmetric rates: theta = rate on every face
            rates[{f.k, f.l}] = rate / pi.mass[f.k];
            rates[{f.l, f.k}] = rate / pi.mass[f.l];
        }
        md = make_markov(t, pi, kernel_explicit(t, rates));
    }

    DiscreteState state(std::vector<double> rho) const {
        DiscreteState s;
        s.rho = std::move(rho);
        s.data = &md;
        return s;
    }
};

TEST_CASE("gradient and divergence on small graphs") {
    Fixture fx(1.0 / 3.0, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 1.0);
    const auto g = graph_gradient(fx.t, {1.0, 4.0, 9.0});
    REQUIRE(g.size() == 2);
    CHECK(g[0] == 3.0);
    CHECK(g[1] == 5.0);

    FluxField j;
    j.value = {2.0, -1.0};
    const auto div = graph_divergence(fx.t, j);
    CHECK(div[0] == 4.0);    // 2 j_0 leaving cell 0
    CHECK(div[1] == -6.0);   // -2 j_0 + 2 j_1
    CHECK(div[2] == 2.0);    // -2 j_1
    CHECK(div[0] + div[1] + div[2] == 0.0);
}

TEST_CASE("summation by parts on random data") {
    Fixture fx(0.1, std::vector<double>(10, 0.1), 1.0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> phi(10);
        for (double& v : phi) v = u(rng);
        FluxField j;
        j.value.resize(fx.t.n_faces());
        for (double& v : j.value) v = u(rng);
        const auto div = graph_divergence(fx.t, j);
        const auto grad = graph_gradient(fx.t, phi);
        double lhs = 0.0;
        for (std::size_t k = 0; k < 10; ++k) lhs += phi[k] * div[k];
        double rhs = 0.0;
        for (std::size_t f = 0; f < fx.t.n_faces(); ++f) rhs -= 2.0 * grad[f] * j.value[f];
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("relative entropy") {
    Fixture fx(0.5, {0.5, 0.5}, 1.0);
    SUBCASE("vanishes at equilibrium") {
        CHECK(energy(fx.state({0.5, 0.5})) == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("point mass on two cells gives log 2") {
        // u = (2, 0): E = pi(0) phi(2) + pi(1) phi(0) = (2 log 2 - 1)/2 + 1/2
        CHECK(energy(fx.state({1.0, 0.0})) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    }
    SUBCASE("negative mass is rejected") {
        CHECK_THROWS(energy(fx.state({1.2, -0.2})));
    }
}

TEST_CASE("dual dissipation") {
    Fixture fx(0.5, {0.5, 0.5}, 1.0);  // theta = 1 on the single face
    const DiscreteState eq = fx.state({0.5, 0.5});  // u = (1,1)
    CHECK(dual_dissipation(eq, {0.0}) == 0.0);
    CHECK(dual_dissipation(eq, {1.0}) ==
          doctest::Approx(cosh_pair::psi_star(1.0)).epsilon(1e-14));
    // monotone in |xi|
    double prev = 0.0;
    for (double xi = 0.25; xi <= 4.0; xi += 0.25) {
        const double v = dual_dissipation(eq, {xi});
        CHECK(v > prev);
        CHECK(v == dual_dissipation(eq, {-xi}));
        prev = v;
    }
    // faces with a vanishing endpoint contribute nothing
    CHECK(dual_dissipation(fx.state({1.0, 0.0}), {3.0}) == 0.0);
}

TEST_CASE("primal dissipation") {
    Fixture fx(0.5, {0.5, 0.5}, 1.0);
    const DiscreteState eq = fx.state({0.5, 0.5});
    FluxField zero;
    zero.value = {0.0};
    CHECK(dissipation(eq, zero) == 0.0);

    FluxField j;
    j.value = {0.7};
    CHECK(std::isinf(dissipation(fx.state({1.0, 0.0}), j)));
    CHECK(dissipation(fx.state({1.0, 0.0}), zero) == 0.0);
}

TEST_CASE("primal dissipation is the Legendre transform of the dual") {
    // R(rho, j) = sup_xi [ <j, xi> - R*(rho, xi) ] with the ordered-pair
    // pairing <j, xi> = 2 sum_faces j xi; verified by grid + golden search.
    Fixture fx(1.0 / 3.0, {0.5, 0.3, 0.2}, 0.4);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> rho(3);
        for (double& v : rho) v = u(rng);
        const DiscreteState st = fx.state(rho);
        FluxField j;
        j.value = {u(rng) - 0.5, u(rng) - 0.5};
        const double primal = dissipation(st, j);

        double best = 0.0;  // the sup separates across faces
        for (std::size_t f = 0; f < 2; ++f) {
            // per-face concave maximization of 2 j xi - a psi_star(xi)
            auto obj = [&](double xi) {
                std::vector<double> xiv{0.0, 0.0};
                xiv[f] = xi;
                return 2.0 * j.value[f] * xi - dual_dissipation(st, xiv);
            };
            double lo = -60.0, hi = 60.0;
            for (int it = 0; it < 200; ++it) {
                const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
                if (obj(m1) < obj(m2))
                    lo = m1;
                else
                    hi = m2;
            }
            best += obj(0.5 * (lo + hi));
        }
        CHECK(primal == doctest::Approx(best).epsilon(1e-6));
    }
}

TEST_CASE("fisher information") {
    Fixture fx(0.5, {0.5, 0.5}, 1.0);
    CHECK(fisher(fx.state({0.5, 0.5})) == 0.0);
    // u = (4, 1), theta = 1: D = 2 (sqrt 4 - sqrt 1)^2 = 2
    CHECK(fisher(fx.state({2.0, 0.5})) == doctest::Approx(2.0).epsilon(1e-14));
    // symmetric under swapping the cells
    CHECK(fisher(fx.state({0.5, 2.0})) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("dual dissipation at the entropic tilt equals the fisher information") {
    // R*(rho, -grad log u) = D(rho), built on
    // psi_star(log a - log b) sqrt(a b) = 2 (sqrt a - sqrt b)^2.
    for (double a : {0.3, 1.0, 4.5})
        for (double b : {0.2, 1.7, 9.0}) {
            const double lhs =
                cosh_pair::psi_star(std::log(a) - std::log(b)) * std::sqrt(a * b);
            CHECK(lhs == doctest::Approx(2.0 * std::pow(std::sqrt(a) - std::sqrt(b), 2))
                             .epsilon(1e-12));
        }

    Fixture fx(1.0 / 3.0, {0.5, 0.3, 0.2}, 0.4);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<double> rho(3);
        for (double& v : rho) v = u(rng);
        const DiscreteState st = fx.state(rho);
        std::vector<double> logu(3);
        const auto uu = st.relative_density();
        for (int k = 0; k < 3; ++k) logu[k] = std::log(uu[k]);
        auto xi = graph_gradient(fx.t, logu);
        for (double& v : xi) v = -v;
        CHECK(dual_dissipation(st, xi) == doctest::Approx(fisher(st)).epsilon(1e-10));
    }
}

TEST_CASE("energy-dissipation balance functional") {
    Fixture fx(0.5, {0.5, 0.5}, 1.0);  // theta = 1, kappa = 2 both ways

    SUBCASE("zero on a stationary trajectory") {
        std::vector<DiscreteState> traj(5, fx.state({0.5, 0.5}));
        std::vector<FluxField> flux(4);
        for (auto& f : flux) f.value = {0.0};
        CHECK(std::abs(edb_functional(traj, flux, 0.01)) <= 1e-14);
    }

    SUBCASE("second-order small on the exact relaxation semigroup") {
        // rho_0(t) = 1/2 + c e^{-4t} with relaxation rate kappa_01+kappa_10 = 4
        auto exact = [&](double time) {
            const double c = 0.3 * std::exp(-4.0 * time);
            return fx.state({0.5 + c, 0.5 - c});
        };
        auto value_at = [&](double dt) {
            const int n = static_cast<int>(std::round(0.2 / dt));
            std::vector<DiscreteState> traj;
            std::vector<FluxField> flux;
            for (int i = 0; i <= n; ++i) traj.push_back(exact(i * dt));
            for (int i = 0; i < n; ++i) {
                DiscreteState mid = fx.state({0.0, 0.0});
                for (int k = 0; k < 2; ++k)
                    mid.rho[k] = 0.5 * (traj[i].rho[k] + traj[i + 1].rho[k]);
                flux.push_back(ggf_flux(mid));
            }
            return edb_functional(traj, flux, dt);
        };
        const double e1 = value_at(0.02), e2 = value_at(0.01), e3 = value_at(0.005);
        CHECK(std::abs(e2) < std::abs(e1));
        CHECK(std::abs(e3) < std::abs(e2));
        // defect integrates to O(dt^2) along the exact flow
        CHECK(std::abs(e2) <= 0.35 * std::abs(e1));
        CHECK(std::abs(e3) <= 0.35 * std::abs(e2));
    }

    SUBCASE("positive on perturbed fluxes") {
        Fixture fx3(1.0 / 3.0, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 1.0);
        const double dt = 0.01;
        std::vector<DiscreteState> traj;
        std::vector<FluxField> flux;
        Generator gen(fx3.md);
        DiscreteState cur = fx3.state({0.5, 0.3, 0.2});
        traj.push_back(cur);
        for (int i = 0; i < 10; ++i) {
            DiscreteState nxt = cur;
            nxt.rho = gen.step_implicit_euler(cur.rho, dt);
            DiscreteState mid = cur;
            for (int k = 0; k < 3; ++k) mid.rho[k] = 0.5 * (cur.rho[k] + nxt.rho[k]);
            FluxField j = ggf_flux(mid);
            for (double& v : j.value) v += 0.1;  // break the flow structure
            flux.push_back(j);
            traj.push_back(nxt);
            cur = nxt;
        }
        CHECK(edb_functional(traj, flux, dt) > 1e-4);
    }
}
