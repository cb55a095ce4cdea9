#include <doctest.h>

#include "alame/hill.hpp"
#include "alame/lame.hpp"

#include <cmath>
#include <vector>

using namespace alame;

namespace {
std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i)
        v.push_back(lo + (hi - lo) * i / double(n - 1));
    return v;
}
} // namespace

TEST_CASE("monodromy on reference potentials") {
    SUBCASE("free particle: D = 2 cos(sqrt(E) L)") {
        auto V0 = [](double) { return 0.0; };
        for (double L : {1.0, 3.7}) {
            for (double E : {0.5, 2.0, 9.3}) {
                const double D = hill::hill_discriminant(V0, L, E);
                CHECK(D ==
                      doctest::Approx(2.0 * std::cos(std::sqrt(E) * L)).epsilon(1e-9));
            }
        }
    }
    SUBCASE("constant shift") {
        const double c = 1.7, L = 2.0;
        auto Vc = [&](double) { return c; };
        for (double E : {2.5, 6.0}) {
            const double D = hill::hill_discriminant(Vc, L, E);
            CHECK(D ==
                  doctest::Approx(2.0 * std::cos(std::sqrt(E - c) * L)).epsilon(1e-9));
        }
    }
    SUBCASE("determinant is 1 (Wronskian preservation)") {
        const auto model = LameModel::create(1, 1, 0.99);
        auto V = [&](double x) { return model.potential(x); };
        for (double E : {0.5, 3.0, 7.7}) {
            const auto m = hill::integrate_monodromy(V, model.period(), E);
            CHECK(std::abs(m.det() - 1.0) < 1e-9);
        }
    }
    SUBCASE("translation invariance of the discriminant") {
        const auto model = LameModel::create(2, 1, 0.95);
        auto V = [&](double x) { return model.potential(x); };
        const double D0 = hill::hill_discriminant(V, model.period(), 5.1, 0.0);
        const double D1 = hill::hill_discriminant(V, model.period(), 5.1, 0.83);
        CHECK(std::abs(D0 - D1) < 1e-9);
    }
    SUBCASE("grid-refinement stability") {
        const auto model = LameModel::create(1, 1, 0.99);
        auto V = [&](double x) { return model.potential(x); };
        const double Da = hill::hill_discriminant(V, model.period(), 3.3, 0.0, 1e-11);
        const double Db = hill::hill_discriminant(V, model.period(), 3.3, 0.0, 5e-12);
        CHECK(std::abs(Da - Db) < 1e-9);
    }
    SUBCASE("non-periodic sampler is rejected") {
        auto Vx = [](double x) { return x; };
        CHECK_THROWS_AS(hill::integrate_monodromy(Vx, 1.0, 1.0),
                        std::invalid_argument);
    }
}

TEST_CASE("discriminant against the band-edge formulas") {
    const auto model = LameModel::create(1, 1, 0.99);
    auto V = [&](double x) { return model.potential(x); };
    const double T = model.period();

    SUBCASE("band interior and gap interior") {
        CHECK(std::abs(hill::hill_discriminant(V, T, 3.0)) < 2.0); // in (2.79, 3.19)
        CHECK(std::abs(hill::hill_discriminant(V, T, 3.5)) > 2.0); // in (3.19, 4)
    }
    SUBCASE("E -> -inf: D grows monotonically") {
        const double d1 = hill::hill_discriminant(V, T, 1.0);
        const double d2 = hill::hill_discriminant(V, T, -1.0);
        const double d3 = hill::hill_discriminant(V, T, -4.0);
        CHECK(d1 > 2.0);
        CHECK(d2 > d1);
        CHECK(d3 > d2);
    }
}

TEST_CASE("band structure scans") {
    SUBCASE("(1,1) k2=0.99: one finite band, one finite gap") {
        const auto model = LameModel::create(1, 1, 0.99);
        auto V = [&](double x) { return model.potential(x); };
        const auto edges = band_edges(model);
        const auto grid = linspace(edges.front() - 1.0, edges.back() + 3.0, 600);
        const auto bs = hill::band_structure(V, model.period(), grid);
        REQUIRE(bs.edges.size() == 3);
        for (size_t i = 0; i < 3; ++i)
            CHECK(std::abs(bs.edges[i] - edges[i]) < 1e-6);
        CHECK(bs.bands.size() == 1);
        CHECK(bs.gaps.size() == 1);
    }
    SUBCASE("isospectrality basics") {
        const auto model = LameModel::create(1, 1, 0.99);
        auto V = [&](double x) { return model.potential(x); };
        auto Vshift = [&](double x) {
            return model.potential(x + 0.5 * model.period());
        };
        const auto grid = linspace(2.0, 6.0, 25);
        CHECK(hill::isospectral_compare(V, V, model.period(), grid) == 0.0);
        CHECK(hill::isospectral_compare(V, Vshift, model.period(), grid) < 1e-9);
    }
}

TEST_CASE("Schrodinger residual oracle") {
    const auto model = LameModel::create(1, 1, 0.99);
    auto V = [&](double x) { return model.potential(x); };
    const double T = model.period();
    const auto xg = linspace(0.05 * T, 0.95 * T, 40);

    SUBCASE("exact Bloch function passes, perturbed fails") {
        const double E = 5.6;
        BlochSolution sol(model, E);
        auto psi = [&](double x) { return sol.psi(x, 1); };
        const double exact = hill::schrodinger_residual(psi, V, E, xg, T);
        CHECK(exact < 1e-8);
        auto bad = [&](double x) {
            return sol.psi(x, 1) + 1e-4 * std::sin(2.0 * M_PI * x / T);
        };
        const double perturbed = hill::schrodinger_residual(bad, V, E, xg, T);
        CHECK(perturbed > 100.0 * exact);
        CHECK(perturbed > 1e-6);
    }
    SUBCASE("band-edge eigenfunction at E2 = 4") {
        BlochSolution sol(model, 4.0);
        auto psi = [&](double x) { return sol.psi(x, 1); };
        CHECK(hill::schrodinger_residual(psi, V, 4.0, xg, T) < 1e-8);
    }
}

TEST_CASE("Floquet exponent matches the Bloch multiplier") {
    const auto model = LameModel::create(1, 1, 0.99);
    auto V = [&](double x) { return model.potential(x); };
    for (double E : {2.0, 3.6}) {
        BlochSolution sol(model, E);
        const double mu_psi = std::abs(sol.log_multiplier(1).real()) / model.period();
        const double mu_hill = hill::floquet_exponent(V, model.period(), E);
        CHECK(mu_psi == doctest::Approx(mu_hill).epsilon(1e-6));
    }
}
