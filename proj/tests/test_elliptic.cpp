#include <doctest.h>

#include "alame/elliptic.hpp"
#include "alame/errors.hpp"

#include <cmath>
#include <random>

using namespace alame;
using ell::Complex;

namespace {

// Quadrature oracle for K(k2): composite Simpson on the defining integral.
double ellint_K_quadrature(double k2) {
    const int n = 4000; // even
    const double h = (M_PI / 2.0) / n;
    auto f = [&](double phi) {
        return 1.0 / std::sqrt(1.0 - k2 * std::sin(phi) * std::sin(phi));
    };
    double s = f(0.0) + f(M_PI / 2.0);
    for (int i = 1; i < n; ++i)
        s += f(i * h) * ((i % 2) ? 4.0 : 2.0);
    return s * h / 3.0;
}

// ODE oracle: integrate (sn,cn,dn)' = (cn dn, -sn dn, -k2 sn cn) by RK4.
ell::JacobiValues jacobi_by_ode(double x, double k2) {
    double s = 0.0, c = 1.0, d = 1.0;
    const int n = 20000;
    const double h = x / n;
    auto f = [&](double sv, double cv, double dv, double& fs, double& fc, double& fd) {
        fs = cv * dv;
        fc = -sv * dv;
        fd = -k2 * sv * cv;
    };
    for (int i = 0; i < n; ++i) {
        double k1s, k1c, k1d, k2s, k2c, k2d, k3s, k3c, k3d, k4s, k4c, k4d;
        f(s, c, d, k1s, k1c, k1d);
        f(s + 0.5 * h * k1s, c + 0.5 * h * k1c, d + 0.5 * h * k1d, k2s, k2c, k2d);
        f(s + 0.5 * h * k2s, c + 0.5 * h * k2c, d + 0.5 * h * k2d, k3s, k3c, k3d);
        f(s + h * k3s, c + h * k3c, d + h * k3d, k4s, k4c, k4d);
        s += h / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
        c += h / 6.0 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);
        d += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    }
    return {s, c, d};
}

} // namespace

TEST_CASE("complete elliptic integrals") {
    SUBCASE("small-k2 limit approaches pi/2") {
        auto [K, Kc] = ell::complete_elliptic_integrals(1e-12);
        CHECK(K == doctest::Approx(M_PI / 2.0).epsilon(1e-10));
        CHECK(Kc > 10.0);
    }
    SUBCASE("k2 = 1/2 against the quadrature oracle") {
        auto [K, Kc] = ell::complete_elliptic_integrals(0.5);
        CHECK(std::abs(K - Kc) < 1e-15);
        CHECK(std::abs(K - ellint_K_quadrature(0.5)) < 1e-12);
        CHECK(K == doctest::Approx(1.85407468).epsilon(1e-8));
    }
    SUBCASE("swap symmetry") {
        auto [K3, Kc3] = ell::complete_elliptic_integrals(0.3);
        auto [K7, Kc7] = ell::complete_elliptic_integrals(0.7);
        CHECK(std::abs(K3 - Kc7) < 1e-15 * K3);
        CHECK(std::abs(Kc3 - K7) < 1e-15 * K7);
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(ell::complete_elliptic_integrals(0.0), std::domain_error);
        CHECK_THROWS_AS(ell::complete_elliptic_integrals(1.0), std::domain_error);
        CHECK_THROWS_AS(ell::complete_elliptic_integrals(-0.2), std::domain_error);
    }
}

TEST_CASE("real Jacobi functions") {
    const double k2 = 0.83;
    const auto mp = ell::ModulusParams::from_k2(k2);

    SUBCASE("origin and quarter-period values") {
        const auto j0 = ell::jacobi_sn_cn_dn(0.0, k2);
        CHECK(std::abs(j0.sn) < 1e-15);
        CHECK(j0.cn == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(j0.dn == doctest::Approx(1.0).epsilon(1e-15));
        const auto jk = ell::jacobi_sn_cn_dn(mp.K, k2);
        CHECK(jk.sn == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(jk.cn) < 1e-14);
        CHECK(jk.dn == doctest::Approx(std::sqrt(1.0 - k2)).epsilon(1e-13));
    }
    SUBCASE("identities and the ODE oracle at random arguments") {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> uni(-2.5, 2.5);
        for (int i = 0; i < 25; ++i) {
            const double x = uni(rng);
            const auto j = ell::jacobi_sn_cn_dn(x, k2);
            CHECK(std::abs(j.sn * j.sn + j.cn * j.cn - 1.0) < 1e-13);
            CHECK(std::abs(j.dn * j.dn + k2 * j.sn * j.sn - 1.0) < 1e-13);
            const auto o = jacobi_by_ode(x, k2);
            CHECK(std::abs(j.sn - o.sn) < 1e-10);
            CHECK(std::abs(j.cn - o.cn) < 1e-10);
            CHECK(std::abs(j.dn - o.dn) < 1e-10);
        }
    }
}

TEST_CASE("complex Jacobi functions") {
    const double k2 = 0.75;
    const auto mp = ell::ModulusParams::from_k2(k2);

    SUBCASE("restriction to the real axis") {
        for (double x : {0.3, 1.1, 2.7}) {
            const auto jc = ell::jacobi_complex(Complex(x, 0.0), mp);
            const auto jr = ell::jacobi_sn_cn_dn(x, k2);
            CHECK(std::abs(jc.sn - Complex(jr.sn)) < 1e-13);
            CHECK(std::abs(jc.cn - Complex(jr.cn)) < 1e-13);
            CHECK(std::abs(jc.dn - Complex(jr.dn)) < 1e-13);
        }
    }
    SUBCASE("imaginary argument transformation oracle  sn(iv) = i sc(v,k')") {
        const double v = 0.5 * mp.Kc;
        const auto jc = ell::jacobi_complex(Complex(0.0, v), mp);
        CHECK(std::abs(jc.sn.real()) < 1e-13);
        const auto jp = ell::jacobi_sn_cn_dn(v, mp.k2c);
        CHECK(jc.sn.imag() == doctest::Approx(jp.sn / jp.cn).epsilon(1e-13));
    }
    SUBCASE("double periodicity sn(z+4K) = sn(z)") {
        const Complex z(0.42, 0.31);
        const auto a = ell::jacobi_complex(z, mp);
        const auto b = ell::jacobi_complex(z + Complex(4.0 * mp.K, 0.0), mp);
        CHECK(std::abs(a.sn - b.sn) < 1e-12);
    }
    SUBCASE("pole proximity error near iK'") {
        CHECK_THROWS_AS(ell::jacobi_complex(Complex(1e-12, mp.Kc), mp),
                        PoleProximityError);
    }
}

TEST_CASE("lattice construction") {
    SUBCASE("k2 = 1/2 branch values") {
        const ell::Lattice lat(0.5);
        CHECK(lat.e1() == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(std::abs(lat.e2()) < 1e-16);
        CHECK(lat.e3() == doctest::Approx(-0.5).epsilon(1e-15));
    }
    SUBCASE("k2 = 0.99 branch values and identities") {
        const ell::Lattice lat(0.99);
        CHECK(lat.e1() == doctest::Approx(0.3366667).epsilon(1e-6));
        CHECK(lat.e2() == doctest::Approx(0.3266667).epsilon(1e-6));
        CHECK(lat.e3() == doctest::Approx(-0.6633333).epsilon(1e-6));
        CHECK(std::abs(lat.e1() + lat.e2() + lat.e3()) < 1e-14);
        CHECK(std::abs(lat.ebar2() * lat.ebar3() - lat.k2c()) < 1e-15);
        const double g2c = 2.0 * (lat.e1() * lat.e1() + lat.e2() * lat.e2() +
                                  lat.e3() * lat.e3());
        CHECK(std::abs(lat.g2() - g2c) < 1e-14);
        CHECK(std::abs(lat.g3() - 4.0 * lat.e1() * lat.e2() * lat.e3()) < 1e-14);
    }
    SUBCASE("Legendre relation") {
        for (double k2 : {0.3, 0.5, 0.95, 0.99}) {
            const ell::Lattice lat(k2);
            const Complex lhs = lat.eta() * lat.omega_p() - lat.eta_p() * lat.omega();
            CHECK(std::abs(lhs - Complex(0.0, M_PI / 2.0)) < 1e-12);
        }
    }
}

TEST_CASE("Weierstrass wp family") {
    const ell::Lattice lat(0.95);
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> ure(0.05, 1.95);
    auto random_z = [&]() {
        while (true) {
            Complex z(ure(rng) * lat.omega(), ure(rng) * lat.modulus().Kc);
            if (lat.lattice_distance(z) > 0.08)
                return z;
        }
    };

    SUBCASE("half-period values") {
        CHECK(std::abs(lat.wp(Complex(lat.omega(), 0.0)) - Complex(lat.e1())) < 1e-12);
        CHECK(std::abs(lat.wp(Complex(lat.omega(), lat.modulus().Kc)) -
                       Complex(lat.e2())) < 1e-12);
        CHECK(std::abs(lat.wp(Complex(0.0, lat.modulus().Kc)) - Complex(lat.e3())) <
              1e-12);
    }
    SUBCASE("parity: wp even, wp' odd, zeta odd, sigma odd") {
        for (int i = 0; i < 200; ++i) {
            const Complex z = random_z();
            CHECK(std::abs(lat.wp(-z) - lat.wp(z)) < 1e-11 * (1.0 + std::abs(lat.wp(z))));
            CHECK(std::abs(lat.wp_prime(-z) + lat.wp_prime(z)) <
                  1e-11 * (1.0 + std::abs(lat.wp_prime(z))));
            CHECK(std::abs(lat.zeta(-z) + lat.zeta(z)) <
                  1e-11 * (1.0 + std::abs(lat.zeta(z))));
            CHECK(std::abs(lat.sigma(-z) + lat.sigma(z)) <
                  1e-11 * (1.0 + std::abs(lat.sigma(z))));
        }
    }
    SUBCASE("differential equation (wp')^2 = 4wp^3 - g2 wp - g3") {
        for (int i = 0; i < 50; ++i) {
            const Complex z = random_z();
            const Complex P = lat.wp(z), Pp = lat.wp_prime(z);
            const Complex lhs = Pp * Pp;
            const Complex rhs = 4.0 * P * P * P - lat.g2() * P - lat.g3();
            CHECK(std::abs(lhs - rhs) < 1e-11 * (1.0 + std::abs(lhs)));
        }
    }
    SUBCASE("cross-representation: Jacobi route equals theta route") {
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const Complex z = random_z();
            const Complex a = lat.wp(z), b = lat.wp_theta(z);
            worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(a)));
        }
        CHECK(worst < 1e-11);
        for (int i = 0; i < 20; ++i) {
            const Complex z = random_z();
            const Complex a = lat.wp_prime(z), b = lat.wp_prime_theta(z);
            CHECK(std::abs(a - b) < 1e-10 * (1.0 + std::abs(a)));
        }
    }
}

TEST_CASE("sigma and zeta") {
    const ell::Lattice lat(0.8);
    const Complex z(0.37, 0.22);

    SUBCASE("quasi-periodicity of zeta and sigma") {
        const Complex two_om(2.0 * lat.omega(), 0.0);
        CHECK(std::abs(lat.zeta(z + two_om) - lat.zeta(z) - 2.0 * lat.eta()) < 1e-12);
        const Complex pred = -lat.sigma(z) * std::exp(2.0 * lat.eta() * (z + lat.omega()));
        CHECK(std::abs(lat.sigma(z + two_om) - pred) < 1e-10 * std::abs(pred));
        const Complex two_omp = 2.0 * lat.omega_p();
        CHECK(std::abs(lat.zeta(z + two_omp) - lat.zeta(z) - 2.0 * lat.eta_p()) < 1e-12);
    }
    SUBCASE("local behaviour at the origin") {
        const Complex eps(3e-4, -2e-4);
        CHECK(std::abs(lat.sigma(eps) / eps - 1.0) < 1e-6);
        CHECK(std::abs(lat.zeta(eps) - 1.0 / eps) < 1e-4);
    }
    SUBCASE("d/dz ln sigma = zeta (finite differences)") {
        const double h = 1e-5;
        const Complex d = (std::log(lat.sigma(z + h)) - std::log(lat.sigma(z - h))) /
                          (2.0 * h);
        CHECK(std::abs(d - lat.zeta(z)) < 1e-9);
    }
    SUBCASE("zeta pole guard") {
        CHECK_THROWS_AS(lat.zeta(Complex(1e-12, 0.0)), PoleProximityError);
    }
}

TEST_CASE("inverse wp") {
    const ell::Lattice lat(0.99);

    SUBCASE("branch values map to half-periods") {
        const Complex t1 = lat.inverse_wp(Complex(lat.e1()));
        CHECK(std::abs(t1 - Complex(lat.omega(), 0.0)) < 1e-12);
        const Complex t2 = lat.inverse_wp(Complex(lat.e2()));
        CHECK(std::abs(t2 - Complex(lat.omega(), lat.modulus().Kc)) < 1e-12);
    }
    SUBCASE("roundtrip at random targets") {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> uni(-2.0, 2.0);
        for (int i = 0; i < 40; ++i) {
            const Complex c(uni(rng), uni(rng));
            const Complex t = lat.inverse_wp(c);
            CHECK(std::abs(lat.wp(t) - c) < 1e-10 * (1.0 + std::abs(c)));
            CHECK(t.real() >= 0.0);
            CHECK(t.real() < 2.0 * lat.omega());
            CHECK(t.imag() >= 0.0);
            CHECK(t.imag() < 2.0 * lat.modulus().Kc);
        }
    }
    SUBCASE("real targets above e1 give real points") {
        const Complex t = lat.inverse_wp(Complex(0.9092004484));
        const bool on_axis = std::abs(t.imag()) < 1e-9 ||
                             std::abs(t.imag() - 2.0 * lat.modulus().Kc) < 1e-9;
        CHECK(on_axis);
    }
}
