#pragma once

// Jacobi elliptic functions, complete elliptic integrals, and the Weierstrass
// function family (wp, wp', zeta, sigma, inverse wp) on the rectangular
// lattice generated by a real modulus k^2 in (0,1).
//
// The lattice is normalized so that ebar3 = e1 - e3 = 1, which gives
//   e1 = (2-k^2)/3,  e2 = (2k^2-1)/3,  e3 = -(1+k^2)/3,
//   omega = K,  omega' = i K',  ebar2 = k'^2,
// and collapses every scale factor of the form sqrt(ebar3).

#include <complex>
#include <utility>

namespace alame::ell {

using Complex = std::complex<double>;

/// Modulus data: k^2, complementary k'^2 = 1 - k^2, quarter periods K, K'.
struct ModulusParams {
    double k2{};
    double k2c{};
    double K{};
    double Kc{};

    static ModulusParams from_k2(double k2); // throws std::domain_error outside (0,1)
};

/// Complete elliptic integrals of the first kind by AGM iteration,
/// terminating when successive means differ by < 1e-16.
std::pair<double, double> complete_elliptic_integrals(double k2);

struct JacobiValues {
    double sn, cn, dn;
};

/// Real-argument sn, cn, dn by the descending Landen (AGM) ladder.
JacobiValues jacobi_sn_cn_dn(double x, double k2);
JacobiValues jacobi_sn_cn_dn(double x, const ModulusParams& mp);

struct JacobiValuesC {
    Complex sn, cn, dn;
};

/// Complex-argument Jacobi functions through the addition theorem combining
/// sn(u,k) and sn(v,k') for z = u + iv.  Throws PoleProximityError when z is
/// within `guard` of a pole (poles congruent to iK' mod (2K, 2iK')).
JacobiValuesC jacobi_complex(Complex z, const ModulusParams& mp, double guard = 1e-8);

/// Weierstrass data and function evaluations on the ebar3 = 1 lattice.
class Lattice {
public:
    explicit Lattice(double k2);

    const ModulusParams& modulus() const { return mp_; }
    double k2() const { return mp_.k2; }
    double k2c() const { return mp_.k2c; }

    double omega() const { return mp_.K; }     // real half-period
    Complex omega_p() const { return {0.0, mp_.Kc}; } // imaginary half-period
    double e1() const { return e1_; }
    double e2() const { return e2_; }
    double e3() const { return e3_; }
    double ebar2() const { return mp_.k2c; }
    double ebar3() const { return 1.0; }
    double g2() const { return g2_; }
    double g3() const { return g3_; }
    double eta() const { return eta_; }        // zeta(omega)
    Complex eta_p() const { return etap_; }    // zeta(omega'), purely imaginary
    double nome() const { return q_; }

    double pole_guard() const { return guard_; }
    void set_pole_guard(double g) { guard_ = g; }

    /// wp via the Jacobi-function route  wp(z) = e3 + 1/sn^2(z,k).
    Complex wp(Complex z) const;
    Complex wp_prime(Complex z) const;

    /// wp via the theta-series route (independent cross-check path).
    Complex wp_theta(Complex z) const;
    /// wp' via  -sigma(2z)/sigma(z)^4  (cross-check path).
    Complex wp_prime_theta(Complex z) const;

    Complex zeta(Complex z) const;   // simple poles on the lattice
    Complex sigma(Complex z) const;  // entire

    /// Solve wp(t) = c.  Carlson-form integral seed plus complex Newton polish;
    /// the branch is fixed so Re(t) in [0, 2 omega), Im(t) in [0, 2 K').
    Complex inverse_wp(Complex c) const;

    /// Distance from z to the nearest lattice point 2mK + 2nK'i.
    double lattice_distance(Complex z) const;

private:
    struct CellReduced {
        Complex z0;
        long M, N;
    };
    CellReduced reduce_cell(Complex z) const;

    // theta_1(v,q) and its v-derivative, by the q-series.
    void theta1_pair(Complex v, Complex& t1, Complex& t1p) const;
    Complex theta2(Complex v) const;

    ModulusParams mp_;
    double e1_, e2_, e3_, g2_, g3_;
    double q_, q4_;     // nome and q^{1/4}
    double eta_;
    Complex etap_;
    double t1p0_, t2z_, t3z_, t4z_; // theta-null values
    double wp_fac_;                 // pi/(2 omega) * theta3(0) theta4(0)
    double sigma_fac_;              // 2 omega / (pi * theta1'(0))
    double guard_ = 1e-8;
};

/// Spec-style constructor name.
Lattice lattice_from_modulus(double k2);

/// Carlson symmetric integral R_F for complex arguments (principal branch).
Complex carlson_rf(Complex x, Complex y, Complex z);

} // namespace alame::ell
