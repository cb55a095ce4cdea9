#pragma once

// Exact general solution of the associated Lame equation
//   -psi'' + [m(m+1) k^2 sn^2 x + l(l+1) k^2 cn^2 x / dn^2 x] psi = E psi
// for (m,l) in {(1,1),(2,1)} plus the Lame branches (1,0),(2,0): ansatz
// coefficients, numerator roots, auxiliary points, the Bloch pair psi_1/2,
// band edges, and residual oracles for the third-order product equation.

#include "alame/elliptic.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace alame {

using ell::Complex;

struct LameModel {
    int m = 1;
    int ell = 1;
    ell::ModulusParams modulus;
    ell::Lattice lattice;

    /// Supported set: (1,1), (2,1), (1,0), (2,0).  Throws UnsupportedModelError.
    static LameModel create(int m, int ell, double k2);

    double potential(double x) const;
    int mm1() const { return m * (m + 1); }
    int ll1() const { return ell * (ell + 1); }
    /// Degree of the numerator polynomial in p = wp - e1 (= number of
    /// auxiliary points).
    int numerator_degree() const { return m + 1; }
    double period() const { return 2.0 * modulus.K; }
};

struct EnergyPair {
    double E;
    double Etilde;
};

/// Etilde = [E - l(l+1)] ebar3 + e3 m(m+1), with ebar3 = 1.
EnergyPair energy_transform(const LameModel& model, double E);
double energy_from_tilde(const LameModel& model, double Etilde);

enum class AnsatzBranch { A, B, C, D, General };

struct AnsatzCoefficients {
    AnsatzBranch branch = AnsatzBranch::General;
    int rMin = 0;
    int rMax = 0;
    std::vector<double> c; // c[i] multiplies (wp-e1)^{rMin+i}; monic: c.back()=1

    double coeff(int r) const { return c[size_t(r - rMin)]; }
    // family-A accessors (psi-product quadratic numerator)
    double A1() const { return coeff(0); }
    double A2() const { return coeff(-1); }
    // family-B accessors (cubic numerator)
    double B1() const { return coeff(1); }
    double B2() const { return coeff(0); }
    double B3() const { return coeff(-1); }
};

AnsatzCoefficients ansatz_coefficients(const LameModel& model, double Etilde);

/// Roots of the numerator polynomial, returned as wp-values e1 + p.
/// Near-multiple roots are snapped to their exact cluster values.
std::vector<Complex> numerator_roots(const AnsatzCoefficients& coeffs,
                                     const ell::Lattice& lat);

struct AuxiliaryPoints {
    std::vector<Complex> points;  // canonical signed points, centered cell reps
    Complex anchor;               // a0 for the psi_1 row (= -omega1)
    std::string sign_pairing;     // tag describing the selected pairing
    Complex zeta_sum;             // sum_r zeta(points[r])
    Complex log_multiplier;       // ln rho for psi_1 over one period 2K
    bool conj_closed = false;     // point set closed under conjugation
};

AuxiliaryPoints auxiliary_points(const LameModel& model, double E);

struct BlochPair {
    double psi1, psi2;
    double dlog1, dlog2;
    double wronskian;
    Complex psi1c, psi2c, dlog1c, dlog2c, wronskianc;
    bool real_valued = false;
    bool degenerate = false;
};

/// One (model, E) solve: auxiliary points, normalization, and evaluation of
/// the Bloch pair anywhere on the real line.  Construction is the expensive
/// step; evaluations are cheap and thread-safe afterwards.
class BlochSolution {
public:
    BlochSolution(const LameModel& model, double E);

    const LameModel& model() const { return model_; }
    double energy() const { return E_; }
    const AuxiliaryPoints& aux() const { return aux_; }
    bool real_valued() const { return real_valued_; }
    bool degenerate() const { return degenerate_; }
    double x_ref() const { return xref_; }
    /// ln of the Floquet multiplier of psi_which over one period 2K.
    Complex log_multiplier(int which) const;

    Complex psi(double x, int which) const;   // normalized (psi(x_ref) = 1)
    Complex dlog(double x, int which) const;  // (ln psi)' — analytic, no FD
    Complex wronskian(double x) const;
    BlochPair pair(double x) const;

    /// Relative residual of the Riccati form g' + g^2 - V + E at x.
    double riccati_residual(double x, int which) const;

private:
    Complex psi_base(double xhat, int which) const; // no period reduction
    Complex dlog_at(double x, int which) const;

    LameModel model_;
    double E_;
    AuxiliaryPoints aux_;
    Complex S_;       // sum of zeta over canonical points
    Complex lnrho_;   // psi_1 multiplier
    double xref_;
    Complex norm_[2];
    bool real_valued_ = false;
    bool degenerate_ = false;
};

BlochPair bloch_pair(double x, const LameModel& model, double E);
double bloch_log_derivative(double x, const LameModel& model, double E, int which);

/// Analytic band edges: 3 values for (1,1), 5 for (2,1); ascending.
std::vector<double> band_edges(const LameModel& model);

/// Residual of the third-order product ODE for the power ansatz
/// Psi = sum C_r (wp-e1)^r, with analytic wp, wp' and Richardson-extrapolated
/// finite differences for Psi'''.  Returns the sup over `samples` of the
/// residual normalized by the magnitude of the ODE terms.
double product_ode_residual(const ell::Lattice& lat, int m, int ell, double Etilde,
                            const AnsatzCoefficients& coeffs,
                            std::span<const Complex> samples, double h = 0.0);
double product_ode_residual(const LameModel& model, double E,
                            std::span<const Complex> samples);

/// Substitute the power ansatz into the product ODE, collect powers of
/// (wp-e1), and solve the homogeneous system for the C_r (nullspace by SVD).
/// Returns std::nullopt when the system is inconsistent for (m, ell, range).
std::optional<AnsatzCoefficients> fit_ansatz(int m, int ell, double Etilde,
                                             int rMin, int rMax,
                                             const ell::Lattice& lat);

} // namespace alame
