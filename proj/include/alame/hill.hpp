#pragma once

// Paper-independent spectral verification: one-period transfer (monodromy)
// matrices by adaptive Runge-Kutta, Hill discriminant, band/gap scans,
// isospectrality comparison, and finite-difference Schrodinger residuals.

#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace alame::hill {

using PotentialFn = std::function<double(double)>;
using WaveFn = std::function<std::complex<double>(double)>;

enum class SpectralClass { band, gap, edge };

struct MonodromyResult {
    double m11, m12, m21, m22;
    double discriminant; // m11 + m22
    SpectralClass classification;
    double det() const { return m11 * m22 - m12 * m21; }
};

/// Integrates -psi'' + V psi = E psi across one period for the canonical
/// initial conditions (1,0), (0,1) with an adaptive Dormand-Prince 5(4) pair.
/// Asserts V(x) = V(x + period) on a few samples before running.
MonodromyResult integrate_monodromy(const PotentialFn& V, double period, double E,
                                    double x0 = 0.0, double tol = 1e-11);

double hill_discriminant(const PotentialFn& V, double period, double E,
                         double x0 = 0.0, double tol = 1e-11);

struct BandStructure {
    std::vector<double> edges;
    std::vector<std::pair<double, double>> bands; // finite bands
    std::vector<std::pair<double, double>> gaps;  // finite gaps
    bool unresolved_edge_warning = false;
};

/// Sign changes of |D|-2 over eGrid are bracketed and bisected to 1e-8.
/// Features narrower than 1e-3 whose |D|-2 extremum stays below 1e-6 are
/// integrator-noise pokes at closed-gap tangencies and are discarded.
BandStructure band_structure(const PotentialFn& V, double period,
                             const std::vector<double>& eGrid);

/// max_E |D_A(E) - D_B(E)| over the grid.
double isospectral_compare(const PotentialFn& A, const PotentialFn& B,
                           double period, const std::vector<double>& eGrid);

/// sup |-psi'' + V psi - E psi| / sup |E psi| with Richardson-extrapolated
/// second differences (step h defaults to 1e-4 * period_hint, inflated for
/// small |E| to keep the noise floor below the normalization).
double schrodinger_residual(const WaveFn& psi, const PotentialFn& V, double E,
                            const std::vector<double>& xGrid,
                            double period_hint, double h = 0.0);

/// Bisection on |D(E)|-2 within [eLo, eHi]; requires a sign change.
double locate_discriminant_root(const PotentialFn& V, double period, double eLo,
                                double eHi, double tolE = 1e-8);

/// |Re mu| with rho = exp(mu * period) from the monodromy eigenvalues;
/// zero inside bands.
double floquet_exponent(const PotentialFn& V, double period, double E);

} // namespace alame::hill
