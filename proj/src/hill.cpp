#include "alame/hill.hpp"
#include "alame/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace alame::hill {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

using State = std::array<double, 4>; // (psiA, psiA', psiB, psiB')

State rhs(const PotentialFn& V, double E, double x, const State& y) {
    const double vme = V(x) - E;
    return {y[1], vme * y[0], y[3], vme * y[2]};
}

State axpy(const State& y, double h, const State& k) {
    State r;
    for (int i = 0; i < 4; ++i)
        r[i] = y[i] + h * k[i];
    return r;
}

} // namespace

MonodromyResult integrate_monodromy(const PotentialFn& V, double period, double E,
                                    double x0, double tol) {
    // guard against unit mistakes in the caller's period
    for (double f : {0.123, 0.456, 0.789}) {
        const double a = V(x0 + f * period), b = V(x0 + f * period + period);
        if (std::abs(a - b) > 1e-7 * (1.0 + std::abs(a)))
            throw std::invalid_argument(
                "integrate_monodromy: sampler is not periodic with the given period");
    }

    State y{1.0, 0.0, 0.0, 1.0};
    double x = x0;
    const double xend = x0 + period;
    double h = period / 64.0;
    State k1 = rhs(V, E, x, y);
    int steps = 0;
    while (x < xend) {
        if (x + h > xend)
            h = xend - x;
        const State k2 = rhs(V, E, x + c2 * h, axpy(y, h * a21, k1));
        State t;
        for (int i = 0; i < 4; ++i)
            t[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        const State k3 = rhs(V, E, x + c3 * h, t);
        for (int i = 0; i < 4; ++i)
            t[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        const State k4 = rhs(V, E, x + c4 * h, t);
        for (int i = 0; i < 4; ++i)
            t[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        const State k5 = rhs(V, E, x + c5 * h, t);
        for (int i = 0; i < 4; ++i)
            t[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                               a64 * k4[i] + a65 * k5[i]);
        const State k6 = rhs(V, E, x + h, t);
        State y5;
        for (int i = 0; i < 4; ++i)
            y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                b5 * k5[i] + b6 * k6[i]);
        const State k7 = rhs(V, E, x + h, y5); // FSAL

        double err = 0.0, scale = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                   e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = tol + tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err += (ei / sc) * (ei / sc);
            scale = std::max(scale, sc);
        }
        err = std::sqrt(err / 4.0);
        if (err <= 1.0) {
            x += h;
            y = y5;
            k1 = k7;
        }
        const double fac = std::clamp(0.9 * std::pow(err > 0 ? err : 1e-10, -0.2),
                                      0.2, 5.0);
        h *= fac;
        if (h < 1e-14 * period)
            throw ConvergenceError("integrate_monodromy: step size underflow");
        if (++steps > 2000000)
            throw ConvergenceError("integrate_monodromy: step budget exhausted");
    }

    MonodromyResult r{};
    r.m11 = y[0];
    r.m21 = y[1];
    r.m12 = y[2];
    r.m22 = y[3];
    r.discriminant = r.m11 + r.m22;
    const double ad = std::abs(r.discriminant);
    if (std::abs(ad - 2.0) <= 1e-7)
        r.classification = SpectralClass::edge;
    else
        r.classification = (ad < 2.0) ? SpectralClass::band : SpectralClass::gap;
    return r;
}

double hill_discriminant(const PotentialFn& V, double period, double E,
                         double x0, double tol) {
    return integrate_monodromy(V, period, E, x0, tol).discriminant;
}

double locate_discriminant_root(const PotentialFn& V, double period, double eLo,
                                double eHi, double tolE) {
    auto f = [&](double E) {
        return std::abs(hill_discriminant(V, period, E)) - 2.0;
    };
    double flo = f(eLo), fhi = f(eHi);
    if (flo == 0.0)
        return eLo;
    if (fhi == 0.0)
        return eHi;
    if (flo * fhi > 0.0)
        throw std::invalid_argument("locate_discriminant_root: no sign change in bracket");
    while (eHi - eLo > tolE) {
        const double mid = 0.5 * (eLo + eHi);
        const double fm = f(mid);
        if (fm == 0.0)
            return mid;
        if (flo * fm < 0.0) {
            eHi = mid;
            fhi = fm;
        } else {
            eLo = mid;
            flo = fm;
        }
    }
    return 0.5 * (eLo + eHi);
}

BandStructure band_structure(const PotentialFn& V, double period,
                             const std::vector<double>& eGrid) {
    BandStructure bs;
    if (eGrid.size() < 2)
        throw std::invalid_argument("band_structure: need at least 2 grid points");
    std::vector<double> D(eGrid.size());
    for (size_t i = 0; i < eGrid.size(); ++i)
        D[i] = hill_discriminant(V, period, eGrid[i]);

    std::vector<double> edges;
    for (size_t i = 0; i + 1 < eGrid.size(); ++i) {
        const double f0 = std::abs(D[i]) - 2.0;
        const double f1 = std::abs(D[i + 1]) - 2.0;
        if (f0 == 0.0)
            edges.push_back(eGrid[i]);
        else if (f0 * f1 < 0.0)
            edges.push_back(
                locate_discriminant_root(V, period, eGrid[i], eGrid[i + 1]));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                edges.end());

    // discard integrator-noise pokes at closed-gap tangencies
    auto poke = [&](double lo, double hi) {
        double p = 0.0;
        for (int j = 1; j < 4; ++j) {
            const double E = lo + (hi - lo) * j / 4.0;
            p = std::max(p, std::abs(std::abs(hill_discriminant(V, period, E)) - 2.0));
        }
        return p;
    };
    for (size_t i = 0; i + 1 < edges.size();) {
        const double width = edges[i + 1] - edges[i];
        if (width < 1e-3 && poke(edges[i], edges[i + 1]) < 1e-6)
            edges.erase(edges.begin() + long(i), edges.begin() + long(i) + 2);
        else
            ++i;
    }

    // warn when two edges could hide inside one grid cell
    const double cell = (eGrid.back() - eGrid.front()) / double(eGrid.size() - 1);
    for (size_t i = 0; i + 1 < edges.size(); ++i)
        if (edges[i + 1] - edges[i] < cell)
            bs.unresolved_edge_warning = true;

    bs.edges = edges;
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
        const double mid = 0.5 * (edges[i] + edges[i + 1]);
        const double ad = std::abs(hill_discriminant(V, period, mid));
        if (ad < 2.0)
            bs.bands.emplace_back(edges[i], edges[i + 1]);
        else
            bs.gaps.emplace_back(edges[i], edges[i + 1]);
    }
    return bs;
}

double isospectral_compare(const PotentialFn& A, const PotentialFn& B,
                           double period, const std::vector<double>& eGrid) {
    double worst = 0.0;
    for (double E : eGrid) {
        const double da = hill_discriminant(A, period, E);
        const double db = hill_discriminant(B, period, E);
        worst = std::max(worst, std::abs(da - db));
    }
    return worst;
}

double schrodinger_residual(const WaveFn& psi, const PotentialFn& V, double E,
                            const std::vector<double>& xGrid,
                            double period_hint, double h) {
    if (h <= 0.0) {
        // base step chosen so the innermost h/4 stencil keeps the second
        // difference noise floor near 1e-9 for sigma-product wavefunctions
        h = 1.6e-3 * period_hint;
        if (std::abs(E) < 0.5)
            h *= std::min(8.0, std::cbrt(0.5 / std::max(std::abs(E), 1e-3)));
    }
    auto d2 = [&](double x, double s) {
        return (psi(x + s) - 2.0 * psi(x) + psi(x - s)) / (s * s);
    };
    double num = 0.0, den = 0.0;
    for (double x : xGrid) {
        const std::complex<double> dd =
            (d2(x, h) - 20.0 * d2(x, 0.5 * h) + 64.0 * d2(x, 0.25 * h)) / 45.0;
        const std::complex<double> p = psi(x);
        num = std::max(num, std::abs(-dd + (V(x) - E) * p));
        den = std::max(den, std::abs(E * p));
    }
    return num / (den + 1e-300);
}

double floquet_exponent(const PotentialFn& V, double period, double E) {
    const double D = hill_discriminant(V, period, E);
    const double a = std::abs(D) / 2.0;
    if (a <= 1.0)
        return 0.0;
    return std::acosh(a) / period;
}

} // namespace alame::hill
