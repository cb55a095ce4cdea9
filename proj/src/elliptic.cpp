#include "alame/elliptic.hpp"
#include "alame/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace alame::ell {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

double agm(double a, double b) {
    for (int i = 0; i < 60 && std::abs(a - b) > 1e-16 * a; ++i) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return 0.5 * (a + b);
}
} // namespace

std::pair<double, double> complete_elliptic_integrals(double k2) {
    if (!(k2 > 0.0 && k2 < 1.0))
        throw std::domain_error("complete_elliptic_integrals: k2 must lie in (0,1)");
    const double K = kPi / (2.0 * agm(1.0, std::sqrt(1.0 - k2)));
    const double Kc = kPi / (2.0 * agm(1.0, std::sqrt(k2)));
    return {K, Kc};
}

ModulusParams ModulusParams::from_k2(double k2) {
    auto [K, Kc] = complete_elliptic_integrals(k2);
    ModulusParams mp;
    mp.k2 = k2;
    mp.k2c = 1.0 - k2;
    mp.K = K;
    mp.Kc = Kc;
    return mp;
}

JacobiValues jacobi_sn_cn_dn(double x, double k2) {
    if (!(k2 > 0.0 && k2 < 1.0))
        throw std::domain_error("jacobi_sn_cn_dn: k2 must lie in (0,1)");

    // Bulirsch's descending Landen/AGM ladder (accuracy ~ CA^2)
    constexpr double CA = 1e-9;
    double emc = 1.0 - k2;

    // reduce the argument for accuracy at large |x|
    const double K = kPi / (2.0 * agm(1.0, std::sqrt(emc)));
    double u = std::remainder(x, 4.0 * K);

    std::array<double, 16> em{}, en{};
    double a = 1.0, c = 0.0, dn = 1.0;
    int l = 0;
    for (int i = 1; i <= 14; ++i) {
        l = i;
        em[i] = a;
        emc = std::sqrt(emc);
        en[i] = emc;
        c = 0.5 * (a + emc);
        if (std::abs(a - emc) <= CA * a)
            break;
        emc *= a;
        a = c;
    }
    u *= c;
    double sn = std::sin(u), cn = std::cos(u);
    if (sn != 0.0) {
        a = cn / sn;
        c *= a;
        for (int ii = l; ii >= 1; --ii) {
            const double b = em[ii];
            a *= c;
            c *= dn;
            dn = (en[ii] + a) / (b + a);
            a = c / b;
        }
        a = 1.0 / std::sqrt(c * c + 1.0);
        sn = (sn >= 0.0) ? a : -a;
        cn = c * sn;
    }
    return {sn, cn, dn};
}

JacobiValues jacobi_sn_cn_dn(double x, const ModulusParams& mp) {
    return jacobi_sn_cn_dn(x, mp.k2);
}

JacobiValuesC jacobi_complex(Complex z, const ModulusParams& mp, double guard) {
    // poles congruent to iK' mod (2K, 2iK')
    const Complex zr = z - Complex(0.0, mp.Kc);
    const double pm = std::round(zr.real() / (2.0 * mp.K));
    const double pn = std::round(zr.imag() / (2.0 * mp.Kc));
    if (std::abs(zr - Complex(2.0 * mp.K * pm, 2.0 * mp.Kc * pn)) < guard)
        throw PoleProximityError("jacobi_complex: argument within guard radius of a pole");

    const JacobiValues u = jacobi_sn_cn_dn(z.real(), mp.k2);
    const JacobiValues v = jacobi_sn_cn_dn(z.imag(), mp.k2c);
    const double den = v.cn * v.cn + mp.k2 * u.sn * u.sn * v.sn * v.sn;
    JacobiValuesC r;
    r.sn = Complex(u.sn * v.dn, u.cn * u.dn * v.sn * v.cn) / den;
    r.cn = Complex(u.cn * v.cn, -u.sn * u.dn * v.sn * v.dn) / den;
    r.dn = Complex(u.dn * v.cn * v.dn, -mp.k2 * u.sn * u.cn * v.sn) / den;
    return r;
}

Lattice::Lattice(double k2) : mp_(ModulusParams::from_k2(k2)) {
    e1_ = (2.0 - k2) / 3.0;
    e2_ = (2.0 * k2 - 1.0) / 3.0;
    e3_ = -(1.0 + k2) / 3.0;
    g2_ = 2.0 * (e1_ * e1_ + e2_ * e2_ + e3_ * e3_);
    g3_ = 4.0 * e1_ * e2_ * e3_;
    q_ = std::exp(-kPi * mp_.Kc / mp_.K);
    q4_ = std::pow(q_, 0.25);

    // theta-null values (series in q^{n^2+n} resp. q^{n^2})
    double t1p = 0.0, t1ppp = 0.0, t2 = 0.0;
    double qp = 1.0, qstep = q_ * q_, sgn = 1.0;
    for (int n = 0; n < 40; ++n) {
        const double f = 2.0 * n + 1.0;
        t1p += sgn * f * qp;
        t1ppp += sgn * f * f * f * qp;
        t2 += qp;
        if (qp * f * f * f < 1e-18)
            break;
        qp *= qstep;
        qstep *= q_ * q_;
        sgn = -sgn;
    }
    t1p0_ = 2.0 * q4_ * t1p;
    const double t1ppp0 = -2.0 * q4_ * t1ppp;
    t2z_ = 2.0 * q4_ * t2;

    double t3 = 1.0, t4 = 1.0;
    double qn = 1.0;
    for (int n = 1; n < 40; ++n) {
        qn *= std::pow(q_, 2.0 * n - 1.0); // q^{n^2} chain
        t3 += 2.0 * qn;
        t4 += 2.0 * ((n % 2) ? -qn : qn);
        if (qn < 1e-18)
            break;
    }
    t3z_ = t3;
    t4z_ = t4;

    eta_ = -kPi * kPi / (12.0 * mp_.K) * t1ppp0 / t1p0_;
    etap_ = (eta_ * omega_p() - Complex(0.0, kPi / 2.0)) / omega();
    wp_fac_ = kPi / (2.0 * mp_.K) * t3z_ * t4z_;
    sigma_fac_ = 2.0 * mp_.K / (kPi * t1p0_);
}

void Lattice::theta1_pair(Complex v, Complex& t1, Complex& t1p) const {
    const Complex s2 = std::sin(2.0 * v), c2 = std::cos(2.0 * v);
    Complex Sn = std::sin(v), Cn = std::cos(v);
    double qp = 1.0, qstep = q_ * q_, sgn = 1.0;
    t1 = Complex(0.0);
    t1p = Complex(0.0);
    for (int n = 0; n < 48; ++n) {
        const double w = sgn * qp;
        const Complex add = w * Sn;
        const Complex addp = w * (2.0 * n + 1.0) * Cn;
        t1 += add;
        t1p += addp;
        if (n >= 2 && std::abs(add) + std::abs(addp) <
                          1e-18 * (std::abs(t1) + std::abs(t1p) + 1e-300))
            break;
        qp *= qstep;
        qstep *= q_ * q_;
        sgn = -sgn;
        const Complex ns = Sn * c2 + Cn * s2;
        const Complex nc = Cn * c2 - Sn * s2;
        Sn = ns;
        Cn = nc;
    }
    t1 *= 2.0 * q4_;
    t1p *= 2.0 * q4_;
}

Complex Lattice::theta2(Complex v) const {
    const Complex s2 = std::sin(2.0 * v), c2 = std::cos(2.0 * v);
    Complex Cn = std::cos(v), Sn = std::sin(v);
    double qp = 1.0, qstep = q_ * q_;
    Complex t2(0.0);
    for (int n = 0; n < 48; ++n) {
        const Complex add = qp * Cn;
        t2 += add;
        if (n >= 2 && std::abs(add) < 1e-18 * (std::abs(t2) + 1e-300))
            break;
        qp *= qstep;
        qstep *= q_ * q_;
        const Complex ns = Sn * c2 + Cn * s2;
        const Complex nc = Cn * c2 - Sn * s2;
        Sn = ns;
        Cn = nc;
    }
    return 2.0 * q4_ * t2;
}

Lattice::CellReduced Lattice::reduce_cell(Complex z) const {
    const long M = std::lround(z.real() / (2.0 * mp_.K));
    const long N = std::lround(z.imag() / (2.0 * mp_.Kc));
    const Complex z0(z.real() - 2.0 * mp_.K * double(M),
                     z.imag() - 2.0 * mp_.Kc * double(N));
    return {z0, M, N};
}

double Lattice::lattice_distance(Complex z) const {
    return std::abs(reduce_cell(z).z0);
}

Complex Lattice::sigma(Complex z) const {
    const auto red = reduce_cell(z);
    const Complex v = (kPi / (2.0 * mp_.K)) * red.z0;
    Complex t1, t1p;
    theta1_pair(v, t1, t1p);
    Complex s = sigma_fac_ * std::exp(eta_ * red.z0 * red.z0 / (2.0 * mp_.K)) * t1;
    if (red.M != 0 || red.N != 0) {
        const double M = double(red.M), N = double(red.N);
        const Complex hsum = 2.0 * (M * eta_ + N * etap_);
        const Complex mid = red.z0 + Complex(M * mp_.K, N * mp_.Kc);
        const double sgn = ((red.M + red.N + red.M * red.N) % 2 != 0) ? -1.0 : 1.0;
        s *= sgn * std::exp(hsum * mid);
    }
    return s;
}

Complex Lattice::zeta(Complex z) const {
    const auto red = reduce_cell(z);
    if (std::abs(red.z0) < guard_)
        throw PoleProximityError("zeta: argument within guard radius of a lattice point");
    const Complex v = (kPi / (2.0 * mp_.K)) * red.z0;
    Complex t1, t1p;
    theta1_pair(v, t1, t1p);
    Complex val = eta_ * red.z0 / mp_.K + (kPi / (2.0 * mp_.K)) * t1p / t1;
    return val + 2.0 * double(red.M) * eta_ + 2.0 * double(red.N) * etap_;
}

Complex Lattice::wp(Complex z) const {
    if (lattice_distance(z) < guard_)
        throw PoleProximityError("wp: argument within guard radius of a lattice point");
    const JacobiValues u = jacobi_sn_cn_dn(z.real(), mp_.k2);
    const JacobiValues v = jacobi_sn_cn_dn(z.imag(), mp_.k2c);
    const double den = v.cn * v.cn + mp_.k2 * u.sn * u.sn * v.sn * v.sn;
    const Complex Ns(u.sn * v.dn, u.cn * u.dn * v.sn * v.cn);
    const Complex inv_sn = den / Ns;
    return e3_ + inv_sn * inv_sn;
}

Complex Lattice::wp_prime(Complex z) const {
    if (lattice_distance(z) < guard_)
        throw PoleProximityError("wp_prime: argument within guard radius of a lattice point");
    const JacobiValues u = jacobi_sn_cn_dn(z.real(), mp_.k2);
    const JacobiValues v = jacobi_sn_cn_dn(z.imag(), mp_.k2c);
    const double den = v.cn * v.cn + mp_.k2 * u.sn * u.sn * v.sn * v.sn;
    const Complex Ns(u.sn * v.dn, u.cn * u.dn * v.sn * v.cn);
    const Complex Nc(u.cn * v.cn, -u.sn * u.dn * v.sn * v.dn);
    const Complex Nd(u.dn * v.cn * v.dn, -mp_.k2 * u.sn * u.cn * v.sn);
    return -2.0 * Nc * Nd * den / (Ns * Ns * Ns);
}

Complex Lattice::wp_theta(Complex z) const {
    const auto red = reduce_cell(z);
    if (std::abs(red.z0) < guard_)
        throw PoleProximityError("wp_theta: argument within guard radius of a lattice point");
    const Complex v = (kPi / (2.0 * mp_.K)) * red.z0;
    Complex t1, t1p;
    theta1_pair(v, t1, t1p);
    const Complex r = wp_fac_ * theta2(v) / t1;
    return e1_ + r * r;
}

Complex Lattice::wp_prime_theta(Complex z) const {
    const Complex s = sigma(z);
    return -sigma(2.0 * z) / (s * s * s * s);
}

Complex carlson_rf(Complex x, Complex y, Complex z) {
    // Carlson 1995, duplication theorem, valid for complex arguments off the
    // negative real axis (callers nudge targets that land on the cut).
    const double tol = std::pow(3.0 * 1e-18, -1.0 / 8.0);
    Complex A = (x + y + z) / 3.0;
    const double Q =
        tol * std::max({std::abs(A - x), std::abs(A - y), std::abs(A - z)});
    Complex xn = x, yn = y, zn = z, An = A;
    double mul = 1.0;
    for (int i = 0; i < 80 && Q > mul * std::abs(An); ++i) {
        const Complex sx = std::sqrt(xn), sy = std::sqrt(yn), sz = std::sqrt(zn);
        const Complex lam = sx * sy + sy * sz + sz * sx;
        An = 0.25 * (An + lam);
        xn = 0.25 * (xn + lam);
        yn = 0.25 * (yn + lam);
        zn = 0.25 * (zn + lam);
        mul *= 4.0;
    }
    const Complex X = (A - x) / (mul * An);
    const Complex Y = (A - y) / (mul * An);
    const Complex Z = -(X + Y);
    const Complex E2 = X * Y - Z * Z;
    const Complex E3 = X * Y * Z;
    // DLMF 19.36.1
    const Complex s = 1.0 - E2 / 10.0 + E3 / 14.0 + E2 * E2 / 24.0 -
                      3.0 * E2 * E3 / 44.0 - 5.0 * E2 * E2 * E2 / 208.0 +
                      3.0 * E3 * E3 / 104.0 + E2 * E2 * E3 / 16.0;
    return s / std::sqrt(An);
}

Complex Lattice::inverse_wp(Complex c) const {
    if (!(std::isfinite(c.real()) && std::isfinite(c.imag())))
        throw std::domain_error("inverse_wp: non-finite target");
    const double scale = 1.0 + std::abs(c);
    if (std::abs(c - Complex(e1_)) < 1e-11 * scale)
        return {mp_.K, 0.0};
    if (std::abs(c - Complex(e2_)) < 1e-11 * scale)
        return {mp_.K, mp_.Kc};
    if (std::abs(c - Complex(e3_)) < 1e-11 * scale)
        return {0.0, mp_.Kc};

    Complex cw = c;
    if (std::abs(cw.imag()) < 1e-13 * scale)
        cw += Complex(0.0, 1e-12 * scale);
    Complex t = carlson_rf(cw - e1_, cw - e2_, cw - e3_);

    const double step_cap = 0.5 * std::min(mp_.K, mp_.Kc);
    bool ok = false;
    for (int it = 0; it < 40; ++it) {
        if (lattice_distance(t) < 1e-12)
            t += Complex(1e-9, 1e-9);
        const Complex f = wp(t) - c;
        if (std::abs(f) < 1e-12 * scale) {
            ok = true;
            break;
        }
        const Complex fp = wp_prime(t);
        if (std::abs(fp) < 1e-14)
            break;
        Complex step = f / fp;
        if (std::abs(step) > step_cap)
            step *= step_cap / std::abs(step);
        t -= step;
    }
    if (!ok)
        throw ConvergenceError("inverse_wp: Newton polish did not converge "
                               "(target ill-conditioned near a branch value)");
    double re = std::fmod(t.real(), 2.0 * mp_.K);
    if (re < 0.0)
        re += 2.0 * mp_.K;
    double im = std::fmod(t.imag(), 2.0 * mp_.Kc);
    if (im < 0.0)
        im += 2.0 * mp_.Kc;
    return {re, im};
}

Lattice lattice_from_modulus(double k2) { return Lattice(k2); }

} // namespace alame::ell
