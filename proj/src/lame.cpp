#include "alame/lame.hpp"
#include "alame/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace alame {

namespace {

bool close(Complex a, Complex b, double tol) {
    return std::abs(a - b) <= tol * (1.0 + std::abs(a) + std::abs(b));
}

Complex ipow(Complex u, int n) {
    Complex r = 1.0;
    for (int i = 0; i < n; ++i)
        r *= u;
    return r;
}

/// Representative of t in the centered cell (-omega, omega] x (-K', K'].
Complex centered_rep(const ell::Lattice& lat, Complex t) {
    const double om = lat.omega();
    const double omp = lat.modulus().Kc;
    double re = std::fmod(t.real() + om, 2.0 * om);
    if (re < 0.0)
        re += 2.0 * om;
    re -= om;
    if (re <= -om + 1e-13)
        re += 2.0 * om;
    double im = std::fmod(t.imag() + omp, 2.0 * omp);
    if (im < 0.0)
        im += 2.0 * omp;
    im -= omp;
    if (im <= -omp + 1e-13)
        im += 2.0 * omp;
    return {re, im};
}

} // namespace

LameModel LameModel::create(int m, int ell, double k2) {
    const bool ok = (m == 1 || m == 2) && (ell == 0 || ell == 1);
    if (!ok) {
        std::ostringstream os;
        os << "unsupported model (m,ell) = (" << m << "," << ell
           << "); supported: (1,1), (2,1), (1,0), (2,0)";
        throw UnsupportedModelError(os.str());
    }
    return LameModel{m, ell, ell::ModulusParams::from_k2(k2), ell::Lattice(k2)};
}

double LameModel::potential(double x) const {
    const auto j = ell::jacobi_sn_cn_dn(x, modulus);
    return mm1() * modulus.k2 * j.sn * j.sn +
           ll1() * modulus.k2 * j.cn * j.cn / (j.dn * j.dn);
}

EnergyPair energy_transform(const LameModel& model, double E) {
    return {E, (E - model.ll1()) + model.lattice.e3() * model.mm1()};
}

double energy_from_tilde(const LameModel& model, double Etilde) {
    return Etilde + model.ll1() - model.lattice.e3() * model.mm1();
}

AnsatzCoefficients ansatz_coefficients(const LameModel& model, double Etilde) {
    const auto& lat = model.lattice;
    const double w = lat.ebar2() * lat.ebar3(); // = k'^2
    AnsatzCoefficients ac;
    if (model.m == 1) {
        ac.branch = (model.ell == 1) ? AnsatzBranch::A : AnsatzBranch::B;
        ac.rMin = -1;
        ac.rMax = 1;
        const double A1 = Etilde + lat.e1();
        const double A2 = (model.ell == 1) ? w : 0.0;
        ac.c = {A2, A1, 1.0};
    } else {
        ac.branch = (model.ell == 1) ? AnsatzBranch::C : AnsatzBranch::D;
        ac.rMin = -1;
        ac.rMax = 2;
        const double B1 = 2.0 * lat.e1() + Etilde / 3.0;
        double B2 = (Etilde / 3.0 - lat.e1()) * B1;
        double B3 = w * B1 / 3.0;
        if (model.ell == 0) {
            B2 += w;
            B3 = 0.0;
        }
        ac.c = {B3, B2, B1, 1.0};
    }
    return ac;
}

std::vector<Complex> numerator_roots(const AnsatzCoefficients& coeffs,
                                     const ell::Lattice& lat) {
    std::vector<Complex> p;
    if (coeffs.rMax - coeffs.rMin == 2) {
        const double A1 = coeffs.A1(), A2 = coeffs.A2();
        const double disc = A1 * A1 - 4.0 * A2;
        const double noise = 1e-14 * (A1 * A1 + 4.0 * std::abs(A2) + 1e-30);
        if (std::abs(disc) < 100.0 * noise) {
            p.assign(2, Complex(-0.5 * A1));
        } else if (disc > 0.0) {
            const double sd = std::sqrt(disc);
            const double q = -0.5 * (A1 + std::copysign(sd, A1));
            if (q != 0.0)
                p = {Complex(q), Complex(A2 / q)};
            else
                p = {Complex(std::sqrt(-A2)), Complex(-std::sqrt(-A2))};
        } else {
            const double sd = std::sqrt(-disc);
            p = {Complex(-0.5 * A1, 0.5 * sd), Complex(-0.5 * A1, -0.5 * sd)};
        }
    } else {
        const double b = coeffs.B1(), c = coeffs.B2(), d = coeffs.B3();
        const double delta0 = b * b - 3.0 * c;
        const double delta1 = 2.0 * b * b * b - 9.0 * b * c + 27.0 * d;
        const double disc = 18.0 * b * c * d - 4.0 * b * b * b * d +
                            b * b * c * c - 4.0 * c * c * c - 27.0 * d * d;
        const double dnoise =
            1e-13 * (std::abs(18.0 * b * c * d) + std::abs(4.0 * b * b * b * d) +
                     std::abs(b * b * c * c) + std::abs(4.0 * c * c * c) +
                     std::abs(27.0 * d * d) + 1e-30);
        const double d0noise = 1e-13 * (b * b + 3.0 * std::abs(c) + 1e-30);
        if (std::abs(delta0) < 100.0 * d0noise &&
            std::abs(disc) < 100.0 * dnoise) {
            p.assign(3, Complex(-b / 3.0)); // triple root
        } else if (std::abs(disc) < 100.0 * dnoise) {
            const double xd = (9.0 * d - b * c) / (2.0 * delta0);
            const double xs = (4.0 * b * c - 9.0 * d - b * b * b) / delta0;
            p = {Complex(xd), Complex(xd), Complex(xs)};
        } else {
            const Complex sq = std::sqrt(Complex(delta1 * delta1 - 4.0 * delta0 * delta0 * delta0));
            Complex C1 = std::pow(0.5 * (delta1 + sq), 1.0 / 3.0);
            Complex C2 = std::pow(0.5 * (delta1 - sq), 1.0 / 3.0);
            Complex C = (std::abs(C1) > std::abs(C2)) ? C1 : C2;
            const Complex u1(1.0, 0.0);
            const Complex u2(-0.5, 0.5 * std::sqrt(3.0));
            const Complex u3 = std::conj(u2);
            for (Complex u : {u1, u2, u3}) {
                Complex root = -(Complex(b) + u * C + delta0 / (u * C)) / 3.0;
                for (int it = 0; it < 3; ++it) { // Newton polish
                    const Complex f = ((root + b) * root + c) * root + d;
                    const Complex fp = (3.0 * root + 2.0 * b) * root + c;
                    if (std::abs(fp) < 1e-30)
                        break;
                    root -= f / fp;
                }
                p.push_back(root);
            }
            // real-coefficient cleanup: realify or pair up conjugates
            for (auto& r : p)
                if (std::abs(r.imag()) < 1e-11 * (1.0 + std::abs(r)))
                    r = Complex(r.real(), 0.0);
            for (size_t i = 0; i < p.size(); ++i)
                for (size_t j = i + 1; j < p.size(); ++j)
                    if (p[i].imag() != 0.0 && close(p[j], std::conj(p[i]), 1e-9)) {
                        const Complex avg = 0.5 * (p[i] + std::conj(p[j]));
                        p[i] = avg;
                        p[j] = std::conj(avg);
                    }
        }
    }
    std::vector<Complex> cvals(p.size());
    for (size_t i = 0; i < p.size(); ++i)
        cvals[i] = lat.e1() + p[i];
    return cvals;
}

namespace {

struct Candidate {
    std::vector<Complex> a; // signed points
    int A;                  // sign of the eta term in the exponent
};

double candidate_residual(const LameModel& model, const Candidate& cand, double E) {
    const auto& lat = model.lattice;
    Complex S = 0.0;
    for (const auto& ai : cand.a)
        S += lat.zeta(ai);
    const double xs[3] = {0.2357, 0.6711, 1.3133};
    double worst = 0.0;
    for (double f : xs) {
        const double x = f * model.modulus.K;
        const Complex z(x, -model.modulus.Kc);
        Complex g = -lat.zeta(z + lat.omega()) - double(model.m) * lat.zeta(z) +
                    double(cand.A) * lat.eta() - S;
        Complex gp = lat.wp(z + lat.omega()) + double(model.m) * lat.wp(z);
        for (const auto& ai : cand.a) {
            g += lat.zeta(z + ai);
            gp -= lat.wp(z + ai);
        }
        const double V = model.potential(x);
        const Complex r = gp + g * g - V + E;
        const double rel =
            std::abs(r) / (1.0 + std::abs(V) + std::abs(E) + std::norm(g));
        worst = std::max(worst, rel);
    }
    return worst;
}

} // namespace

AuxiliaryPoints auxiliary_points(const LameModel& model, double E) {
    const auto& lat = model.lattice;
    const auto ep = energy_transform(model, E);
    const auto coeffs = ansatz_coefficients(model, ep.Etilde);
    const auto cvals = numerator_roots(coeffs, lat);
    const int n = int(cvals.size());

    std::vector<Complex> t(n);
    for (int i = 0; i < n; ++i)
        t[i] = centered_rep(lat, lat.inverse_wp(cvals[i]));

    // enumerate sign choices and the two anchor pairings; keep those whose
    // psi_1 candidate solves the equation (Riccati residual oracle)
    std::vector<Candidate> feasible;
    for (int mask = 0; mask < (1 << n); ++mask) {
        for (int A : {+1, -1}) {
            Candidate cand;
            cand.A = A;
            cand.a.resize(n);
            for (int i = 0; i < n; ++i)
                cand.a[i] = (mask & (1 << i)) ? -t[i] : t[i];
            if (candidate_residual(model, cand, E) < 1e-6)
                feasible.push_back(std::move(cand));
        }
    }
    if (feasible.empty())
        throw ConvergenceError("auxiliary_points: no sign/pairing combination "
                               "solves the equation (unexpected)");

    // preferred representatives: Psi'(a_r) > 0 at real points (derivative of
    // the product form), positive-real-part centered rep for complex points
    std::vector<Complex> preferred(n);
    std::vector<bool> has_pref(n, false);
    for (int j = 0; j < n; ++j) {
        const Complex tc = centered_rep(lat, t[j]);
        if (std::abs(tc.imag()) < 1e-7 * (1.0 + std::abs(tc))) {
            Complex prod = 1.0;
            for (int r = 0; r < n; ++r)
                if (r != j)
                    prod *= cvals[j] - cvals[r];
            prod /= cvals[j] - lat.e1();
            const Complex psip = lat.wp_prime(tc) * prod;
            if (std::abs(psip) > 1e-9) {
                preferred[j] = (psip.real() > 0.0) ? tc : -tc;
                has_pref[j] = true;
            }
        } else {
            Complex cplus = tc, cminus = centered_rep(lat, -tc);
            auto rule = [](Complex v) {
                return (std::abs(v.real()) < 1e-12) ? (v.imag() > 0.0)
                                                    : (v.real() > 0.0);
            };
            preferred[j] = rule(cplus) ? cplus : cminus;
            has_pref[j] = true;
        }
    }

    auto match_count = [&](const Candidate& cand) {
        int cnt = 0;
        for (int j = 0; j < n; ++j) {
            if (!has_pref[j])
                continue;
            for (const auto& ai : cand.a)
                if (close(centered_rep(lat, ai), preferred[j], 1e-8))
                    ++cnt;
        }
        return cnt;
    };
    const Candidate* best = &feasible.front();
    int best_cnt = match_count(*best);
    for (const auto& cand : feasible) {
        const int cnt = match_count(cand);
        if (cnt > best_cnt) {
            best = &cand;
            best_cnt = cnt;
        }
    }

    AuxiliaryPoints aux;
    aux.points.resize(n);
    for (int i = 0; i < n; ++i)
        aux.points[i] = centered_rep(lat, best->a[i]);
    std::sort(aux.points.begin(), aux.points.end(), [](Complex a, Complex b) {
        if (a.real() != b.real())
            return a.real() < b.real();
        return a.imag() > b.imag();
    });
    aux.anchor = Complex(-double(best->A) * lat.omega(), 0.0);
    {
        std::ostringstream os;
        os << "eta-sign=" << (best->A > 0 ? "+" : "-") << ";points=" << n;
        aux.sign_pairing = os.str();
    }
    Complex S = 0.0, lnrho = 0.0;
    for (const auto& ai : aux.points) {
        const Complex za = lat.zeta(ai);
        S += za;
        lnrho += 2.0 * (lat.eta() * ai - lat.omega() * za);
    }
    lnrho += 2.0 * lat.eta() * lat.omega() * (double(best->A) - 1.0);
    aux.zeta_sum = S;
    aux.log_multiplier = lnrho;

    aux.conj_closed = true;
    for (const auto& ai : aux.points) {
        bool found = false;
        for (const auto& aj : aux.points)
            if (close(centered_rep(lat, std::conj(ai)), centered_rep(lat, aj), 1e-8))
                found = true;
        if (!found)
            aux.conj_closed = false;
    }
    return aux;
}

BlochSolution::BlochSolution(const LameModel& model, double E)
    : model_(model), E_(E), aux_(auxiliary_points(model, E)) {
    S_ = aux_.zeta_sum;
    lnrho_ = aux_.log_multiplier;

    xref_ = model_.modulus.K;
    bool ok = false;
    for (int tries = 0; tries < 12; ++tries) {
        const Complex r1 = psi_base(xref_, 1);
        const Complex r2 = psi_base(xref_, 2);
        if (std::min(std::abs(r1), std::abs(r2)) > 1e-12) {
            norm_[0] = 1.0 / r1;
            norm_[1] = 1.0 / r2;
            ok = true;
            break;
        }
        xref_ += 0.1 * model_.modulus.K;
    }
    if (!ok)
        throw NormalizationError("bloch_pair: |psi(x_ref)| below 1e-12 at all "
                                 "shifted reference points");

    const double K = model_.modulus.K;
    double max_im = 0.0, max_abs = 0.0;
    for (double f : {-0.93, -0.31, 0.37, 0.81, 1.43}) {
        for (int which : {1, 2}) {
            const Complex v = psi_base(xref_ + f * K, which) * norm_[which - 1];
            max_im = std::max(max_im, std::abs(v.imag()));
            max_abs = std::max(max_abs, std::abs(v));
        }
    }
    real_valued_ = (max_im <= 1e-9 * max_abs);

    double deg = 0.0;
    for (double f : {0.31, 0.77}) {
        const Complex d1 = dlog_at(xref_ + f * K, 1);
        const Complex d2 = dlog_at(xref_ + f * K, 2);
        deg = std::max(deg, std::abs(d1 - d2) / (1.0 + std::abs(d1) + std::abs(d2)));
    }
    degenerate_ = (deg < 1e-7);
}

Complex BlochSolution::log_multiplier(int which) const {
    return (which == 1) ? lnrho_ : -lnrho_;
}

Complex BlochSolution::psi_base(double x, int which) const {
    const auto& lat = model_.lattice;
    const double sgn = (which == 1) ? 1.0 : -1.0;
    const double A = -aux_.anchor.real() / lat.omega(); // exponent eta-sign
    const Complex z(x, -model_.modulus.Kc);
    Complex num = 1.0;
    for (const auto& a : aux_.points)
        num *= lat.sigma(z + sgn * a);
    Complex den = lat.sigma(z + lat.omega());
    const Complex sz = lat.sigma(z);
    for (int i = 0; i < model_.m; ++i)
        den *= sz;
    return num / den * std::exp(x * (A * lat.eta() - sgn * S_));
}

Complex BlochSolution::dlog_at(double x, int which) const {
    const auto& lat = model_.lattice;
    const double sgn = (which == 1) ? 1.0 : -1.0;
    const double A = -aux_.anchor.real() / lat.omega();
    const Complex z(x, -model_.modulus.Kc);
    Complex g = -lat.zeta(z + lat.omega()) - double(model_.m) * lat.zeta(z) +
                A * lat.eta() - sgn * S_;
    for (const auto& a : aux_.points)
        g += lat.zeta(z + sgn * a);
    return g;
}

Complex BlochSolution::psi(double x, int which) const {
    const double period = model_.period();
    const double nsh = std::round((x - xref_) / period);
    const double xhat = x - nsh * period;
    return std::exp(nsh * log_multiplier(which)) * psi_base(xhat, which) *
           norm_[which - 1];
}

Complex BlochSolution::dlog(double x, int which) const { return dlog_at(x, which); }

Complex BlochSolution::wronskian(double x) const {
    const Complex p1 = psi(x, 1), p2 = psi(x, 2);
    return p1 * p2 * (dlog_at(x, 2) - dlog_at(x, 1));
}

double BlochSolution::riccati_residual(double x, int which) const {
    const auto& lat = model_.lattice;
    const double sgn = (which == 1) ? 1.0 : -1.0;
    const Complex z(x, -model_.modulus.Kc);
    const Complex g = dlog_at(x, which);
    Complex gp = lat.wp(z + lat.omega()) + double(model_.m) * lat.wp(z);
    for (const auto& a : aux_.points)
        gp -= lat.wp(z + sgn * a);
    const double V = model_.potential(x);
    const Complex r = gp + g * g - V + E_;
    return std::abs(r) / (1.0 + std::abs(V) + std::abs(E_) + std::norm(g));
}

BlochPair BlochSolution::pair(double x) const {
    BlochPair bp{};
    bp.real_valued = real_valued_;
    bp.degenerate = degenerate_;
    bp.psi1c = psi(x, 1);
    bp.dlog1c = dlog_at(x, 1);
    if (degenerate_) {
        bp.psi2c = bp.psi1c;
        bp.dlog2c = bp.dlog1c;
        bp.wronskianc = 0.0;
    } else {
        bp.psi2c = psi(x, 2);
        bp.dlog2c = dlog_at(x, 2);
        bp.wronskianc = bp.psi1c * bp.psi2c * (bp.dlog2c - bp.dlog1c);
    }
    bp.psi1 = bp.psi1c.real();
    bp.psi2 = bp.psi2c.real();
    bp.dlog1 = bp.dlog1c.real();
    bp.dlog2 = bp.dlog2c.real();
    bp.wronskian = bp.wronskianc.real();
    return bp;
}

BlochPair bloch_pair(double x, const LameModel& model, double E) {
    return BlochSolution(model, E).pair(x);
}

double bloch_log_derivative(double x, const LameModel& model, double E, int which) {
    return BlochSolution(model, E).dlog(x, which).real();
}

std::vector<double> band_edges(const LameModel& model) {
    const double k2 = model.modulus.k2;
    std::vector<double> e;
    if (model.m == 1 && model.ell == 1) {
        const double kp = std::sqrt(1.0 - k2);
        e = {2.0 + k2 - 2.0 * kp, 2.0 + k2 + 2.0 * kp, 4.0};
    } else if (model.m == 2 && model.ell == 1) {
        const double s1 = std::sqrt(4.0 - 3.0 * k2);
        const double s2 = std::sqrt(k2 * k2 - 5.0 * k2 + 4.0);
        e = {4.0 * k2, 5.0 + k2 - 2.0 * s1, 5.0 + 2.0 * k2 - 2.0 * s2,
             5.0 + 2.0 * k2 + 2.0 * s2, 5.0 + k2 + 2.0 * s1};
    } else {
        throw UnsupportedModelError(
            "band_edges: closed forms exist only for (1,1) and (2,1)");
    }
    std::sort(e.begin(), e.end());
    return e;
}

double product_ode_residual(const ell::Lattice& lat, int m, int ell, double Etilde,
                            const AnsatzCoefficients& coeffs,
                            std::span<const Complex> samples, double h) {
    const double M = double(m) * (m + 1);
    const double L = double(ell) * (ell + 1);
    const double w = lat.ebar2() * lat.ebar3();
    const double e1 = lat.e1();
    if (h <= 0.0)
        h = 0.042 * std::min(lat.omega(), lat.modulus().Kc);

    auto Psi = [&](Complex z) {
        const Complex u = lat.wp(z) - e1;
        Complex up = (coeffs.rMin >= 0) ? ipow(u, coeffs.rMin)
                                        : 1.0 / ipow(u, -coeffs.rMin);
        Complex acc = 0.0;
        for (double ci : coeffs.c) {
            acc += ci * up;
            up *= u;
        }
        return acc;
    };
    auto PsiPrime = [&](Complex z) {
        const Complex u = lat.wp(z) - e1;
        const Complex wp_p = lat.wp_prime(z);
        Complex acc = 0.0;
        for (int r = coeffs.rMin; r <= coeffs.rMax; ++r) {
            if (r == 0)
                continue;
            const Complex upm1 =
                (r - 1 >= 0) ? ipow(u, r - 1) : 1.0 / ipow(u, 1 - r);
            acc += coeffs.coeff(r) * double(r) * upm1;
        }
        return acc * wp_p;
    };
    auto d3 = [&](Complex z, double s) {
        return (Psi(z + 2.0 * s) - 2.0 * Psi(z + s) + 2.0 * Psi(z - s) -
                Psi(z - 2.0 * s)) /
               (2.0 * s * s * s);
    };
    auto d3_rich = [&](Complex z) {
        // four-level Richardson triangle on the central kernel: O(h^8)
        Complex R[4];
        for (int j = 0; j < 4; ++j)
            R[j] = d3(z, h / double(1 << j));
        double p4 = 4.0;
        for (int k = 1; k < 4; ++k, p4 *= 4.0)
            for (int j = 3; j >= k; --j)
                R[j] = (p4 * R[j] - R[j - 1]) / (p4 - 1.0);
        return R[3];
    };

    double worst = 0.0;
    for (const Complex& z : samples) {
        const Complex t3 = d3_rich(z);
        const Complex P = lat.wp(z);
        const Complex Pp = lat.wp_prime(z);
        const Complex term2 = 4.0 * (M * P + L * w / (P - e1) - Etilde) * PsiPrime(z);
        const Complex term3 =
            2.0 * (M - L * w / ((P - e1) * (P - e1))) * Pp * Psi(z);
        const Complex res = t3 - term2 - term3;
        const double denom =
            std::abs(t3) + std::abs(term2) + std::abs(term3) + 1e-300;
        worst = std::max(worst, std::abs(res) / denom);
    }
    return worst;
}

double product_ode_residual(const LameModel& model, double E,
                            std::span<const Complex> samples) {
    const auto ep = energy_transform(model, E);
    const auto coeffs = ansatz_coefficients(model, ep.Etilde);
    return product_ode_residual(model.lattice, model.m, model.ell, ep.Etilde,
                                coeffs, samples);
}

std::optional<AnsatzCoefficients> fit_ansatz(int m, int ell, double Etilde,
                                             int rMin, int rMax,
                                             const ell::Lattice& lat) {
    if (!(rMin <= 0 && 0 <= rMax) || rMax > 4 || -rMin > 4 || rMax - rMin < 1)
        throw std::invalid_argument("fit_ansatz: require rMin <= 0 <= rMax with "
                                    "|rMin|, rMax <= 4");
    const double M = double(m) * (m + 1);
    const double L = double(ell) * (ell + 1);
    const double w = lat.ebar2() * lat.ebar3();
    const double e1 = lat.e1();

    const int ncols = rMax - rMin + 1;
    const int nrows = rMax - rMin + 3; // powers rMin-2 .. rMax
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nrows, ncols);
    auto row = [&](int s) { return s - (rMin - 2); };
    for (int r = rMin; r <= rMax; ++r) {
        const double rr = r;
        const double T0 = 4.0 * rr * (rr - 1) * (rr - 2) + 18.0 * rr * (rr - 1) +
                          12.0 * rr - (4.0 * rr + 2.0) * M;
        const double T1 = 12.0 * e1 * (rr * (rr - 1) * (rr - 2) +
                                       3.0 * rr * (rr - 1) + rr) -
                          4.0 * M * e1 * rr + 4.0 * Etilde * rr;
        const double T2 = 4.0 * w * (rr * (rr - 1) * (rr - 2) +
                                     1.5 * rr * (rr - 1)) +
                          (2.0 - 4.0 * rr) * L * w;
        A(row(r), r - rMin) += T0;
        A(row(r - 1), r - rMin) += T1;
        A(row(r - 2), r - rMin) += T2;
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(ncols - 1);
    if (smin > 1e-9 * std::max(smax, 1.0))
        return std::nullopt; // inconsistent: no nontrivial solution

    Eigen::VectorXd v = svd.matrixV().col(ncols - 1);
    const double lead = v(ncols - 1);
    double vmax = 0.0;
    for (int i = 0; i < ncols; ++i)
        vmax = std::max(vmax, std::abs(v(i)));
    if (std::abs(lead) > 1e-8 * vmax)
        v /= lead; // monic in the leading power
    else
        v /= v.cwiseAbs().maxCoeff();

    AnsatzCoefficients ac;
    ac.branch = AnsatzBranch::General;
    ac.rMin = rMin;
    ac.rMax = rMax;
    ac.c.assign(v.data(), v.data() + ncols);

    // residual gate on the fitted solution
    std::vector<Complex> samples;
    for (double f : {0.17, 0.43, 0.71, 0.99, 1.27, 1.55, 1.83})
        samples.emplace_back(f * lat.omega(), 0.5 * lat.modulus().Kc);
    const double res =
        product_ode_residual(lat, m, ell, Etilde, ac, samples);
    if (!(res < 1e-8))
        return std::nullopt;
    return ac;
}

} // namespace alame
