#include "alame/susy.hpp"
#include "alame/errors.hpp"
#include "alame/hill.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace alame::susy {

SeedSpec SeedSpec::bloch(const LameModel& m, double eps, int which) {
    if (which != 1 && which != 2)
        throw std::invalid_argument("SeedSpec::bloch: which must be 1 or 2");
    return SeedSpec{eps, 0.0, which == 2, m, false};
}

SeedSpec SeedSpec::combination(const LameModel& m, double eps, double lambda) {
    return SeedSpec{eps, lambda, false, m, false};
}

SeedSpec SeedSpec::combination_inf(const LameModel& m, double eps) {
    return SeedSpec{eps, 0.0, true, m, false};
}

std::pair<double, double> SeedSpec::weights() const {
    if (lambda_inf)
        return {0.0, 1.0};
    const double th = std::atan(lambda);
    return {std::cos(th), std::sin(th)};
}

SeedFunction::SeedFunction(const SeedSpec& spec)
    : spec_(spec),
      sol_(std::make_shared<BlochSolution>(spec.model, spec.epsilon)) {
    auto [w1, w2] = spec.weights();
    w1_ = w1;
    w2_ = w2;
}

namespace {

struct ScaledParts {
    Complex p1w, p2w; // weighted, phase-scaled psi values at the reduced x
    double xhat;      // reduced abscissa (for the log-derivative path)
    double log_scale;
};

ScaledParts seed_parts(const BlochSolution& sol, double w1, double w2, double x) {
    const double period = sol.model().period();
    const double nsh = std::round((x - sol.x_ref()) / period);
    const double xhat = x - nsh * period;
    const Complex lnr = sol.log_multiplier(1);
    const double a = nsh * lnr.real();
    ScaledParts sp;
    sp.xhat = xhat;
    sp.log_scale = std::abs(a);
    const Complex ph1 = std::exp(Complex(a - sp.log_scale, nsh * lnr.imag()));
    const Complex ph2 = std::exp(Complex(-a - sp.log_scale, -nsh * lnr.imag()));
    sp.p1w = w1 * ph1 * sol.psi(xhat, 1);
    sp.p2w = w2 * ph2 * sol.psi(xhat, 2);
    return sp;
}

} // namespace

void SeedFunction::scaled(double x, double& u_hat, double& log_scale) const {
    const auto sp = seed_parts(*sol_, w1_, w2_, x);
    u_hat = (sp.p1w + sp.p2w).real();
    log_scale = sp.log_scale;
}

double SeedFunction::value(double x) const {
    double u_hat, ls;
    scaled(x, u_hat, ls);
    return u_hat * std::exp(ls);
}

double SeedFunction::log_abs(double x) const {
    double u_hat, ls;
    scaled(x, u_hat, ls);
    return ls + std::log(std::abs(u_hat));
}

double SeedFunction::dlog(double x) const {
    const auto sp = seed_parts(*sol_, w1_, w2_, x);
    const Complex den = sp.p1w + sp.p2w;
    if (std::abs(den) < 1e-14)
        throw SingularTransformError("seed value vanishes at evaluation point", x);
    const Complex d1 = sol_->dlog(sp.xhat, 1);
    const Complex d2 = sol_->dlog(sp.xhat, 2);
    return ((sp.p1w * d1 + sp.p2w * d2) / den).real();
}

NodelessResult nodeless_check(const SeedSpec& spec, double x_lo, double x_hi,
                              int samples) {
    if (samples < 2)
        throw std::invalid_argument("nodeless_check: samples >= 2 required");
    SeedFunction u(spec);
    auto sign_at = [&](double x) {
        double u_hat, ls;
        u.scaled(x, u_hat, ls);
        return u_hat;
    };
    const double dx = (x_hi - x_lo) / double(samples - 1);
    double xp = x_lo, fp = sign_at(xp);
    for (int i = 1; i < samples; ++i) {
        const double x = x_lo + i * dx;
        const double f = sign_at(x);
        if (fp == 0.0)
            return {false, xp};
        if (fp * f < 0.0) {
            double a = xp, b = x, fa = fp;
            while (b - a > 1e-10) {
                const double mid = 0.5 * (a + b);
                const double fm = sign_at(mid);
                if (fm == 0.0)
                    return {false, mid};
                if (fa * fm < 0.0)
                    b = mid;
                else {
                    a = mid;
                    fa = fm;
                }
            }
            return {false, 0.5 * (a + b)};
        }
        xp = x;
        fp = f;
    }
    return {true, 0.0};
}

double lowest_edge(const LameModel& model) {
    if (model.ell == 1)
        return band_edges(model).front();
    // Lame branch: below the spectrum D > 2 and D - 2 stays nonpositive from
    // the lowest edge through the following bands and gaps, so the first sign
    // change of D - 2 brackets E0 even when the first band is very narrow.
    auto V = [&](double x) { return model.potential(x); };
    const double period = model.period();
    double prevE = 0.0;
    double prevD = hill::hill_discriminant(V, period, prevE);
    for (double E = 0.25; E < 20.0; E += 0.25) {
        const double d = hill::hill_discriminant(V, period, E);
        if ((prevD - 2.0) * (d - 2.0) < 0.0) {
            double lo = prevE, hi = E, flo = prevD - 2.0;
            while (hi - lo > 1e-8) {
                const double mid = 0.5 * (lo + hi);
                const double fm = hill::hill_discriminant(V, period, mid) - 2.0;
                if (flo * fm < 0.0)
                    hi = mid;
                else {
                    lo = mid;
                    flo = fm;
                }
            }
            return 0.5 * (lo + hi);
        }
        prevE = E;
        prevD = d;
    }
    throw ConvergenceError("lowest_edge: no band edge found below E = 20");
}

SusyTransform::SusyTransform(const SeedSpec& spec) : seed_(spec) {
    const auto& model = spec.model;
    if (!seed_.solution().real_valued())
        throw std::domain_error(
            "susy: seed is not real-valued at this energy (band interior)");

    const double E0 = lowest_edge(model);
    const bool below = spec.epsilon <= E0 + 1e-12;
    if (!below && !spec.allow_above_ground)
        throw std::domain_error("susy: factorization energy above the lowest band "
                                "edge; set allow_above_ground to override");

    const double period = model.period();
    const bool lambda_neg = !spec.lambda_inf && spec.lambda < 0.0;
    if (lambda_neg || !below) {
        auto nr = nodeless_check(spec, -2.0 * period, 2.0 * period, 4096);
        if (nr.nodeless && lambda_neg) {
            // the zero sits where psi1/psi2 = -lambda, which drifts far from
            // the origin when |lambda| is far from 1; rescan around the
            // multiplier-based estimate
            const double rate =
                seed_.solution().log_multiplier(1).real() / period;
            auto [w1, w2] = spec.weights();
            if (std::abs(rate) > 1e-12 && w1 != 0.0) {
                const double xc = seed_.solution().x_ref() +
                                  std::log(-w2 / w1) / (2.0 * rate);
                nr = nodeless_check(spec, xc - 2.0 * period, xc + 2.0 * period,
                                    4096);
            }
        }
        if (!nr.nodeless) {
            std::ostringstream os;
            os << "susy: seed has a node at x = " << nr.first_node;
            throw SingularTransformError(os.str(), nr.first_node);
        }
        if (lambda_neg) {
            // at a band edge the pair degenerates and the combination is
            // proportional to the nodeless edge eigenfunction; off the edge a
            // negative mixing always has a node even if the scan missed it
            if (!seed_.solution().degenerate())
                throw SingularTransformError(
                    "susy: negative mixing produces a node (outside the scan window)");
            auto [w1, w2] = spec.weights();
            if (std::abs(w1 + w2) < 1e-12)
                throw SingularTransformError(
                    "susy: seed vanishes identically (lambda = -1 at a band edge)");
        }
    }

    info_.kind = spec.is_bloch() ? PartnerKind::periodic_bloch : PartnerKind::defect;
    info_.epsilon = spec.epsilon;
    info_.lambda = spec.lambda;
    info_.lambda_inf = spec.lambda_inf;
    info_.nodeless_guaranteed =
        below && (spec.lambda_inf || spec.lambda >= 0.0);

    if (info_.kind == PartnerKind::periodic_bloch && model.ell == 1) {
        const double k2 = model.modulus.k2;
        Complex alsum = 0.0;
        for (const auto& a : seed_.solution().aux().points) {
            const auto j = ell::jacobi_complex(a, model.modulus);
            PartnerTerm t;
            t.alpha2 = -1.0 / (k2 * j.sn * j.sn);
            t.beta = -j.cn * j.dn / (k2 * j.sn * j.sn * j.sn);
            alsum += t.alpha2;
            info_.terms.push_back(t);
        }
        const double mt = double(model.m) + 1.0;
        info_.constant_term = 2.0 * (k2 * (mt + alsum.real()) + mt);
        info_.beta_sign = spec.lambda_inf ? +1 : -1;
        // pin the branch against the identity route at one sample point
        const double x0 = 0.37 * model.modulus.K;
        const double ref = partner(x0);
        const int s = info_.beta_sign;
        auto closed = [&](int sg) {
            info_.beta_sign = sg;
            return partner_closed_form(x0);
        };
        const double dplus = std::abs(closed(s) - ref);
        const double dminus = std::abs(closed(-s) - ref);
        info_.beta_sign = (dminus < dplus) ? -s : s;
    }
}

double SusyTransform::potential(double x) const {
    return seed_.spec().model.potential(x);
}

double SusyTransform::partner(double x) const {
    const double g = seed_.dlog(x);
    return 2.0 * g * g - potential(x) + 2.0 * seed_.spec().epsilon;
}

double SusyTransform::partner_closed_form(double x) const {
    if (info_.kind != PartnerKind::periodic_bloch)
        throw std::domain_error(
            "partner_closed_form: available for Bloch seeds (lambda = 0 or inf)");
    if (seed_.spec().model.ell != 1)
        throw UnsupportedModelError(
            "partner_closed_form: closed form covers the ell = 1 models");
    const double k2 = seed_.spec().model.modulus.k2;
    const auto j = ell::jacobi_sn_cn_dn(x, seed_.spec().model.modulus);
    const double sncndn = j.sn * j.cn * j.dn;
    const double sn2 = j.sn * j.sn;
    Complex tot = -4.0 * k2 * sn2;
    for (const auto& t : info_.terms) {
        const Complex br = (sncndn + double(info_.beta_sign) * t.beta) /
                           (sn2 + t.alpha2);
        tot += 2.0 * br * br;
    }
    tot += info_.constant_term;
    return tot.real();
}

double SusyTransform::bound_state(double x) const {
    double u_hat, ls;
    seed_.scaled(x, u_hat, ls);
    return std::exp(-ls) / u_hat;
}

DefectState SusyTransform::defect_state(double x_lo, double x_hi) const {
    if (info_.kind != PartnerKind::defect)
        throw std::domain_error("defect_state: requires a combination seed "
                                "(0 < lambda < infinity)");
    const double period = seed_.spec().model.period();
    const double xc = seed_.solution().x_ref();

    // 10-point Gauss-Legendre nodes/weights on [-1,1]
    static const std::array<double, 5> gx = {0.1488743389816312, 0.4333953941292472,
                                             0.6794095682990244, 0.8650633666889845,
                                             0.9739065285171717};
    static const std::array<double, 5> gw = {0.2955242247147529, 0.2692667193099963,
                                             0.2190863625159820, 0.1494513491505806,
                                             0.0666713443086881};
    auto cell = [&](double a, double b) {
        double s = 0.0;
        const int panels = 4;
        const double w = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = a + (p + 0.5) * w, half = 0.5 * w;
            for (int i = 0; i < 5; ++i) {
                for (double sgn : {-1.0, 1.0}) {
                    const double x = mid + sgn * half * gx[size_t(i)];
                    double u_hat, ls;
                    seed_.scaled(x, u_hat, ls);
                    const double phi2 = std::exp(-2.0 * ls) / (u_hat * u_hat);
                    s += gw[size_t(i)] * half * phi2;
                }
            }
        }
        return s;
    };

    int lo = int(std::floor((std::min(x_lo, xc - period) - xc) / period));
    int hi = int(std::ceil((std::max(x_hi, xc + period) - xc) / period));
    double total = 0.0;
    for (int n = lo; n < hi; ++n)
        total += cell(xc + n * period, xc + (n + 1) * period);

    const double rel_tail = 1e-10;
    const int max_cells = 50;
    bool converged_r = false, converged_l = false;
    for (int n = hi; n < max_cells && !converged_r; ++n) {
        const double c = cell(xc + n * period, xc + (n + 1) * period);
        total += c;
        if (c < rel_tail * total)
            converged_r = true;
    }
    for (int n = lo - 1; n > -max_cells && !converged_l; --n) {
        const double c = cell(xc + n * period, xc + (n + 1) * period);
        total += c;
        if (c < rel_tail * total)
            converged_l = true;
    }
    if (!converged_r || !converged_l)
        throw NonNormalizableError(
            "defect_bound_state: tail decay not detected within 50 periods");

    // phi ~ exp(-kappa |x|); same-phase samples cancel the periodic factor
    auto fit = [&](double sgn) {
        const double xa = xc + sgn * 8.0 * period;
        const double xb = xc + sgn * 16.0 * period;
        return std::abs(seed_.log_abs(xb) - seed_.log_abs(xa)) / (8.0 * period);
    };
    DefectState ds;
    ds.epsilon = seed_.spec().epsilon;
    ds.norm_squared = total;
    ds.decay_rate = 0.5 * (fit(+1.0) + fit(-1.0));
    return ds;
}

double partner_bloch_closed_form(double x, const LameModel& model, double eps,
                                 int which) {
    SusyTransform t(SeedSpec::bloch(model, eps, which));
    return t.partner_closed_form(x);
}

SeedEval seed_combination(double x, const SeedSpec& spec) {
    SeedFunction u(spec);
    return {u.value(x), u.dlog(x)};
}

double partner_from_seed(double x, const SeedSpec& spec) {
    SusyTransform t(spec);
    return t.partner(x);
}

DefectState defect_bound_state(const SeedSpec& spec, double x_lo, double x_hi) {
    SusyTransform t(spec);
    return t.defect_state(x_lo, x_hi);
}

} // namespace alame::susy
