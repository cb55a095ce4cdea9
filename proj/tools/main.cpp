// lame-susy: band edges, Bloch solutions, SUSY partner potentials, and the
// verification suites for the associated Lame models, emitted as plot-ready
// CSV/JSON.

#include "alame/curve.hpp"
#include "alame/errors.hpp"
#include "alame/hill.hpp"
#include "alame/lame.hpp"
#include "alame/susy.hpp"
#include "alame/version.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace {

using namespace alame;

constexpr int kExitUsage = 1;
constexpr int kExitUnsupported = 2;
constexpr int kExitSingular = 3;
constexpr int kExitVerifyFail = 4;

struct OutputOpts {
    std::string path;   // empty = stdout
    std::string format = "csv";
};

std::string complex_str(Complex z) {
    std::ostringstream os;
    os << format_g17(z.real());
    if (z.imag() >= 0.0)
        os << "+" << format_g17(z.imag()) << "i";
    else
        os << "-" << format_g17(-z.imag()) << "i";
    return os.str();
}

void base_metadata(SampledCurve& c, const LameModel& model) {
    c.set_meta("library_version", std::string(kVersion));
    c.set_meta("m", double(model.m));
    c.set_meta("ell", double(model.ell));
    c.set_meta("k2", model.modulus.k2);
    c.set_meta("normalization", "ebar3=1;z=x-iK';xref=K");
}

void aux_metadata(SampledCurve& c, const AuxiliaryPoints& aux) {
    std::ostringstream os;
    for (size_t i = 0; i < aux.points.size(); ++i)
        os << (i ? ";" : "") << complex_str(aux.points[i]);
    c.set_meta("aux_points", os.str());
    c.set_meta("sign_pairing", aux.sign_pairing);
}

void emit(const SampledCurve& c, const OutputOpts& out) {
    const std::string text = (out.format == "json") ? c.to_json() : c.to_csv();
    if (out.path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out.path);
        if (!f)
            throw std::runtime_error("cannot open output file: " + out.path);
        f << text;
    }
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        v[size_t(i)] = lo + (hi - lo) * i / double(n - 1);
    return v;
}

int cmd_band_edges(const LameModel& model, const OutputOpts& out) {
    const auto analytic = band_edges(model);
    auto V = [&](double x) { return model.potential(x); };
    const double period = model.period();

    std::vector<double> numeric, deviation;
    for (size_t i = 0; i < analytic.size(); ++i) {
        double half = 0.05;
        for (size_t j = 0; j < analytic.size(); ++j)
            if (j != i)
                half = std::min(half, 0.4 * std::abs(analytic[j] - analytic[i]));
        const double e = hill::locate_discriminant_root(
            V, period, analytic[i] - half, analytic[i] + half);
        numeric.push_back(e);
        deviation.push_back(e - analytic[i]);
    }
    SampledCurve c;
    base_metadata(c, model);
    double worst = 0.0;
    for (double d : deviation)
        worst = std::max(worst, std::abs(d));
    c.set_meta("residual_sup", worst);
    c.add_column("E_analytic", analytic);
    c.add_column("E_numeric", numeric);
    c.add_column("deviation", deviation);
    emit(c, out);
    return 0;
}

int cmd_bloch(const LameModel& model, double E, double xmin, double xmax,
              int samples, const OutputOpts& out) {
    BlochSolution sol(model, E);
    const auto xs = linspace(xmin, xmax, samples);
    std::vector<double> V, p1, p2, d1, d2, W, p1i, p2i;
    double resid = 0.0;
    for (double x : xs) {
        const auto bp = sol.pair(x);
        V.push_back(model.potential(x));
        p1.push_back(bp.psi1);
        p2.push_back(bp.psi2);
        d1.push_back(bp.dlog1);
        d2.push_back(bp.dlog2);
        W.push_back(bp.wronskian);
        p1i.push_back(bp.psi1c.imag());
        p2i.push_back(bp.psi2c.imag());
        resid = std::max(resid, std::max(sol.riccati_residual(x, 1),
                                         sol.riccati_residual(x, 2)));
    }
    SampledCurve c;
    base_metadata(c, model);
    aux_metadata(c, sol.aux());
    c.set_meta("energy", E);
    c.set_meta("residual_sup", resid);
    c.set_meta("degenerate", sol.degenerate() ? "true" : "false");
    c.set_meta("real_valued", sol.real_valued() ? "true" : "false");
    c.add_column("x", xs);
    c.add_column("V", V);
    c.add_column("psi1", p1);
    c.add_column("psi2", p2);
    c.add_column("dlog1", d1);
    c.add_column("dlog2", d2);
    c.add_column("wronskian", W);
    if (!sol.real_valued()) {
        c.add_column("psi1_im", p1i);
        c.add_column("psi2_im", p2i);
    }
    emit(c, out);
    return 0;
}

int cmd_partner(const LameModel& model, double eps, const std::string& lambda_s,
                bool allow_unsafe, double xmin, double xmax, int samples,
                const OutputOpts& out) {
    const bool lam_inf =
        (lambda_s == "inf" || lambda_s == "INF" || lambda_s == "infinity");
    susy::SeedSpec spec =
        lam_inf ? susy::SeedSpec::combination_inf(model, eps)
                : susy::SeedSpec::combination(model, eps, std::stod(lambda_s));
    spec.allow_above_ground = allow_unsafe;

    susy::SusyTransform t(spec);
    const auto xs = linspace(xmin, xmax, samples);

    SampledCurve c;
    base_metadata(c, model);
    aux_metadata(c, t.seed().solution().aux());
    c.set_meta("epsilon", eps);
    c.set_meta("lambda", lambda_s);
    {
        const auto& sol = t.seed().solution();
        double resid = 0.0;
        for (double f : {0.13, 0.39, 0.67, 0.91})
            for (int which : {1, 2})
                resid = std::max(resid,
                                 sol.riccati_residual(f * model.period(), which));
        c.set_meta("residual_sup", resid);
    }

    std::vector<double> V, vt;
    for (double x : xs) {
        V.push_back(model.potential(x));
        vt.push_back(t.partner(x));
    }
    c.add_column("x", xs);
    c.add_column("V", V);

    if (t.kind() == susy::PartnerKind::periodic_bloch) {
        if (model.ell == 1) {
            std::vector<double> vc, dev;
            for (size_t i = 0; i < xs.size(); ++i) {
                vc.push_back(t.partner_closed_form(xs[i]));
                dev.push_back(vc.back() - vt[i]);
            }
            c.add_column("Vt_closed", vc);
            c.add_column("Vt_numeric", vt);
            c.add_column("deviation", dev);
            c.set_meta("constant_term", t.info().constant_term);
        } else {
            // no closed form for the ell = 0 branches; identity route only
            c.add_column("Vt", vt);
        }
    } else {
        std::vector<double> phi;
        double phimax = 0.0;
        for (double x : xs)
            phimax = std::max(phimax, std::abs(t.bound_state(x)));
        for (double x : xs)
            phi.push_back(t.bound_state(x) / phimax);
        c.add_column("Vt", vt);
        c.add_column("bound_state", phi);
        const auto ds = t.defect_state(xmin, xmax);
        c.set_meta("norm_squared", ds.norm_squared);
        c.set_meta("decay_rate", ds.decay_rate);
    }
    emit(c, out);
    return 0;
}

int cmd_figure(int which, const OutputOpts& out) {
    const bool one = (which == 1);
    const LameModel model =
        one ? LameModel::create(1, 1, 0.99) : LameModel::create(2, 1, 0.95);
    const double eps = one ? 2.4 : 3.5;
    const double lambda = one ? 1.5 : 1.0;
    susy::SusyTransform t(susy::SeedSpec::combination(model, eps, lambda));

    const double K = model.modulus.K;
    const auto xs = linspace(-4.0 * K, 4.0 * K, 2001);
    std::vector<double> vg, vb;
    for (double x : xs) {
        vg.push_back(model.potential(x));
        vb.push_back(t.partner(x));
    }
    SampledCurve c;
    base_metadata(c, model);
    aux_metadata(c, t.seed().solution().aux());
    c.set_meta("epsilon", eps);
    c.set_meta("lambda", lambda);
    {
        const auto& sol = t.seed().solution();
        double resid = 0.0;
        for (double f : {0.13, 0.39, 0.67, 0.91})
            for (int which : {1, 2})
                resid = std::max(resid,
                                 sol.riccati_residual(f * model.period(), which));
        c.set_meta("residual_sup", resid);
    }
    c.add_column("x", xs);
    c.add_column("V_gray", vg);
    c.add_column("Vtilde_black", vb);
    emit(c, out);
    return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyReport {
    int failures = 0;
    double tolmul = 1.0;
    std::ostream* os = &std::cout;

    void check(const std::string& name, double measured, double tol) {
        tol *= tolmul;
        const bool pass = measured < tol;
        (*os) << (pass ? "[PASS] " : "[FAIL] ") << name
              << "  measured=" << format_g17(measured) << "  tol=" << format_g17(tol)
              << "\n";
        if (!pass)
            ++failures;
    }
};

void verify_elliptic(VerifyReport& rep) {
    std::mt19937 rng(20260809);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (double k2 : {0.25, 0.5, 0.75, 0.95, 0.99}) {
        const ell::Lattice lat(k2);
        const auto& mp = lat.modulus();
        double id_sncn = 0.0, id_dn = 0.0, id_wp = 0.0, quasi = 0.0, cross = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double x = (uni(rng) - 0.5) * 8.0 * mp.K;
            const auto j = ell::jacobi_sn_cn_dn(x, mp);
            id_sncn = std::max(id_sncn, std::abs(j.sn * j.sn + j.cn * j.cn - 1.0));
            id_dn = std::max(id_dn, std::abs(j.dn * j.dn + k2 * j.sn * j.sn - 1.0));

            Complex z(uni(rng) * 2.0 * mp.K, uni(rng) * 2.0 * mp.Kc);
            if (lat.lattice_distance(z) < 0.05 ||
                lat.lattice_distance(z - lat.omega_p()) < 0.05) {
                --i;
                continue;
            }
            const Complex P = lat.wp(z), Pp = lat.wp_prime(z);
            const Complex cubic = Pp * Pp - (4.0 * P * P * P - lat.g2() * P - lat.g3());
            id_wp = std::max(id_wp, std::abs(cubic) / (1.0 + std::abs(Pp * Pp)));
            cross = std::max(cross, std::abs(P - lat.wp_theta(z)) / (1.0 + std::abs(P)));

            const Complex s0 = lat.sigma(z);
            const Complex s1 = lat.sigma(z + 2.0 * lat.omega());
            const Complex pred = -s0 * std::exp(2.0 * lat.eta() * (z + lat.omega()));
            quasi = std::max(quasi, std::abs(s1 - pred) / (1.0 + std::abs(s1)));
        }
        const Complex leg =
            lat.eta() * lat.omega_p() - lat.eta_p() * lat.omega();
        const double legerr = std::abs(leg - Complex(0.0, M_PI / 2.0));
        std::ostringstream tag;
        tag << "elliptic k2=" << k2;
        rep.check(tag.str() + " sn^2+cn^2-1", id_sncn, 1e-11);
        rep.check(tag.str() + " dn^2+k2 sn^2-1", id_dn, 1e-11);
        rep.check(tag.str() + " Legendre", legerr, 1e-12);
        rep.check(tag.str() + " wp cubic", id_wp, 1e-11);
        rep.check(tag.str() + " sigma quasi-periodicity", quasi, 1e-10);
        rep.check(tag.str() + " wp cross-representation", cross, 1e-11);
    }
}

void verify_solver(VerifyReport& rep, int m, int ell, double k2, bool inject_bug) {
    const LameModel model = LameModel::create(m, ell, k2);
    auto V = [&](double x) { return model.potential(x); };
    const double period = model.period();

    if (model.ell == 1) {
        double worst = 0.0;
        for (double e : band_edges(model))
            worst = std::max(
                worst, std::abs(std::abs(hill::hill_discriminant(V, period, e)) - 2.0));
        rep.check("solver band-edge |D|-2", worst, 1e-6);
    }

    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> uni(0.0, 12.0);
    double worst_res = 0.0, worst_w = 0.0;
    for (int i = 0; i < 12; ++i) {
        const double E = uni(rng);
        BlochSolution sol(model, E);
        const auto xg = linspace(0.05 * period, 0.95 * period, 40);
        for (int which : {1, 2})
            worst_res = std::max(
                worst_res,
                hill::schrodinger_residual(
                    [&](double x) { return sol.psi(x, which); }, V, E, xg, period));
        if (!sol.degenerate()) {
            double wmin = 1e300, wmax = -1e300;
            for (double x : xg) {
                const double w = std::abs(sol.wronskian(x));
                wmin = std::min(wmin, w);
                wmax = std::max(wmax, w);
            }
            worst_w = std::max(worst_w, (wmax - wmin) / (wmax + 1e-300));
        }
    }
    rep.check("solver Schrodinger residual (random E)", worst_res, 1e-8);
    rep.check("solver Wronskian x-variation", worst_w, 1e-8);

    const double Et = energy_transform(model, 5.3).Etilde;
    auto coeffs = ansatz_coefficients(model, Et);
    if (inject_bug)
        coeffs.c[size_t(model.m == 1 ? 1 : 2)] += 1e-3; // perturb A1/B1
    std::vector<Complex> zsamples;
    for (double f : {0.2, 0.5, 0.8, 1.1, 1.4, 1.7})
        zsamples.emplace_back(f * model.modulus.K, 0.5 * model.modulus.Kc);
    const double res = product_ode_residual(model.lattice, model.m, model.ell, Et,
                                            coeffs, zsamples);
    rep.check("solver product-ODE residual", res, 1e-8);
}

void verify_susy(VerifyReport& rep, int m, int ell, double k2) {
    const LameModel model = LameModel::create(m, ell, k2);
    if (model.ell != 1)
        return;
    const double E0 = band_edges(model).front();
    auto V = [&](double x) { return model.potential(x); };
    const double period = model.period();

    double worst_cf = 0.0;
    for (int which : {1, 2}) {
        susy::SusyTransform t(susy::SeedSpec::bloch(model, E0 - 0.4, which));
        for (double x : linspace(0.02 * period, 0.98 * period, 60))
            worst_cf = std::max(worst_cf,
                                std::abs(t.partner_closed_form(x) - t.partner(x)));
    }
    rep.check("susy closed-form vs identity", worst_cf, 1e-8);

    susy::SusyTransform t1(susy::SeedSpec::bloch(model, E0 - 0.4, 1));
    const auto egrid = linspace(E0 - 1.5, band_edges(model).back() + 1.5, 60);
    const double iso = hill::isospectral_compare(
        V, [&](double x) { return t1.partner(x); }, period, egrid);
    rep.check("susy isospectrality (coarse grid)", iso, 1e-6);

    // involution: seed 1/u at the same eps restores V
    const double eps = E0 - 0.4;
    double worst_inv = 0.0;
    for (double x : linspace(0.1 * period, 1.9 * period, 30)) {
        const double g = t1.seed().dlog(x);
        const double vt = t1.partner(x);
        const double back = 2.0 * g * g - vt + 2.0 * eps;
        worst_inv = std::max(worst_inv, std::abs(back - V(x)));
    }
    rep.check("susy involution", worst_inv, 1e-9);
}

int cmd_verify(const std::string& suite, int m, int ell, double k2,
               bool inject_bug) {
    VerifyReport rep;
    if (const char* env = std::getenv("LAME_SUSY_TOL")) {
        rep.tolmul = std::atof(env);
        if (rep.tolmul <= 0.0)
            rep.tolmul = 1.0;
    }
    if (suite == "all" || suite == "elliptic")
        verify_elliptic(rep);
    if (suite == "all" || suite == "solver") {
        verify_solver(rep, m, ell, k2, inject_bug);
        if (suite == "all" && m == 1 && ell == 1)
            verify_solver(rep, 2, 1, 0.95, inject_bug);
    }
    if (suite == "all" || suite == "susy")
        verify_susy(rep, m, ell, k2);
    std::cout << (rep.failures == 0 ? "verify: all checks passed\n"
                                    : "verify: FAILURES detected\n");
    return rep.failures == 0 ? 0 : kExitVerifyFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"associated Lame band structure and SUSY partner toolkit"};
    app.require_subcommand(1);

    int m = 1, ell = 1;
    double k2 = 0.99;
    double energy = 3.0, epsilon = 2.4;
    std::string lambda_s = "0";
    bool allow_unsafe = false, inject_bug = false;
    double xmin = 0.0, xmax = 0.0;
    int samples = 2001;
    std::string suite = "all";
    OutputOpts out;

    auto add_model = [&](CLI::App* sub) {
        sub->add_option("--m", m, "potential parameter m");
        sub->add_option("--ell", ell, "potential parameter ell");
        sub->add_option("--k2", k2, "squared modulus in (0,1)");
    };
    auto add_out = [&](CLI::App* sub) {
        sub->add_option("--out", out.path, "output path (default: stdout)");
        sub->add_option("--format", out.format, "csv | json")
            ->check(CLI::IsMember({"csv", "json"}));
    };
    auto add_range = [&](CLI::App* sub) {
        sub->add_option("--xmin", xmin, "range start (default -4K)");
        sub->add_option("--xmax", xmax, "range end (default 4K)");
        sub->add_option("--samples", samples, "sample count (>= 2)")
            ->check(CLI::Range(2, 10000000));
    };

    auto* sb_edges = app.add_subcommand("band-edges", "analytic vs numeric band edges");
    add_model(sb_edges);
    add_out(sb_edges);

    auto* sb_bloch = app.add_subcommand("bloch", "sample the Bloch pair at an energy");
    add_model(sb_bloch);
    add_out(sb_bloch);
    add_range(sb_bloch);
    sb_bloch->add_option("--energy", energy, "energy E")->required();

    auto* sb_partner = app.add_subcommand("partner", "SUSY partner potential");
    add_model(sb_partner);
    add_out(sb_partner);
    add_range(sb_partner);
    sb_partner->add_option("--epsilon", epsilon, "factorization energy")->required();
    sb_partner->add_option("--lambda", lambda_s, "mixing (number or 'inf')");
    sb_partner->add_flag("--allow-unsafe", allow_unsafe,
                         "permit epsilon above the lowest band edge");

    auto* sb_verify = app.add_subcommand("verify", "run the verification suites");
    add_model(sb_verify);
    sb_verify->add_option("--suite", suite, "all | elliptic | solver | susy")
        ->check(CLI::IsMember({"all", "elliptic", "solver", "susy"}));
    sb_verify->add_flag("--inject-bug", inject_bug,
                        "perturb a coefficient to demonstrate failure detection");

    auto* sb_f1 = app.add_subcommand("figure1", "defect partner, (1,1), k2=0.99, eps=2.4");
    add_out(sb_f1);
    auto* sb_f2 = app.add_subcommand("figure2", "defect partner, (2,1), k2=0.95, eps=3.5");
    add_out(sb_f2);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (sb_edges->parsed() || sb_bloch->parsed() || sb_partner->parsed()) {
            const LameModel model = LameModel::create(m, ell, k2);
            if (xmax <= xmin) {
                xmin = -4.0 * model.modulus.K;
                xmax = 4.0 * model.modulus.K;
            }
            if (sb_edges->parsed())
                return cmd_band_edges(model, out);
            if (sb_bloch->parsed())
                return cmd_bloch(model, energy, xmin, xmax, samples, out);
            return cmd_partner(model, epsilon, lambda_s, allow_unsafe, xmin, xmax,
                               samples, out);
        }
        if (sb_verify->parsed())
            return cmd_verify(suite, m, ell, k2, inject_bug);
        if (sb_f1->parsed())
            return cmd_figure(1, out);
        if (sb_f2->parsed())
            return cmd_figure(2, out);
    } catch (const UnsupportedModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnsupported;
    } catch (const SingularTransformError& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (e.has_node())
            std::cerr << "first node at x = " << format_g17(e.node_x()) << "\n";
        return kExitSingular;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return 0;
}
