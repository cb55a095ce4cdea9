#pragma once

// First-order SUSY/Darboux transformations of the associated Lame potentials:
// closed-form periodic partners from Bloch seeds, periodicity-defect partners
// from nodeless Bloch combinations u = psi_1 + lambda psi_2, and the defect
// bound state 1/u.

#include "alame/lame.hpp"

#include <memory>
#include <vector>

namespace alame::susy {

using ell::Complex;

struct SeedSpec {
    double epsilon = 0.0;
    double lambda = 0.0;       // mixing; ignored when lambda_inf
    bool lambda_inf = false;   // lambda = infinity selects psi_2
    LameModel model;
    bool allow_above_ground = false;

    static SeedSpec bloch(const LameModel& m, double eps, int which);
    static SeedSpec combination(const LameModel& m, double eps, double lambda);
    static SeedSpec combination_inf(const LameModel& m, double eps);

    bool is_bloch() const { return lambda_inf || lambda == 0.0; }
    /// Mixing weights (cos theta, sin theta) with lambda = tan theta, so that
    /// lambda = infinity is a regular input.
    std::pair<double, double> weights() const;
};

enum class PartnerKind { periodic_bloch, defect };

struct PartnerTerm {
    Complex alpha2; // -1/(k^2 sn^2 a_r)
    Complex beta;   // -cn a_r dn a_r / (k^2 sn^3 a_r)
};

struct PartnerPotential {
    PartnerKind kind = PartnerKind::periodic_bloch;
    double epsilon = 0.0;
    double lambda = 0.0;
    bool lambda_inf = false;
    std::vector<PartnerTerm> terms; // one per auxiliary point (periodic kind)
    double constant_term = 0.0;     // 2 {k^2 [m~ + sum alpha2] + m~}
    int beta_sign = -1;             // sign multiplying beta for this seed
    bool nodeless_guaranteed = false;
};

struct DefectState {
    double epsilon = 0.0;
    double norm_squared = 0.0;
    double decay_rate = 0.0;
};

struct NodelessResult {
    bool nodeless = true;
    double first_node = 0.0;
};

/// Evaluates u = cos(th) psi_1 + sin(th) psi_2 and its logarithmic derivative
/// from the analytic Bloch data (no numeric differentiation).  Handles any
/// lambda, including negative values and infinity; growth across many periods
/// is factored as u = u_hat * exp(log_scale) to stay finite.
class SeedFunction {
public:
    explicit SeedFunction(const SeedSpec& spec);

    const SeedSpec& spec() const { return spec_; }
    const BlochSolution& solution() const { return *sol_; }

    double value(double x) const;                       // u(x)
    double dlog(double x) const;                        // u'/u
    void scaled(double x, double& u_hat, double& log_scale) const;
    double log_abs(double x) const;                     // ln|u(x)|

private:
    SeedSpec spec_;
    std::shared_ptr<const BlochSolution> sol_;
    double w1_, w2_; // mixing weights
};

/// Sign-change scan with bisection refinement of the first node to 1e-10.
NodelessResult nodeless_check(const SeedSpec& spec, double x_lo, double x_hi,
                              int samples = 2048);

/// Full first-order transformation for one seed.  Construction validates the
/// seed: epsilon <= E0 unless allow_above_ground, u real, u nodeless (for
/// combination seeds the guarantee is checked by scanning when not implied).
class SusyTransform {
public:
    explicit SusyTransform(const SeedSpec& spec);

    const SeedSpec& seed_spec() const { return seed_.spec(); }
    const SeedFunction& seed() const { return seed_; }
    PartnerKind kind() const { return info_.kind; }
    const PartnerPotential& info() const { return info_; }

    double potential(double x) const;        // original V(x)
    /// Identity route: 2 (u'/u)^2 - V + 2 eps  (u'' eliminated exactly).
    double partner(double x) const;
    /// Closed form in Jacobi functions (periodic Bloch kind only).
    double partner_closed_form(double x) const;
    /// Defect eigenfunction 1/u (unnormalized).
    double bound_state(double x) const;

    DefectState defect_state(double x_lo, double x_hi) const;

private:
    SeedFunction seed_;
    PartnerPotential info_;
};

/// Spec-style free operations (each builds the transform internally).
double partner_bloch_closed_form(double x, const LameModel& model, double eps,
                                 int which);
struct SeedEval {
    double u;
    double dlogU;
};
SeedEval seed_combination(double x, const SeedSpec& spec);
double partner_from_seed(double x, const SeedSpec& spec);
DefectState defect_bound_state(const SeedSpec& spec, double x_lo, double x_hi);

/// Lowest band edge: analytic for (1,1)/(2,1), located by discriminant
/// bisection for the Lame branches (ell = 0).
double lowest_edge(const LameModel& model);

} // namespace alame::susy
