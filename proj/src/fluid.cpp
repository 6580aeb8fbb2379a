#include "nledlab/fluid.hpp"

#include <cmath>

namespace nledlab::fluid {

using forms::KForm;
using forms::Vector4;

double FluidState::lorentz() const { return 1.0 / std::sqrt(1.0 - u * u); }

Vector4 FluidState::velocity() const {
    const double g = lorentz();
    return {g, 0.0, 0.0, g * u};
}

KForm FluidState::covelocity() const { return forms::lower(velocity()); }

void validate(const FluidState& state) {
    if (!(state.rho_m >= 0)) throw InvalidState("rho_m must be nonnegative");
    if (!(state.p >= 0)) throw InvalidState("pressure must be nonnegative");
    if (!(std::abs(state.u) < 1)) throw InvalidState("|u| must be < 1");
}

double energy_density(const EquationOfState& eos, double rho_m, double p) {
    if (!(rho_m >= 0) || !(p >= 0)) throw InvalidState("rho_m and p must be nonnegative");
    if (eos.kind == EosKind::ColdDust) {
        if (p != 0.0) throw InvalidState("cold dust carries no pressure");
        return rho_m;
    }
    if (p == 0.0) return rho_m;
    if (rho_m == 0.0) throw InvalidState("IdealGamma needs rho_m > 0 when p > 0");
    return rho_m + p / (eos.gamma - 1.0);
}

double tds_increment(const EquationOfState& eos, const FluidState& a, const FluidState& b) {
    if (eos.kind == EosKind::ColdDust)
        throw InvalidState("cold dust has no thermodynamics");
    validate(a);
    validate(b);
    if (!(a.rho_m > 0) || !(b.rho_m > 0))
        throw InvalidState("tds_increment needs rho_m > 0");
    const double eps_a = a.p / ((eos.gamma - 1.0) * a.rho_m);
    const double eps_b = b.p / ((eos.gamma - 1.0) * b.rho_m);
    const double p_mid = 0.5 * (a.p + b.p);
    return (eps_b - eps_a) + p_mid * (1.0 / b.rho_m - 1.0 / a.rho_m);
}

KForm project(const Vector4& V, const KForm& alpha) {
    if (alpha.degree() != 1) throw ContractViolation("project expects a 1-form");
    if (std::abs(forms::metric_dot(V, V) + 1.0) > 1e-9)
        throw ContractViolation("project requires a unit timelike 4-velocity");
    double aV = 0.0;
    for (int a = 0; a < forms::kDim; ++a) aV += alpha[a] * V[a];
    return alpha + forms::lower(V) * aV;
}

KForm u1_current(const FluidState& state) {
    validate(state);
    return forms::hodge(state.covelocity()) * state.rho_e;
}

namespace {

struct ScalarGradients {
    KForm dM{1}, dN{1}, dL{1};
};

ScalarGradients scalar_gradients(const nled::ScalarBundle& b, double X, double Y,
                                 const KForm& F, const GradF& grad) {
    ScalarGradients out;
    const double MX = -(X * b.LXX + Y * b.LXY);
    const double MY = -(X * b.LXY + Y * b.LYY);
    for (int a = 0; a < forms::kDim; ++a) {
        const double dXa = -2.0 * forms::form_inner(grad[a], F);
        const double dYa = 2.0 * forms::hodge(forms::wedge(grad[a], F))[0];
        out.dM[a] = MX * dXa + MY * dYa;
        out.dN[a] = 2.0 * (b.LXX * dXa + b.LXY * dYa);
        out.dL[a] = 2.0 * (b.LXY * dXa + b.LYY * dYa);
    }
    return out;
}

} // namespace

ForceTerms force_terms(const nled::LagrangianModel& model, const KForm& F, const GradF& grad,
                       const FluidState& state, const KForm& dp) {
    if (F.degree() != 2) throw ContractViolation("force_terms expects a 2-form");
    if (dp.degree() != 1) throw ContractViolation("dp must be a 1-form");
    validate(state);

    const double X = forms::invariant_X(F);
    const double Y = forms::invariant_Y(F);
    const auto bundle = nled::eval_scalars(model, X, Y);
    const auto g = scalar_gradients(bundle, X, Y, F, grad);

    ForceTerms out;
    out.xi = g.dM + forms::hodge(nled::tau_led_q(F, forms::raise(g.dN)));

    const KForm sF = forms::hodge(F);
    const KForm eta_form = forms::hodge(forms::wedge(g.dN, sF)) + forms::hodge(forms::wedge(g.dL, F));
    out.eta = forms::raise(eta_form);

    const Vector4 V = state.velocity();
    out.Jhat = state.rho_e * V - out.eta;
    out.P_total = -(out.xi + forms::interior(out.Jhat, F)) - dp;
    return out;
}

KForm nled_divergence(const nled::LagrangianModel& model, const KForm& F, const GradF& grad,
                      const FluidState& state) {
    const auto ft = force_terms(model, F, grad, state);
    return ft.xi + forms::interior(ft.Jhat, F);
}

KForm eom_rhs(const nled::LagrangianModel& model, const KForm& F, const GradF& grad,
              const FluidState& state, double grad_p) {
    validate(state);
    if (!(state.rho_m + state.p > 0))
        throw DegenerateInertia("rho + p = 0: no inertia to accelerate");
    KForm dp(1);
    dp[3] = grad_p;
    const auto ft = force_terms(model, F, grad, state, dp);
    return project(state.velocity(), ft.P_total);
}

double continuity_rhs(const nled::LagrangianModel& model, const KForm& F, const GradF& grad,
                      const FluidState& state, double grad_rho) {
    validate(state);
    if (!(state.rho_m + state.p > 0))
        throw DegenerateInertia("rho + p = 0: no inertia to accelerate");
    const auto ft = force_terms(model, F, grad, state);
    const Vector4 V = state.velocity();
    const KForm iJF = forms::interior(ft.Jhat, F);
    double acc = 0.0;
    for (int a = 0; a < forms::kDim; ++a) acc += (ft.xi[a] + iJF[a]) * V[a];
    const double v_rho = state.lorentz() * state.u * grad_rho;
    return acc - v_rho;
}

} // namespace nledlab::fluid
