#pragma once

#include <array>

#include "nledlab/forms.hpp"
#include "nledlab/nled.hpp"

// Relativistic thermodynamic fluid state, equation of state, the
// electrodynamic force terms xi and eta, and the right-hand sides of the
// equation of motion and continuity equation.
//
// Sign conventions. With F packed as in two_form_from_eb (F_{0i} = -e_i),
// the on-shell divergence of the field stress-energy works out to
//     div T^{NLED} = dM + star tau^{LED}_{dN~} + i_{Jhat} F,
//     Jhat = rho_e V - eta,   eta~ = star(dN ^ star F) + star(dL ^ F),
// which the test suite verifies as an exact identity on polynomial field
// configurations. Total conservation then gives
//     (rho + p) grad_V V~ = Pi_V P,   P = -i_{Jhat} F - xi - dp,
//     (rho + p) div V     = i_V xi + i_V i_{Jhat} F - V(rho),
// with xi = dM + star tau^{LED}_{dN~}. In the Maxwell limit this is the
// Lorentz force on a charged fluid plus pressure gradients; for a neutral
// Born-Infeld fluid the forces survive wherever dX or dY is nonzero.

namespace nledlab::fluid {

struct FluidState {
    double rho_m = 0.0; // proper mass density, >= 0
    double p = 0.0;     // pressure, >= 0
    double rho_e = 0.0; // proper charge density
    double u = 0.0;     // longitudinal 3-velocity (z-axis), |u| < 1

    double lorentz() const;
    /// 4-velocity V = gamma (d_t + u d_z); g(V,V) = -1.
    forms::Vector4 velocity() const;
    /// Metric-lowered 1-form V~.
    forms::KForm covelocity() const;
};

void validate(const FluidState& state);

enum class EosKind { ColdDust, IdealGamma };

struct EquationOfState {
    EosKind kind = EosKind::ColdDust;
    double gamma = 5.0 / 3.0; // IdealGamma adiabatic index, > 1
};

/// rho = rho_m (1 + E(rho_m, p)). ColdDust: E = 0. IdealGamma:
/// E = p / ((gamma - 1) rho_m), the ideal-gas closure.
double energy_density(const EquationOfState& eos, double rho_m, double p);

/// Discretized T dS = dE + p d(1/rho_m) between nearby states, with the
/// pressure at the midpoint; vanishes along isentropes p ~ rho_m^gamma.
double tds_increment(const EquationOfState& eos, const FluidState& a, const FluidState& b);

/// Pi_V alpha = alpha + V~ (i_V alpha); projects 1-forms orthogonal to V.
/// Requires g(V,V) = -1 to 1e-9.
forms::KForm project(const forms::Vector4& V, const forms::KForm& alpha);

/// Convective electric 4-current J^{U1} = rho_e star V~ (a 3-form).
forms::KForm u1_current(const FluidState& state);

/// Per-coordinate derivatives of F: grad[a] = d_a F.
using GradF = std::array<forms::KForm, 4>;

inline GradF zero_grad() {
    return {forms::KForm(2), forms::KForm(2), forms::KForm(2), forms::KForm(2)};
}

struct ForceTerms {
    forms::KForm xi;       // 1-form, dM + star tau^{LED}_{dN~}
    forms::Vector4 eta;    // raised star(dN ^ star F) + star(dL ^ F)
    forms::Vector4 Jhat;   // rho_e V - eta
    forms::KForm P_total;  // -i_{Jhat} F - xi - dp
};

/// Assemble the electrodynamic force terms from analytic chain-rule
/// gradients of M, N, L through (X, Y). Identically zero for the Maxwell
/// model and for uniform fields.
ForceTerms force_terms(const nled::LagrangianModel& model, const forms::KForm& F,
                       const GradF& grad, const FluidState& state,
                       const forms::KForm& dp = forms::KForm(1));

/// div T^{NLED} as a 1-form: xi + i_{Jhat} F.
forms::KForm nled_divergence(const nled::LagrangianModel& model, const forms::KForm& F,
                             const GradF& grad, const FluidState& state);

/// (rho + p) grad_V V~ = Pi_V P. grad_p is the spatial pressure gradient
/// d_z p; the evaluation treats the state as a static slice (d_t p = 0).
forms::KForm eom_rhs(const nled::LagrangianModel& model, const forms::KForm& F,
                     const GradF& grad, const FluidState& state, double grad_p);

/// (p + rho) div V = i_V xi + i_V i_{Jhat} F - V(rho), with V(rho) taken
/// from the spatial gradient grad_rho = d_z rho on a static slice.
double continuity_rhs(const nled::LagrangianModel& model, const forms::KForm& F,
                      const GradF& grad, const FluidState& state, double grad_rho);

} // namespace nledlab::fluid
