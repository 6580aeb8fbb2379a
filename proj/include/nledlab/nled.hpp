#pragma once

#include <array>

#include "nledlab/forms.hpp"

// Lagrangian models L(X, Y) of nonlinear vacuum electrodynamics, the
// constitutive map F -> G, and the stress-energy tensor.
//
// Model values:
//   Maxwell:    L = (eps0/2) X, so that star G = 2 star F L_X + 2 F L_Y
//               reduces to G = eps0 F.
//   BornInfeld: L = (eps0/kappa^2) (1 - sqrt(Delta)),
//               Delta = 1 - kappa^2 X - (kappa^4/4) Y^2.
// The Born-Infeld derivatives are obtained by differentiating the Lagrangian
// itself (2 L_X = eps0/sqrt(Delta), 2 L_Y = eps0 kappa^2 Y / (2 sqrt(Delta)))
// and are checked against finite differences in the test suite. Evaluations
// are written so that kappa = 0 reproduces the Maxwell values exactly.

namespace nledlab::nled {

enum class ModelKind { Maxwell, BornInfeld };

struct LagrangianModel {
    ModelKind kind = ModelKind::Maxwell;
    double kappa = 0.0; // natural-unit coupling, >= 0; ignored by Maxwell
    double eps0 = 1.0;  // vacuum permittivity, 1 in natural units
    // Delta at or below this floor raises FieldBoundExceeded; no clamping.
    double delta_floor = 1e-12;
};

inline LagrangianModel maxwell(double eps0 = 1.0) { return {ModelKind::Maxwell, 0.0, eps0, 1e-12}; }
inline LagrangianModel born_infeld(double kappa, double eps0 = 1.0) {
    return {ModelKind::BornInfeld, kappa, eps0, 1e-12};
}

/// Lagrangian value, its first and second partial derivatives, and the
/// derived scalars M = L - X L_X - Y L_Y, N = 2 L_X, Lsc = 2 L_Y.
struct ScalarBundle {
    double L = 0.0;
    double LX = 0.0, LY = 0.0;
    double LXX = 0.0, LXY = 0.0, LYY = 0.0;
    double M = 0.0, N = 0.0, Lsc = 0.0;
    double Delta = 1.0;
};

/// Delta(X, Y) for the model (1.0 for Maxwell).
double delta_of(const LagrangianModel& model, double X, double Y);

/// Evaluate the model at the invariant pair (X, Y).
/// Throws FieldBoundExceeded when a Born-Infeld Delta falls to the floor.
ScalarBundle eval_scalars(const LagrangianModel& model, double X, double Y);

/// Constitutive map: G with star G = N star F + Lsc F, i.e.
/// G = N F - Lsc star F. Maxwell limit is G = eps0 F exactly.
forms::KForm constitutive(const LagrangianModel& model, const forms::KForm& F);

/// tau_a^{LED} = (1/2) (i_a F ^ star F - i_a star F ^ F), a 3-form.
forms::KForm tau_led(const forms::KForm& F, int a);

/// tau^{LED}_Q = Q^a tau_a^{LED}, linear in Q.
forms::KForm tau_led_q(const forms::KForm& F, const forms::Vector4& Q);

/// Stress-energy tensor with raised indices, T^{ab}, from
/// tau_a = M star e_a + N tau_a^{LED} by applying the Hodge map to each
/// tau_a and reading components.
struct SymmetricTensor4 {
    std::array<std::array<double, 4>, 4> c{};

    double operator()(int a, int b) const {
        return c[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }
    double& operator()(int a, int b) { return c[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }

    /// eta_ab T^{ab}
    double trace() const {
        return -c[0][0] + c[1][1] + c[2][2] + c[3][3];
    }
};

SymmetricTensor4 stress_energy(const LagrangianModel& model, const forms::KForm& F);

} // namespace nledlab::nled
