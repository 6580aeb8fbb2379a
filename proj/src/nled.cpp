#include "nledlab/nled.hpp"

#include <cmath>
#include <string>

namespace nledlab::nled {

using forms::KForm;
using forms::Vector4;

double delta_of(const LagrangianModel& model, double X, double Y) {
    if (model.kind == ModelKind::Maxwell) return 1.0;
    const double k2 = model.kappa * model.kappa;
    return 1.0 - k2 * X - 0.25 * k2 * k2 * Y * Y;
}

ScalarBundle eval_scalars(const LagrangianModel& model, double X, double Y) {
    ScalarBundle out;
    if (model.kind == ModelKind::Maxwell) {
        out.L = 0.5 * model.eps0 * X;
        out.LX = 0.5 * model.eps0;
        out.M = 0.0;
        out.N = model.eps0;
        out.Lsc = 0.0;
        out.Delta = 1.0;
        return out;
    }

    const double k2 = model.kappa * model.kappa;
    const double delta = 1.0 - k2 * X - 0.25 * k2 * k2 * Y * Y;
    if (!(delta > model.delta_floor))
        throw FieldBoundExceeded("Born-Infeld field bound exceeded: Delta = " + std::to_string(delta));
    const double s = std::sqrt(delta);
    const double s3 = s * delta;

    // (1 - sqrt(Delta))/kappa^2 rewritten as (X + kappa^2 Y^2/4)/(1 + sqrt(Delta))
    // to stay finite and cancellation-free down to kappa = 0.
    out.L = model.eps0 * (X + 0.25 * k2 * Y * Y) / (1.0 + s);
    out.LX = 0.5 * model.eps0 / s;
    out.LY = 0.25 * model.eps0 * k2 * Y / s;
    out.LXX = 0.25 * model.eps0 * k2 / s3;
    out.LXY = 0.125 * model.eps0 * k2 * k2 * Y / s3;
    out.LYY = 0.25 * model.eps0 * k2 / s + 0.0625 * model.eps0 * k2 * k2 * k2 * Y * Y / s3;
    out.M = out.L - X * out.LX - Y * out.LY;
    out.N = 2.0 * out.LX;
    out.Lsc = 2.0 * out.LY;
    out.Delta = delta;
    return out;
}

KForm constitutive(const LagrangianModel& model, const forms::KForm& F) {
    if (F.degree() != 2) throw ContractViolation("constitutive expects a 2-form");
    if (model.kind == ModelKind::Maxwell) return F * model.eps0;
    const ScalarBundle b = eval_scalars(model, forms::invariant_X(F), forms::invariant_Y(F));
    return F * b.N - forms::hodge(F) * b.Lsc;
}

KForm tau_led(const KForm& F, int a) {
    const KForm sF = forms::hodge(F);
    const Vector4 Xa = forms::basis_vector(a);
    return 0.5 * (forms::wedge(forms::interior(Xa, F), sF) - forms::wedge(forms::interior(Xa, sF), F));
}

KForm tau_led_q(const KForm& F, const Vector4& Q) {
    if (F.degree() != 2) throw ContractViolation("tau_led_q expects a 2-form");
    KForm out(3);
    for (int a = 0; a < forms::kDim; ++a) out += tau_led(F, a) * Q[a];
    return out;
}

SymmetricTensor4 stress_energy(const LagrangianModel& model, const KForm& F) {
    if (F.degree() != 2) throw ContractViolation("stress_energy expects a 2-form");
    const ScalarBundle bundle = eval_scalars(model, forms::invariant_X(F), forms::invariant_Y(F));

    SymmetricTensor4 T;
    for (int a = 0; a < forms::kDim; ++a) {
        const KForm e_a = forms::lower(forms::basis_vector(a));
        const KForm tau_a = forms::hodge(e_a) * bundle.M + tau_led(F, a) * bundle.N;
        const KForm row = forms::hodge(tau_a); // 1-form, components T_{b a}
        for (int b = 0; b < forms::kDim; ++b)
            T(a, b) = forms::metric_diag(a) * forms::metric_diag(b) * row[b];
    }
    return T;
}

} // namespace nledlab::nled
