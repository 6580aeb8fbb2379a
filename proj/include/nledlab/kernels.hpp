#pragma once

#include <string>

// Array kernels for the solver's inner loops: periodic centered differences,
// fourth-difference dissipation, and Runge-Kutta linear combinations.
//
// Each kernel has a scalar reference implementation and (on x86-64) an AVX2
// variant selected at runtime. Both paths evaluate the same IEEE expression
// tree per element and the build disables floating-point contraction, so the
// variants are bitwise equivalent; the equivalence suite asserts exact
// equality. Reductions are not vectorized anywhere: diagnostics sums keep a
// fixed left-to-right order for reproducibility.

namespace nledlab::kernels {

enum class Isa { Scalar, Avx2 };

struct Ops {
    /// out[i] = scale * (in[i+1] - in[i-1]) on a periodic grid.
    void (*central_diff_periodic)(double* out, const double* in, int n, double scale);

    /// rhs[i] -= coef * ((in[i-2]+in[i+2]) - 4*(in[i-1]+in[i+1]) + 6*in[i]),
    /// periodic; the classical fourth-difference dissipation stencil.
    void (*add_fourth_diff)(double* rhs, const double* in, int n, double coef);

    /// out[i] = u[i] + a * k[i]  (Runge-Kutta stage state).
    void (*stage_update)(double* out, const double* u, const double* k, double a, int n);

    /// u[i] += c * ((k1[i] + k4[i]) + 2*(k2[i] + k3[i]))  with c = dt/6.
    void (*rk4_combine)(double* u, const double* k1, const double* k2, const double* k3,
                        const double* k4, double c, int n);
};

const Ops& scalar_ops();

/// AVX2 implementations; null pointers when not compiled in.
const Ops* avx2_ops();

bool avx2_available();

/// Runtime-selected kernel set. Honors NLEDLAB_SIMD={scalar,avx2} when set;
/// requesting avx2 on an unsupported host throws ConfigError.
const Ops& ops();

Isa active_isa();
std::string isa_name(Isa isa);

} // namespace nledlab::kernels
