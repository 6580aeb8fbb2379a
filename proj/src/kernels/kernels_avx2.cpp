// AVX2 variants of the array kernels. Compiled with -mavx2 (no FMA) so every
// lane performs exactly the scalar expression tree; results are bitwise equal
// to the scalar reference and the test suite asserts that.

#include "nledlab/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace nledlab::kernels {

namespace {

void central_diff_periodic(double* out, const double* in, int n, double scale) {
    out[0] = scale * (in[1] - in[n - 1]);
    const __m256d vscale = _mm256_set1_pd(scale);
    int i = 1;
    for (; i + 4 <= n - 1; i += 4) {
        const __m256d hi = _mm256_loadu_pd(in + i + 1);
        const __m256d lo = _mm256_loadu_pd(in + i - 1);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(vscale, _mm256_sub_pd(hi, lo)));
    }
    for (; i < n - 1; ++i) out[i] = scale * (in[i + 1] - in[i - 1]);
    out[n - 1] = scale * (in[0] - in[n - 2]);
}

inline double fourth_diff_at(const double* in, int im2, int im1, int i, int ip1, int ip2) {
    return ((in[im2] + in[ip2]) - 4.0 * (in[im1] + in[ip1])) + 6.0 * in[i];
}

void add_fourth_diff(double* rhs, const double* in, int n, double coef) {
    rhs[0] -= coef * fourth_diff_at(in, n - 2, n - 1, 0, 1, 2);
    rhs[1] -= coef * fourth_diff_at(in, n - 1, 0, 1, 2, 3);
    const __m256d vcoef = _mm256_set1_pd(coef);
    const __m256d four = _mm256_set1_pd(4.0);
    const __m256d six = _mm256_set1_pd(6.0);
    int i = 2;
    for (; i + 4 <= n - 2; i += 4) {
        const __m256d m2 = _mm256_loadu_pd(in + i - 2);
        const __m256d m1 = _mm256_loadu_pd(in + i - 1);
        const __m256d c0 = _mm256_loadu_pd(in + i);
        const __m256d p1 = _mm256_loadu_pd(in + i + 1);
        const __m256d p2 = _mm256_loadu_pd(in + i + 2);
        const __m256d outer = _mm256_add_pd(m2, p2);
        const __m256d inner = _mm256_mul_pd(four, _mm256_add_pd(m1, p1));
        const __m256d stencil = _mm256_add_pd(_mm256_sub_pd(outer, inner), _mm256_mul_pd(six, c0));
        const __m256d cur = _mm256_loadu_pd(rhs + i);
        _mm256_storeu_pd(rhs + i, _mm256_sub_pd(cur, _mm256_mul_pd(vcoef, stencil)));
    }
    for (; i < n - 2; ++i) rhs[i] -= coef * fourth_diff_at(in, i - 2, i - 1, i, i + 1, i + 2);
    rhs[n - 2] -= coef * fourth_diff_at(in, n - 4, n - 3, n - 2, n - 1, 0);
    rhs[n - 1] -= coef * fourth_diff_at(in, n - 3, n - 2, n - 1, 0, 1);
}

void stage_update(double* out, const double* u, const double* k, double a, int n) {
    const __m256d va = _mm256_set1_pd(a);
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vu = _mm256_loadu_pd(u + i);
        const __m256d vk = _mm256_loadu_pd(k + i);
        _mm256_storeu_pd(out + i, _mm256_add_pd(vu, _mm256_mul_pd(va, vk)));
    }
    for (; i < n; ++i) out[i] = u[i] + a * k[i];
}

void rk4_combine(double* u, const double* k1, const double* k2, const double* k3,
                 const double* k4, double c, int n) {
    const __m256d vc = _mm256_set1_pd(c);
    const __m256d two = _mm256_set1_pd(2.0);
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v1 = _mm256_loadu_pd(k1 + i);
        const __m256d v2 = _mm256_loadu_pd(k2 + i);
        const __m256d v3 = _mm256_loadu_pd(k3 + i);
        const __m256d v4 = _mm256_loadu_pd(k4 + i);
        const __m256d sum = _mm256_add_pd(_mm256_add_pd(v1, v4), _mm256_mul_pd(two, _mm256_add_pd(v2, v3)));
        const __m256d vu = _mm256_loadu_pd(u + i);
        _mm256_storeu_pd(u + i, _mm256_add_pd(vu, _mm256_mul_pd(vc, sum)));
    }
    for (; i < n; ++i) u[i] += c * ((k1[i] + k4[i]) + 2.0 * (k2[i] + k3[i]));
}

} // namespace

const Ops* avx2_ops() {
    static const Ops ops{central_diff_periodic, add_fourth_diff, stage_update, rk4_combine};
    return &ops;
}

} // namespace nledlab::kernels

#endif // x86_64
