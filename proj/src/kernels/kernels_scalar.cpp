#include "nledlab/kernels.hpp"

namespace nledlab::kernels {

namespace {

void central_diff_periodic(double* out, const double* in, int n, double scale) {
    out[0] = scale * (in[1] - in[n - 1]);
    for (int i = 1; i < n - 1; ++i) out[i] = scale * (in[i + 1] - in[i - 1]);
    out[n - 1] = scale * (in[0] - in[n - 2]);
}

inline double fourth_diff_at(const double* in, int im2, int im1, int i, int ip1, int ip2) {
    return ((in[im2] + in[ip2]) - 4.0 * (in[im1] + in[ip1])) + 6.0 * in[i];
}

void add_fourth_diff(double* rhs, const double* in, int n, double coef) {
    rhs[0] -= coef * fourth_diff_at(in, n - 2, n - 1, 0, 1, 2);
    rhs[1] -= coef * fourth_diff_at(in, n - 1, 0, 1, 2, 3);
    for (int i = 2; i < n - 2; ++i)
        rhs[i] -= coef * fourth_diff_at(in, i - 2, i - 1, i, i + 1, i + 2);
    rhs[n - 2] -= coef * fourth_diff_at(in, n - 4, n - 3, n - 2, n - 1, 0);
    rhs[n - 1] -= coef * fourth_diff_at(in, n - 3, n - 2, n - 1, 0, 1);
}

void stage_update(double* out, const double* u, const double* k, double a, int n) {
    for (int i = 0; i < n; ++i) out[i] = u[i] + a * k[i];
}

void rk4_combine(double* u, const double* k1, const double* k2, const double* k3,
                 const double* k4, double c, int n) {
    for (int i = 0; i < n; ++i) u[i] += c * ((k1[i] + k4[i]) + 2.0 * (k2[i] + k3[i]));
}

} // namespace

const Ops& scalar_ops() {
    static const Ops ops{central_diff_periodic, add_fourth_diff, stage_update, rk4_combine};
    return ops;
}

} // namespace nledlab::kernels
