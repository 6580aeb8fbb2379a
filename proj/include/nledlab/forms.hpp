#pragma once

#include <array>
#include <cstddef>

#include "nledlab/errors.hpp"

// Numeric exterior algebra on 4D Minkowski space at a point.
//
// Conventions used throughout the library:
//   * coordinates (t, x, y, z) = indices 0..3, natural units (c = 1),
//   * metric g = diag(-1, +1, +1, +1),
//   * orientation fixed by vol = dt ^ dx ^ dy ^ dz.
// With these choices the field invariants come out as
//   X = star(F ^ star F) = |e|^2 - |b|^2,
//   Y = star(F ^ F)      = 2 e.b,
// for F packed from an (e, b) pair by two_form_from_eb. No global Hodge
// sign correction is required.

namespace nledlab::forms {

inline constexpr int kDim = 4;

/// Diagonal metric entry g_aa (equal to the inverse metric entry g^aa).
inline constexpr double metric_diag(int a) { return a == 0 ? -1.0 : 1.0; }

struct Vector4 {
    std::array<double, 4> c{}; // (t, x, y, z)

    Vector4() = default;
    Vector4(double t, double x, double y, double z) : c{t, x, y, z} {}

    double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

    Vector4 operator+(const Vector4& o) const {
        return {c[0] + o.c[0], c[1] + o.c[1], c[2] + o.c[2], c[3] + o.c[3]};
    }
    Vector4 operator-(const Vector4& o) const {
        return {c[0] - o.c[0], c[1] - o.c[1], c[2] - o.c[2], c[3] - o.c[3]};
    }
    Vector4 operator*(double s) const { return {c[0] * s, c[1] * s, c[2] * s, c[3] * s}; }
};

inline Vector4 operator*(double s, const Vector4& v) { return v * s; }

/// g(v, w) with signature (-,+,+,+).
inline double metric_dot(const Vector4& v, const Vector4& w) {
    return -v[0] * w[0] + v[1] * w[1] + v[2] * w[2] + v[3] * w[3];
}

/// Number of independent components of a degree-k form on 4D space.
inline constexpr int component_count(int degree) {
    constexpr std::array<int, 5> counts{1, 4, 6, 4, 1};
    return counts[static_cast<std::size_t>(degree)];
}

/// A differential form of degree 0..4 at a point, stored over strictly
/// increasing multi-indices in lexicographic order. Degree-2 order:
/// (t,x) (t,y) (t,z) (x,y) (x,z) (y,z).
class KForm {
public:
    KForm() = default;
    explicit KForm(int degree) : degree_(degree) {
        if (degree < 0 || degree > kDim)
            throw ContractViolation("KForm degree out of range 0..4");
    }

    static KForm scalar(double v) {
        KForm f(0);
        f.comp_[0] = v;
        return f;
    }
    static KForm volume(double v) {
        KForm f(4);
        f.comp_[0] = v;
        return f;
    }

    int degree() const { return degree_; }
    int size() const { return component_count(degree_); }

    double& operator[](int i) { return comp_[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return comp_[static_cast<std::size_t>(i)]; }

    /// Bitmask over coordinates of the i-th stored basis form.
    int mask_at(int i) const;

    KForm& operator+=(const KForm& o);
    KForm& operator-=(const KForm& o);
    KForm& operator*=(double s);
    KForm operator+(const KForm& o) const {
        KForm r = *this;
        r += o;
        return r;
    }
    KForm operator-(const KForm& o) const {
        KForm r = *this;
        r -= o;
        return r;
    }
    KForm operator*(double s) const {
        KForm r = *this;
        r *= s;
        return r;
    }
    KForm operator-() const { return *this * -1.0; }

private:
    int degree_ = 0;
    std::array<double, 6> comp_{};
};

inline KForm operator*(double s, const KForm& f) { return f * s; }

/// Storage position of the basis form with coordinate bitmask `mask`
/// (popcount of the mask gives the degree).
int position_of_mask(int mask);

/// Coordinate bitmask of position `i` within degree `k`.
int mask_of_position(int k, int i);

/// Basis covector e^a (a 1-form).
KForm basis_covector(int a);

/// Frame vector X_a dual to e^a.
Vector4 basis_vector(int a);

/// Metric-lowered 1-form v~ of a vector.
KForm lower(const Vector4& v);

/// Metric-raised vector of a 1-form.
Vector4 raise(const KForm& alpha);

/// Exterior product a ^ b. Errors if deg a + deg b > 4.
KForm wedge(const KForm& a, const KForm& b);

/// Hodge dual for signature (-,+,+,+) and orientation vol = dt^dx^dy^dz.
KForm hodge(const KForm& a);

/// Interior product i_v a. Errors on degree-0 input.
KForm interior(const Vector4& v, const KForm& a);

/// Metric-induced inner product on equal-degree forms,
/// G(a, b) = sum_I a_I b_I prod_{i in I} g^ii; satisfies a ^ star b = G(a,b) vol.
double form_inner(const KForm& a, const KForm& b);

/// Field invariant X = star(F ^ star F).
double invariant_X(const KForm& F);

/// Field invariant Y = star(F ^ F).
double invariant_Y(const KForm& F);

struct EBFields {
    std::array<double, 3> e{};
    std::array<double, 3> b{};
};

/// F = sum_i e_i dx^i ^ dt + (b_x dy^dz + b_y dz^dx + b_z dx^dy).
KForm two_form_from_eb(const std::array<double, 3>& e, const std::array<double, 3>& b);

/// Exact inverse of two_form_from_eb.
EBFields eb_from_two_form(const KForm& F);

} // namespace nledlab::forms
