#include "nledlab/forms.hpp"

#include <bit>

namespace nledlab::forms {

namespace {

// Basis masks per degree, in lexicographic multi-index order.
constexpr std::array<std::array<int, 6>, 5> kMasks{{
    {0b0000, 0, 0, 0, 0, 0},
    {0b0001, 0b0010, 0b0100, 0b1000, 0, 0},
    {0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100},
    {0b0111, 0b1011, 0b1101, 0b1110, 0, 0},
    {0b1111, 0, 0, 0, 0, 0},
}};

constexpr std::array<int, 16> make_positions() {
    std::array<int, 16> pos{};
    for (int k = 0; k <= 4; ++k)
        for (int i = 0; i < component_count(k); ++i)
            pos[static_cast<std::size_t>(kMasks[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)])] = i;
    return pos;
}

constexpr std::array<int, 16> kPositions = make_positions();

// Parity sign of merging the sorted index lists of two disjoint masks:
// (-1)^{#(i in ma, j in mb : j < i)}.
int merge_sign(int ma, int mb) {
    int inversions = 0;
    for (int i = 0; i < kDim; ++i)
        if (ma & (1 << i)) inversions += std::popcount(static_cast<unsigned>(mb & ((1 << i) - 1)));
    return (inversions & 1) ? -1 : 1;
}

} // namespace

int position_of_mask(int mask) { return kPositions[static_cast<std::size_t>(mask)]; }

int mask_of_position(int k, int i) {
    return kMasks[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
}

int KForm::mask_at(int i) const { return mask_of_position(degree_, i); }

KForm& KForm::operator+=(const KForm& o) {
    if (degree_ != o.degree_) throw ContractViolation("KForm sum requires equal degrees");
    for (int i = 0; i < size(); ++i) comp_[static_cast<std::size_t>(i)] += o.comp_[static_cast<std::size_t>(i)];
    return *this;
}

KForm& KForm::operator-=(const KForm& o) {
    if (degree_ != o.degree_) throw ContractViolation("KForm difference requires equal degrees");
    for (int i = 0; i < size(); ++i) comp_[static_cast<std::size_t>(i)] -= o.comp_[static_cast<std::size_t>(i)];
    return *this;
}

KForm& KForm::operator*=(double s) {
    for (int i = 0; i < size(); ++i) comp_[static_cast<std::size_t>(i)] *= s;
    return *this;
}

KForm basis_covector(int a) {
    KForm f(1);
    f[position_of_mask(1 << a)] = 1.0;
    return f;
}

Vector4 basis_vector(int a) {
    Vector4 v;
    v[a] = 1.0;
    return v;
}

KForm lower(const Vector4& v) {
    KForm f(1);
    for (int a = 0; a < kDim; ++a) f[a] = metric_diag(a) * v[a];
    return f;
}

Vector4 raise(const KForm& alpha) {
    if (alpha.degree() != 1) throw ContractViolation("raise expects a 1-form");
    Vector4 v;
    for (int a = 0; a < kDim; ++a) v[a] = metric_diag(a) * alpha[a];
    return v;
}

KForm wedge(const KForm& a, const KForm& b) {
    const int deg = a.degree() + b.degree();
    if (deg > kDim) throw ContractViolation("wedge degree overflow: deg a + deg b > 4");
    KForm out(deg);
    for (int pa = 0; pa < a.size(); ++pa) {
        const int ma = a.mask_at(pa);
        for (int pb = 0; pb < b.size(); ++pb) {
            const int mb = b.mask_at(pb);
            if (ma & mb) continue;
            out[position_of_mask(ma | mb)] += merge_sign(ma, mb) * a[pa] * b[pb];
        }
    }
    return out;
}

KForm hodge(const KForm& a) {
    KForm out(kDim - a.degree());
    for (int p = 0; p < a.size(); ++p) {
        const int m = a.mask_at(p);
        const int mc = 0b1111 & ~m;
        const double metric = (m & 1) ? -1.0 : 1.0;
        out[position_of_mask(mc)] = merge_sign(m, mc) * metric * a[p];
    }
    return out;
}

KForm interior(const Vector4& v, const KForm& a) {
    if (a.degree() == 0) throw ContractViolation("interior product of a 0-form");
    KForm out(a.degree() - 1);
    for (int p = 0; p < a.size(); ++p) {
        const int m = a.mask_at(p);
        int slot = 0;
        for (int i = 0; i < kDim; ++i) {
            if (!(m & (1 << i))) continue;
            const double sign = (slot & 1) ? -1.0 : 1.0;
            out[position_of_mask(m & ~(1 << i))] += sign * v[i] * a[p];
            ++slot;
        }
    }
    return out;
}

double form_inner(const KForm& a, const KForm& b) {
    if (a.degree() != b.degree()) throw ContractViolation("form_inner requires equal degrees");
    double acc = 0.0;
    for (int p = 0; p < a.size(); ++p) {
        const int m = a.mask_at(p);
        const double metric = (m & 1) ? -1.0 : 1.0;
        acc += metric * a[p] * b[p];
    }
    return acc;
}

double invariant_X(const KForm& F) {
    if (F.degree() != 2) throw ContractViolation("invariant_X expects a 2-form");
    return hodge(wedge(F, hodge(F)))[0];
}

double invariant_Y(const KForm& F) {
    if (F.degree() != 2) throw ContractViolation("invariant_Y expects a 2-form");
    return hodge(wedge(F, F))[0];
}

KForm two_form_from_eb(const std::array<double, 3>& e, const std::array<double, 3>& b) {
    KForm F(2);
    F[position_of_mask(0b0011)] = -e[0]; // dt^dx
    F[position_of_mask(0b0101)] = -e[1]; // dt^dy
    F[position_of_mask(0b1001)] = -e[2]; // dt^dz
    F[position_of_mask(0b0110)] = b[2];  // dx^dy
    F[position_of_mask(0b1010)] = -b[1]; // dx^dz
    F[position_of_mask(0b1100)] = b[0];  // dy^dz
    return F;
}

EBFields eb_from_two_form(const KForm& F) {
    if (F.degree() != 2) throw ContractViolation("eb_from_two_form expects a 2-form");
    EBFields out;
    out.e[0] = -F[position_of_mask(0b0011)];
    out.e[1] = -F[position_of_mask(0b0101)];
    out.e[2] = -F[position_of_mask(0b1001)];
    out.b[0] = F[position_of_mask(0b1100)];
    out.b[1] = -F[position_of_mask(0b1010)];
    out.b[2] = F[position_of_mask(0b0110)];
    return out;
}

} // namespace nledlab::forms
