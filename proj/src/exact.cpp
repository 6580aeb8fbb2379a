#include "nledlab/exact.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace nledlab::exact {

double GaussianProfile::value(double s) const {
    const double r = (s - center_) / width_;
    return amplitude_ * std::exp(-0.5 * r * r);
}

double GaussianProfile::deriv(double s) const {
    const double r = (s - center_) / width_;
    return -amplitude_ * r / width_ * std::exp(-0.5 * r * r);
}

double RaisedCosineProfile::value(double s) const {
    const double r = (s - center_) / halfwidth_;
    if (std::abs(r) >= 1.0) return 0.0;
    return 0.5 * amplitude_ * (1.0 + std::cos(M_PI * r));
}

double RaisedCosineProfile::deriv(double s) const {
    const double r = (s - center_) / halfwidth_;
    if (std::abs(r) >= 1.0) return 0.0;
    return -0.5 * amplitude_ * M_PI / halfwidth_ * std::sin(M_PI * r);
}

TabulatedProfile::TabulatedProfile(std::vector<std::pair<double, double>> samples) {
    if (samples.size() < 3) throw ContractViolation("tabulated profile needs at least 3 samples");
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    s_.resize(n);
    v_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s_[i] = samples[i].first;
        v_[i] = samples[i].second;
        if (i > 0 && !(s_[i] > s_[i - 1]))
            throw ContractViolation("tabulated profile abscissae must be distinct");
    }

    // natural cubic spline second derivatives (tridiagonal solve)
    m_.assign(n, 0.0);
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), sub(n, 0.0);
    diag[0] = diag[n - 1] = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = s_[i] - s_[i - 1];
        const double h1 = s_[i + 1] - s_[i];
        sub[i] = h0;
        diag[i] = 2.0 * (h0 + h1);
        rhs[i] = 6.0 * ((v_[i + 1] - v_[i]) / h1 - (v_[i] - v_[i - 1]) / h0);
    }
    // forward elimination against the lower band, then back substitution
    std::vector<double> upper(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) upper[i] = s_[i + 1] - s_[i];
    for (std::size_t i = 2; i + 1 < n; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
        if (i == 1) break;
    }
}

double TabulatedProfile::value(double s) const {
    if (s <= s_.front() || s >= s_.back()) return 0.0;
    const auto it = std::upper_bound(s_.begin(), s_.end(), s);
    const std::size_t k = static_cast<std::size_t>(it - s_.begin()) - 1;
    const double h = s_[k + 1] - s_[k];
    const double a = (s_[k + 1] - s) / h;
    const double b = (s - s_[k]) / h;
    return a * v_[k] + b * v_[k + 1] +
           ((a * a * a - a) * m_[k] + (b * b * b - b) * m_[k + 1]) * h * h / 6.0;
}

double TabulatedProfile::deriv(double s) const {
    if (s <= s_.front() || s >= s_.back()) return 0.0;
    const auto it = std::upper_bound(s_.begin(), s_.end(), s);
    const std::size_t k = static_cast<std::size_t>(it - s_.begin()) - 1;
    const double h = s_[k + 1] - s_[k];
    const double a = (s_[k + 1] - s) / h;
    const double b = (s - s_[k]) / h;
    return (v_[k + 1] - v_[k]) / h +
           ((3.0 * b * b - 1.0) * m_[k + 1] - (3.0 * a * a - 1.0) * m_[k]) * h / 6.0;
}

double phase_speed(double kappa, double B) {
    const double kb = kappa * B;
    return 1.0 / std::sqrt(1.0 + kb * kb);
}

forms::KForm sample_fields(const ExactSolutionSpec& spec, double z, double t) {
    const double v = phase_speed(spec.kappa, spec.B);
    const double w = z - v * t;
    const double amp = spec.profile->value(w);
    forms::KForm F(2);
    F[forms::position_of_mask(0b0011)] = -v * amp;   // dt^dx
    F[forms::position_of_mask(0b1010)] = -amp;       // dx^dz
    F[forms::position_of_mask(0b1100)] = -spec.B;    // dy^dz
    return F;
}

std::array<forms::KForm, 4> sample_field_gradients(const ExactSolutionSpec& spec, double z, double t) {
    const double v = phase_speed(spec.kappa, spec.B);
    const double damp = spec.profile->deriv(z - v * t);
    std::array<forms::KForm, 4> grad{forms::KForm(2), forms::KForm(2), forms::KForm(2), forms::KForm(2)};
    const int tx = forms::position_of_mask(0b0011);
    const int xz = forms::position_of_mask(0b1010);
    grad[0][tx] = v * v * damp; // d_t(-v E)
    grad[0][xz] = v * damp;     // d_t(-E)
    grad[3][tx] = -v * damp;
    grad[3][xz] = -damp;
    return grad;
}

double sqrt1p_minus_1(double x) { return x / (1.0 + std::sqrt(1.0 + x)); }

namespace {
double field_component(const ExperimentDesign& design, BInterpretation interp) {
    return interp == BInterpretation::Tesla ? si::c * design.B_tesla : design.B_tesla;
}
} // namespace

double transit_delay_exact(const ExperimentDesign& design, BInterpretation interp) {
    if (!(design.L0 > 0)) throw ContractViolation("transit delay requires L0 > 0");
    const double bf = field_component(design, interp);
    const double ckb = si::c * design.kappa_si * bf;
    return design.L0 / si::c * sqrt1p_minus_1(ckb * ckb);
}

double transit_delay_paper_linear(const ExperimentDesign& design) {
    if (!(design.L0 > 0)) throw ContractViolation("transit delay requires L0 > 0");
    return 0.5 * design.L0 * design.kappa_si * std::abs(design.B_tesla);
}

double kappa_from_electron_radius() {
    return si::eps0 * si::electron_radius * si::electron_radius / si::elementary_charge;
}

double kappa_bound_from_timing(const ExperimentDesign& design, BInterpretation interp) {
    if (!(design.timing_resolution > 0))
        throw ContractViolation("kappa bound requires timing_resolution > 0");
    if (!(design.B_tesla > 0)) throw ContractViolation("kappa bound requires B > 0");
    if (!(design.L0 > 0)) throw ContractViolation("kappa bound requires L0 > 0");

    const double target = design.timing_resolution;
    auto delay = [&](double kappa) {
        ExperimentDesign d = design;
        d.kappa_si = kappa;
        return transit_delay_exact(d, interp);
    };

    double lo = 0.0, hi = 1e-30;
    int expansions = 0;
    while (delay(hi) < target) {
        hi *= 4.0;
        if (++expansions > 200) throw NumericalFailure("kappa bound bracket expansion failed");
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (delay(mid) < target ? lo : hi) = mid;
        if (hi - lo <= 1e-10 * hi) return 0.5 * (lo + hi);
    }
    throw NumericalFailure("kappa bound bisection did not converge in 200 steps");
}

DelayReport make_delay_report(const ExperimentDesign& design) {
    DelayReport r;
    const double xt = si::c * design.kappa_si * field_component(design, BInterpretation::Tesla);
    const double xf = si::c * design.kappa_si * field_component(design, BInterpretation::FComponent);
    r.v_over_c_tesla = 1.0 / std::sqrt(1.0 + xt * xt);
    r.v_over_c_fcomponent = 1.0 / std::sqrt(1.0 + xf * xf);
    r.tau_exact_tesla = transit_delay_exact(design, BInterpretation::Tesla);
    r.tau_exact_fcomponent = transit_delay_exact(design, BInterpretation::FComponent);
    r.tau_paper_linear = transit_delay_paper_linear(design);
    r.kappa_electron_radius = kappa_from_electron_radius();
    if (design.timing_resolution > 0 && design.B_tesla > 0) {
        r.kappa_bound_tesla = kappa_bound_from_timing(design, BInterpretation::Tesla);
        r.kappa_bound_fcomponent = kappa_bound_from_timing(design, BInterpretation::FComponent);
    }
    if (r.tau_exact_tesla > 0.0) {
        r.linear_over_exact_tesla = r.tau_paper_linear / r.tau_exact_tesla;
        r.formulas_disagree = std::abs(r.linear_over_exact_tesla - 1.0) > 0.01;
    } else {
        r.formulas_disagree = r.tau_paper_linear > 0.0;
    }
    return r;
}

} // namespace nledlab::exact
