#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "nledlab/forms.hpp"

// The closed-form plane wave on a transverse static magnetic background:
//   F = E(z - v t) d(z - v t) ^ dx - B dy ^ dz,   v = 1/sqrt(1 + kappa^2 B^2),
// its phase speed, the magnet transit-time delay, and coupling-bound
// estimation. Natural units except where a function says SI.

namespace nledlab::exact {

/// Longitudinal profile E(.) of the wave, with an analytic derivative.
class Profile {
public:
    virtual ~Profile() = default;
    virtual double value(double s) const = 0;
    virtual double deriv(double s) const = 0;
};

class GaussianProfile final : public Profile {
public:
    GaussianProfile(double amplitude, double width, double center)
        : amplitude_(amplitude), width_(width), center_(center) {
        if (!(width > 0)) throw ContractViolation("Gaussian profile requires width > 0");
    }
    double value(double s) const override;
    double deriv(double s) const override;

private:
    double amplitude_, width_, center_;
};

/// C^1 compactly supported pulse: A (1 + cos(pi (s-c)/w))/2 on |s-c| <= w.
class RaisedCosineProfile final : public Profile {
public:
    RaisedCosineProfile(double amplitude, double halfwidth, double center)
        : amplitude_(amplitude), halfwidth_(halfwidth), center_(center) {
        if (!(halfwidth > 0)) throw ContractViolation("raised-cosine profile requires width > 0");
    }
    double value(double s) const override;
    double deriv(double s) const override;

private:
    double amplitude_, halfwidth_, center_;
};

/// Natural cubic spline through user-supplied (s, value) samples; zero
/// outside the tabulated range.
class TabulatedProfile final : public Profile {
public:
    explicit TabulatedProfile(std::vector<std::pair<double, double>> samples);
    double value(double s) const override;
    double deriv(double s) const override;

private:
    std::vector<double> s_, v_, m_; // knots, values, second derivatives
};

struct ExactSolutionSpec {
    std::shared_ptr<const Profile> profile;
    double B = 0.0;     // static transverse field, F-component, natural units
    double kappa = 0.0; // >= 0
};

/// v = 1/sqrt(1 + kappa^2 B^2) in natural units; v in (0, 1], monotone
/// decreasing in |kappa B|.
double phase_speed(double kappa, double B);

/// F(z, t) of the traveling-wave solution. In the (e, b) frame decomposition
/// used by two_form_from_eb this is e = (+vE, 0, 0), b = (-B, E, 0); the
/// e-sign is fixed by dF = 0.
forms::KForm sample_fields(const ExactSolutionSpec& spec, double z, double t);

/// Analytic coordinate derivatives (d_t F, d_x F, d_y F, d_z F) of the
/// sampled solution; the x and y entries are zero.
std::array<forms::KForm, 4> sample_field_gradients(const ExactSolutionSpec& spec, double z, double t);

// ---------------------------------------------------------------------------
// SI boundary (experiment design)

namespace si {
inline constexpr double c = 299792458.0;              // m/s, exact
inline constexpr double eps0 = 8.8541878128e-12;      // F/m, CODATA 2018
inline constexpr double electron_radius = 2.8179403262e-15; // m, CODATA 2018
inline constexpr double elementary_charge = 1.602176634e-19; // C, exact (SI 2019)
} // namespace si

/// Whether the B entering the delay formulas is the tesla value or the
/// F-component value (B_F = c * B_tesla). The source text is ambiguous, so
/// both are computed throughout.
enum class BInterpretation { Tesla, FComponent };

struct ExperimentDesign {
    double L0 = 1.0;                // magnet length, m, > 0
    double B_tesla = 0.0;           // static field, T, >= 0
    double kappa_si = 0.0;          // SI coupling, >= 0
    double timing_resolution = 0.0; // s, > 0 where required
};

/// sqrt(1 + x) - 1 without cancellation, valid down to x ~ 1e-300.
double sqrt1p_minus_1(double x);

/// Exact transit-time difference tau = (L0/c)(sqrt(1 + x) - 1) seconds,
/// x = c^2 kappa^2 B_F^2, derived from the phase speed.
double transit_delay_exact(const ExperimentDesign& design, BInterpretation interp);

/// The printed linear formula tau = (L0/2) kappa |B|, reported verbatim for
/// side-by-side comparison only; it is not the small-x limit of the exact
/// delay.
double transit_delay_paper_linear(const ExperimentDesign& design);

/// kappa ~ eps0 r0^2 / e from the classical electron radius, ~4.39e-22.
double kappa_from_electron_radius();

/// The unique kappa >= 0 whose exact transit delay equals the timing
/// resolution, by bisection to relative 1e-10. Throws NumericalFailure
/// after 200 bisection steps without convergence.
double kappa_bound_from_timing(const ExperimentDesign& design, BInterpretation interp);

/// Everything the `exact` CLI subcommand reports.
struct DelayReport {
    double v_over_c_tesla = 1.0;
    double v_over_c_fcomponent = 1.0;
    double tau_exact_tesla = 0.0;
    double tau_exact_fcomponent = 0.0;
    double tau_paper_linear = 0.0;
    double kappa_electron_radius = 0.0;
    double kappa_bound_tesla = 0.0;      // 0 when no timing resolution given
    double kappa_bound_fcomponent = 0.0; // 0 when no timing resolution given
    // The linear formula is quadratically inconsistent with the exact delay;
    // flagged when the two disagree by more than 1%.
    bool formulas_disagree = false;
    double linear_over_exact_tesla = 1.0;
};

DelayReport make_delay_report(const ExperimentDesign& design);

} // namespace nledlab::exact
