#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nledlab/exact.hpp"
#include "nledlab/fluid.hpp"
#include "oracles.hpp"

using namespace nledlab;
using namespace nledlab::fluid;
using forms::KForm;
using forms::Vector4;

namespace {

double max_abs(const KForm& f) {
    double m = 0.0;
    for (int i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
    return m;
}

// A random exactly-closed field configuration, linear in the coordinates:
// F = dA for a quadratic potential A, evaluated at a point together with its
// constant coordinate gradients.
struct ClosedField {
    KForm F{2};
    GradF grad = zero_grad();
};

ClosedField random_closed_field(std::mt19937_64& gen, double scale) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    double b[4][4], c[4][4][4];
    for (auto& row : b)
        for (auto& v : row) v = dist(gen);
    for (auto& plane : c)
        for (auto& row : plane)
            for (auto& v : row) v = dist(gen);
    // symmetrize c in its last two indices
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n)
            for (int r = n + 1; r < 4; ++r) {
                const double s = 0.5 * (c[m][n][r] + c[m][r][n]);
                c[m][n][r] = c[m][r][n] = s;
            }

    const std::array<double, 4> x{0.3 * dist(gen), 0.3 * dist(gen), 0.3 * dist(gen), 0.3 * dist(gen)};
    ClosedField out;
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = mu + 1; nu < 4; ++nu) {
            const int pos = forms::position_of_mask((1 << mu) | (1 << nu));
            double fmunu = b[nu][mu] - b[mu][nu];
            for (int r = 0; r < 4; ++r) {
                const double slope = 2.0 * (c[nu][mu][r] - c[mu][nu][r]);
                fmunu += slope * x[static_cast<std::size_t>(r)];
                out.grad[static_cast<std::size_t>(r)][pos] = scale * slope;
            }
            out.F[pos] = scale * fmunu;
        }
    return out;
}

// In-test chain-rule gradients of the derived scalars, written directly from
// the bundle rather than through force_terms.
struct TestGradients {
    KForm dM{1}, dN{1}, dL{1};
};

TestGradients test_gradients(const nled::ScalarBundle& bd, double X, double Y, const KForm& F,
                             const GradF& grad) {
    TestGradients g;
    for (int a = 0; a < 4; ++a) {
        const double dXa = -2.0 * forms::form_inner(grad[static_cast<std::size_t>(a)], F);
        const double dYa = 2.0 * forms::hodge(forms::wedge(grad[static_cast<std::size_t>(a)], F))[0];
        g.dM[a] = -(X * bd.LXX + Y * bd.LXY) * dXa - (X * bd.LXY + Y * bd.LYY) * dYa;
        g.dN[a] = 2.0 * (bd.LXX * dXa + bd.LXY * dYa);
        g.dL[a] = 2.0 * (bd.LXY * dXa + bd.LYY * dYa);
    }
    return g;
}

// d_b tau_a^{LED} by the product rule, exact for linear-in-x fields.
KForm d_tau_led(const KForm& F, const GradF& grad, int a, int bcoord) {
    const KForm sF = forms::hodge(F);
    const KForm dF = grad[static_cast<std::size_t>(bcoord)];
    const KForm sdF = forms::hodge(dF);
    const Vector4 Xa = forms::basis_vector(a);
    return 0.5 * (forms::wedge(forms::interior(Xa, dF), sF) + forms::wedge(forms::interior(Xa, F), sdF) -
                  forms::wedge(forms::interior(Xa, sdF), F) - forms::wedge(forms::interior(Xa, sF), dF));
}

} // namespace

TEST_CASE("equation of state") {
    EquationOfState dust{EosKind::ColdDust, 0.0};
    CHECK(energy_density(dust, 2.5, 0.0) == 2.5);
    CHECK_THROWS_AS(energy_density(dust, 1.0, 0.1), InvalidState);

    EquationOfState ig{EosKind::IdealGamma, 2.0};
    CHECK(energy_density(ig, 1.0, 1.0) == 2.0);
    CHECK(energy_density(ig, 0.7, 0.0) == 0.7);
    CHECK_THROWS_AS(energy_density(ig, 0.0, 0.5), InvalidState);

    auto gen = oracles::rng(41);
    std::uniform_real_distribution<double> dist(0.01, 5.0);
    for (int trial = 0; trial < 40; ++trial) {
        const double rm = dist(gen), p = dist(gen);
        CHECK(energy_density(ig, rm, p) >= rm);
    }
}

TEST_CASE("T dS increments") {
    EquationOfState ig{EosKind::IdealGamma, 1.4};
    const FluidState a{1.0, 1.0, 0.0, 0.0};
    CHECK(tds_increment(ig, a, a) == 0.0);
    CHECK_THROWS_AS(tds_increment({EosKind::ColdDust, 0.0}, a, a), InvalidState);

    // along the isentrope p = rho_m^gamma with drho_m = 1e-4
    const double drho = 1e-4;
    const FluidState b{1.0 + drho, std::pow(1.0 + drho, 1.4), 0.0, 0.0};
    const FluidState a2{1.0, 1.0, 0.0, 0.0};
    CHECK(std::abs(tds_increment(ig, a2, b)) <= 1e-10);

    // isochoric pressure increase: T dS = dE > 0
    const FluidState c{1.0, 1.3, 0.0, 0.0};
    const double expected = (1.3 - 1.0) / ((1.4 - 1.0) * 1.0);
    CHECK(tds_increment(ig, a2, c) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("projection operator") {
    auto gen = oracles::rng(42);
    std::uniform_real_distribution<double> udist(-0.95, 0.95);
    for (int trial = 0; trial < 40; ++trial) {
        FluidState s{1.0, 0.0, 0.0, udist(gen)};
        const Vector4 V = s.velocity();
        CHECK(forms::metric_dot(V, V) == doctest::Approx(-1.0).epsilon(1e-12));

        // alpha = V~ -> 0
        CHECK(max_abs(project(V, s.covelocity())) < 1e-12);

        const KForm alpha = oracles::random_kform(gen, 1, 2.0);
        const KForm pa = project(V, alpha);
        // i_V(Pi_V alpha) = 0
        double iv = 0.0;
        for (int a = 0; a < 4; ++a) iv += pa[a] * V[a];
        CHECK(std::abs(iv) < 1e-13);
        // idempotence
        CHECK(max_abs(project(V, pa) - pa) < 1e-13);
    }

    // alpha orthogonal to a rest-frame V is unchanged
    const Vector4 rest{1, 0, 0, 0};
    KForm alpha(1);
    alpha[1] = 0.7;
    alpha[3] = -0.2;
    CHECK(max_abs(project(rest, alpha) - alpha) == 0.0);

    CHECK_THROWS_AS(project({2, 0, 0, 0}, alpha), ContractViolation);
}

TEST_CASE("U(1) current") {
    CHECK(max_abs(u1_current({1.0, 0.0, 0.0, 0.4})) == 0.0);

    // rest frame: J = rho_e dx^dy^dz (= -rho_e star dt)
    const double q = 1.7;
    const KForm J = u1_current({1.0, 0.0, q, 0.0});
    CHECK(J[forms::position_of_mask(0b1110)] == doctest::Approx(q));
    CHECK(max_abs(J - forms::hodge(forms::basis_covector(0)) * -q) < 1e-15);

    // boost covariance: the vector dual transforms as a 4-vector
    auto gen = oracles::rng(43);
    std::uniform_real_distribution<double> udist(-0.8, 0.8);
    for (int trial = 0; trial < 20; ++trial) {
        const double u = udist(gen), w = udist(gen);
        const double uprime = (u + w) / (1.0 + u * w);
        FluidState s{1.0, 0.0, 1.3, u};
        FluidState sprime{1.0, 0.0, 1.3, uprime};
        const auto L = oracles::z_boost(w);
        const Vector4 Jv = forms::raise(forms::hodge(u1_current(s)));
        Vector4 boosted;
        for (int a = 0; a < 4; ++a) {
            double acc = 0.0;
            for (int b = 0; b < 4; ++b)
                acc += L[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] * Jv[b];
            boosted[a] = acc;
        }
        const Vector4 Jp = forms::raise(forms::hodge(u1_current(sprime)));
        for (int a = 0; a < 4; ++a) CHECK(Jp[a] == doctest::Approx(boosted[a]).epsilon(1e-12));
    }
}

TEST_CASE("exact identity: d tau_a^{LED} = -i_a F ^ d star F on closed fields") {
    auto gen = oracles::rng(44);
    for (int trial = 0; trial < 25; ++trial) {
        const auto cf = random_closed_field(gen, 0.4);
        // d star F = sum_b e^b ^ star(d_b F)
        KForm dsF(3);
        for (int b = 0; b < 4; ++b)
            dsF += forms::wedge(forms::basis_covector(b), forms::hodge(cf.grad[static_cast<std::size_t>(b)]));
        for (int a = 0; a < 4; ++a) {
            KForm lhs(4);
            for (int b = 0; b < 4; ++b)
                lhs += forms::wedge(forms::basis_covector(b), d_tau_led(cf.F, cf.grad, a, b));
            const KForm rhs = -forms::wedge(forms::interior(forms::basis_vector(a), cf.F), dsF);
            CHECK(std::abs(lhs[0] - rhs[0]) <= 1e-13 * std::max(1.0, std::abs(rhs[0])));
        }
    }
}

TEST_CASE("exact identity: div T^{NLED} = dM + star tau_{dN~} + i_{Jhat} F") {
    auto gen = oracles::rng(45);
    for (double kappa : {0.5, 1.1}) {
        const auto model = nled::born_infeld(kappa);
        int done = 0;
        while (done < 15) {
            const auto cf = random_closed_field(gen, 0.35);
            const double X = forms::invariant_X(cf.F);
            const double Y = forms::invariant_Y(cf.F);
            if (nled::delta_of(model, X, Y) < 0.3) continue;
            const auto bd = nled::eval_scalars(model, X, Y);
            const auto g = test_gradients(bd, X, Y, cf.F, cf.grad);

            // left side: -star d tau_a assembled exactly per frame index
            std::array<double, 4> lhs{};
            for (int a = 0; a < 4; ++a) {
                const KForm star_ea = forms::hodge(forms::lower(forms::basis_vector(a)));
                KForm dtau = forms::wedge(g.dM, star_ea);
                const KForm tau_a = nled::tau_led(cf.F, a);
                dtau += forms::wedge(g.dN, tau_a);
                for (int b = 0; b < 4; ++b)
                    dtau += forms::wedge(forms::basis_covector(b), d_tau_led(cf.F, cf.grad, a, b)) * bd.N;
                lhs[static_cast<std::size_t>(a)] = -forms::hodge(dtau)[0];
            }

            // right side: xi + i_{J - eta} F with the current read off d star G
            KForm dsG(3);
            for (int b = 0; b < 4; ++b) {
                const KForm dF = cf.grad[static_cast<std::size_t>(b)];
                const KForm dstarG_b = forms::hodge(cf.F) * g.dN[b] + forms::hodge(dF) * bd.N +
                                       cf.F * g.dL[b] + dF * bd.Lsc;
                dsG += forms::wedge(forms::basis_covector(b), dstarG_b);
            }
            const Vector4 Jvec = forms::raise(forms::hodge(dsG));

            const FluidState neutral{1.0, 0.0, 0.0, 0.0};
            const auto ft = force_terms(model, cf.F, cf.grad, neutral);
            Vector4 Jhat = Jvec - ft.eta;
            const KForm rhs = ft.xi + forms::interior(Jhat, cf.F);

            double scale = 1.0;
            for (int a = 0; a < 4; ++a) scale = std::max(scale, std::abs(lhs[static_cast<std::size_t>(a)]));
            for (int a = 0; a < 4; ++a)
                CHECK(std::abs(lhs[static_cast<std::size_t>(a)] - rhs[a]) <= 1e-12 * scale);
            ++done;
        }
    }
}

TEST_CASE("force terms vanish for Maxwell and for uniform fields") {
    auto gen = oracles::rng(46);
    const FluidState s{1.0, 0.0, 0.0, 0.3};
    for (int trial = 0; trial < 20; ++trial) {
        const auto cf = random_closed_field(gen, 0.8);
        const auto ft = force_terms(nled::maxwell(), cf.F, cf.grad, s);
        CHECK(max_abs(ft.xi) == 0.0);
        for (int a = 0; a < 4; ++a) CHECK(ft.eta[a] == 0.0);

        // uniform fields, Born-Infeld with a large field
        const KForm F = oracles::random_kform(gen, 2, 0.9);
        if (nled::delta_of(nled::born_infeld(0.9), forms::invariant_X(F), forms::invariant_Y(F)) < 0.05)
            continue;
        const auto ftu = force_terms(nled::born_infeld(0.9), F, zero_grad(), s);
        CHECK(max_abs(ftu.xi) == 0.0);
        for (int a = 0; a < 4; ++a) CHECK(ftu.eta[a] == 0.0);
    }

    // nonzero field gradient with dX = dY = 0: F along dt^dx, gradient along
    // dt^dy is orthogonal in the form metric and wedges to zero against F
    KForm F(2);
    F[forms::position_of_mask(0b0011)] = 0.6;
    GradF grad = zero_grad();
    grad[3][forms::position_of_mask(0b0101)] = 1.7;
    CHECK(forms::form_inner(grad[3], F) == 0.0);
    CHECK(forms::hodge(forms::wedge(grad[3], F))[0] == 0.0);
    const auto ft0 = force_terms(nled::born_infeld(0.9), F, grad, s);
    CHECK(max_abs(ft0.xi) == 0.0);
    for (int a = 0; a < 4; ++a) CHECK(ft0.eta[a] == 0.0);
}

TEST_CASE("chain-rule gradients match finite differences along a field family") {
    auto gen = oracles::rng(47);
    const auto model = nled::born_infeld(0.8);
    int done = 0;
    while (done < 25) {
        const KForm F0 = oracles::random_kform(gen, 2, 0.5);
        const KForm dir = oracles::random_kform(gen, 2, 1.0);
        const double h = 1e-6;
        auto scalars_at = [&](double s) {
            const KForm F = F0 + dir * s;
            const double X = forms::invariant_X(F);
            const double Y = forms::invariant_Y(F);
            return nled::eval_scalars(model, X, Y);
        };
        try {
            if (nled::delta_of(model, forms::invariant_X(F0), forms::invariant_Y(F0)) < 0.3) continue;
            const auto bp = scalars_at(h);
            const auto bm = scalars_at(-h);
            const auto b0 = scalars_at(0.0);

            GradF grad = zero_grad();
            grad[0] = dir; // treat the family parameter as the t coordinate
            const auto g = test_gradients(b0, forms::invariant_X(F0), forms::invariant_Y(F0), F0, grad);
            const double fd_M = (bp.M - bm.M) / (2 * h);
            const double fd_N = (bp.N - bm.N) / (2 * h);
            const double fd_L = (bp.Lsc - bm.Lsc) / (2 * h);
            CHECK(g.dM[0] == doctest::Approx(fd_M).epsilon(1e-6));
            CHECK(g.dN[0] == doctest::Approx(fd_N).epsilon(1e-6));
            CHECK(g.dL[0] == doctest::Approx(fd_L).epsilon(1e-6));

            const auto ft = force_terms(model, F0, grad, FluidState{1.0, 0.0, 0.0, 0.0});
            CHECK(ft.xi[0] == doctest::Approx(g.dM[0] +
                                              forms::hodge(nled::tau_led_q(F0, forms::raise(g.dN)))[0])
                                  .epsilon(1e-12));
            ++done;
        } catch (const FieldBoundExceeded&) {
            continue;
        }
    }
}

TEST_CASE("equation of motion limits") {
    // neutral dust, uniform field, no pressure gradient
    const KForm F = forms::two_form_from_eb({0.3, 0, 0}, {1.0, 0.2, 0});
    const FluidState dust{1.0, 0.0, 0.0, 0.25};
    CHECK(max_abs(eom_rhs(nled::born_infeld(0.7), F, zero_grad(), dust, 0.0)) == 0.0);

    // Maxwell charged dust in uniform e = (E,0,0): the relativistic Lorentz
    // force rho_e gamma E along x, with the sign pulling positive charge
    // along the field
    const double E = 1.2, q = 0.8;
    for (double u : {0.0, 0.5, -0.6}) {
        const FluidState s{1.0, 0.0, q, u};
        const KForm f = eom_rhs(nled::maxwell(), forms::two_form_from_eb({E, 0, 0}, {0, 0, 0}),
                                zero_grad(), s, 0.0);
        const double gamma = s.lorentz();
        CHECK(f[1] == doctest::Approx(q * gamma * E).epsilon(1e-13));
        CHECK(f[2] == 0.0);
        // orthogonality to V
        double iv = 0.0;
        for (int a = 0; a < 4; ++a) iv += f[a] * s.velocity()[a];
        CHECK(std::abs(iv) < 1e-13);
    }

    // pure pressure gradient, static fluid: RHS = -dp (spatial part)
    const FluidState rest{1.0, 0.5, 0.0, 0.0};
    const KForm f = eom_rhs(nled::maxwell(), KForm(2), zero_grad(), rest, 0.9);
    CHECK(f[3] == doctest::Approx(-0.9));
    CHECK(f[0] == 0.0);

    CHECK_THROWS_AS(eom_rhs(nled::maxwell(), F, zero_grad(), FluidState{0, 0, 0.5, 0}, 0.0),
                    DegenerateInertia);
}

TEST_CASE("acceleration is orthogonal to V for random inputs") {
    auto gen = oracles::rng(48);
    std::uniform_real_distribution<double> udist(-0.9, 0.9);
    int done = 0;
    while (done < 40) {
        const auto cf = random_closed_field(gen, 0.3);
        const auto model = nled::born_infeld(0.6);
        if (nled::delta_of(model, forms::invariant_X(cf.F), forms::invariant_Y(cf.F)) < 0.3) continue;
        FluidState s{1.3, 0.0, udist(gen), udist(gen)};
        const KForm f = eom_rhs(model, cf.F, cf.grad, s, 0.4);
        double iv = 0.0, scale = 1.0;
        for (int a = 0; a < 4; ++a) {
            iv += f[a] * s.velocity()[a];
            scale = std::max(scale, std::abs(f[a]));
        }
        CHECK(std::abs(iv) <= 1e-12 * scale);
        ++done;
    }
}

TEST_CASE("hyperbolic motion driven by eom_rhs matches the ODE oracle") {
    // charged dust in a uniform longitudinal field e = (0,0,E), motion along z
    const double E = 0.9, q = 0.6, rho = 1.3;
    const double a = q * E / rho;
    const KForm F = forms::two_form_from_eb({0, 0, E}, {0, 0, 0});
    const auto model = nled::maxwell();

    // integrate (gamma, gamma u) in proper time with the library force
    double g = 1.0, gu = 0.0;
    const int steps = 2000;
    const double h = 1.0 / steps;
    auto deriv = [&](double gam, double gamu) {
        const double u = gamu / gam;
        const FluidState s{rho, 0.0, q, u};
        const KForm f = eom_rhs(model, F, zero_grad(), s, 0.0);
        // rho (grad_V V~)_t = f_t and (grad_V V~)_t = -dgamma/dtau
        return std::array<double, 2>{-f[0] / rho, f[3] / rho};
    };
    for (int i = 0; i < steps; ++i) {
        const auto k1 = deriv(g, gu);
        const auto k2 = deriv(g + 0.5 * h * k1[0], gu + 0.5 * h * k1[1]);
        const auto k3 = deriv(g + 0.5 * h * k2[0], gu + 0.5 * h * k2[1]);
        const auto k4 = deriv(g + h * k3[0], gu + h * k3[1]);
        g += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
        gu += h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
    }

    // independent oracle: textbook Lorentz-force ODE, same state vector
    const auto oracle = oracles::rk4_integrate<2>(
        [a](const std::array<double, 2>& y) {
            return std::array<double, 2>{a * y[1], a * y[0]};
        },
        {1.0, 0.0}, 1.0, 4096);

    CHECK(g == doctest::Approx(std::cosh(a)).epsilon(1e-6));
    CHECK(gu == doctest::Approx(std::sinh(a)).epsilon(1e-6));
    CHECK(g == doctest::Approx(oracle[0]).epsilon(1e-6));
    CHECK(gu == doctest::Approx(oracle[1]).epsilon(1e-6));
}

TEST_CASE("continuity equation limits") {
    // static uniform everything
    const FluidState rest{1.0, 0.0, 0.0, 0.0};
    CHECK(continuity_rhs(nled::born_infeld(0.9), forms::two_form_from_eb({0, 0, 0}, {1, 0, 0}),
                         zero_grad(), rest, 0.0) == 0.0);

    // Maxwell neutral reduces to -V(rho)
    auto gen = oracles::rng(49);
    std::uniform_real_distribution<double> dist(-0.8, 0.8);
    for (int trial = 0; trial < 20; ++trial) {
        const double u = dist(gen), gr = dist(gen);
        const FluidState s{1.0, 0.0, 0.0, u};
        const auto cf = random_closed_field(gen, 0.4);
        const double r = continuity_rhs(nled::maxwell(), cf.F, cf.grad, s, gr);
        CHECK(r == doctest::Approx(-s.lorentz() * u * gr).epsilon(1e-13));
    }

    // Born-Infeld neutral with the exact-solution fields matches the
    // neutral continuity equation assembled term by term from forms calls
    const auto profile = std::make_shared<exact::GaussianProfile>(0.5, 0.3, 0.0);
    const exact::ExactSolutionSpec spec{profile, 1.0, 0.75};
    const auto model = nled::born_infeld(spec.kappa);
    for (double z : {-0.2, 0.1, 0.35}) {
        const KForm F = exact::sample_fields(spec, z, 0.07);
        const auto grad = exact::sample_field_gradients(spec, z, 0.07);
        const FluidState s{1.2, 0.0, 0.0, 0.4};
        const double got = continuity_rhs(model, F, grad, s, 0.6);

        const auto ft = force_terms(model, F, grad, s);
        const KForm i_eta_F = forms::interior(ft.eta, F);
        double terms = 0.0;
        for (int a = 0; a < 4; ++a) terms += (ft.xi[a] - i_eta_F[a]) * s.velocity()[a];
        const double expected = terms - s.lorentz() * s.u * 0.6;
        CHECK(got == doctest::Approx(expected).epsilon(1e-10));
    }
}
