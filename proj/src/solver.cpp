#include "nledlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nledlab/kernels.hpp"

namespace nledlab::solver {

using forms::KForm;
using nled::LagrangianModel;
using nled::ModelKind;

void validate(const Grid1D& grid) {
    if (grid.n < 8) throw ConfigError("grid needs at least 8 cells");
    if (!(grid.z1 > grid.z0)) throw ConfigError("grid requires z1 > z0");
}

namespace {

struct InversionSetup {
    double a2;     // 1 + kappa^2 (B0^2 + By^2)
    double c2;     // kappa^2 (1 + kappa^2 B0^2)
    double e_max;  // admissible |E| bound inside Delta > floor, inf for kappa = 0
};

InversionSetup inversion_setup(double By, double B0, const LagrangianModel& model) {
    const double k2 = model.kappa * model.kappa;
    InversionSetup s;
    s.a2 = 1.0 + k2 * (B0 * B0 + By * By);
    s.c2 = k2 * (1.0 + k2 * B0 * B0);
    if (s.c2 > 0.0) {
        const double lim = (s.a2 - 2.0 * model.delta_floor) / s.c2;
        s.e_max = lim > 0.0 ? std::sqrt(lim) : 0.0;
    } else {
        s.e_max = std::numeric_limits<double>::infinity();
    }
    return s;
}

struct DisplacementEval {
    double value;  // N E + Lsc B0 - Dx
    double slope;  // d/dE of the displacement
};

DisplacementEval displacement_residual(double E, double By, double B0, double Dx,
                                       const LagrangianModel& model) {
    const double X = E * E - B0 * B0 - By * By;
    const double Y = 2.0 * E * B0;
    const auto b = nled::eval_scalars(model, X, Y);
    DisplacementEval out;
    out.value = b.N * E + b.Lsc * B0 - Dx;
    const double dN_dE = 2.0 * (b.LXX * 2.0 * E + b.LXY * 2.0 * B0);
    const double dL_dE = 2.0 * (b.LXY * 2.0 * E + b.LYY * 2.0 * B0);
    out.slope = b.N + E * dN_dE + B0 * dL_dE;
    return out;
}

double invert_with_guess(double Dx, double By, double B0, const LagrangianModel& model,
                         double guess) {
    if (model.kind == ModelKind::Maxwell) return Dx / model.eps0;

    const auto setup = inversion_setup(By, B0, model);
    double lo, hi;
    if (std::isfinite(setup.e_max)) {
        lo = -setup.e_max;
        hi = setup.e_max;
        if (displacement_residual(hi, By, B0, Dx, model).value < 0.0 ||
            displacement_residual(lo, By, B0, Dx, model).value > 0.0)
            throw FieldBoundExceeded("no admissible constitutive inversion inside Delta > 0");
    } else {
        const double span = std::abs(Dx) / model.eps0 + 1.0;
        lo = -span;
        hi = span;
    }

    const double tol = 1e-12 * std::max(1.0, std::abs(Dx));
    double E = std::clamp(guess, std::nextafter(lo, hi), std::nextafter(hi, lo));
    for (int iter = 0; iter < 50; ++iter) {
        const auto r = displacement_residual(E, By, B0, Dx, model);
        if (std::abs(r.value) <= tol) {
            // one polishing step sharpens the root itself to rounding level
            const double polished = E - r.value / r.slope;
            return (polished > lo && polished < hi) ? polished : E;
        }
        if (r.value < 0.0)
            lo = E;
        else
            hi = E;
        double next = E - r.value / r.slope;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        E = next;
    }
    throw NumericalFailure("constitutive inversion did not converge in 50 iterations");
}

} // namespace

double invert_constitutive(double Dx, double By, double B0, const LagrangianModel& model) {
    return invert_with_guess(Dx, By, B0, model, Dx / model.eps0);
}

void refresh_derived(FieldGrid1D& state, const LagrangianModel& model) {
    const int n = state.grid.n;
    for (int i = 0; i < n; ++i) {
        const auto j = static_cast<std::size_t>(i);
        try {
            const double E = invert_with_guess(state.Dx[j], state.By[j], state.B0, model, state.Ex[j]);
            const double X = E * E - state.B0 * state.B0 - state.By[j] * state.By[j];
            const double Y = 2.0 * E * state.B0;
            const auto b = nled::eval_scalars(model, X, Y);
            state.Ex[j] = E;
            state.Hy[j] = b.N * state.By[j];
            state.X[j] = X;
            state.Y[j] = Y;
            state.Delta[j] = b.Delta;
        } catch (const FieldBoundExceeded& e) {
            throw FieldBoundExceeded("cell " + std::to_string(i) + ": " + e.what());
        } catch (const NumericalFailure& e) {
            throw NumericalFailure("cell " + std::to_string(i) + ": " + e.what());
        }
    }
}

namespace {

void size_field(FieldGrid1D& s) {
    const auto n = static_cast<std::size_t>(s.grid.n);
    s.Dx.assign(n, 0.0);
    s.By.assign(n, 0.0);
    s.Ex.assign(n, 0.0);
    s.Hy.assign(n, 0.0);
    s.X.assign(n, 0.0);
    s.Y.assign(n, 0.0);
    s.Delta.assign(n, 1.0);
}

void size_dust(DustGrid1D& d, std::size_t n) {
    d.De.assign(n, 0.0);
    d.Sz.assign(n, 0.0);
    d.Qe.assign(n, 0.0);
    d.rho_m.assign(n, 0.0);
    d.u.assign(n, 0.0);
    d.lorentz.assign(n, 1.0);
}

void refresh_dust(DustGrid1D& d) {
    const std::size_t n = d.De.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(d.De[i] > 0.0))
            throw NumericalFailure("dust energy density nonpositive at cell " + std::to_string(i));
        const double u = d.Sz[i] / d.De[i];
        if (!(std::abs(u) < 1.0))
            throw NumericalFailure("dust velocity reached light speed at cell " + std::to_string(i));
        d.u[i] = u;
        d.lorentz[i] = 1.0 / std::sqrt(1.0 - u * u);
        d.rho_m[i] = d.De[i] * (1.0 - u * u);
    }
}

struct DustRhs {
    std::vector<double> dDe, dSz, dQe;
};

struct Workspace {
    std::vector<double> dEx_dz, dBy_dz, Tzz, Qflux;
    FieldRhs fk1, fk2, fk3, fk4;
    DustRhs dk1, dk2, dk3, dk4;
    FieldGrid1D stage;
    DustGrid1D dstage;

    Workspace(const FieldGrid1D& f, const DustGrid1D* d) {
        const auto n = static_cast<std::size_t>(f.grid.n);
        dEx_dz.resize(n);
        dBy_dz.resize(n);
        Tzz.resize(n);
        Qflux.resize(n);
        for (auto* k : {&fk1, &fk2, &fk3, &fk4}) {
            k->dDx.resize(n);
            k->dBy.resize(n);
        }
        for (auto* k : {&dk1, &dk2, &dk3, &dk4}) {
            k->dDe.resize(n);
            k->dSz.resize(n);
            k->dQe.resize(n);
        }
        stage = f;
        if (d) dstage = *d;
    }
};

// Time derivative of F at a cell through the chain rule of the constitutive
// inversion: dDx = (dD/dE) dtE + (dD/dBy) dtBy.
double dt_electric(double E, double By, double B0, double dDx, double dBy,
                   const LagrangianModel& model) {
    const double X = E * E - B0 * B0 - By * By;
    const double Y = 2.0 * E * B0;
    const auto b = nled::eval_scalars(model, X, Y);
    const double dN_dE = 2.0 * (b.LXX * 2.0 * E + b.LXY * 2.0 * B0);
    const double dL_dE = 2.0 * (b.LXY * 2.0 * E + b.LYY * 2.0 * B0);
    const double dD_dE = b.N + E * dN_dE + B0 * dL_dE;
    const double dN_dBy = 2.0 * b.LXX * (-2.0 * By);
    const double dL_dBy = 2.0 * b.LXY * (-2.0 * By);
    const double dD_dBy = E * dN_dBy + B0 * dL_dBy;
    return (dDx - dD_dBy * dBy) / dD_dE;
}

void rhs_full(const FieldGrid1D& s, const DustGrid1D* dust, const LagrangianModel& model,
              double dissipation, FieldRhs& fr, DustRhs* dr, Workspace& ws) {
    const int n = s.grid.n;
    const double inv2dz = 1.0 / (2.0 * s.grid.dz());
    const auto& k = kernels::ops();

    k.central_diff_periodic(fr.dBy.data(), s.Ex.data(), n, -inv2dz);
    k.central_diff_periodic(fr.dDx.data(), s.Hy.data(), n, -inv2dz);
    if (dissipation > 0.0) {
        const double coef = dissipation / (16.0 * s.grid.dz());
        k.add_fourth_diff(fr.dBy.data(), s.By.data(), n, coef);
        k.add_fourth_diff(fr.dDx.data(), s.Dx.data(), n, coef);
    }

    if (!dust) return;

    for (int i = 0; i < n; ++i) {
        const auto j = static_cast<std::size_t>(i);
        fr.dDx[j] -= dust->Qe[j] * dust->u[j];
        ws.Tzz[j] = dust->Sz[j] * dust->u[j];
        ws.Qflux[j] = dust->Qe[j] * dust->u[j];
    }
    k.central_diff_periodic(ws.dEx_dz.data(), s.Ex.data(), n, inv2dz);
    k.central_diff_periodic(ws.dBy_dz.data(), s.By.data(), n, inv2dz);
    k.central_diff_periodic(dr->dDe.data(), dust->Sz.data(), n, -inv2dz);
    k.central_diff_periodic(dr->dSz.data(), ws.Tzz.data(), n, -inv2dz);
    k.central_diff_periodic(dr->dQe.data(), ws.Qflux.data(), n, -inv2dz);

    const int tx = forms::position_of_mask(0b0011);
    const int xz = forms::position_of_mask(0b1010);
    for (int i = 0; i < n; ++i) {
        const auto j = static_cast<std::size_t>(i);
        const double dtE = dt_electric(s.Ex[j], s.By[j], s.B0, fr.dDx[j], fr.dBy[j], model);
        const KForm F = forms::two_form_from_eb({s.Ex[j], 0.0, 0.0}, {s.B0, s.By[j], 0.0});
        fluid::GradF grad = fluid::zero_grad();
        grad[0][tx] = -dtE;
        grad[0][xz] = -fr.dBy[j];
        grad[3][tx] = -ws.dEx_dz[j];
        grad[3][xz] = -ws.dBy_dz[j];
        const fluid::FluidState cell{dust->rho_m[j], 0.0, dust->Qe[j] / dust->lorentz[j], dust->u[j]};
        try {
            const KForm div1 = fluid::nled_divergence(model, F, grad, cell);
            dr->dDe[j] += div1[0];
            dr->dSz[j] -= div1[3];
        } catch (const FieldBoundExceeded& e) {
            throw FieldBoundExceeded("cell " + std::to_string(i) + ": " + e.what());
        }
    }
}

void apply_stage(const FieldGrid1D& base, const DustGrid1D* dbase, const FieldRhs& fk,
                 const DustRhs* dk, double a, Workspace& ws, const LagrangianModel& model) {
    const int n = base.grid.n;
    const auto& k = kernels::ops();
    k.stage_update(ws.stage.Dx.data(), base.Dx.data(), fk.dDx.data(), a, n);
    k.stage_update(ws.stage.By.data(), base.By.data(), fk.dBy.data(), a, n);
    refresh_derived(ws.stage, model);
    if (dbase) {
        k.stage_update(ws.dstage.De.data(), dbase->De.data(), dk->dDe.data(), a, n);
        k.stage_update(ws.dstage.Sz.data(), dbase->Sz.data(), dk->dSz.data(), a, n);
        k.stage_update(ws.dstage.Qe.data(), dbase->Qe.data(), dk->dQe.data(), a, n);
        refresh_dust(ws.dstage);
    }
}

template <typename Fn>
void run_stage(int stage, Fn&& fn) {
    try {
        fn();
    } catch (const FieldBoundExceeded& e) {
        throw FieldBoundExceeded("stage " + std::to_string(stage) + ": " + e.what());
    } catch (const NumericalFailure& e) {
        throw NumericalFailure("stage " + std::to_string(stage) + ": " + e.what());
    }
}

void step_ws(FieldGrid1D& f, DustGrid1D* d, const LagrangianModel& model, double dt,
             double dissipation, Workspace& ws) {
    const int n = f.grid.n;
    const auto& k = kernels::ops();

    run_stage(1, [&] { rhs_full(f, d, model, dissipation, ws.fk1, d ? &ws.dk1 : nullptr, ws); });
    run_stage(2, [&] {
        apply_stage(f, d, ws.fk1, &ws.dk1, 0.5 * dt, ws, model);
        rhs_full(ws.stage, d ? &ws.dstage : nullptr, model, dissipation, ws.fk2, d ? &ws.dk2 : nullptr, ws);
    });
    run_stage(3, [&] {
        apply_stage(f, d, ws.fk2, &ws.dk2, 0.5 * dt, ws, model);
        rhs_full(ws.stage, d ? &ws.dstage : nullptr, model, dissipation, ws.fk3, d ? &ws.dk3 : nullptr, ws);
    });
    run_stage(4, [&] {
        apply_stage(f, d, ws.fk3, &ws.dk3, dt, ws, model);
        rhs_full(ws.stage, d ? &ws.dstage : nullptr, model, dissipation, ws.fk4, d ? &ws.dk4 : nullptr, ws);
    });

    const double c = dt / 6.0;
    k.rk4_combine(f.Dx.data(), ws.fk1.dDx.data(), ws.fk2.dDx.data(), ws.fk3.dDx.data(),
                  ws.fk4.dDx.data(), c, n);
    k.rk4_combine(f.By.data(), ws.fk1.dBy.data(), ws.fk2.dBy.data(), ws.fk3.dBy.data(),
                  ws.fk4.dBy.data(), c, n);
    refresh_derived(f, model);
    if (d) {
        k.rk4_combine(d->De.data(), ws.dk1.dDe.data(), ws.dk2.dDe.data(), ws.dk3.dDe.data(),
                      ws.dk4.dDe.data(), c, n);
        k.rk4_combine(d->Sz.data(), ws.dk1.dSz.data(), ws.dk2.dSz.data(), ws.dk3.dSz.data(),
                      ws.dk4.dSz.data(), c, n);
        k.rk4_combine(d->Qe.data(), ws.dk1.dQe.data(), ws.dk2.dQe.data(), ws.dk3.dQe.data(),
                      ws.dk4.dQe.data(), c, n);
        refresh_dust(*d);
    }
}

} // namespace

FieldRhs rhs_fields(const FieldGrid1D& state, const LagrangianModel& model, double dissipation,
                    const DustGrid1D* dust) {
    Workspace ws(state, dust);
    FieldRhs out;
    out.dDx.resize(state.Dx.size());
    out.dBy.resize(state.By.size());
    DustRhs dr;
    if (dust) {
        dr.dDe.resize(state.Dx.size());
        dr.dSz.resize(state.Dx.size());
        dr.dQe.resize(state.Dx.size());
    }
    rhs_full(state, dust, model, dissipation, out, dust ? &dr : nullptr, ws);
    return out;
}

void step(FieldGrid1D& state, DustGrid1D* dust, const LagrangianModel& model, double dt,
          double dissipation) {
    Workspace ws(state, dust);
    step_ws(state, dust, model, dt, dissipation, ws);
}

std::shared_ptr<const exact::Profile> make_profile(const ProfileSpec& spec) {
    if (spec.name == "gaussian")
        return std::make_shared<exact::GaussianProfile>(spec.amplitude, spec.width, spec.center);
    if (spec.name == "raised_cosine")
        return std::make_shared<exact::RaisedCosineProfile>(spec.amplitude, spec.width, spec.center);
    if (spec.name == "tabulated") {
        if (spec.table.size() < 3)
            throw ConfigError("tabulated profile needs at least 3 table rows");
        return std::make_shared<exact::TabulatedProfile>(spec.table);
    }
    throw ConfigError("unknown profile '" + spec.name + "'");
}

void validate(const RunConfig& config) {
    validate(Grid1D{config.n, config.z0, config.z1, Boundary::Periodic});
    if (!(config.model.kappa >= 0)) throw ConfigError("kappa must be nonnegative");
    if (!(config.model.eps0 > 0)) throw ConfigError("eps0 must be positive");
    if (!(config.cfl > 0.0) || config.cfl > 1.0) throw ConfigError("cfl must lie in (0, 1]");
    if (!(config.t_end >= 0.0)) throw ConfigError("t_end must be nonnegative");
    if (config.output_every < 1) throw ConfigError("output_every must be >= 1");
    if (!(config.dissipation >= 0.0)) throw ConfigError("dissipation must be nonnegative");
    if (!std::isfinite(config.B0)) throw ConfigError("B0 must be finite");
    if (!(config.initial.width > 0)) throw ConfigError("profile width must be positive");
    if (!std::isfinite(config.initial.amplitude)) throw ConfigError("profile amplitude must be finite");
    if (config.fluid) {
        if (!(config.fluid->rho_m0 > 0)) throw ConfigError("fluid rho_m0 must be positive");
        if (!(std::abs(config.fluid->u0) < 1)) throw ConfigError("fluid |u0| must be < 1");
        if (!std::isfinite(config.fluid->rho_e0)) throw ConfigError("fluid rho_e0 must be finite");
    }
    make_profile(config.initial);
}

FieldGrid1D initial_state(const RunConfig& config) {
    FieldGrid1D f;
    f.grid = {config.n, config.z0, config.z1, Boundary::Periodic};
    f.B0 = config.B0;
    size_field(f);
    const auto profile = make_profile(config.initial);
    for (int i = 0; i < config.n; ++i) {
        const auto j = static_cast<std::size_t>(i);
        const double amp = profile->value(f.grid.z(i));
        f.Dx[j] = config.model.eps0 * amp;
        f.By[j] = amp;
    }
    refresh_derived(f, config.model);
    return f;
}

DustGrid1D initial_dust(const RunConfig& config) {
    DustGrid1D d;
    size_dust(d, static_cast<std::size_t>(config.n));
    const auto& fc = *config.fluid;
    const double g = 1.0 / std::sqrt(1.0 - fc.u0 * fc.u0);
    for (std::size_t i = 0; i < d.De.size(); ++i) {
        d.De[i] = fc.rho_m0 * g * g;
        d.Sz[i] = fc.rho_m0 * g * g * fc.u0;
        d.Qe[i] = fc.rho_e0 * g;
    }
    refresh_dust(d);
    return d;
}

EmStress em_stress(const LagrangianModel& model, double Ex, double By, double B0) {
    const double X = Ex * Ex - B0 * B0 - By * By;
    const double Y = 2.0 * Ex * B0;
    const auto b = nled::eval_scalars(model, X, Y);
    const double quad = 0.5 * (Ex * Ex + B0 * B0 + By * By);
    return {-b.M + b.N * quad, b.N * Ex * By, b.M + b.N * quad};
}

DiagRecord diagnostics(const FieldGrid1D& state, const DustGrid1D* dust,
                       const LagrangianModel& model, double t) {
    DiagRecord rec;
    rec.t = t;
    const int n = state.grid.n;
    const double dz = state.grid.dz();
    double wsum = 0.0, wzsum = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto j = static_cast<std::size_t>(i);
        const auto em = em_stress(model, state.Ex[j], state.By[j], state.B0);
        rec.em_energy += em.tt * dz;
        const double w = state.Ex[j] * state.Ex[j];
        wsum += w;
        wzsum += w * state.grid.z(i);
        rec.max_delta_excursion = std::max(rec.max_delta_excursion, std::abs(state.Delta[j] - 1.0));
        if (dust) rec.fluid_mass += dust->De[j] / dust->lorentz[j] * dz;
    }
    if (wsum > 0.0) {
        rec.centroid = wzsum / wsum;
        rec.centroid_valid = true;
    }
    return rec;
}

namespace {

struct StressArrays {
    std::vector<double> tt, tz, zz;
};

StressArrays total_stress(const FieldGrid1D& f, const DustGrid1D* d, const LagrangianModel& model) {
    const auto n = f.Dx.size();
    StressArrays s{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const auto em = em_stress(model, f.Ex[i], f.By[i], f.B0);
        s.tt[i] = em.tt;
        s.tz[i] = em.tz;
        s.zz[i] = em.zz;
        if (d) {
            s.tt[i] += d->De[i];
            s.tz[i] += d->Sz[i];
            s.zz[i] += d->Sz[i] * d->u[i];
        }
    }
    return s;
}

/// Centered-in-time discrete divergence of T_total, evaluated by stepping
/// copies of the state one dt backward and forward.
double divT_residual(const FieldGrid1D& f, const DustGrid1D* d, const LagrangianModel& model,
                     double dt, double dissipation) {
    FieldGrid1D fwd = f, bwd = f;
    DustGrid1D dfwd, dbwd;
    DustGrid1D* pfwd = nullptr;
    DustGrid1D* pbwd = nullptr;
    if (d) {
        dfwd = *d;
        dbwd = *d;
        pfwd = &dfwd;
        pbwd = &dbwd;
    }
    step(fwd, pfwd, model, dt, dissipation);
    step(bwd, pbwd, model, -dt, dissipation);

    const auto next = total_stress(fwd, pfwd, model);
    const auto prev = total_stress(bwd, pbwd, model);
    const auto curr = total_stress(f, d, model);

    const int n = f.grid.n;
    std::vector<double> dz_tz(static_cast<std::size_t>(n)), dz_zz(static_cast<std::size_t>(n));
    const double inv2dz = 1.0 / (2.0 * f.grid.dz());
    kernels::ops().central_diff_periodic(dz_tz.data(), curr.tz.data(), n, inv2dz);
    kernels::ops().central_diff_periodic(dz_zz.data(), curr.zz.data(), n, inv2dz);

    double acc = 0.0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
        const double rt = (next.tt[i] - prev.tt[i]) / (2.0 * dt) + dz_tz[i];
        const double rz = (next.tz[i] - prev.tz[i]) / (2.0 * dt) + dz_zz[i];
        acc += (rt * rt + rz * rz) * f.grid.dz();
    }
    return std::sqrt(acc);
}

} // namespace

RunResult run(const RunConfig& config, const DiagSink& diag_sink, const SnapshotSink& snap_sink) {
    validate(config);

    RunResult result;
    result.config = config;
    FieldGrid1D f = initial_state(config);
    DustGrid1D dust;
    DustGrid1D* pd = nullptr;
    if (config.fluid) {
        dust = initial_dust(config);
        pd = &dust;
    }

    const double dt = config.cfl * f.grid.dz();
    result.dt = dt;
    const int steps = config.t_end > 0.0
                          ? static_cast<int>(std::ceil(config.t_end / dt - 1e-9))
                          : 0;
    result.steps = steps;

    const auto emit = [&](int step_index, double t) {
        DiagRecord rec = diagnostics(f, pd, config.model, t);
        rec.divT_residual = divT_residual(f, pd, config.model, dt, config.dissipation);
        result.diagnostics.push_back(rec);
        if (diag_sink) diag_sink(rec);

        Snapshot snap;
        snap.step = step_index;
        snap.t = t;
        snap.has_fluid = pd != nullptr;
        snap.z.resize(f.Dx.size());
        for (int i = 0; i < f.grid.n; ++i) snap.z[static_cast<std::size_t>(i)] = f.grid.z(i);
        snap.Ex = f.Ex;
        snap.By = f.By;
        snap.Dx = f.Dx;
        snap.X = f.X;
        snap.Y = f.Y;
        snap.Delta = f.Delta;
        if (pd) {
            snap.rho_m = pd->rho_m;
            snap.p.assign(f.Dx.size(), 0.0);
            snap.u = pd->u;
        }
        result.snapshots.push_back(std::move(snap));
        if (snap_sink) snap_sink(result.snapshots.back());
    };

    emit(0, 0.0);

    Workspace ws(f, pd);
    double t = 0.0;
    for (int k = 1; k <= steps; ++k) {
        const double dt_k = std::min(dt, config.t_end - t);
        try {
            step_ws(f, pd, config.model, dt_k, config.dissipation, ws);
        } catch (const FieldBoundExceeded& e) {
            throw FieldBoundExceeded("step " + std::to_string(k) + ": " + e.what());
        } catch (const NumericalFailure& e) {
            throw NumericalFailure("step " + std::to_string(k) + ": " + e.what());
        }
        t += dt_k;
        if (k % config.output_every == 0 || k == steps) emit(k, t);
    }

    result.final_state = std::move(f);
    if (pd) result.final_dust = dust;
    return result;
}

double measure_phase_speed(const RunResult& result) {
    const double L = result.config.z1 - result.config.z0;
    std::vector<double> ts, cs;
    for (const auto& rec : result.diagnostics) {
        if (!rec.centroid_valid) continue;
        double c = rec.centroid;
        if (!cs.empty()) {
            while (c - cs.back() > 0.5 * L) c -= L;
            while (c - cs.back() < -0.5 * L) c += L;
        }
        ts.push_back(rec.t);
        cs.push_back(c);
    }
    if (ts.size() < 2)
        throw NumericalFailure("phase-speed fit needs at least two centroid samples");

    const auto n = static_cast<double>(ts.size());
    double tm = 0.0, cm = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        tm += ts[i];
        cm += cs[i];
    }
    tm /= n;
    cm /= n;
    double stt = 0.0, stc = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        stt += (ts[i] - tm) * (ts[i] - tm);
        stc += (ts[i] - tm) * (cs[i] - cm);
    }
    if (!(stt > 0.0)) throw NumericalFailure("phase-speed fit has no time spread");
    return stc / stt;
}

} // namespace nledlab::solver
