#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nledlab/exact.hpp"
#include "nledlab/fluid.hpp"
#include "nledlab/nled.hpp"

// 1+1D method-of-lines evolution of the Maxwell / Born-Infeld field
// equations on a periodic grid, optionally coupled to cold dust.
//
// Geometry: fields depend on (t, z) with e = (E_x, 0, 0) and
// b = (B0, B_y, 0); B0 is the static transverse background. The evolved
// conserved pair is (D_x, B_y):
//     d_t B_y = -d_z E_x                (from dF = 0)
//     d_t D_x = -d_z H_y - rho_e g u    (from d star G = J)
// with D_x = N E_x + Lsc B0 and H_y = N B_y read off the constitutive map,
// and E_x recovered per cell by a safeguarded Newton inversion.
//
// Coupled cold dust evolves the conserved energy/momentum pair
// (De, Sz) = (rho g^2, rho g^2 u) with the electrodynamic force density
// -div T^{NLED} on the right-hand side, so total stress-energy conservation
// holds up to discretization error; the diagnostics measure that residual.
// Spatial derivatives are 2nd-order centered differences, time stepping is
// classical RK4, with optional fourth-difference dissipation.

namespace nledlab::solver {

enum class Boundary { Periodic };

struct Grid1D {
    int n = 0;
    double z0 = 0.0, z1 = 1.0;
    Boundary boundary = Boundary::Periodic;

    double dz() const { return (z1 - z0) / n; }
    double z(int i) const { return z0 + i * dz(); }
};

void validate(const Grid1D& grid);

struct FieldGrid1D {
    Grid1D grid;
    double B0 = 0.0;
    // conserved
    std::vector<double> Dx, By;
    // derived per cell, consistent with (Dx, By) through the constitutive
    // inversion after refresh_derived
    std::vector<double> Ex, Hy, X, Y, Delta;
};

struct DustGrid1D {
    // conserved: energy rho g^2, z-momentum rho g^2 u, charge rho_e g
    std::vector<double> De, Sz, Qe;
    // derived
    std::vector<double> rho_m, u, lorentz;
};

/// E_x with D_x = N E_x + Lsc B0 at (E_x, B_y, B0), by safeguarded Newton
/// (bisection fallback) to |residual| <= 1e-12 max(1, |D_x|) within 50
/// iterations. Maxwell returns D_x/eps0 directly.
double invert_constitutive(double Dx, double By, double B0, const nled::LagrangianModel& model);

/// Recompute the derived arrays from the conserved ones.
void refresh_derived(FieldGrid1D& state, const nled::LagrangianModel& model);

/// Time derivatives of (Dx, By) [and the dust conserved variables when
/// coupled], including the optional dissipation term.
struct FieldRhs {
    std::vector<double> dDx, dBy;
};
FieldRhs rhs_fields(const FieldGrid1D& state, const nled::LagrangianModel& model,
                    double dissipation = 0.0, const DustGrid1D* dust = nullptr);

/// One classical RK4 step of dt for the field grid and, when given, the
/// coupled dust grid. Derived fields are refreshed on exit.
void step(FieldGrid1D& state, DustGrid1D* dust, const nled::LagrangianModel& model, double dt,
          double dissipation = 0.0);

struct ProfileSpec {
    std::string name = "gaussian"; // gaussian | raised_cosine | tabulated
    double amplitude = 0.0;
    double width = 0.1;
    double center = 0.5;
    std::vector<std::pair<double, double>> table; // tabulated only
};

std::shared_ptr<const exact::Profile> make_profile(const ProfileSpec& spec);

struct FluidConfig {
    double rho_m0 = 1.0; // uniform proper mass density, > 0
    double rho_e0 = 0.0; // uniform proper charge density
    double u0 = 0.0;     // initial z-velocity, |u0| < 1
};

struct RunConfig {
    nled::LagrangianModel model;
    int n = 128;
    double z0 = 0.0, z1 = 1.0;
    ProfileSpec initial;
    double B0 = 0.0;
    std::optional<FluidConfig> fluid;
    double cfl = 0.5;
    double t_end = 0.0;
    int output_every = 1;
    double dissipation = 0.0;
};

void validate(const RunConfig& config);

struct DiagRecord {
    double t = 0.0;
    double em_energy = 0.0;
    double fluid_mass = 0.0;
    double centroid = 0.0;
    bool centroid_valid = false;
    double max_delta_excursion = 0.0;
    double divT_residual = 0.0;
};

struct Snapshot {
    int step = 0;
    double t = 0.0;
    bool has_fluid = false;
    std::vector<double> z, Ex, By, Dx, X, Y, Delta;
    std::vector<double> rho_m, p, u;
};

struct RunResult {
    RunConfig config;
    double dt = 0.0;
    int steps = 0;
    std::vector<DiagRecord> diagnostics;
    std::vector<Snapshot> snapshots;
    FieldGrid1D final_state;
    std::optional<DustGrid1D> final_dust;
};

/// Initial state sampled from the closed-form traveling-wave solution:
/// D_x = eps0 E(z), B_y = E(z) on the static background B0.
FieldGrid1D initial_state(const RunConfig& config);
DustGrid1D initial_dust(const RunConfig& config);

/// Diagnostics of the current state; divT_residual is filled by run(),
/// which evaluates the centered-in-time discrete divergence of T_total.
DiagRecord diagnostics(const FieldGrid1D& state, const DustGrid1D* dust,
                       const nled::LagrangianModel& model, double t);

using DiagSink = std::function<void(const DiagRecord&)>;
using SnapshotSink = std::function<void(const Snapshot&)>;

/// Execute the configured run. Deterministic for a fixed config. Sinks, when
/// given, receive records as they are produced so partial output survives a
/// mid-run failure.
RunResult run(const RunConfig& config, const DiagSink& diag_sink = nullptr,
              const SnapshotSink& snap_sink = nullptr);

/// Least-squares slope of the (unwrapped) pulse centroid versus time.
/// Throws NumericalFailure for degenerate series (fewer than two valid
/// centroid records, or no time spread).
double measure_phase_speed(const RunResult& result);

/// Closed-form stress-tensor components of the reduced field state, used by
/// the diagnostics and checked against nled::stress_energy in the tests.
struct EmStress {
    double tt, tz, zz;
};
EmStress em_stress(const nled::LagrangianModel& model, double Ex, double By, double B0);

} // namespace nledlab::solver
