#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "nledlab/solver.hpp"

// Plot-ready serialization of run output. All floating-point values are
// written with 17 significant digits so the reference path reproduces
// byte-identical files. NDJSON rows are self-contained JSON objects with a
// fixed key order; CSV columns are fixed and stable.

namespace nledlab::io {

/// "%.17g" rendering used across every writer.
std::string format_double(double v);

/// One diagnostics row: keys t, em_energy, fluid_mass, centroid,
/// max_delta_excursion, divT_residual. An undefined centroid serializes as
/// null.
std::string diag_ndjson_line(const solver::DiagRecord& rec);

/// Header: z,E_x,B_y,D_x,X,Y,Delta[,rho_m,p,u].
void write_snapshot_csv(std::ostream& os, const solver::Snapshot& snap);

struct Summary {
    std::optional<double> phase_speed;
    double energy_drift = 0.0;
    double final_divT_residual = 0.0;
    double final_max_delta_excursion = 0.0;
    std::optional<std::string> error;
};

Summary summarize(const solver::RunResult& result);
std::string summary_json(const Summary& summary);

} // namespace nledlab::io
