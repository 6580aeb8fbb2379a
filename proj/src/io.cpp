#include "nledlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace nledlab::io {

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string diag_ndjson_line(const solver::DiagRecord& rec) {
    std::string out = "{\"t\":" + format_double(rec.t);
    out += ",\"em_energy\":" + format_double(rec.em_energy);
    out += ",\"fluid_mass\":" + format_double(rec.fluid_mass);
    out += ",\"centroid\":" + (rec.centroid_valid ? format_double(rec.centroid) : std::string("null"));
    out += ",\"max_delta_excursion\":" + format_double(rec.max_delta_excursion);
    out += ",\"divT_residual\":" + format_double(rec.divT_residual);
    out += "}";
    return out;
}

void write_snapshot_csv(std::ostream& os, const solver::Snapshot& snap) {
    os << "z,E_x,B_y,D_x,X,Y,Delta";
    if (snap.has_fluid) os << ",rho_m,p,u";
    os << "\n";
    for (std::size_t i = 0; i < snap.z.size(); ++i) {
        os << format_double(snap.z[i]) << ',' << format_double(snap.Ex[i]) << ','
           << format_double(snap.By[i]) << ',' << format_double(snap.Dx[i]) << ','
           << format_double(snap.X[i]) << ',' << format_double(snap.Y[i]) << ','
           << format_double(snap.Delta[i]);
        if (snap.has_fluid)
            os << ',' << format_double(snap.rho_m[i]) << ',' << format_double(snap.p[i]) << ','
               << format_double(snap.u[i]);
        os << "\n";
    }
}

Summary summarize(const solver::RunResult& result) {
    Summary s;
    try {
        s.phase_speed = solver::measure_phase_speed(result);
    } catch (const NumericalFailure&) {
        s.phase_speed.reset();
    }
    if (!result.diagnostics.empty()) {
        const auto& first = result.diagnostics.front();
        const auto& last = result.diagnostics.back();
        if (first.em_energy != 0.0)
            s.energy_drift = std::abs(last.em_energy - first.em_energy) / std::abs(first.em_energy);
        s.final_divT_residual = last.divT_residual;
        s.final_max_delta_excursion = last.max_delta_excursion;
    }
    return s;
}

std::string summary_json(const Summary& summary) {
    std::string out = "{\n";
    out += "  \"phase_speed\": " +
           (summary.phase_speed ? format_double(*summary.phase_speed) : std::string("null")) + ",\n";
    out += "  \"energy_drift\": " + format_double(summary.energy_drift) + ",\n";
    out += "  \"final_divT_residual\": " + format_double(summary.final_divT_residual) + ",\n";
    out += "  \"final_max_delta_excursion\": " + format_double(summary.final_max_delta_excursion);
    if (summary.error) {
        out += ",\n  \"error\": \"";
        for (char c : *summary.error) {
            if (c == '"' || c == '\\') out += '\\';
            if (c == '\n') {
                out += "\\n";
                continue;
            }
            out += c;
        }
        out += "\"";
    }
    out += "\n}\n";
    return out;
}

} // namespace nledlab::io
