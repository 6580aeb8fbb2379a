// nledlab: command-line front end for the nonlinear-electrodynamics lab.
// Subcommands: point, exact, simulate, convergence.
// Exit codes: 0 success, 2 configuration error, 3 numerical/physical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include "nledlab/io.hpp"
#include "nledlab/solver.hpp"

using json = nlohmann::json;
using namespace nledlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

void expect_keys(const json& obj, const std::vector<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

double need_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ConfigError(where + " is missing '" + key + "'");
    if (!obj[key].is_number()) throw ConfigError(where + "." + key + " must be a number");
    return obj[key].get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw ConfigError(where + "." + key + " must be a number");
    return obj[key].get<double>();
}

std::string need_string(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_string())
        throw ConfigError(where + " needs string '" + key + "'");
    return obj[key].get<std::string>();
}

nled::LagrangianModel parse_model_kind(const std::string& kind, double kappa) {
    if (kind == "maxwell") return nled::maxwell();
    if (kind == "born_infeld" || kind == "borninfeld") return nled::born_infeld(kappa);
    throw ConfigError("model.kind must be 'maxwell' or 'born_infeld'");
}

struct OutputOptions {
    std::string directory = "out";
    bool ndjson = true, csv = true, summary = true;
};

struct ParsedConfig {
    solver::RunConfig run;
    OutputOptions output;
};

ParsedConfig parse_config(const json& root) {
    expect_keys(root, {"model", "grid", "initial", "fluid", "run", "output"}, "config");
    ParsedConfig out;

    if (!root.contains("model")) throw ConfigError("config is missing 'model'");
    const auto& model = root["model"];
    expect_keys(model, {"kind", "kappa"}, "model");
    out.run.model = parse_model_kind(need_string(model, "kind", "model"),
                                     number_or(model, "kappa", 0.0, "model"));

    if (!root.contains("grid")) throw ConfigError("config is missing 'grid'");
    const auto& grid = root["grid"];
    expect_keys(grid, {"n", "z0", "z1"}, "grid");
    const double n_raw = need_number(grid, "n", "grid");
    if (n_raw != std::floor(n_raw)) throw ConfigError("grid.n must be an integer");
    out.run.n = static_cast<int>(n_raw);
    out.run.z0 = need_number(grid, "z0", "grid");
    out.run.z1 = need_number(grid, "z1", "grid");

    if (!root.contains("initial")) throw ConfigError("config is missing 'initial'");
    const auto& initial = root["initial"];
    expect_keys(initial, {"profile", "amplitude", "width", "center", "B0", "table"}, "initial");
    out.run.initial.name = need_string(initial, "profile", "initial");
    out.run.initial.amplitude = need_number(initial, "amplitude", "initial");
    out.run.initial.width = number_or(initial, "width", 0.1, "initial");
    out.run.initial.center = number_or(initial, "center", 0.5, "initial");
    out.run.B0 = number_or(initial, "B0", 0.0, "initial");
    if (initial.contains("table")) {
        if (out.run.initial.name != "tabulated")
            throw ConfigError("initial.table is only valid for the tabulated profile");
        if (!initial["table"].is_array()) throw ConfigError("initial.table must be an array");
        for (const auto& row : initial["table"]) {
            if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
                throw ConfigError("initial.table rows must be [s, value] number pairs");
            out.run.initial.table.emplace_back(row[0].get<double>(), row[1].get<double>());
        }
    }

    if (root.contains("fluid") && !root["fluid"].is_null()) {
        const auto& fluid = root["fluid"];
        expect_keys(fluid, {"eos", "gamma", "rho_m0", "rho_e0", "u0"}, "fluid");
        const std::string eos = need_string(fluid, "eos", "fluid");
        if (eos == "ideal_gamma")
            throw ConfigError("the 1+1D solver couples cold dust only; fluid.eos must be 'cold_dust'");
        if (eos != "cold_dust") throw ConfigError("fluid.eos must be 'cold_dust'");
        solver::FluidConfig fc;
        fc.rho_m0 = need_number(fluid, "rho_m0", "fluid");
        fc.rho_e0 = number_or(fluid, "rho_e0", 0.0, "fluid");
        fc.u0 = number_or(fluid, "u0", 0.0, "fluid");
        out.run.fluid = fc;
    }

    if (!root.contains("run")) throw ConfigError("config is missing 'run'");
    const auto& run = root["run"];
    expect_keys(run, {"cfl", "t_end", "output_every", "dissipation"}, "run");
    out.run.cfl = number_or(run, "cfl", 0.5, "run");
    out.run.t_end = need_number(run, "t_end", "run");
    const double oe = number_or(run, "output_every", 1.0, "run");
    if (oe != std::floor(oe) || oe < 1) throw ConfigError("run.output_every must be a positive integer");
    out.run.output_every = static_cast<int>(oe);
    out.run.dissipation = number_or(run, "dissipation", 0.0, "run");

    if (root.contains("output")) {
        const auto& output = root["output"];
        expect_keys(output, {"directory", "formats"}, "output");
        if (output.contains("directory")) out.output.directory = need_string(output, "directory", "output");
        if (output.contains("formats")) {
            if (!output["formats"].is_array()) throw ConfigError("output.formats must be an array");
            out.output.ndjson = out.output.csv = out.output.summary = false;
            for (const auto& f : output["formats"]) {
                const std::string name = f.get<std::string>();
                if (name == "ndjson")
                    out.output.ndjson = true;
                else if (name == "csv")
                    out.output.csv = true;
                else if (name == "summary")
                    out.output.summary = true;
                else
                    throw ConfigError("unknown output format '" + name + "'");
            }
        }
    }

    solver::validate(out.run);
    return out;
}

ParsedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(root);
}

std::string output_directory(const OutputOptions& opts) {
    if (const char* env = std::getenv("NLEDLAB_OUTPUT_DIR")) return env;
    return opts.directory;
}

// ---------------------------------------------------------------------------

int cmd_point(const std::array<double, 3>& e, const std::array<double, 3>& b,
              const std::string& kind, double kappa, double eps0) {
    nled::LagrangianModel model = parse_model_kind(kind, kappa);
    model.eps0 = eps0;
    if (!(eps0 > 0)) throw ConfigError("eps0 must be positive");
    if (kappa < 0) throw ConfigError("kappa must be nonnegative");

    const auto F = forms::two_form_from_eb(e, b);
    const double X = forms::invariant_X(F);
    const double Y = forms::invariant_Y(F);
    const auto bundle = nled::eval_scalars(model, X, Y); // throws FieldBoundExceeded at the bound
    const auto G = nled::constitutive(model, F);
    const auto T = nled::stress_energy(model, F);

    const auto fd = io::format_double;
    std::string outp = "{\n";
    outp += "  \"X\": " + fd(X) + ",\n";
    outp += "  \"Y\": " + fd(Y) + ",\n";
    outp += "  \"Delta\": " + fd(bundle.Delta) + ",\n";
    outp += "  \"L\": " + fd(bundle.L) + ",\n";
    outp += "  \"M\": " + fd(bundle.M) + ",\n";
    outp += "  \"N\": " + fd(bundle.N) + ",\n";
    const char* names[6] = {"tx", "ty", "tz", "xy", "xz", "yz"};
    outp += "  \"G\": {";
    for (int i = 0; i < 6; ++i) {
        outp += std::string("\"") + names[i] + "\": " + fd(G[i]);
        if (i < 5) outp += ", ";
    }
    outp += "},\n  \"T\": [";
    for (int a = 0; a < 4; ++a) {
        outp += "[";
        for (int c = 0; c < 4; ++c) {
            outp += fd(T(a, c));
            if (c < 3) outp += ", ";
        }
        outp += a < 3 ? "], " : "]";
    }
    outp += "]\n}\n";
    std::cout << outp;
    return kExitOk;
}

int cmd_exact(double L0, double B, double kappa, double timing_resolution,
              const std::string& interpretation) {
    if (interpretation != "tesla" && interpretation != "fcomponent")
        throw ConfigError("--interpretation must be 'tesla' or 'fcomponent'");
    if (!(L0 > 0)) throw ConfigError("--L0 must be positive");
    if (!(B >= 0)) throw ConfigError("--B must be nonnegative");
    if (!(kappa >= 0)) throw ConfigError("--kappa must be nonnegative");
    if (!(timing_resolution >= 0)) throw ConfigError("--timing-resolution must be nonnegative");
    const exact::ExperimentDesign design{L0, B, kappa, timing_resolution};
    const auto r = exact::make_delay_report(design);

    const auto fd = io::format_double;
    std::string outp = "{\n";
    outp += "  \"interpretation\": \"" + interpretation + "\",\n";
    outp += "  \"v_over_c\": {\"tesla\": " + fd(r.v_over_c_tesla) +
            ", \"fcomponent\": " + fd(r.v_over_c_fcomponent) + "},\n";
    outp += "  \"tau_exact\": {\"tesla\": " + fd(r.tau_exact_tesla) +
            ", \"fcomponent\": " + fd(r.tau_exact_fcomponent) + "},\n";
    outp += "  \"tau_paper_linear\": " + fd(r.tau_paper_linear) + ",\n";
    outp += "  \"kappa_electron_radius\": " + fd(r.kappa_electron_radius) + ",\n";
    outp += "  \"kappa_bound\": {\"tesla\": " + fd(r.kappa_bound_tesla) +
            ", \"fcomponent\": " + fd(r.kappa_bound_fcomponent) + "},\n";
    outp += std::string("  \"formulas_disagree\": ") + (r.formulas_disagree ? "true" : "false") + ",\n";
    outp += "  \"linear_over_exact_tesla\": " + fd(r.linear_over_exact_tesla) + "\n}\n";
    std::cout << outp;
    return kExitOk;
}

int cmd_simulate(const std::string& config_path) {
    const ParsedConfig cfg = load_config(config_path);
    const std::filesystem::path dir = output_directory(cfg.output);
    std::filesystem::create_directories(dir);

    std::ofstream ndjson;
    if (cfg.output.ndjson) {
        ndjson.open(dir / "diagnostics.ndjson");
        if (!ndjson) throw ConfigError("cannot write to output directory '" + dir.string() + "'");
    }

    std::vector<solver::DiagRecord> seen;
    const auto diag_sink = [&](const solver::DiagRecord& rec) {
        seen.push_back(rec);
        if (cfg.output.ndjson) {
            ndjson << io::diag_ndjson_line(rec) << "\n";
            ndjson.flush();
        }
    };
    const auto snap_sink = [&](const solver::Snapshot& snap) {
        if (!cfg.output.csv) return;
        std::ofstream csv(dir / ("snapshot_" + std::to_string(snap.step) + ".csv"));
        io::write_snapshot_csv(csv, snap);
    };

    const auto write_summary = [&](const io::Summary& s) {
        if (!cfg.output.summary) return;
        std::ofstream os(dir / "summary.json");
        os << io::summary_json(s);
    };

    try {
        const auto result = solver::run(cfg.run, diag_sink, snap_sink);
        write_summary(io::summarize(result));
    } catch (const Error& e) {
        // diagnostics and snapshots produced so far are already on disk
        solver::RunResult partial;
        partial.config = cfg.run;
        partial.diagnostics = seen;
        io::Summary s = io::summarize(partial);
        s.error = e.what();
        write_summary(s);
        throw;
    }
    return kExitOk;
}

int cmd_convergence(const std::string& config_path, int levels) {
    if (levels < 3) throw ConfigError("convergence needs at least 3 levels");
    const ParsedConfig cfg = load_config(config_path);
    if (!(cfg.run.t_end > 0)) throw ConfigError("convergence needs t_end > 0");

    std::vector<int> ns;
    std::vector<double> errors;
    for (int lvl = 0; lvl < levels; ++lvl) {
        solver::RunConfig rc = cfg.run;
        rc.n = cfg.run.n << lvl;
        rc.output_every = 1 << 28;
        const auto result = solver::run(rc);

        const auto profile = solver::make_profile(rc.initial);
        const double v = exact::phase_speed(rc.model.kappa, rc.B0);
        const double L = rc.z1 - rc.z0;
        double acc = 0.0;
        const auto& f = result.final_state;
        for (int i = 0; i < rc.n; ++i) {
            double w = f.grid.z(i) - v * rc.t_end;
            while (w < rc.z0) w += L;
            while (w >= rc.z1) w -= L;
            const double amp = profile->value(w);
            const double dD = f.Dx[static_cast<std::size_t>(i)] - rc.model.eps0 * amp;
            const double dB = f.By[static_cast<std::size_t>(i)] - amp;
            acc += dD * dD + dB * dB;
        }
        ns.push_back(rc.n);
        errors.push_back(std::sqrt(acc / rc.n));
    }

    double order_sum = 0.0;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i)
        order_sum += std::log2(errors[i] / errors[i + 1]);
    const double fitted = order_sum / static_cast<double>(errors.size() - 1);

    const auto fd = io::format_double;
    std::string outp = "{\n  \"levels\": [";
    for (std::size_t i = 0; i < ns.size(); ++i) {
        outp += "{\"n\": " + std::to_string(ns[i]) + ", \"l2_error\": " + fd(errors[i]) + "}";
        if (i + 1 < ns.size()) outp += ", ";
    }
    outp += "],\n  \"fitted_order\": " + fd(fitted) + "\n}\n";
    std::cout << outp;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nledlab: nonlinear vacuum electrodynamics laboratory"};
    app.require_subcommand(1);

    // point
    auto* point = app.add_subcommand("point", "evaluate the field bundle at one (e, b) point");
    std::vector<double> e_in{0, 0, 0}, b_in{0, 0, 0};
    std::string kind = "born_infeld";
    double kappa = 0.0, eps0 = 1.0;
    point->add_option("--e", e_in, "electric field components (3 values)")->expected(3);
    point->add_option("--b", b_in, "magnetic field components (3 values)")->expected(3);
    point->add_option("--kind", kind, "model kind: maxwell | born_infeld");
    point->add_option("--kappa", kappa, "Born-Infeld coupling (natural units)");
    point->add_option("--eps0", eps0, "vacuum permittivity (natural units)");

    // exact
    auto* exact_cmd = app.add_subcommand("exact", "closed-form delay and coupling-bound report");
    double L0 = 1.0, B = 0.0, kappa_si = 0.0, timing = 0.0;
    std::string interpretation = "tesla";
    exact_cmd->add_option("--L0", L0, "magnet length in metres")->required();
    exact_cmd->add_option("--B", B, "static field in tesla")->required();
    exact_cmd->add_option("--kappa", kappa_si, "SI coupling kappa")->required();
    exact_cmd->add_option("--timing-resolution", timing, "timing resolution in seconds");
    exact_cmd->add_option("--interpretation", interpretation, "B interpretation: tesla | fcomponent");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run a 1+1D evolution from a JSON config");
    std::string sim_config;
    simulate->add_option("config", sim_config, "path to JSON run configuration")->required();

    // convergence
    auto* convergence = app.add_subcommand("convergence", "grid-refinement study against the exact solution");
    std::string conv_config;
    int levels = 3;
    convergence->add_option("config", conv_config, "path to JSON run configuration")->required();
    convergence->add_option("--levels", levels, "number of refinement levels (>= 3)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (point->parsed())
            return cmd_point({e_in[0], e_in[1], e_in[2]}, {b_in[0], b_in[1], b_in[2]}, kind, kappa, eps0);
        if (exact_cmd->parsed()) return cmd_exact(L0, B, kappa_si, timing, interpretation);
        if (simulate->parsed()) return cmd_simulate(sim_config);
        if (convergence->parsed()) return cmd_convergence(conv_config, levels);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const FieldBoundExceeded& e) {
        std::cerr << "field bound error: " << e.what()
                  << " (field strength beyond the Born-Infeld bound)\n";
        return kExitRuntime;
    } catch (const Error& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitConfig;
}
