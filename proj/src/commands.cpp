#include "fibising/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fibising/dynamics.hpp"
#include "fibising/errors.hpp"
#include "fibising/fermion_oracle.hpp"
#include "fibising/format.hpp"
#include "fibising/fractal.hpp"
#include "fibising/identities.hpp"
#include "fibising/spectrum.hpp"
#include "fibising/tracecore.hpp"

namespace fibising {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string band_rows(const BandSet& bands, int level) {
    std::string out = "level,a,b\n";
    for (const auto& iv : bands.intervals()) {
        out += std::to_string(level) + "," + format_double(iv.lo) + "," + format_double(iv.hi) + "\n";
    }
    return out;
}

json params_json(const RunConfig& c) {
    return {{"J0", c.j0}, {"J1", c.j1}, {"r", c.j0 / c.j1}};
}

json diagnostics_json(const BandDiagnostics& d) {
    return {{"grid_points", d.grid_points},
            {"density", d.density},
            {"retries", d.retries},
            {"extrema", d.extrema},
            {"in_cell_bands", d.in_cell_bands},
            {"closed_tangencies", d.closed_tangencies},
            {"dropped_tangencies", d.dropped_tangencies},
            {"resolution_warning", d.resolution_warning},
            {"warnings", d.warnings}};
}

int resolve_offset(BandLadder& ladder, const RunConfig& c, int k_lo, int k_hi, std::ostream& log) {
    if (c.offset >= 0) return c.offset;
    const auto probed = probe_offset(ladder, k_lo, k_hi);
    if (!probed) {
        log << "warning: no offset N <= 5 makes the covers nest on [" << k_lo << ", " << k_hi
            << "]; using N = 0\n";
    }
    return probed.value_or(0);
}

void write_outputs(const fs::path& dir, const std::map<std::string, std::string>& files) {
    for (const auto& [name, contents] : files) write_file_atomic(dir / name, contents);
}

}  // namespace

void cmd_bands(const RunConfig& c, std::ostream& log) {
    BandLadder ladder(c.params(), c.scan_options());
    const BandResult& level = ladder.level(c.level);
    const int offset = resolve_offset(ladder, c, 1, c.level + 1, log);
    const NestedCover cover = nested_cover(ladder, c.level, offset);
    const BandSet energy = symmetrize_to_energy(cover.sigma);

    json meta;
    meta["params"] = params_json(c);
    meta["level"] = c.level;
    meta["offset"] = offset;
    meta["edge_tol"] = c.edge_tol;
    meta["density"] = c.density;
    meta["s_max"] = c.scan_options().window_for(c.params());
    meta["band"] = {{"count", level.bands.size()},
                    {"length", level.bands.total_length()},
                    {"diagnostics", diagnostics_json(level.diagnostics)}};
    meta["cover"] = {{"count", cover.sigma.size()},
                     {"length", cover.sigma.total_length()},
                     {"nests_next", cover.nests_next},
                     {"nesting_excess", cover.nesting_excess}};
    meta["energy"] = {{"count", energy.size()}, {"length", energy.total_length()}};

    write_outputs(c.output_dir, {{"bands.csv", band_rows(level.bands, c.level)},
                                 {"cover.csv", band_rows(cover.sigma, c.level)},
                                 {"energy.csv", band_rows(energy, c.level)},
                                 {"bands.json", meta.dump(2) + "\n"}});
    log << "level " << c.level << ": " << level.bands.size() << " bands, length "
        << format_double(level.bands.total_length()) << "; cover (N=" << offset << ") "
        << cover.sigma.size() << " intervals, length " << format_double(cover.sigma.total_length())
        << (cover.nests_next ? "" : " [nesting violated]") << "\n";
    for (const auto& w : level.diagnostics.warnings) log << "warning: " << w << "\n";
}

void cmd_converge(const RunConfig& c, std::ostream& log) {
    BandLadder ladder(c.params(), c.scan_options());
    const ConvergenceStudy study = convergence_study(ladder, c.k_min, c.k_max, c.offset);
    std::string csv = "k,hausdorff,length\n";
    for (const auto& row : study.rows) {
        csv += std::to_string(row.k) + "," + (row.hausdorff ? format_double(*row.hausdorff) : "") +
               "," + format_double(row.length) + "\n";
    }
    json meta{{"params", params_json(c)},
              {"k_min", c.k_min},
              {"k_max", c.k_max},
              {"offset", study.offset},
              {"nested", study.nested},
              {"edge_tol", c.edge_tol},
              {"density", c.density}};
    write_outputs(c.output_dir, {{"converge.csv", csv}, {"converge.json", meta.dump(2) + "\n"}});
    log << "offset N=" << study.offset << (study.nested ? "" : " (nesting violated)") << ", "
        << study.rows.size() << " levels\n";
}

void cmd_dim(const RunConfig& c, std::ostream& log) {
    BandLadder ladder(c.params(), c.scan_options());
    const int offset = c.offset >= 0 ? c.offset : 0;
    const BandSet cover = cover_union(ladder, c.level, offset);
    if (cover.empty()) throw NumericError("cover is empty; nothing to measure");
    const DimensionEstimate global = box_dimension(cover);
    WindowSpec spec;
    spec.count = c.windows == 0 ? 8 : c.windows;
    const LocalDimensionProfile profile = local_dimension_profile(cover, spec);

    std::string prof = "center,halfwidth,dim,stderr\n";
    json windows = json::array();
    for (const auto& w : profile.windows) {
        prof += format_double(w.center) + "," + format_double(w.half_width) + "," +
                format_double(w.estimate.value) + "," + format_double(w.estimate.stderr_) + "\n";
        windows.push_back({{"center", w.center},
                           {"intervals", w.intervals},
                           {"low_confidence", w.low_confidence}});
    }
    std::string counts = "eps,N\n";
    for (const auto& [eps, n] : global.counts) counts += format_double(eps) + "," + std::to_string(n) + "\n";

    std::map<std::string, std::string> files{{"dim_profile.csv", prof}, {"dim_counts.csv", counts}};
    json meta{{"params", params_json(c)},
              {"level", c.level},
              {"offset", offset},
              {"global", {{"dim", global.value},
                          {"slope", global.slope},
                          {"stderr", global.stderr_},
                          {"eps_min", global.eps_min},
                          {"eps_max", global.eps_max}}},
              {"windows", windows}};
    if (!c.r_list.empty()) {
        const auto sweep = dimension_vs_parameters(c.j1, c.r_list, c.level, c.scan_options());
        std::string rows = "r,dim,stderr\n";
        for (const auto& p : sweep) {
            rows += format_double(p.r) + "," + format_double(p.estimate.value) + "," +
                    format_double(p.estimate.stderr_) + "\n";
        }
        files.emplace("dim_params.csv", rows);
    }
    files.emplace("dim.json", meta.dump(2) + "\n");
    write_outputs(c.output_dir, files);
    log << "global box dimension " << format_double(global.value) << " +- "
        << format_double(global.stderr_) << " over " << global.counts.size() << " scales\n";
}

double transfer_recursion_error(int k_max, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coupling(0.5, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int k = 1; k <= k_max; ++k) {
        for (int i = 0; i < samples; ++i) {
            const CouplingParams params = CouplingParams::from_ratio(coupling(rng), coupling(rng));
            const double top = 1.0 + std::max(params.j0(), params.j1());
            const SpectralVariable s(unit(rng) * (top * top + 1.0));
            const double direct = direct_transfer_product(params, k, s).half_trace();
            const TraceValue rec = trace_value(params, s, k, 1e300);
            if (rec.overflowed()) throw NumericError("trace recursion overflowed in the product check");
            worst = std::max(worst, std::abs(direct - rec.value) / std::max(1.0, std::abs(rec.value)));
        }
    }
    return worst;
}

void cmd_oracle(const RunConfig& c, std::ostream& log) {
    if (c.level < 3) throw ConfigError("oracle needs F_k >= 3, i.e. level >= 3");
    if (c.level > 17) throw ConfigError("oracle matrices are dense; level must be <= 17");
    const CouplingParams params = c.params();
    const FermionMatrices m = build_matrices(params.dual(), c.level);
    const OracleSpectrum spec = oracle_spectrum(m);
    const double residual = eigen_residual(m, spec);
    const BandResult bands = band_set(params, c.level + 1, c.scan_options());
    const ContainmentReport report = containment_check(spec, bands.bands, c.inflate);
    const double recursion = transfer_recursion_error(c.oracle_k_max, c.oracle_samples, c.seed);

    std::string csv = "mu,s,E_plus,E_minus\n";
    for (std::size_t i = 0; i < spec.mu.size(); ++i) {
        const double e = 2.0 * std::sqrt(spec.s_values[i]);
        csv += format_double(spec.mu[i]) + "," + format_double(spec.s_values[i]) + "," +
               format_double(e) + "," + format_double(-e) + "\n";
    }
    json meta{{"params", params_json(c)},
              {"level", c.level},
              {"sites", m.n},
              {"band_level", c.level + 1},
              {"inflate", c.inflate},
              {"fraction", report.fraction()},
              {"inside", report.inside},
              {"total", report.total},
              {"violators", report.violators},
              {"eigen_residual", residual},
              {"max_relative_recursion_error", recursion},
              {"recursion_k_max", c.oracle_k_max}};
    write_outputs(c.output_dir, {{"oracle.csv", csv}, {"containment.json", meta.dump(2) + "\n"}});
    log << "containment " << report.inside << "/" << report.total << " = "
        << format_double(report.fraction()) << " (delta " << format_double(c.inflate) << ")\n";
    log << "eigen residual " << format_double(residual) << "\n";
    log << "max relative recursion error (k <= " << c.oracle_k_max << ") "
        << format_double(recursion) << "\n";
}

void cmd_orbit(const RunConfig& c, std::ostream& log) {
    const OrbitBudget budget = c.budget();
    const CouplingParams params = c.params();
    const GridSpec grid{c.grid_lo, c.grid_hi, c.grid_points};
    const auto field = escape_time_field(params, grid, budget, c.threads);
    std::string csv = "s,status,steps\n";
    for (const auto& e : field) {
        csv += format_double(e.s) + "," + (e.verdict.escaped() ? "E" : "U") + "," +
               std::to_string(e.verdict.escaped() ? e.verdict.step : e.verdict.steps_used) + "\n";
    }
    std::map<std::string, std::string> files{{"escape.csv", csv}};
    if (!c.orbit_point.empty()) {
        const TracePoint p{c.orbit_point[0], c.orbit_point[1], c.orbit_point[2]};
        const OrbitVerdict v = classify_orbit(p, budget);
        std::string dump = "step,x,y,z,I\n";
        const auto pts = orbit_points(p, c.dump_steps, c.overflow_guard);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            dump += std::to_string(i) + "," + format_double(pts[i].x) + "," + format_double(pts[i].y) +
                    "," + format_double(pts[i].z) + "," + format_double(fricke_vogt(pts[i])) + "\n";
        }
        files.emplace("orbit.csv", dump);
        if (v.escaped()) {
            log << "orbit: Escaped at step " << v.step << "\n";
        } else {
            log << "orbit: UndecidedBounded after " << v.steps_used << " steps\n";
        }
    }
    write_outputs(c.output_dir, files);
    std::size_t escaped = 0;
    for (const auto& e : field) escaped += e.verdict.escaped() ? 1 : 0;
    log << "escape field: " << escaped << " escaped of " << field.size() << "\n";
}

void cmd_surface(const RunConfig& c, std::ostream& log) {
    MeshWindow window{c.window_lo, c.window_hi, c.window_lo, c.window_hi};
    std::string csv = "x,y,z,V\n";
    std::size_t rows = 0;
    const bool empty_window = c.window_hi <= c.window_lo;
    for (double v : c.surface_levels) {
        if (empty_window) break;
        for (const auto& p : surface_mesh(SurfaceLevel{v}, c.surface_resolution, window)) {
            csv += format_double(p.x) + "," + format_double(p.y) + "," + format_double(p.z) + "," +
                   format_double(p.level) + "\n";
            ++rows;
        }
    }
    write_outputs(c.output_dir, {{"surface.csv", csv}});
    log << rows << " surface points\n";
}

int cmd_check(const RunConfig& c, std::ostream& log, bool inject_fault) {
    IdentityOptions opts;
    opts.seed = c.seed;
    TraceMapPair map;
    if (inject_fault) {
        map.forward = [](const TracePoint& p) { return TracePoint{2.0 * p.x * p.y + p.z, p.x, p.y}; };
    }
    const auto checks = run_identity_suite(opts, map);
    bool ok = true;
    for (const auto& chk : checks) {
        log << (chk.passed() ? "PASS " : "FAIL ") << chk.name << "  residual "
            << format_double(chk.residual) << "  threshold " << format_double(chk.threshold) << "\n";
        ok = ok && chk.passed();
    }
    return ok ? kExitOk : kExitCheckFailed;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectra of the Fibonacci quantum Ising chain via the trace map"};
    app.require_subcommand(1);
    std::string config_path;
    std::map<std::string, std::optional<std::string>> overrides;
    bool inject_fault = false;

    const char* names[][2] = {
        {"bands", "band sets of one level, their cover and the energy-axis image"},
        {"converge", "Hausdorff convergence of the nested covers"},
        {"dim", "box-counting dimension: global, windowed, and over r"},
        {"oracle", "free-fermion oracle spectrum, containment, product check"},
        {"orbit", "escape-time field and single-orbit dump"},
        {"surface", "invariant-surface meshes"},
        {"check", "identity suite of the trace map"},
    };
    std::vector<CLI::App*> subs;
    for (auto& [name, help] : names) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("-c,--config", config_path, "flat key = value config file");
        for (const auto& key : config_keys()) {
            sub->add_option_function<std::string>(
                "--" + key, [&overrides, key](const std::string& v) { overrides[key] = v; },
                config_unit(key));
        }
        subs.push_back(sub);
    }
    subs.back()->add_flag("--inject-sign-fault", inject_fault)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        std::ostringstream msg;
        app.exit(e, msg, msg);
        err << msg.str();
        return kExitConfigError;
    }

    RunConfig config;
    try {
        if (!config_path.empty()) config = load_config(config_path);
        for (const auto& key : config_keys()) {
            auto it = overrides.find(key);
            if (it != overrides.end() && it->second) set_config_value(config, key, *it->second);
        }
        config.validate();
    } catch (const Error& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }

    try {
        const std::string which = app.get_subcommands().front()->get_name();
        if (which == "bands") cmd_bands(config, out);
        else if (which == "converge") cmd_converge(config, out);
        else if (which == "dim") cmd_dim(config, out);
        else if (which == "oracle") cmd_oracle(config, out);
        else if (which == "orbit") cmd_orbit(config, out);
        else if (which == "surface") cmd_surface(config, out);
        else if (which == "check") return cmd_check(config, out, inject_fault);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumericError;
    }
    return kExitOk;
}

}  // namespace fibising
