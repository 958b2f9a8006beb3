// Command-line front end. Subcommands:
//   eig       spectrum table for the nonlocal operator with asymptotic comparisons
//   gl        reaction-diffusion run with the energy-monitor suite
//   fp        vanishing-viscosity study: per-eps traces, Cauchy gaps, weak residuals
//   mc        killed jump-process ensemble compared against a PDE density
//   gronwall  integral-inequality check over a trajectory CSV
//   accept    the full acceptance battery
// Exit codes: 0 success, 1 monitor failure, 2 usage/config error, 3 numerical
// failure. Every run emits exactly one machine-readable manifest; CSV output
// is byte-identical across re-runs with the same config and seed.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "nonlocal/acceptance.hpp"
#include "nonlocal/calculus.hpp"
#include "nonlocal/csv.hpp"
#include "nonlocal/drift.hpp"
#include "nonlocal/eigen.hpp"
#include "nonlocal/errors.hpp"
#include "nonlocal/fp_monitors.hpp"
#include "nonlocal/fp_solver.hpp"
#include "nonlocal/gl_monitors.hpp"
#include "nonlocal/gl_solver.hpp"
#include "nonlocal/gronwall.hpp"
#include "nonlocal/grid.hpp"
#include "nonlocal/kernel.hpp"
#include "nonlocal/nonlinearity.hpp"
#include "nonlocal/operator.hpp"
#include "nonlocal/stable_mc.hpp"

namespace {

using json = nlohmann::json;
using namespace nonlocal;

constexpr const char* kVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Config plumbing. A config is one flat JSON object; unknown keys are a hard
// error so a typo in a parameter name cannot silently run the default.

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file " + path);
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error("config " + path + ": " + e.what());
    }
    if (!cfg.is_object()) throw config_error("config " + path + ": top-level value must be a JSON object");
    return cfg;
}

void reject_unknown_keys(const json& cfg, const std::vector<std::string>& allowed, const std::string& cmd) {
    for (const auto& item : cfg.items()) {
        bool ok = false;
        for (const auto& key : allowed)
            if (item.key() == key) {
                ok = true;
                break;
            }
        if (!ok) {
            std::string list;
            for (std::size_t i = 0; i < allowed.size(); ++i) list += (i ? ", " : "") + allowed[i];
            throw config_error("config key '" + item.key() + "' is not recognized by '" + cmd +
                               "' (allowed: " + list + ")");
        }
    }
}

double get_number(const json& cfg, const std::string& key, double fallback) {
    const auto it = cfg.find(key);
    if (it == cfg.end()) return fallback;
    if (!it->is_number()) throw config_error("config key '" + key + "': expected a number");
    return it->get<double>();
}

std::size_t get_size(const json& cfg, const std::string& key, std::size_t fallback) {
    const auto it = cfg.find(key);
    if (it == cfg.end()) return fallback;
    if (!it->is_number_integer() || it->get<long long>() < 0)
        throw config_error("config key '" + key + "': expected a non-negative integer");
    return static_cast<std::size_t>(it->get<long long>());
}

std::string get_string(const json& cfg, const std::string& key, const std::string& fallback) {
    const auto it = cfg.find(key);
    if (it == cfg.end()) return fallback;
    if (!it->is_string()) throw config_error("config key '" + key + "': expected a string");
    return it->get<std::string>();
}

// ---------------------------------------------------------------------------
// Output plumbing.

std::string prepare_out_dir(std::string dir, const std::string& cmd) {
    if (dir.empty()) dir = "runs/" + cmd;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory " + dir + ": " + ec.message());
    return dir;
}

struct Manifest {
    json doc;
    bool all_pass = true;

    Manifest(const std::string& cmd, json resolved_config) {
        doc["command"] = cmd;
        doc["version"] = kVersion;
        doc["config"] = std::move(resolved_config);
        doc["monitors"] = json::object();
        doc["outputs"] = json::array();
    }
    void monitor(const std::string& name, bool pass, const json& detail = {}) {
        json entry;
        entry["pass"] = pass;
        if (!detail.is_null()) entry["detail"] = detail;
        doc["monitors"][name] = entry;
        if (!pass) all_pass = false;
    }
    void output(const std::string& file) { doc["outputs"].push_back(file); }
};

void write_manifest(Manifest& m, const std::string& dir, const std::string& cmd, double wall_seconds) {
    m.doc["wall_clock_seconds"] = wall_seconds;
    const std::string path = dir + "/" + cmd + "_manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out << m.doc.dump(2) << "\n";
    if (!out) throw io_error("write failed for " + path);
}

// ---------------------------------------------------------------------------
// Shared presets.

Field sine_field(const Grid1D& grid, double amplitude, std::size_t mode) {
    Field u(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i)
        u[i] = amplitude * std::sin(static_cast<double>(mode) * std::numbers::pi * grid.node(i));
    return u;
}

Field make_initial(const Grid1D& grid, const std::string& preset, double amplitude, std::size_t mode) {
    if (preset == "zero") return Field(grid.n);
    if (preset == "sine") return sine_field(grid, amplitude, mode);
    if (preset == "arch")  // mass-one arch (pi/2) sin(pi x), the density-style default
        return sine_field(grid, std::numbers::pi / 2.0, 1);
    throw config_error("unknown initial-data preset '" + preset + "' (allowed: sine, zero, arch)");
}

Drift make_drift(const Grid1D& grid, const std::string& preset, double amplitude, std::size_t mode) {
    if (preset == "zero") return Drift::zero(grid);
    if (preset == "sine") {
        const double w = static_cast<double>(mode) * std::numbers::pi;
        return Drift::from_function(
            grid, [=](double x) { return amplitude * std::sin(w * x); }, std::abs(amplitude) * w,
            std::abs(amplitude) * w * w);
    }
    throw config_error("unknown drift preset '" + preset + "' (allowed: zero, sine)");
}

std::vector<std::string> wide_header(std::size_t n) {
    std::vector<std::string> header;
    header.reserve(n + 1);
    header.push_back("t");
    for (std::size_t i = 0; i < n; ++i) header.push_back("u_" + std::to_string(i + 1));
    return header;
}

// ---------------------------------------------------------------------------
// eig: spectrum table with the two asymptotic comparison columns.

int cmd_eig(const std::string& config_path, std::string out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    json cfg = load_config(config_path);
    reject_unknown_keys(cfg, {"alpha", "n", "out"}, "eig");
    const double alpha = get_number(cfg, "alpha", 1.0);
    const std::size_t n = get_size(cfg, "n", 255);
    if (out_dir.empty()) out_dir = get_string(cfg, "out", "");
    out_dir = prepare_out_dir(out_dir, "eig");

    const Grid1D grid(n);
    const NonlocalOperator op = assemble_operator(grid, KernelSpec::normalized(alpha));
    const EigenDecomposition eig = eigendecompose(op);

    std::vector<std::vector<double>> rows;
    rows.reserve(n);
    for (std::size_t k = 0; k < n; ++k)
        rows.push_back({static_cast<double>(k + 1), eig.eigenvalues[k], asymptotic_eigenvalue(alpha, k + 1),
                        corrected_asymptotic_eigenvalue(alpha, k + 1)});
    write_csv(out_dir + "/spectrum.csv", {"k", "lambda", "half_integer_asymptotic", "pi_corrected_asymptotic"},
              rows);

    json resolved{{"alpha", alpha}, {"n", n}, {"out", out_dir}};
    Manifest m("eig", resolved);
    m.output("spectrum.csv");
    m.monitor("spectrum_positive_increasing", eig.eigenvalues.front() > 0.0 &&
                                                  std::is_sorted(eig.eigenvalues.begin(), eig.eigenvalues.end()));
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(m, out_dir, "eig", wall);
    std::cout << "eig: " << n << " eigenvalues written to " << out_dir << "/spectrum.csv\n";
    return m.all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// gl: one monitored reaction-diffusion run.

int cmd_gl(const std::string& config_path, std::string out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    json cfg = load_config(config_path);
    reject_unknown_keys(cfg,
                        {"alpha", "n", "dt", "T", "variant", "u0", "amplitude", "mode", "forcing_amplitude",
                         "forcing_mode", "snapshot_every", "out"},
                        "gl");
    const double alpha = get_number(cfg, "alpha", 0.8);
    const std::size_t n = get_size(cfg, "n", 255);
    const std::string variant = get_string(cfg, "variant", "cubic");
    const std::string u0_preset = get_string(cfg, "u0", "sine");
    const double amplitude = get_number(cfg, "amplitude", 1.0);
    const std::size_t mode = get_size(cfg, "mode", 1);
    GLConfig gl;
    gl.dt = get_number(cfg, "dt", 1e-3);
    gl.T_final = get_number(cfg, "T", 10.0);
    gl.snapshot_every = get_size(cfg, "snapshot_every", 0);
    if (out_dir.empty()) out_dir = get_string(cfg, "out", "");
    out_dir = prepare_out_dir(out_dir, "gl");

    const Grid1D grid(n);
    const GLSolver solver(assemble_operator(grid, KernelSpec::normalized(alpha)));
    const Field u0 = make_initial(grid, u0_preset, amplitude, mode);

    Nonlinearity nl = Nonlinearity::cubic();
    if (variant == "cubic") {
        nl = Nonlinearity::cubic();
    } else if (variant == "cubic_quadratic") {
        nl = Nonlinearity::cubic_quadratic();
    } else if (variant == "linear_forced") {
        nl = Nonlinearity::linear_forced(sine_field(grid, get_number(cfg, "forcing_amplitude", 0.3),
                                                    get_size(cfg, "forcing_mode", 2)));
    } else {
        throw config_error("unknown variant '" + variant + "' (allowed: cubic, cubic_quadratic, linear_forced)");
    }

    const GlobalRun run = solver.run_global(u0, nl, gl);
    const EnergyTrace& tr = run.trace;

    std::vector<std::vector<double>> trace_rows;
    trace_rows.reserve(tr.t.size());
    for (std::size_t m = 0; m < tr.t.size(); ++m)
        trace_rows.push_back({tr.t[m], tr.l2_sq[m], tr.seminorm_sq[m], tr.halpha_sq[m], tr.l4[m], tr.f_sq[m],
                              tr.window_l2[m], tr.window_seminorm[m], tr.window_halpha[m], tr.window_f[m]});
    write_csv(out_dir + "/gl_trace.csv",
              {"t", "l2_sq", "seminorm_sq", "halpha_sq", "l4", "f_sq", "window_l2", "window_seminorm",
               "window_halpha", "window_f"},
              trace_rows);

    std::vector<std::vector<double>> final_rows;
    final_rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) final_rows.push_back({grid.node(i), run.final_state[i]});
    write_csv(out_dir + "/gl_final.csv", {"x", "u"}, final_rows);

    json resolved{{"alpha", alpha},         {"n", n},
                  {"dt", gl.dt},            {"T", gl.T_final},
                  {"variant", variant},     {"u0", u0_preset},
                  {"amplitude", amplitude}, {"mode", mode},
                  {"snapshot_every", gl.snapshot_every}, {"out", out_dir}};
    Manifest m("gl", resolved);
    m.output("gl_trace.csv");
    m.output("gl_final.csv");

    if (gl.snapshot_every > 0) {
        std::vector<std::vector<double>> snap_rows;
        snap_rows.reserve(run.snapshots.size());
        for (std::size_t s = 0; s < run.snapshots.size(); ++s) {
            std::vector<double> row;
            row.reserve(n + 1);
            row.push_back(run.snapshot_t[s]);
            for (std::size_t i = 0; i < n; ++i) row.push_back(run.snapshots[s][i]);
            snap_rows.push_back(std::move(row));
        }
        write_csv(out_dir + "/gl_trajectory.csv", wide_header(n), snap_rows);
        m.output("gl_trajectory.csv");
    }

    const MonitorReport l2 = check_L2_decay(tr, tr.c_p, tr.domain);
    m.monitor("l2_decay", l2.pass, json{{"worst_margin", l2.worst_margin}, {"first_fail_t", l2.first_fail_t}});
    // The window monitors integrate over trailing unit windows, so they need
    // enough horizon to form one; on shorter runs they are recorded as skipped.
    if (gl.T_final >= 2.0) {
        const MonitorReport window = check_window_Halpha(tr);
        m.monitor("window_halpha", window.pass,
                  json{{"worst_margin", window.worst_margin}, {"first_fail_t", window.first_fail_t}});
    } else {
        m.doc["monitors"]["window_halpha"] = json{{"skipped", "horizon shorter than two time units"}};
    }
    if (gl.T_final > 1.0) {
        const SeminormUniformReport uniform = check_seminorm_uniform(tr);
        m.monitor("seminorm_uniform", uniform.pass,
                  json{{"bound", uniform.gronwall.bound}, {"windows", uniform.gronwall.windows},
                       {"skipped", uniform.gronwall.skipped}});
    } else {
        m.doc["monitors"]["seminorm_uniform"] = json{{"skipped", "horizon shorter than one unit window"}};
    }
    if (nl.variant == GLVariant::cubic) {
        const MonitorReport diss = check_dissipativity(tr);
        m.monitor("dissipativity", diss.pass,
                  json{{"worst_margin", diss.worst_margin}, {"first_fail_t", diss.first_fail_t}});
    }

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(m, out_dir, "gl", wall);
    std::cout << "gl: " << (m.all_pass ? "all monitors passed" : "MONITOR FAILURE") << ", outputs in " << out_dir
              << "\n";
    return m.all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// fp: vanishing-viscosity study.

int cmd_fp(const std::string& config_path, std::string out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    json cfg = load_config(config_path);
    reject_unknown_keys(cfg,
                        {"alpha", "n", "dt", "T", "k_max", "record_every", "u0", "amplitude", "mode", "drift",
                         "drift_amplitude", "drift_mode", "format", "out"},
                        "fp");
    const double alpha = get_number(cfg, "alpha", 1.0);
    const std::size_t n = get_size(cfg, "n", 511);
    const std::size_t k_max = get_size(cfg, "k_max", 10);
    const std::string u0_preset = get_string(cfg, "u0", "sine");
    const double amplitude = get_number(cfg, "amplitude", 0.5);
    const std::size_t mode = get_size(cfg, "mode", 1);
    const std::string drift_preset = get_string(cfg, "drift", "sine");
    const double drift_amplitude = get_number(cfg, "drift_amplitude", 0.5);
    const std::size_t drift_mode = get_size(cfg, "drift_mode", 2);
    const std::string format = get_string(cfg, "format", "trace");
    if (format != "trace" && format != "wide")
        throw config_error("config key 'format': expected 'trace' or 'wide'");
    FPConfig fp;
    fp.dt = get_number(cfg, "dt", 1e-4);
    fp.T = get_number(cfg, "T", 0.5);
    fp.record_every = get_size(cfg, "record_every", 10);
    if (out_dir.empty()) out_dir = get_string(cfg, "out", "");
    out_dir = prepare_out_dir(out_dir, "fp");

    const Grid1D grid(n);
    const FPSolver solver(assemble_operator(grid, KernelSpec::normalized(alpha)));
    const EigenDecomposition eig = eigendecompose(solver.op());
    const Field u0 = make_initial(grid, u0_preset, amplitude, mode);
    const Drift drift = make_drift(grid, drift_preset, drift_amplitude, drift_mode);
    const ViscositySchedule schedule = ViscositySchedule::dyadic(k_max);

    Manifest m("fp", json{{"alpha", alpha},
                          {"n", n},
                          {"dt", fp.dt},
                          {"T", fp.T},
                          {"k_max", k_max},
                          {"record_every", fp.record_every},
                          {"u0", u0_preset},
                          {"amplitude", amplitude},
                          {"mode", mode},
                          {"drift", drift_preset},
                          {"drift_amplitude", drift_amplitude},
                          {"drift_mode", drift_mode},
                          {"format", format},
                          {"out", out_dir}});

    std::size_t run_index = 0;
    auto emit_trace = [&](const FPTrajectory& traj) {
        std::vector<std::vector<double>> rows;
        rows.reserve(traj.t.size());
        for (std::size_t s = 0; s < traj.t.size(); ++s)
            rows.push_back({traj.t[s], norm_l2(grid, traj.states[s]),
                            std::sqrt(h1_seminorm_sq(grid, traj.states[s])), mass(grid, traj.states[s])});
        const std::string file = "fp_trace_eps" + std::to_string(run_index) + ".csv";
        write_csv(out_dir + "/" + file, {"t", "l2", "h1_semi", "mass"}, rows);
        m.output(file);
        ++run_index;
    };

    const VanishingViscosityResult vv = solver.vanishing_viscosity(schedule, drift, u0, fp, emit_trace);

    std::vector<std::vector<double>> gap_rows;
    for (std::size_t k = 0; k + 1 < schedule.epsilons.size(); ++k)
        gap_rows.push_back({static_cast<double>(k + 1), schedule.epsilons[k], schedule.epsilons[k + 1],
                            vv.gaps[k]});
    write_csv(out_dir + "/fp_gaps.csv", {"pair", "eps_coarse", "eps_fine", "gap"}, gap_rows);
    m.output("fp_gaps.csv");

    const WeakResidualReport weak = weak_residual(solver.op(), eig, drift, vv.limit);
    write_named_csv(out_dir + "/fp_weak_residual.csv", "test_function", "residual", weak.names, weak.residuals);
    m.output("fp_weak_residual.csv");

    std::vector<std::vector<double>> limit_rows;
    limit_rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) limit_rows.push_back({grid.node(i), vv.limit.states.back()[i]});
    write_csv(out_dir + "/fp_limit.csv", {"x", "u"}, limit_rows);
    m.output("fp_limit.csv");

    if (format == "wide") {
        std::vector<std::vector<double>> rows;
        rows.reserve(vv.limit.t.size());
        for (std::size_t s = 0; s < vv.limit.t.size(); ++s) {
            std::vector<double> row;
            row.reserve(n + 1);
            row.push_back(vv.limit.t[s]);
            for (std::size_t i = 0; i < n; ++i) row.push_back(vv.limit.states[s][i]);
            rows.push_back(std::move(row));
        }
        write_csv(out_dir + "/fp_trajectory.csv", wide_header(n), rows);
        m.output("fp_trajectory.csv");
    }

    const FPEnergyReport energy = h1_energy_check(vv.limit, drift, grid);
    const double weak_budget = 5.0 * (grid.h + fp.dt + schedule.epsilons.back());
    const double final_gap = vv.gaps.empty() ? 0.0 : vv.gaps.back();
    m.monitor("gaps_strictly_decreasing", vv.gaps_decreasing, json{{"final_gap", final_gap}});
    m.monitor("weak_residual_within_budget", weak.worst <= weak_budget,
              json{{"worst", weak.worst}, {"budget", weak_budget}});
    m.monitor("h1_energy_envelope", energy.pass,
              json{{"growth_constant", energy.c}, {"worst_ratio", energy.worst_ratio}});

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(m, out_dir, "fp", wall);
    std::cout << "fp: " << (m.all_pass ? "all monitors passed" : "MONITOR FAILURE") << ", final gap " << final_gap
              << ", outputs in " << out_dir << "\n";
    return m.all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// mc: killed-ensemble histogram against a PDE density.

int cmd_mc(const std::string& config_path, std::string out_dir, std::optional<std::uint64_t> seed_override) {
    const auto t0 = std::chrono::steady_clock::now();
    json cfg = load_config(config_path);
    reject_unknown_keys(cfg,
                        {"alpha", "n", "dt", "T", "n_paths", "bins", "seed", "u0", "amplitude", "mode", "drift",
                         "drift_amplitude", "drift_mode", "reference", "pde_final_csv", "pde_initial_csv", "out"},
                        "mc");
    StableSimConfig sim;
    sim.alpha = get_number(cfg, "alpha", 1.0);
    sim.n_paths = get_size(cfg, "n_paths", 200000);
    sim.dt = get_number(cfg, "dt", 1e-4);
    sim.T = get_number(cfg, "T", 0.25);
    sim.bins = get_size(cfg, "bins", 32);
    sim.seed = seed_override ? *seed_override : static_cast<std::uint64_t>(get_size(cfg, "seed", 20260819));
    const std::size_t n = get_size(cfg, "n", 511);
    const std::string u0_preset = get_string(cfg, "u0", "arch");
    const double amplitude = get_number(cfg, "amplitude", 1.0);
    const std::size_t mode = get_size(cfg, "mode", 1);
    const std::string drift_preset = get_string(cfg, "drift", "zero");
    const double drift_amplitude = get_number(cfg, "drift_amplitude", 0.5);
    const std::size_t drift_mode = get_size(cfg, "drift_mode", 2);
    const std::string reference = get_string(cfg, "reference", "nonlocal");
    const std::string pde_final_csv = get_string(cfg, "pde_final_csv", "");
    const std::string pde_initial_csv = get_string(cfg, "pde_initial_csv", "");
    if (reference != "nonlocal" && reference != "local")
        throw config_error("config key 'reference': expected 'nonlocal' or 'local'");
    if (out_dir.empty()) out_dir = get_string(cfg, "out", "");
    out_dir = prepare_out_dir(out_dir, "mc");

    const Grid1D grid(n);
    Field u0 = make_initial(grid, u0_preset, amplitude, mode);
    sim.drift = make_drift(grid, drift_preset, drift_amplitude, drift_mode);

    // The reference density: either a designated prior run loaded from CSV, or
    // a fresh solve (nonlocal for the stable driver, local Laplacian for the
    // alpha = 2 control).
    Field pde_final(grid.n);
    Field pde_initial = u0;
    if (!pde_final_csv.empty()) {
        const auto [x, u] = read_xy_csv(pde_final_csv, "x", "u");
        if (x.size() != grid.n)
            throw config_error("pde_final_csv: has " + std::to_string(x.size()) + " rows, expected n = " +
                               std::to_string(grid.n));
        for (std::size_t i = 0; i < grid.n; ++i) pde_final[i] = u[i];
        if (!pde_initial_csv.empty()) {
            const auto [xi, ui] = read_xy_csv(pde_initial_csv, "x", "u");
            if (xi.size() != grid.n)
                throw config_error("pde_initial_csv: has " + std::to_string(xi.size()) + " rows, expected n = " +
                                   std::to_string(grid.n));
            for (std::size_t i = 0; i < grid.n; ++i) pde_initial[i] = ui[i];
        }
    } else {
        FPConfig fp;
        fp.dt = sim.dt;
        fp.T = sim.T;
        // Stride past the horizon: only t = 0 and the final state get recorded.
        fp.record_every = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(fp.T / fp.dt)));
        if (reference == "local") {
            fp.include_nonlocal = false;
            const FPSolver solver(assemble_operator(grid, KernelSpec::normalized(1.0)));
            pde_final = solver.solve_viscous(1.0, sim.drift, u0, fp).states.back();
        } else {
            const FPSolver solver(assemble_operator(grid, KernelSpec::normalized(sim.alpha)));
            pde_final = solver.solve_viscous(0.0, sim.drift, u0, fp).states.back();
        }
    }

    const KilledEnsemble ensemble = simulate_killed(sim, grid, u0);
    const std::vector<double> hist = histogram(ensemble, sim.bins);
    std::vector<std::vector<double>> hist_rows;
    hist_rows.reserve(sim.bins);
    const double width = 1.0 / static_cast<double>(sim.bins);
    for (std::size_t b = 0; b < sim.bins; ++b)
        hist_rows.push_back({static_cast<double>(b) * width, static_cast<double>(b + 1) * width, hist[b]});
    write_csv(out_dir + "/mc_histogram.csv", {"bin_left", "bin_right", "mass"}, hist_rows);

    const DensityComparison comparison = compare_density(ensemble, grid, pde_final, pde_initial, sim.bins);
    write_csv(out_dir + "/mc_comparison.csv", {"l1", "mc_survival", "pde_survival", "survival_se"},
              {{comparison.l1, comparison.mc_survival, comparison.pde_survival, comparison.survival_se}});

    Manifest m("mc", json{{"alpha", sim.alpha},
                          {"n", n},
                          {"dt", sim.dt},
                          {"T", sim.T},
                          {"n_paths", sim.n_paths},
                          {"bins", sim.bins},
                          {"seed", sim.seed},
                          {"u0", u0_preset},
                          {"amplitude", amplitude},
                          {"mode", mode},
                          {"drift", drift_preset},
                          {"drift_amplitude", drift_amplitude},
                          {"drift_mode", drift_mode},
                          {"reference", reference},
                          {"pde_final_csv", pde_final_csv},
                          {"pde_initial_csv", pde_initial_csv},
                          {"out", out_dir}});
    m.output("mc_histogram.csv");
    m.output("mc_comparison.csv");
    m.monitor("l1_within_budget", comparison.l1 <= 0.05, json{{"l1", comparison.l1}, {"budget", 0.05}});
    m.monitor("survival_agreement", comparison.survival_ok,
              json{{"mc_survival", comparison.mc_survival},
                   {"pde_survival", comparison.pde_survival},
                   {"survival_se", comparison.survival_se}});

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(m, out_dir, "mc", wall);
    std::cout << "mc: L1 = " << comparison.l1 << ", survival " << comparison.mc_survival << " vs "
              << comparison.pde_survival << (m.all_pass ? " (pass)" : " (MONITOR FAILURE)") << ", outputs in "
              << out_dir << "\n";
    return m.all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// gronwall: inequality check over an external trajectory CSV.

int cmd_gronwall(const std::string& config_path, std::string out_dir, std::string csv_path, double r,
                 std::optional<double> query) {
    const auto t0 = std::chrono::steady_clock::now();
    json cfg = load_config(config_path);
    reject_unknown_keys(cfg, {"csv", "r", "query", "out"}, "gronwall");
    if (csv_path.empty()) csv_path = get_string(cfg, "csv", "");
    if (csv_path.empty()) throw config_error("gronwall: no trajectory CSV given (flag --csv or config key 'csv')");
    if (!(r > 0.0)) r = get_number(cfg, "r", 1.0);
    if (!query && cfg.contains("query")) query = get_number(cfg, "query", 0.0);
    if (out_dir.empty()) out_dir = get_string(cfg, "out", "");
    out_dir = prepare_out_dir(out_dir, "gronwall");

    const TrajectoryTriple triple = read_trajectory_csv(csv_path, r);
    const UniformGronwallReport uniform = uniform_gronwall_check(triple);
    write_csv(out_dir + "/gronwall_report.csv",
              {"a1", "a2", "a3", "bound", "windows", "skipped", "worst_margin"},
              {{uniform.a1, uniform.a2, uniform.a3, uniform.bound, static_cast<double>(uniform.windows),
                static_cast<double>(uniform.skipped), uniform.worst_margin}});

    Manifest m("gronwall", json{{"csv", csv_path}, {"r", r}, {"out", out_dir}});
    m.output("gronwall_report.csv");
    m.monitor("uniform_window_bound", uniform.pass,
              json{{"bound", uniform.bound}, {"windows", uniform.windows}, {"skipped", uniform.skipped},
                   {"worst_margin", uniform.worst_margin}});

    if (query) {
        const ClassicGronwallReport classic = classic_gronwall_bound(triple, *query);
        write_csv(out_dir + "/gronwall_classic.csv",
                  {"t_query", "value", "bound", "premise_violations"},
                  {{*query, classic.value, classic.bound, static_cast<double>(classic.premise_violations)}});
        m.output("gronwall_classic.csv");
        m.doc["config"]["query"] = *query;
        m.monitor("pointwise_bound", classic.pass,
                  json{{"value", classic.value}, {"bound", classic.bound}, {"premise_ok", classic.premise_ok}});
    }

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(m, out_dir, "gronwall", wall);
    std::cout << "gronwall: bound " << uniform.bound << " over " << uniform.windows << " windows, "
              << (m.all_pass ? "pass" : "FAIL") << "\n";
    return m.all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// accept: the full acceptance battery.

int cmd_accept(const std::string& config_path, std::string out_dir, std::optional<std::uint64_t> seed_override) {
    json cfg = load_config(config_path);
    reject_unknown_keys(cfg, {"seed", "out"}, "accept");
    const std::uint64_t seed =
        seed_override ? *seed_override : static_cast<std::uint64_t>(get_size(cfg, "seed", 20260819));
    if (out_dir.empty()) out_dir = get_string(cfg, "out", "");
    out_dir = prepare_out_dir(out_dir, "accept");
    const AcceptanceReport report = run_acceptance(out_dir, seed, std::cout);

    Manifest m("accept", json{{"seed", seed}, {"out", out_dir}});
    for (const auto& c : report.criteria) m.monitor(c.name, c.pass, c.detail);
    write_manifest(m, out_dir, "accept", report.wall_seconds);
    std::cout << (report.all_pass() ? "acceptance: PASS" : "acceptance: FAIL") << "\n";
    return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonlocal diffusion laboratory: spectra, monitored evolutions, vanishing viscosity, and a "
                 "jump-process cross-check"};
    app.require_subcommand(1);

    struct SubArgs {
        std::string config;
        std::string out;
        std::optional<std::uint64_t> seed;
    };
    auto add_common = [](CLI::App* sub, SubArgs& args) {
        sub->add_option("--config", args.config, "JSON config file (flat keys; unknown keys are an error)");
        sub->add_option("--out", args.out, "output directory (default runs/<command>)");
        sub->add_option("--seed", args.seed, "seed override for randomized commands");
    };

    SubArgs eig_args, gl_args, fp_args, mc_args, gw_args, acc_args;
    CLI::App* eig = app.add_subcommand("eig", "eigenvalue table with asymptotic comparisons");
    add_common(eig, eig_args);
    CLI::App* gl = app.add_subcommand("gl", "monitored reaction-diffusion run");
    add_common(gl, gl_args);
    CLI::App* fp = app.add_subcommand("fp", "vanishing-viscosity study");
    add_common(fp, fp_args);
    CLI::App* mc = app.add_subcommand("mc", "killed jump-process ensemble vs. PDE density");
    add_common(mc, mc_args);
    CLI::App* gw = app.add_subcommand("gronwall", "integral-inequality check over a trajectory CSV");
    add_common(gw, gw_args);
    std::string gw_csv;
    double gw_r = 0.0;
    std::optional<double> gw_query;
    gw->add_option("--csv", gw_csv, "trajectory CSV with header t,y,g,h");
    gw->add_option("--r", gw_r, "window length (default 1)");
    gw->add_option("--query", gw_query, "also evaluate the pointwise bound at this time");
    CLI::App* acc = app.add_subcommand("accept", "run the acceptance battery");
    add_common(acc, acc_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (eig->parsed()) return cmd_eig(eig_args.config, eig_args.out);
        if (gl->parsed()) return cmd_gl(gl_args.config, gl_args.out);
        if (fp->parsed()) return cmd_fp(fp_args.config, fp_args.out);
        if (mc->parsed()) return cmd_mc(mc_args.config, mc_args.out, mc_args.seed);
        if (gw->parsed()) return cmd_gronwall(gw_args.config, gw_args.out, gw_csv, gw_r, gw_query);
        if (acc->parsed()) return cmd_accept(acc_args.config, acc_args.out, acc_args.seed);
    } catch (const parameter_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
