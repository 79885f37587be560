#include "darkstate/cli/run.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

#include "darkstate/cli/output.hpp"
#include "darkstate/ode.hpp"
#include "darkstate/spectral.hpp"
#include "darkstate/volterra.hpp"

namespace darkstate::cli {

using nlohmann::json;

namespace {

json params_json(const SystemParams& p) {
    return {{"g1", p.g1}, {"g2", p.g2}, {"j", p.j}, {"gamma", p.gamma}, {"delta_c", p.delta_c}};
}

void write_text(const std::string& path, std::ostream& fallback, const std::string& text) {
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << text;
    if (!os.flush()) throw std::runtime_error("write failed for " + path);
}

AxisRange scaled(const AxisRange& r, double gamma) { return {r.min * gamma, r.max * gamma, r.n_points}; }

Trajectory run_trajectory(const RunConfig& cfg, std::ostream& err) {
    const SystemParams p = cfg.physical_params();
    const double gamma = p.gamma;
    const double t_end = cfg.trajectory.t_end / gamma;
    const double dt = cfg.trajectory.dt / gamma;
    switch (cfg.trajectory.backend) {
    case Backend::SPECTRAL: {
        const PoleDecomposition dec = solve_spectral(p, cfg.init.state, cfg.tol);
        if (!dec.degenerate) return spectral_trajectory(dec, t_end, dt);
        err << "warning: degenerate poles, falling back to the ODE backend\n";
        return integrate(build_generator(p), cfg.init.state, t_end, dt);
    }
    case Backend::ODE:
        return integrate(build_generator(p), cfg.init.state, t_end, dt);
    case Backend::VOLTERRA:
        return solve_volterra(p, cfg.init.state, t_end, cfg.trajectory.h / gamma, dt);
    }
    throw UsageError("unknown backend");
}

std::string detuning_suffix(double dc) {
    std::string s = format_real(dc);
    std::replace(s.begin(), s.end(), '-', 'm');
    return "_dc" + s;
}

int run_sweep_command(const RunConfig& cfg, std::ostream& out) {
    const SystemParams p = cfg.physical_params();
    SweepSpec spec;
    spec.g1_range = scaled(cfg.g1_grid, p.gamma);
    spec.g2_range = scaled(cfg.g2_grid, p.gamma);
    spec.j = p.j;
    spec.gamma = p.gamma;
    spec.delta_c = p.delta_c;
    spec.init = cfg.init.state;
    spec.tol = cfg.tol;

    const std::string prefix = cfg.out.empty() ? "sweep" : cfg.out;
    std::vector<std::pair<std::string, SweepResult>> results;
    if (cfg.detunings.empty()) {
        results.emplace_back(prefix, run_sweep(spec, cfg.workers));
    } else {
        std::vector<double> physical;
        for (double dc : cfg.detunings) physical.push_back(dc * p.gamma);
        auto sweeps = run_detuning_comparison(spec, physical, cfg.workers);
        for (std::size_t k = 0; k < sweeps.size(); ++k) {
            results.emplace_back(prefix + detuning_suffix(cfg.detunings[k]), std::move(sweeps[k]));
        }
    }

    json summary = json::array();
    std::size_t failed = 0;
    for (const auto& [stem, sweep] : results) {
        emit_csv(stem + ".csv", sweep);
        emit_heatmap(stem + ".ppm", sweep);
        const auto best = std::max_element(sweep.cells.begin(), sweep.cells.end(),
                                           [](const SweepCell& a, const SweepCell& b) { return a.ssc < b.ssc; });
        const auto fallbacks = std::count_if(sweep.cells.begin(), sweep.cells.end(),
                                             [](const SweepCell& c) { return c.degenerate_fallback; });
        failed += sweep.failed_cells();
        summary.push_back({{"csv", stem + ".csv"},
                           {"ppm", stem + ".ppm"},
                           {"n1", sweep.n1},
                           {"n2", sweep.n2},
                           {"max_ssc", best->ssc},
                           {"argmax", {best->g1, best->g2}},
                           {"degenerate_fallbacks", fallbacks},
                           {"failed_cells", sweep.failed_cells()}});
    }
    out << json{{"sweeps", summary}}.dump(2) << '\n';
    return failed == 0 ? EXIT_OK : EXIT_RUNTIME;
}

int run_scan_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const SystemParams p = cfg.physical_params();
    std::vector<double> eps(cfg.scan.eps.n_points);
    for (std::size_t k = 0; k < eps.size(); ++k) eps[k] = cfg.scan.eps.at(k) * p.gamma;
    const ScanResult scan = instability_scan(p, cfg.init.state, cfg.scan.mode, eps, cfg.tol, cfg.workers);

    json summary{{"mode", mode_name(cfg.scan.mode)},
                 {"g1", p.g1},
                 {"points", scan.points.size()},
                 {"hwhm", scan.hwhm ? json(*scan.hwhm) : json(nullptr)}};
    if (cfg.out.empty()) {
        write_scan_csv(out, p.g1, scan);
        err << summary.dump() << '\n';
    } else {
        std::ofstream os(cfg.out);
        if (!os) throw std::runtime_error("cannot open " + cfg.out + " for writing");
        write_scan_csv(os, p.g1, scan);
        if (!os.flush()) throw std::runtime_error("write failed for " + cfg.out);
        summary["csv"] = cfg.out;
        out << summary.dump(2) << '\n';
    }
    return EXIT_OK;
}

} // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const SystemParams p = cfg.physical_params();
    switch (cfg.command) {
    case Command::POLES: {
        json doc = poles_json(solve_spectral(p, cfg.init.state, cfg.tol), cfg.tol);
        doc["params"] = params_json(p);
        write_text(cfg.out, out, doc.dump(2) + "\n");
        return EXIT_OK;
    }
    case Command::SSC: {
        const SteadyStateResult r = steady_concurrence(p, cfg.init.state, cfg.tol);
        json doc = steady_state_json(r);
        doc["params"] = params_json(p);
        if (p.j == 0.0) doc["dark_state_ssc"] = dark_state_ssc(p, cfg.init.state);
        write_text(cfg.out, out, doc.dump(2) + "\n");
        return EXIT_OK;
    }
    case Command::TRAJECTORY: {
        const Trajectory traj = run_trajectory(cfg, err);
        if (cfg.out.empty()) {
            write_trajectory_csv(out, traj);
        } else {
            emit_csv(cfg.out, traj);
        }
        return EXIT_OK;
    }
    case Command::SWEEP:
        return run_sweep_command(cfg, out);
    case Command::SCAN:
        return run_scan_command(cfg, out, err);
    }
    return EXIT_USAGE;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = parse_config(argc, argv);
    } catch (const HelpRequested& help) {
        out << help.what();
        return EXIT_OK;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
        return EXIT_USAGE;
    }
    try {
        return run(cfg, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return EXIT_USAGE;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return EXIT_RUNTIME;
    }
}

} // namespace darkstate::cli
