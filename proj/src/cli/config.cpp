#include "darkstate/cli/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "CLI11.hpp"

namespace darkstate::cli {

using nlohmann::json;

namespace {

double parse_double(const std::string& text, const std::string& field) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw UsageError("malformed number for " + field + ": '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(v)) {
        throw UsageError("malformed number for " + field + ": '" + text + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!obj.is_object()) throw UsageError(where + " must be a JSON object");
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed) known = known || item.key() == k;
        if (!known) throw UsageError("unknown key '" + item.key() + "' in " + where);
    }
}

template <typename T>
T get_field(const json& obj, const char* key, const std::string& where) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw UsageError("bad or missing value for " + where + "." + key);
    }
}

json range_to_json(const AxisRange& r) { return json::array({r.min, r.max, r.n_points}); }

AxisRange range_from_json(const json& v, const std::string& field) {
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
        !v[2].is_number_unsigned()) {
        throw UsageError(field + " must be [min, max, n_points]");
    }
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<std::size_t>()};
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& v, const std::string& field) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw UsageError(field + " must be [re, im]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

void check_writable(const std::string& path) {
    if (path.empty()) return;
    std::filesystem::path dir = std::filesystem::path(path).parent_path();
    if (dir.empty()) dir = ".";
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
        throw UsageError("output directory does not exist: " + dir.string());
    }
    if (::access(dir.c_str(), W_OK) != 0) {
        throw UsageError("output directory is not writable: " + dir.string());
    }
}

} // namespace

Command parse_command(const std::string& name) {
    if (name == "poles") return Command::POLES;
    if (name == "trajectory") return Command::TRAJECTORY;
    if (name == "ssc") return Command::SSC;
    if (name == "sweep") return Command::SWEEP;
    if (name == "scan") return Command::SCAN;
    throw UsageError("unknown command '" + name + "' (expected poles, trajectory, ssc, sweep, scan)");
}

std::string command_name(Command c) {
    switch (c) {
    case Command::POLES: return "poles";
    case Command::TRAJECTORY: return "trajectory";
    case Command::SSC: return "ssc";
    case Command::SWEEP: return "sweep";
    case Command::SCAN: return "scan";
    }
    return "unknown";
}

Backend parse_backend(const std::string& name) {
    if (name == "spectral") return Backend::SPECTRAL;
    if (name == "ode") return Backend::ODE;
    if (name == "volterra") return Backend::VOLTERRA;
    throw UsageError("unknown backend '" + name + "' (expected spectral, ode, volterra)");
}

std::string backend_name(Backend b) {
    switch (b) {
    case Backend::SPECTRAL: return "spectral";
    case Backend::ODE: return "ode";
    case Backend::VOLTERRA: return "volterra";
    }
    return "unknown";
}

ScanMode parse_mode(const std::string& name) {
    if (name == "symmetric") return ScanMode::SYMMETRIC;
    if (name == "antisymmetric") return ScanMode::ANTISYMMETRIC;
    throw UsageError("unknown scan mode '" + name + "' (expected symmetric, antisymmetric)");
}

std::string mode_name(ScanMode m) { return m == ScanMode::SYMMETRIC ? "symmetric" : "antisymmetric"; }

AxisRange parse_range(const std::string& text, const std::string& field) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError(field + " must be min:max:n, got '" + text + "'");
    AxisRange r;
    r.min = parse_double(parts[0], field + " (min)");
    r.max = parse_double(parts[1], field + " (max)");
    const double n = parse_double(parts[2], field + " (n)");
    if (n < 2 || n != std::floor(n)) throw UsageError(field + " needs an integer point count >= 2");
    r.n_points = static_cast<std::size_t>(n);
    return r;
}

cplx parse_complex(const std::string& text, const std::string& field) {
    const auto parts = split(text, ',');
    if (parts.size() == 1) return {parse_double(parts[0], field), 0.0};
    if (parts.size() == 2) return {parse_double(parts[0], field + " (re)"), parse_double(parts[1], field + " (im)")};
    throw UsageError(field + " must be 're,im', got '" + text + "'");
}

SystemParams RunConfig::physical_params() const {
    const double g = params.gamma;
    return {params.g1 * g, params.g2 * g, params.j * g, g, params.delta_c * g};
}

void RunConfig::validate() const {
    try {
        params.validate();
        tol.validate();
        init.state.validate();
        if (command == Command::TRAJECTORY) {
            if (!(trajectory.t_end > 0.0) || !(trajectory.dt > 0.0) || !(trajectory.h > 0.0)) {
                throw std::invalid_argument("t_end, dt and h must be positive");
            }
        }
        if (command == Command::SWEEP) {
            g1_grid.validate();
            g2_grid.validate();
        }
        if (command == Command::SCAN) scan.eps.validate();
    } catch (const UsageError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (workers == 0) throw UsageError("workers must be positive");
    check_writable(out);
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.command == b.command && a.params == b.params && a.init == b.init && a.trajectory == b.trajectory &&
           a.g1_grid == b.g1_grid && a.g2_grid == b.g2_grid && a.scan == b.scan && a.detunings == b.detunings &&
           a.tol == b.tol && a.out == b.out && a.workers == b.workers;
}

json to_json(const RunConfig& cfg) {
    json doc;
    doc["command"] = command_name(cfg.command);
    doc["params"] = {{"g1", cfg.params.g1},
                     {"g2", cfg.params.g2},
                     {"j", cfg.params.j},
                     {"gamma", cfg.params.gamma},
                     {"delta_c", cfg.params.delta_c}};
    if (cfg.init.named) {
        doc["init"] = std::string(state_name(*cfg.init.named));
    } else {
        doc["init"] = {{"c1", complex_to_json(cfg.init.state.c1_0)}, {"c2", complex_to_json(cfg.init.state.c2_0)}};
    }
    doc["trajectory"] = {{"t_end", cfg.trajectory.t_end},
                         {"dt", cfg.trajectory.dt},
                         {"backend", backend_name(cfg.trajectory.backend)},
                         {"h", cfg.trajectory.h}};
    doc["grid"] = {{"g1", range_to_json(cfg.g1_grid)}, {"g2", range_to_json(cfg.g2_grid)}};
    doc["scan"] = {{"mode", mode_name(cfg.scan.mode)}, {"eps", range_to_json(cfg.scan.eps)}};
    doc["detunings"] = cfg.detunings;
    doc["tolerances"] = {{"pole_survival_eps", cfg.tol.pole_survival_eps},
                         {"backend_agreement_eps", cfg.tol.backend_agreement_eps},
                         {"root_polish_eps", cfg.tol.root_polish_eps}};
    doc["out"] = cfg.out;
    doc["workers"] = cfg.workers;
    return doc;
}

RunConfig from_json(const json& doc) {
    reject_unknown(doc, {"command", "params", "init", "trajectory", "grid", "scan", "detunings", "tolerances", "out",
                         "workers"},
                   "config");
    RunConfig cfg;
    if (doc.contains("command")) cfg.command = parse_command(get_field<std::string>(doc, "command", "config"));
    if (doc.contains("params")) {
        const json& p = doc["params"];
        reject_unknown(p, {"g1", "g2", "j", "gamma", "delta_c"}, "params");
        if (p.contains("g1")) cfg.params.g1 = get_field<double>(p, "g1", "params");
        if (p.contains("g2")) cfg.params.g2 = get_field<double>(p, "g2", "params");
        if (p.contains("j")) cfg.params.j = get_field<double>(p, "j", "params");
        if (p.contains("gamma")) cfg.params.gamma = get_field<double>(p, "gamma", "params");
        if (p.contains("delta_c")) cfg.params.delta_c = get_field<double>(p, "delta_c", "params");
    }
    if (doc.contains("init")) {
        const json& v = doc["init"];
        if (v.is_string()) {
            const NamedState name = parse_state_name(v.get<std::string>());
            cfg.init = {name, initial_state(name)};
        } else {
            reject_unknown(v, {"c1", "c2"}, "init");
            if (!v.contains("c1") || !v.contains("c2")) throw UsageError("init needs both c1 and c2");
            cfg.init = {std::nullopt, {complex_from_json(v["c1"], "init.c1"), complex_from_json(v["c2"], "init.c2")}};
        }
    }
    if (doc.contains("trajectory")) {
        const json& t = doc["trajectory"];
        reject_unknown(t, {"t_end", "dt", "backend", "h"}, "trajectory");
        if (t.contains("t_end")) cfg.trajectory.t_end = get_field<double>(t, "t_end", "trajectory");
        if (t.contains("dt")) cfg.trajectory.dt = get_field<double>(t, "dt", "trajectory");
        if (t.contains("backend")) cfg.trajectory.backend = parse_backend(get_field<std::string>(t, "backend", "trajectory"));
        if (t.contains("h")) cfg.trajectory.h = get_field<double>(t, "h", "trajectory");
    }
    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        reject_unknown(g, {"g1", "g2"}, "grid");
        if (g.contains("g1")) cfg.g1_grid = range_from_json(g["g1"], "grid.g1");
        if (g.contains("g2")) cfg.g2_grid = range_from_json(g["g2"], "grid.g2");
    }
    if (doc.contains("scan")) {
        const json& s = doc["scan"];
        reject_unknown(s, {"mode", "eps"}, "scan");
        if (s.contains("mode")) cfg.scan.mode = parse_mode(get_field<std::string>(s, "mode", "scan"));
        if (s.contains("eps")) cfg.scan.eps = range_from_json(s["eps"], "scan.eps");
    }
    if (doc.contains("detunings")) cfg.detunings = get_field<std::vector<double>>(doc, "detunings", "config");
    if (doc.contains("tolerances")) {
        const json& t = doc["tolerances"];
        reject_unknown(t, {"pole_survival_eps", "backend_agreement_eps", "root_polish_eps"}, "tolerances");
        if (t.contains("pole_survival_eps")) cfg.tol.pole_survival_eps = get_field<double>(t, "pole_survival_eps", "tolerances");
        if (t.contains("backend_agreement_eps"))
            cfg.tol.backend_agreement_eps = get_field<double>(t, "backend_agreement_eps", "tolerances");
        if (t.contains("root_polish_eps")) cfg.tol.root_polish_eps = get_field<double>(t, "root_polish_eps", "tolerances");
    }
    if (doc.contains("out")) cfg.out = get_field<std::string>(doc, "out", "config");
    if (doc.contains("workers")) cfg.workers = get_field<unsigned>(doc, "workers", "config");
    return cfg;
}

RunConfig parse_config(int argc, const char* const* argv) {
    CLI::App app{"Two qubits in a common Lorentzian reservoir: poles, trajectories and steady-state concurrence",
                 "darkstate"};
    app.set_help_flag("--help", "Print this help message and exit");

    std::optional<std::string> command, config_path, init_name, c1_text, c2_text, backend, grid, g1_grid, g2_grid,
        mode, eps, detunings, out;
    std::optional<double> g1, g2, j, gamma, delta_c, t_end, dt, h, survival_eps;
    std::optional<unsigned> workers;

    app.add_option("command", command, "poles | trajectory | ssc | sweep | scan");
    app.add_option("--config", config_path, "JSON run configuration (flags override its values)");
    app.add_option("--g1", g1, "qubit-1 coupling / gamma");
    app.add_option("--g2", g2, "qubit-2 coupling / gamma");
    app.add_option("--j", j, "qubit-qubit exchange / gamma");
    app.add_option("--gamma", gamma, "Lorentzian full width (absolute units, default 1)");
    app.add_option("--delta-c", delta_c, "reservoir detuning / gamma");
    app.add_option("--init", init_name, "e1g2 | g1e2 | plus | minus | plus_i | minus_i");
    app.add_option("--c1", c1_text, "explicit initial amplitude of |e,g>, as re,im");
    app.add_option("--c2", c2_text, "explicit initial amplitude of |g,e>, as re,im");
    app.add_option("--t-end", t_end, "trajectory end time (units of 1/gamma)");
    app.add_option("--dt", dt, "trajectory output spacing (units of 1/gamma)");
    app.add_option("--backend", backend, "trajectory backend: spectral | ode | volterra");
    app.add_option("--h", h, "Volterra step (units of 1/gamma)");
    app.add_option("--grid", grid, "sweep grid for both axes, min:max:n");
    app.add_option("--g1-grid", g1_grid, "sweep grid for g1, min:max:n");
    app.add_option("--g2-grid", g2_grid, "sweep grid for g2, min:max:n");
    app.add_option("--mode", mode, "scan direction: symmetric | antisymmetric");
    app.add_option("--eps", eps, "scan offsets, min:max:n");
    app.add_option("--detunings", detunings, "comma-separated detunings for a sweep comparison");
    app.add_option("--survival-eps", survival_eps, "pole survival threshold |Re s| / gamma");
    app.add_option("--out", out, "output path (sweep: file prefix)");
    app.add_option("--workers", workers, "worker threads (default: DARKSTATE_WORKERS or all cores)");

    try {
        std::vector<std::string> args;
        for (int k = argc - 1; k >= 1; --k) args.emplace_back(argv[k]);
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    RunConfig cfg;
    cfg.workers = default_workers();
    bool have_command = false;
    bool have_init = false;
    if (config_path) {
        std::ifstream in(*config_path);
        if (!in) throw UsageError("cannot read config file " + *config_path);
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::parse_error& e) {
            throw UsageError("config file " + *config_path + " is not valid JSON: " + e.what());
        }
        cfg = from_json(doc);
        if (!doc.contains("workers")) cfg.workers = default_workers();
        have_command = doc.contains("command");
        have_init = doc.contains("init");
    }

    if (command) {
        cfg.command = parse_command(*command);
        have_command = true;
    }
    if (!have_command) throw UsageError("no command given (poles, trajectory, ssc, sweep, scan)");

    if (g1) cfg.params.g1 = *g1;
    if (g2) cfg.params.g2 = *g2;
    if (j) cfg.params.j = *j;
    if (gamma) cfg.params.gamma = *gamma;
    if (delta_c) cfg.params.delta_c = *delta_c;

    if (init_name && (c1_text || c2_text)) throw UsageError("--init conflicts with --c1/--c2");
    if (init_name) {
        const NamedState name = parse_state_name(*init_name);
        cfg.init = {name, initial_state(name)};
        have_init = true;
    } else if (c1_text || c2_text) {
        if (!c1_text || !c2_text) throw UsageError("--c1 and --c2 must be given together");
        cfg.init = {std::nullopt, {parse_complex(*c1_text, "--c1"), parse_complex(*c2_text, "--c2")}};
        have_init = true;
    }
    if (!have_init) throw UsageError("missing initial state (--init or --c1/--c2)");

    if (t_end) cfg.trajectory.t_end = *t_end;
    if (dt) cfg.trajectory.dt = *dt;
    if (backend) cfg.trajectory.backend = parse_backend(*backend);
    if (h) cfg.trajectory.h = *h;
    if (grid) cfg.g1_grid = cfg.g2_grid = parse_range(*grid, "--grid");
    if (g1_grid) cfg.g1_grid = parse_range(*g1_grid, "--g1-grid");
    if (g2_grid) cfg.g2_grid = parse_range(*g2_grid, "--g2-grid");
    if (mode) cfg.scan.mode = parse_mode(*mode);
    if (eps) cfg.scan.eps = parse_range(*eps, "--eps");
    if (detunings) {
        cfg.detunings.clear();
        for (const auto& part : split(*detunings, ',')) cfg.detunings.push_back(parse_double(part, "--detunings"));
    }
    if (survival_eps) cfg.tol.pole_survival_eps = *survival_eps;
    if (out) cfg.out = *out;
    if (workers) cfg.workers = *workers;

    cfg.validate();
    return cfg;
}

} // namespace darkstate::cli
