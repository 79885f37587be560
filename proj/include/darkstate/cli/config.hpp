// config.hpp: Run configuration for the darkstate command-line tool
//
// Physical inputs (couplings, exchange, detuning, grids, eps) are given in
// units of gamma and times in units of 1/gamma; --gamma sets the physical
// width and everything is rescaled on the way into the solvers.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "darkstate/core_model.hpp"
#include "darkstate/errors.hpp"
#include "darkstate/steady_state.hpp"
#include "darkstate/sweep.hpp"

namespace darkstate::cli {

enum class Command { POLES, TRAJECTORY, SSC, SWEEP, SCAN };
enum class Backend { SPECTRAL, ODE, VOLTERRA };

struct InitSpec {
    std::optional<NamedState> named; // set when the state came from the library
    InitialState state;

    bool operator==(const InitSpec&) const = default;
};

struct TrajectoryBlock {
    double t_end{20.0};
    double dt{0.1};
    Backend backend{Backend::SPECTRAL};
    double h{1e-3};

    bool operator==(const TrajectoryBlock&) const = default;
};

struct ScanBlock {
    ScanMode mode{ScanMode::SYMMETRIC};
    AxisRange eps{-0.05, 0.05, 201};

    bool operator==(const ScanBlock&) const = default;
};

struct RunConfig {
    Command command{Command::SSC};
    SystemParams params;   // g1, g2, j, delta_c in units of gamma; gamma absolute
    InitSpec init;
    TrajectoryBlock trajectory;
    AxisRange g1_grid{-2.0, 2.0, 201};
    AxisRange g2_grid{-2.0, 2.0, 201};
    ScanBlock scan;
    std::vector<double> detunings;
    Tolerances tol;
    std::string out;       // empty: stdout (sweep: "sweep" prefix)
    unsigned workers{1};

    // Solver-facing parameters with every rate multiplied by gamma.
    SystemParams physical_params() const;
    void validate() const;
};

inline bool operator==(const Tolerances& a, const Tolerances& b) {
    return a.pole_survival_eps == b.pole_survival_eps && a.backend_agreement_eps == b.backend_agreement_eps &&
           a.root_polish_eps == b.root_polish_eps;
}

bool operator==(const RunConfig& a, const RunConfig& b);

// Thrown by parse_config when --help was requested; what() is the help text.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Strict JSON mapping: unknown keys and wrong types raise UsageError.
nlohmann::json to_json(const RunConfig& cfg);
RunConfig from_json(const nlohmann::json& doc);

// argv[0] is the program name. A --config file is read first; explicit flags
// then override its values. Throws UsageError (bad or missing options,
// malformed numbers, naming the field) or HelpRequested.
RunConfig parse_config(int argc, const char* const* argv);

Command parse_command(const std::string& name);
std::string command_name(Command c);
Backend parse_backend(const std::string& name);
std::string backend_name(Backend b);
ScanMode parse_mode(const std::string& name);
std::string mode_name(ScanMode m);

// "min:max:n"
AxisRange parse_range(const std::string& text, const std::string& field);
// "re,im" or a plain real number
cplx parse_complex(const std::string& text, const std::string& field);

} // namespace darkstate::cli
