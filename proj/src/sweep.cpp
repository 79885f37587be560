#include "darkstate/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "darkstate/parallel.hpp"
#include "darkstate/steady_state.hpp"

namespace darkstate {

void AxisRange::validate() const {
    if (n_points < 2) throw std::invalid_argument("grid axis needs at least two points");
    if (!std::isfinite(min) || !std::isfinite(max) || !(min < max)) {
        throw std::invalid_argument("grid axis needs finite min < max");
    }
}

double AxisRange::at(std::size_t k) const {
    const auto last = static_cast<double>(n_points - 1);
    const auto kk = static_cast<double>(k);
    return ((last - kk) * min + kk * max) / last;
}

void SweepSpec::validate() const {
    g1_range.validate();
    g2_range.validate();
    SystemParams{0.0, 0.0, j, gamma, delta_c}.validate();
    init.validate();
    tol.validate();
}

std::size_t SweepResult::failed_cells() const {
    return static_cast<std::size_t>(
        std::count_if(cells.begin(), cells.end(), [](const SweepCell& c) { return c.failed; }));
}

SweepResult run_sweep(const SweepSpec& spec, unsigned workers) {
    spec.validate();
    SweepResult out;
    out.n1 = spec.g1_range.n_points;
    out.n2 = spec.g2_range.n_points;
    out.cells.resize(out.n1 * out.n2);

    // one work item per row (fixed g2); each row writes only its own slots
    parallel_for(out.n2, workers, [&](std::size_t i2) {
        const double g2 = spec.g2_range.at(i2);
        for (std::size_t i1 = 0; i1 < out.n1; ++i1) {
            SweepCell& cell = out.cells[i2 * out.n1 + i1];
            cell.g1 = spec.g1_range.at(i1);
            cell.g2 = g2;
            try {
                const SystemParams p{cell.g1, g2, spec.j, spec.gamma, spec.delta_c};
                const SteadyStateResult r = steady_concurrence(p, spec.init, spec.tol);
                cell.ssc = r.ssc;
                cell.n_surviving = r.surviving_poles.size();
                cell.oscillatory = r.oscillatory;
                cell.degenerate_fallback = r.integrator_derived;
                cell.slowest_decay = r.slowest_decay;
            } catch (const std::exception&) {
                cell.failed = true;
            }
        }
    });
    return out;
}

std::vector<SweepResult> run_detuning_comparison(const SweepSpec& spec, const std::vector<double>& detunings,
                                                 unsigned workers) {
    std::vector<SweepResult> out;
    out.reserve(detunings.size());
    for (double dc : detunings) {
        SweepSpec s = spec;
        s.delta_c = dc;
        out.push_back(run_sweep(s, workers));
    }
    return out;
}

unsigned default_workers() {
    if (const char* env = std::getenv("DARKSTATE_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace darkstate
