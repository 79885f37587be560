// sweep.hpp: Steady-state concurrence over (g1, g2) grids

#pragma once

#include <cstddef>
#include <vector>

#include "darkstate/core_model.hpp"

namespace darkstate {

struct AxisRange {
    double min{-2.0};
    double max{2.0};
    std::size_t n_points{201};

    void validate() const;
    // Point k of n; mirrored points of a range symmetric about 0 are exact negatives.
    double at(std::size_t k) const;
    bool operator==(const AxisRange&) const = default;
};

struct SweepSpec {
    AxisRange g1_range;
    AxisRange g2_range;
    double j{0.0};
    double gamma{1.0};
    double delta_c{0.0};
    InitialState init;
    Tolerances tol;

    void validate() const;
};

struct SweepCell {
    double g1{0.0};
    double g2{0.0};
    double ssc{0.0};
    std::size_t n_surviving{0};
    bool oscillatory{false};
    bool degenerate_fallback{false};
    bool failed{false};          // cell threw; ssc left at 0
    double slowest_decay{0.0};   // min |Re s| over non-surviving poles
};

// Cells are row-major with g2 indexing rows and g1 indexing columns:
// cell(i1, i2) = cells[i2 * n1 + i1].
struct SweepResult {
    std::size_t n1{0};
    std::size_t n2{0};
    std::vector<SweepCell> cells;

    const SweepCell& at(std::size_t i1, std::size_t i2) const { return cells[i2 * n1 + i1]; }
    std::size_t failed_cells() const;
};

SweepResult run_sweep(const SweepSpec& spec, unsigned workers = 1);

std::vector<SweepResult> run_detuning_comparison(const SweepSpec& spec, const std::vector<double>& detunings,
                                                 unsigned workers = 1);

// Value of DARKSTATE_WORKERS if set and positive, else hardware concurrency.
unsigned default_workers();

} // namespace darkstate
