// steady_state.hpp: Steady-state concurrence from the surviving poles
//
// A pole survives when |Re s| <= pole_survival_eps * gamma. A pole on the
// imaginary axis needs an eigenvector with no pseudomode component, i.e. a
// qubit superposition decoupled from the reservoir; for j = 0 this is the
// dark combination g2|eg> - g1|ge>, and for j != 0 it exists only on the
// lines g1 = g2 (s = +i j/2) and g1 = -g2 (s = -i j/2).

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "darkstate/core_model.hpp"
#include "darkstate/spectral.hpp"

namespace darkstate {

struct SteadyStateResult {
    double ssc{0.0};       // time average when oscillatory
    double ssc_min{0.0};   // late-time envelope of C(t)
    double ssc_max{0.0};
    std::vector<cplx> surviving_poles;
    bool oscillatory{false};
    bool degenerate{false};         // pole decomposition was flagged degenerate
    bool integrator_derived{false}; // value came from the long-time ODE fallback
    double slowest_decay{0.0};      // min |Re s| over non-surviving poles (0 if none)
};

inline constexpr std::size_t STEADY_AVERAGE_SAMPLES = 1024;

SteadyStateResult steady_concurrence(const PoleDecomposition& dec, const Tolerances& tol = {});
SteadyStateResult steady_concurrence(const SystemParams& params, const InitialState& init,
                                     const Tolerances& tol = {});

// Settling rule for the integration fallback: 50/gamma plus ten beat periods
// of the two slowest poles. The beat period is capped at 50/gamma when the two
// frequencies (nearly) coincide.
struct SettlingWindow {
    double t_end{0.0};
    double window{0.0}; // averaging window at the end of [0, t_end]
};
SettlingWindow settling_time(const PoleDecomposition& dec);

// Late-time average of C(t) by direct integration of the pseudomode ODE.
SteadyStateResult steady_concurrence_by_integration(const PoleDecomposition& dec, const Tolerances& tol = {});

// Closed-form residue of the s = 0 pole for j = 0:
// 2 |g1| |g2| |g2 c1(0) - g1 c2(0)|^2 / (g1^2 + g2^2)^2.
// Throws std::invalid_argument if j != 0; returns 0 (with a warning on
// stderr) when g1 = g2 = 0.
double dark_state_ssc(const SystemParams& params, const InitialState& init);

enum class ScanMode { SYMMETRIC, ANTISYMMETRIC };

struct ScanPoint {
    double eps{0.0};
    double g2{0.0};
    SteadyStateResult result;
};

struct ScanResult {
    std::vector<ScanPoint> points; // input grid order
    std::optional<double> hwhm;
};

// g2 = g1 + eps (SYMMETRIC) or g2 = -g1 + eps (ANTISYMMETRIC) for each eps.
ScanResult instability_scan(const SystemParams& params_base, const InitialState& init, ScanMode mode,
                            std::span<const double> eps_grid, const Tolerances& tol = {},
                            unsigned workers = 1);

// Half width at half maximum of a sampled curve, with linear interpolation of
// the half-maximum crossings. One-sided when the curve only drops on one
// side; empty when the peak is not positive or never drops to half.
std::optional<double> half_width_half_max(std::span<const double> x, std::span<const double> y);

} // namespace darkstate
