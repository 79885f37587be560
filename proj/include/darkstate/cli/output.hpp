// output.hpp: CSV, PPM and JSON serialisation of solver results
//
// Trajectory CSV: t,re_c1,im_c1,re_c2,im_c2,re_b,im_b,concurrence
// Sweep CSV:      g1,g2,ssc,n_surviving,oscillatory,degenerate_fallback
// Scan CSV:       eps,g1,g2,ssc,n_surviving,oscillatory
// Time is printed fixed-point with 12 decimals; every other real with 15
// significant digits. Booleans are 0/1.
//
// Heatmaps are binary PPM (P6), one pixel per cell, g1 ascending left to
// right and g2 ascending bottom to top.

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "darkstate/spectral.hpp"
#include "darkstate/steady_state.hpp"
#include "darkstate/sweep.hpp"

namespace darkstate::cli {

std::string format_real(double v);
std::string format_time(double t);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);
void write_scan_csv(std::ostream& os, double g1, const ScanResult& scan);

using Rgb = std::array<std::uint8_t, 3>;

// Piecewise-linear viridis-like ramp; input clamped to [0, 1].
Rgb ramp(double value);
void write_heatmap(std::ostream& os, const SweepResult& sweep);

// File variants; I/O failures throw std::runtime_error naming the path.
void emit_csv(const std::string& path, const Trajectory& traj);
void emit_csv(const std::string& path, const SweepResult& sweep);
void emit_heatmap(const std::string& path, const SweepResult& sweep);

nlohmann::json steady_state_json(const SteadyStateResult& r);
nlohmann::json poles_json(const PoleDecomposition& dec, const Tolerances& tol);

} // namespace darkstate::cli
