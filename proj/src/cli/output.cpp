#include "darkstate/cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace darkstate::cli {

namespace {

// Matplotlib's viridis sampled at nine evenly spaced stops.
constexpr std::array<Rgb, 9> VIRIDIS_STOPS{{{68, 1, 84},
                                           {71, 44, 122},
                                           {59, 81, 139},
                                           {44, 113, 142},
                                           {33, 144, 141},
                                           {39, 173, 129},
                                           {92, 200, 99},
                                           {170, 220, 50},
                                           {253, 231, 37}}};

std::ofstream open_for_write(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream os(path, mode);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    return os;
}

void finish(std::ofstream& os, const std::string& path) {
    os.flush();
    if (!os) throw std::runtime_error("write failed for " + path);
}

} // namespace

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v + 0.0); // + 0.0 folds -0 into 0
    return buf;
}

std::string format_time(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", t + 0.0);
    return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,re_c1,im_c1,re_c2,im_c2,re_b,im_b,concurrence\n";
    for (const auto& s : traj) {
        os << format_time(s.t) << ',' << format_real(s.amp.c1.real()) << ',' << format_real(s.amp.c1.imag()) << ','
           << format_real(s.amp.c2.real()) << ',' << format_real(s.amp.c2.imag()) << ','
           << format_real(s.amp.b.real()) << ',' << format_real(s.amp.b.imag()) << ','
           << format_real(s.concurrence) << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
    os << "g1,g2,ssc,n_surviving,oscillatory,degenerate_fallback\n";
    for (const auto& c : sweep.cells) {
        os << format_real(c.g1) << ',' << format_real(c.g2) << ',' << format_real(c.ssc) << ',' << c.n_surviving
           << ',' << (c.oscillatory ? 1 : 0) << ',' << (c.degenerate_fallback ? 1 : 0) << '\n';
    }
}

void write_scan_csv(std::ostream& os, double g1, const ScanResult& scan) {
    os << "eps,g1,g2,ssc,n_surviving,oscillatory\n";
    for (const auto& p : scan.points) {
        os << format_real(p.eps) << ',' << format_real(g1) << ',' << format_real(p.g2) << ','
           << format_real(p.result.ssc) << ',' << p.result.surviving_poles.size() << ','
           << (p.result.oscillatory ? 1 : 0) << '\n';
    }
}

Rgb ramp(double value) {
    const double v = std::isfinite(value) ? std::clamp(value, 0.0, 1.0) : 0.0;
    const double pos = v * static_cast<double>(VIRIDIS_STOPS.size() - 1);
    const auto lo = std::min(static_cast<std::size_t>(pos), VIRIDIS_STOPS.size() - 2);
    const double frac = pos - static_cast<double>(lo);
    Rgb out{};
    for (std::size_t ch = 0; ch < 3; ++ch) {
        const double a = VIRIDIS_STOPS[lo][ch];
        const double b = VIRIDIS_STOPS[lo + 1][ch];
        out[ch] = static_cast<std::uint8_t>(std::lround(a + frac * (b - a)));
    }
    return out;
}

void write_heatmap(std::ostream& os, const SweepResult& sweep) {
    if (sweep.cells.empty()) throw std::invalid_argument("cannot render an empty sweep");
    os << "P6\n" << sweep.n1 << ' ' << sweep.n2 << "\n255\n";
    for (std::size_t row = 0; row < sweep.n2; ++row) {
        const std::size_t i2 = sweep.n2 - 1 - row; // top row is the largest g2
        for (std::size_t i1 = 0; i1 < sweep.n1; ++i1) {
            const Rgb px = ramp(sweep.at(i1, i2).ssc);
            os.write(reinterpret_cast<const char*>(px.data()), 3);
        }
    }
}

void emit_csv(const std::string& path, const Trajectory& traj) {
    auto os = open_for_write(path);
    write_trajectory_csv(os, traj);
    finish(os, path);
}

void emit_csv(const std::string& path, const SweepResult& sweep) {
    auto os = open_for_write(path);
    write_sweep_csv(os, sweep);
    finish(os, path);
}

void emit_heatmap(const std::string& path, const SweepResult& sweep) {
    auto os = open_for_write(path, std::ios::out | std::ios::binary);
    write_heatmap(os, sweep);
    finish(os, path);
}

nlohmann::json steady_state_json(const SteadyStateResult& r) {
    nlohmann::json poles = nlohmann::json::array();
    for (const cplx s : r.surviving_poles) poles.push_back({s.real(), s.imag()});
    return {{"ssc", r.ssc},
            {"ssc_min", r.ssc_min},
            {"ssc_max", r.ssc_max},
            {"surviving_poles", poles},
            {"n_surviving", r.surviving_poles.size()},
            {"oscillatory", r.oscillatory},
            {"degenerate", r.degenerate},
            {"integrator_derived", r.integrator_derived}};
}

nlohmann::json poles_json(const PoleDecomposition& dec, const Tolerances& tol) {
    nlohmann::json poles = nlohmann::json::array();
    for (std::size_t j = 0; j < dec.poles.size(); ++j) {
        const cplx s = dec.poles[j];
        poles.push_back({{"pole", {s.real(), s.imag()}},
                         {"residue1", {dec.residues1[j].real(), dec.residues1[j].imag()}},
                         {"residue2", {dec.residues2[j].real(), dec.residues2[j].imag()}},
                         {"surviving", std::abs(s.real()) <= tol.pole_survival_eps * dec.params.gamma}});
    }
    return {{"poles", poles},
            {"degenerate", dec.degenerate},
            {"near_defective", dec.near_defective},
            {"polish_residual", dec.polish_residual}};
}

} // namespace darkstate::cli
