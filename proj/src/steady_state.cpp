#include "darkstate/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "darkstate/ode.hpp"
#include "darkstate/parallel.hpp"

namespace darkstate {

namespace {

bool survives(cplx pole, double gamma, const Tolerances& tol) {
    return std::abs(pole.real()) <= tol.pole_survival_eps * gamma;
}

void classify(const PoleDecomposition& dec, const Tolerances& tol, SteadyStateResult& out) {
    double slowest = std::numeric_limits<double>::infinity();
    for (const cplx s : dec.poles) {
        if (survives(s, dec.params.gamma, tol)) {
            out.surviving_poles.push_back(s);
        } else {
            slowest = std::min(slowest, std::abs(s.real()));
        }
    }
    out.slowest_decay = std::isfinite(slowest) ? slowest : 0.0;
    out.degenerate = dec.degenerate;
}

void summarise(std::span<const double> samples, SteadyStateResult& out) {
    double sum = 0.0;
    out.ssc_min = std::numeric_limits<double>::infinity();
    out.ssc_max = 0.0;
    for (double c : samples) {
        sum += c;
        out.ssc_min = std::min(out.ssc_min, c);
        out.ssc_max = std::max(out.ssc_max, c);
    }
    out.ssc = std::clamp(sum / static_cast<double>(samples.size()), out.ssc_min, out.ssc_max);
    out.ssc_max = std::min(out.ssc_max, 1.0);
    out.ssc = std::min(out.ssc, out.ssc_max);
}

} // namespace

SettlingWindow settling_time(const PoleDecomposition& dec) {
    const double base = 50.0 / dec.params.gamma;
    std::array<cplx, 3> poles = dec.poles;
    std::sort(poles.begin(), poles.end(),
              [](cplx x, cplx y) { return std::abs(x.real()) < std::abs(y.real()); });
    const double beat_freq = std::abs(poles[0].imag() - poles[1].imag());
    double window = beat_freq > 0.0 ? 2.0 * std::numbers::pi / beat_freq : base;
    window = std::min(window, base);
    return {base + 10.0 * window, window};
}

SteadyStateResult steady_concurrence_by_integration(const PoleDecomposition& dec, const Tolerances& tol) {
    SteadyStateResult out;
    classify(dec, tol, out);
    out.integrator_derived = true;

    const SettlingWindow settle = settling_time(dec);
    const Generator gen = build_generator(dec.params);
    const double lead = settle.t_end - settle.window;
    const Trajectory approach = integrate(gen, dec.init, lead, lead);
    const Trajectory tail = integrate(gen, approach.back().amp, settle.window,
                                      settle.window / static_cast<double>(STEADY_AVERAGE_SAMPLES));

    std::vector<double> samples;
    samples.reserve(tail.size());
    // the last sample closes the window and duplicates the first period point
    for (std::size_t k = 0; k + 1 < tail.size(); ++k) samples.push_back(tail[k].concurrence);
    summarise(samples, out);
    out.oscillatory = out.ssc_max - out.ssc_min > tol.backend_agreement_eps;
    return out;
}

SteadyStateResult steady_concurrence(const PoleDecomposition& dec, const Tolerances& tol) {
    tol.validate();
    if (dec.degenerate) return steady_concurrence_by_integration(dec, tol);

    SteadyStateResult out;
    classify(dec, tol, out);

    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < dec.poles.size(); ++j)
        if (survives(dec.poles[j], dec.params.gamma, tol)) idx.push_back(j);

    if (idx.empty()) return out;

    if (idx.size() == 1) {
        const std::size_t j = idx.front();
        out.ssc = std::min(1.0, concurrence(dec.residues1[j], dec.residues2[j]));
        out.ssc_min = out.ssc_max = out.ssc;
        return out;
    }

    // several undamped modes beat against each other: average over one beat period
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = a + 1; b < idx.size(); ++b)
            min_gap = std::min(min_gap, std::abs(dec.poles[idx[a]].imag() - dec.poles[idx[b]].imag()));
    out.oscillatory = true;
    const double period = 2.0 * std::numbers::pi / min_gap;
    std::vector<double> samples(STEADY_AVERAGE_SAMPLES);
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double t = period * static_cast<double>(k) / static_cast<double>(samples.size());
        cplx c1{}, c2{};
        for (std::size_t j : idx) {
            const cplx e = std::exp(cplx{0.0, dec.poles[j].imag()} * t);
            c1 += dec.residues1[j] * e;
            c2 += dec.residues2[j] * e;
        }
        samples[k] = concurrence(c1, c2);
    }
    summarise(samples, out);
    return out;
}

SteadyStateResult steady_concurrence(const SystemParams& params, const InitialState& init,
                                     const Tolerances& tol) {
    return steady_concurrence(solve_spectral(params, init, tol), tol);
}

double dark_state_ssc(const SystemParams& params, const InitialState& init) {
    if (params.j != 0.0) {
        throw std::invalid_argument("dark-state formula requires j = 0");
    }
    const double g1 = params.g1;
    const double g2 = params.g2;
    const double weight = g1 * g1 + g2 * g2;
    if (weight == 0.0) {
        std::cerr << "warning: both couplings vanish; the qubits are decoupled and C(t) is constant\n";
        return 0.0;
    }
    const cplx x = g2 * init.c1_0 - g1 * init.c2_0;
    return 2.0 * std::abs(g1) * std::abs(g2) * std::norm(x) / (weight * weight);
}

ScanResult instability_scan(const SystemParams& params_base, const InitialState& init, ScanMode mode,
                            std::span<const double> eps_grid, const Tolerances& tol, unsigned workers) {
    ScanResult out;
    out.points.resize(eps_grid.size());
    const double anchor = mode == ScanMode::SYMMETRIC ? params_base.g1 : -params_base.g1;
    parallel_for(eps_grid.size(), workers, [&](std::size_t k) {
        SystemParams p = params_base;
        p.g2 = anchor + eps_grid[k];
        out.points[k] = {eps_grid[k], p.g2, steady_concurrence(p, init, tol)};
    });

    std::vector<double> ssc(out.points.size());
    std::transform(out.points.begin(), out.points.end(), ssc.begin(),
                   [](const ScanPoint& pt) { return pt.result.ssc; });
    out.hwhm = half_width_half_max(eps_grid, ssc);
    return out;
}

std::optional<double> half_width_half_max(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("x and y must have equal length");
    if (x.empty()) return std::nullopt;
    const auto peak_it = std::max_element(y.begin(), y.end());
    const double peak = *peak_it;
    if (!(peak > 0.0)) return std::nullopt;
    const double half = 0.5 * peak;
    const auto peak_idx = static_cast<std::size_t>(peak_it - y.begin());

    auto crossing = [&](std::size_t inside, std::size_t outside) {
        const double frac = (y[inside] - half) / (y[inside] - y[outside]);
        return x[inside] + frac * (x[outside] - x[inside]);
    };

    std::optional<double> left, right;
    for (std::size_t i = peak_idx; i > 0; --i) {
        if (y[i - 1] < half) {
            left = crossing(i, i - 1);
            break;
        }
    }
    for (std::size_t i = peak_idx; i + 1 < y.size(); ++i) {
        if (y[i + 1] < half) {
            right = crossing(i, i + 1);
            break;
        }
    }
    if (left && right) return 0.5 * (*right - *left);
    if (left) return x[peak_idx] - *left;
    if (right) return *right - x[peak_idx];
    return std::nullopt;
}

} // namespace darkstate
