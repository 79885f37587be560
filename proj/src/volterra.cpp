#include "darkstate/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "darkstate/errors.hpp"
#include "darkstate/spectral.hpp"

namespace darkstate {

ConvolutionAccumulator::ConvolutionAccumulator(const SystemParams& canonical_params, double h,
                                               cplx initial)
    : h_(h), g1_(canonical_params.g1), g2_(canonical_params.g2),
      decay_(std::exp(-canonical_params.kernel_rate() * h)), bath_(initial) {}

double max_volterra_step(const SystemParams& params) {
    const SystemParams p = params.canonical();
    const double fastest = std::max({1.0, std::abs(p.j), p.g1 * p.g1, p.g2 * p.g2});
    return 0.01 / fastest / params.gamma;
}

Trajectory solve_volterra(const SystemParams& params, const InitialState& init, double t_end, double h,
                          double dt_out) {
    if (!(h > 0.0)) throw StepSizeError("Volterra step must be positive");
    const double h_max = max_volterra_step(params);
    if (h > h_max * (1.0 + 1e-12)) {
        throw StepSizeError("Volterra step " + std::to_string(h) + " exceeds limit " +
                            std::to_string(h_max));
    }
    const std::vector<double> times = output_times(t_end, dt_out > 0.0 ? dt_out : h);

    const SystemParams p = params.canonical();
    const cplx half_ij = 0.5 * I_UNIT * p.j;
    auto coupling = [&](cplx c1, cplx c2) { return p.g1 * c1 + p.g2 * c2; };

    cplx c1 = init.c1_0;
    cplx c2 = init.c2_0;
    Trajectory traj;
    traj.reserve(times.size());
    auto record = [&](double t, cplx bath) {
        traj.push_back({t, {c1, c2, -I_UNIT * bath}, concurrence(c1, c2)});
    };
    record(0.0, cplx{});

    ConvolutionAccumulator acc(p, h * params.gamma);
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double interval = (times[k] - times[k - 1]) * params.gamma;
        const auto n_sub = static_cast<std::size_t>(std::ceil(interval / (h * params.gamma) - 1e-9));
        const double step = interval / static_cast<double>(n_sub);
        if (step != acc.step()) acc = ConvolutionAccumulator(p, step, acc.bath());
        for (std::size_t n = 0; n < n_sub; ++n) {
            const cplx u_n = coupling(c1, c2);
            const cplx f1 = -half_ij * c2 - acc.z1();
            const cplx f2 = -half_ij * c1 - acc.z2();

            const cplx c1_pred = c1 + step * f1;
            const cplx c2_pred = c2 + step * f2;
            const cplx bath_pred = acc.peek(u_n, coupling(c1_pred, c2_pred));
            const cplx f1_pred = -half_ij * c2_pred - p.g1 * bath_pred;
            const cplx f2_pred = -half_ij * c1_pred - p.g2 * bath_pred;

            c1 += 0.5 * step * (f1 + f1_pred);
            c2 += 0.5 * step * (f2 + f2_pred);
            acc.advance(u_n, coupling(c1, c2));
        }
        record(times[k], acc.bath());
    }
    return traj;
}

} // namespace darkstate
