// volterra.hpp: Direct time-domain solve of the memory-kernel amplitude equations
//
//   dc1/dt = -i j/2 c2 - int_0^t I(t - t') [g1^2 c1 + g1 g2 c2](t') dt'
//   dc2/dt = -i j/2 c1 - int_0^t I(t - t') [g2^2 c2 + g1 g2 c1](t') dt'
//
// Both history integrals are multiples of one convolution of the kernel with
// u = g1 c1 + g2 c2. Because the kernel is a single exponential,
// I(t + h) = I(h) I(t) and the composite trapezoid sum over the history can be
// advanced in O(1) per step.

#pragma once

#include "darkstate/core_model.hpp"

namespace darkstate {

// Running trapezoid approximation of int_0^t I(t - t') u(t') dt'.
class ConvolutionAccumulator {
public:
    ConvolutionAccumulator(const SystemParams& canonical_params, double h, cplx initial = {});

    // Slide the window by one step of size h: u_prev = u(t), u_next = u(t + h).
    void advance(cplx u_prev, cplx u_next) { bath_ = propagate(bath_, u_prev, u_next); }

    // Value the sum would take after advance(), without committing it.
    cplx propagate(cplx bath, cplx u_prev, cplx u_next) const {
        return decay_ * bath + 0.5 * h_ * (decay_ * u_prev + u_next);
    }
    cplx peek(cplx u_prev, cplx u_next) const { return propagate(bath_, u_prev, u_next); }

    cplx bath() const { return bath_; }
    cplx z1() const { return g1_ * bath_; }
    cplx z2() const { return g2_ * bath_; }
    double step() const { return h_; }

private:
    double h_;
    double g1_;
    double g2_;
    cplx decay_; // I(h)
    cplx bath_{};
};

// Largest admissible step: 0.01 / max(gamma, |j|, g1^2, g2^2) in canonical units.
double max_volterra_step(const SystemParams& params);

// Trapezoid history + Heun predictor/corrector, second order in h. Samples
// are reported every dt_out (every step when dt_out <= 0); each output
// interval is split into equal sub-steps no larger than h. b(t) is the
// pseudomode amplitude implied by the history sum, -i * bath.
// Throws StepSizeError when h exceeds max_volterra_step(params).
Trajectory solve_volterra(const SystemParams& params, const InitialState& init, double t_end, double h,
                          double dt_out = 0.0);

} // namespace darkstate
