// ode.hpp: Pseudomode reformulation of the reservoir as a 3x3 linear ODE
//
// The Lorentzian kernel is a single decaying exponential, so the reservoir's
// influence on the qubits is carried exactly by one auxiliary amplitude b:
//
//   dc1/dt = -i j/2 c2 - i g1 b
//   dc2/dt = -i j/2 c1 - i g2 b
//   db/dt  = -i g1 c1 - i g2 c2 - (gamma/2 + i delta_c) b,   b(0) = 0
//
// Eliminating b recovers the integro-differential amplitude equations.

#pragma once

#include <array>

#include <Eigen/Dense>

#include "darkstate/core_model.hpp"

namespace darkstate {

struct Generator {
    Eigen::Matrix3cd m;
    double gamma{1.0}; // m is stored in canonical units; time is rescaled by gamma
};

struct IntegratorOptions {
    double rel_tol{1e-10};
    double abs_tol{1e-12};
    std::size_t max_steps_between_outputs{500000};
};

Generator build_generator(const SystemParams& params);

// Eigenvalues in physical units.
std::array<cplx, 3> generator_eigenvalues(const Generator& gen);

// Dormand-Prince 5(4) with dense output, sampled at t = 0, dt_out, ..., t_end.
// Throws IntegratorStallError if the step controller stops making progress.
Trajectory integrate(const Generator& gen, const InitialState& init, double t_end, double dt_out,
                     const IntegratorOptions& options = {});

// Same, starting from an arbitrary amplitude state (times reported from 0).
Trajectory integrate(const Generator& gen, const AmplitudeState& start, double t_end, double dt_out,
                     const IntegratorOptions& options = {});

} // namespace darkstate
