// spectral.hpp: Laplace-domain solution: rational amplitudes, poles and residues
//
// Multiplying the two Laplace-space amplitude equations by (s + a), with
// a = gamma/2 + i delta_c, gives a 2x2 polynomial system
//
//   A11(s) F1 + A12(s) F2 = (s + a) c1(0)
//   A12(s) F1 + A22(s) F2 = (s + a) c2(0)
//
//   A11 = s(s+a) + g1^2,  A22 = s(s+a) + g2^2,  A12 = i j (s+a)/2 + g1 g2
//
// whose determinant P(s) = A11 A22 - A12^2 always vanishes at s = -a.
// Deflating that root leaves the monic cubic Q(s) and F_i = N_i / Q with
// quadratic numerators. All polynomial coefficients are stored highest degree
// first and in canonical units (rates divided by gamma).

#pragma once

#include <array>
#include <utility>

#include "darkstate/core_model.hpp"

namespace darkstate {

template <std::size_t N>
cplx polyval(const std::array<cplx, N>& coeffs, cplx s) {
    cplx acc{0.0, 0.0};
    for (const auto& c : coeffs) acc = acc * s + c;
    return acc;
}

struct RationalSolution {
    std::array<cplx, 4> cubic_den{}; // 1, q2, q1, q0
    std::array<cplx, 3> num1{};
    std::array<cplx, 3> num2{};
    SystemParams params;             // as supplied (physical units)
    InitialState init;
};

struct PoleDecomposition {
    std::array<cplx, 3> poles{};     // physical units
    std::array<cplx, 3> residues1{};
    std::array<cplx, 3> residues2{};
    bool degenerate{false};          // two poles closer than 1e-6 gamma
    bool near_defective{false};      // degenerate and some residue exceeds 1e6
    double polish_residual{0.0};     // max_j |Q(s_j)| / |Q'(s_j)| after polishing
    SystemParams params;
    InitialState init;
};

inline constexpr double DEGENERATE_POLE_SEPARATION = 1e-6;
inline constexpr double NEAR_DEFECTIVE_RESIDUE = 1e6;

RationalSolution assemble(const SystemParams& params, const InitialState& init);

// P(s) = A11 A22 - A12^2 built by explicit polynomial products (canonical units).
std::array<cplx, 5> unreduced_quartic(const SystemParams& params);

PoleDecomposition find_poles(const RationalSolution& sol, const Tolerances& tol = {});

inline PoleDecomposition solve_spectral(const SystemParams& params, const InitialState& init,
                                        const Tolerances& tol = {}) {
    return find_poles(assemble(params, init), tol);
}

// c1(t), c2(t) = sum_j R_ij exp(s_j t). Throws DegenerateSpectrumError on a
// degenerate decomposition and std::domain_error for t < 0.
std::pair<cplx, cplx> amplitudes_at(const PoleDecomposition& dec, double t);

// Amplitudes plus the pseudomode amplitude b(t), reconstructed from the same poles.
AmplitudeState state_at(const PoleDecomposition& dec, double t);

// Samples at t = 0, dt_out, ..., t_end (t_end appended when off-grid).
Trajectory spectral_trajectory(const PoleDecomposition& dec, double t_end, double dt_out);

// Output grid shared by every time-domain backend.
std::vector<double> output_times(double t_end, double dt_out);

} // namespace darkstate
