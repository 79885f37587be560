// Pole-residue evaluation of the Laplace solution. The cubic is seeded with
// Cardano's formula and every root is then refined by Newton iteration with
// implicit deflation of the other two roots (Maehly's correction), which keeps
// close roots from collapsing onto each other.

#include "darkstate/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "darkstate/errors.hpp"

namespace darkstate {

namespace {

template <std::size_t N, std::size_t M>
std::array<cplx, N + M - 1> polymul(const std::array<cplx, N>& p, const std::array<cplx, M>& q) {
    std::array<cplx, N + M - 1> out{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < M; ++k) out[i + k] += p[i] * q[k];
    return out;
}

std::array<cplx, 3> cubic_derivative(const std::array<cplx, 4>& q) {
    return {3.0 * q[0], 2.0 * q[1], q[2]};
}

// Roots of s^3 + b s^2 + c s + d.
std::array<cplx, 3> cardano(cplx b, cplx c, cplx d) {
    const cplx shift = -b / 3.0;
    const cplx p = c - b * b / 3.0;
    const cplx q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;

    const cplx disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    // larger-magnitude branch avoids cancellation in u^3
    cplx u3 = -q / 2.0 + disc;
    if (std::abs(-q / 2.0 - disc) > std::abs(u3)) u3 = -q / 2.0 - disc;

    if (std::abs(u3) == 0.0) {
        // p == q == 0: triple root
        return {shift, shift, shift};
    }
    const cplx u = std::pow(u3, 1.0 / 3.0);
    const cplx omega{-0.5, std::sqrt(3.0) / 2.0};
    std::array<cplx, 3> roots{};
    cplx uk = u;
    for (auto& r : roots) {
        r = uk - p / (3.0 * uk) + shift;
        uk *= omega;
    }
    return roots;
}

void polish(std::array<cplx, 4> const& q, std::array<cplx, 3>& roots, double eps) {
    const auto dq = cubic_derivative(q);
    constexpr int max_iter = 60;
    for (std::size_t j = 0; j < roots.size(); ++j) {
        double last_step = std::numeric_limits<double>::infinity();
        for (int it = 0; it < max_iter; ++it) {
            const cplx s = roots[j];
            const cplx val = polyval(q, s);
            if (val == cplx{}) break;
            cplx deflate{};
            for (std::size_t k = 0; k < roots.size(); ++k) {
                if (k == j) continue;
                const cplx diff = s - roots[k];
                if (diff != cplx{}) deflate += 1.0 / diff;
            }
            const cplx denom = polyval(dq, s) - val * deflate;
            if (denom == cplx{}) break;
            const cplx step = val / denom;
            const double step_size = std::abs(step);
            // rounding floor: further iterations only wander
            if (it > 2 && step_size >= last_step) break;
            roots[j] = s - step;
            last_step = step_size;
            if (step_size < 0.01 * eps) break;
        }
    }
}

} // namespace

RationalSolution assemble(const SystemParams& params, const InitialState& init) {
    const SystemParams p = params.canonical();
    const cplx a = p.kernel_rate();
    const cplx half_ij = 0.5 * I_UNIT * p.j;
    const double g12 = p.g1 * p.g2;

    RationalSolution sol;
    sol.params = params;
    sol.init = init;
    sol.cubic_den = {cplx{1.0, 0.0}, a, cplx{p.g1 * p.g1 + p.g2 * p.g2 + 0.25 * p.j * p.j, 0.0},
                     0.25 * a * p.j * p.j - I_UNIT * p.j * g12};

    // A12 = half_ij * s + (half_ij * a + g1 g2)
    const cplx a12_0 = half_ij * a + g12;
    const cplx c1 = init.c1_0;
    const cplx c2 = init.c2_0;
    sol.num1 = {c1, c1 * a - c2 * half_ij, c1 * p.g2 * p.g2 - c2 * a12_0};
    sol.num2 = {c2, c2 * a - c1 * half_ij, c2 * p.g1 * p.g1 - c1 * a12_0};
    return sol;
}

std::array<cplx, 5> unreduced_quartic(const SystemParams& params) {
    const SystemParams p = params.canonical();
    const cplx a = p.kernel_rate();
    const std::array<cplx, 3> a11{1.0, a, p.g1 * p.g1};
    const std::array<cplx, 3> a22{1.0, a, p.g2 * p.g2};
    const std::array<cplx, 2> a12{0.5 * I_UNIT * p.j, 0.5 * I_UNIT * p.j * a + p.g1 * p.g2};
    const auto diag = polymul(a11, a22);
    const auto off = polymul(a12, a12);
    std::array<cplx, 5> out = diag;
    for (std::size_t k = 0; k < off.size(); ++k) out[k + 2] -= off[k];
    return out;
}

PoleDecomposition find_poles(const RationalSolution& sol, const Tolerances& tol) {
    tol.validate();
    const auto& q = sol.cubic_den;
    if (q[0] != cplx{1.0, 0.0}) {
        throw std::invalid_argument("cubic denominator must be monic");
    }

    auto roots = cardano(q[1], q[2], q[3]);
    polish(q, roots, tol.root_polish_eps);
    // deterministic order: ascending decay rate, then ascending frequency
    std::sort(roots.begin(), roots.end(), [](cplx x, cplx y) {
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() < y.imag();
    });

    PoleDecomposition dec;
    dec.params = sol.params;
    dec.init = sol.init;

    const auto dq = cubic_derivative(q);
    double min_sep = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = j + 1; k < 3; ++k) min_sep = std::min(min_sep, std::abs(roots[j] - roots[k]));
    dec.degenerate = min_sep < DEGENERATE_POLE_SEPARATION;

    double max_residue = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
        const cplx s = roots[j];
        const cplx dqs = polyval(dq, s);
        const double newton = dqs == cplx{} ? std::numeric_limits<double>::infinity()
                                            : std::abs(polyval(q, s)) / std::abs(dqs);
        dec.polish_residual = std::max(dec.polish_residual, newton);
        dec.residues1[j] = polyval(sol.num1, s) / dqs;
        dec.residues2[j] = polyval(sol.num2, s) / dqs;
        max_residue = std::max({max_residue, std::abs(dec.residues1[j]), std::abs(dec.residues2[j])});
        dec.poles[j] = s * sol.params.gamma;
    }
    dec.near_defective =
        dec.degenerate && (!std::isfinite(max_residue) || max_residue > NEAR_DEFECTIVE_RESIDUE);
    return dec;
}

std::pair<cplx, cplx> amplitudes_at(const PoleDecomposition& dec, double t) {
    if (dec.degenerate) {
        throw DegenerateSpectrumError("poles nearly coincide; use the ODE backend");
    }
    if (t < 0.0) throw std::domain_error("time must be non-negative");
    cplx c1{}, c2{};
    for (std::size_t j = 0; j < 3; ++j) {
        const cplx e = std::exp(dec.poles[j] * t);
        c1 += dec.residues1[j] * e;
        c2 += dec.residues2[j] * e;
    }
    return {c1, c2};
}

AmplitudeState state_at(const PoleDecomposition& dec, double t) {
    const auto [c1, c2] = amplitudes_at(dec, t);
    const SystemParams p = dec.params.canonical();
    const cplx a = p.kernel_rate();
    const double tau = t * dec.params.gamma;

    // b(tau) = -i int_0^tau exp(-a (tau - u)) (g1 c1 + g2 c2)(u) du, termwise per pole
    cplx b{};
    const cplx decay = std::exp(-a * tau);
    for (std::size_t j = 0; j < 3; ++j) {
        const cplx s = dec.poles[j] / dec.params.gamma;
        const cplx weight = p.g1 * dec.residues1[j] + p.g2 * dec.residues2[j];
        const cplx gap = s + a;
        const cplx integral =
            std::abs(gap) < 1e-12 ? tau * std::exp(s * tau) : (std::exp(s * tau) - decay) / gap;
        b += weight * integral;
    }
    return {c1, c2, -I_UNIT * b};
}

std::vector<double> output_times(double t_end, double dt_out) {
    if (!(t_end > 0.0) || !(dt_out > 0.0) || !std::isfinite(t_end) || !std::isfinite(dt_out)) {
        throw std::invalid_argument("t_end and dt_out must be positive and finite");
    }
    const auto steps = static_cast<std::size_t>(std::floor(t_end / dt_out + 1e-9));
    std::vector<double> times;
    times.reserve(steps + 2);
    for (std::size_t k = 0; k <= steps; ++k) times.push_back(static_cast<double>(k) * dt_out);
    if (t_end - times.back() > 1e-9 * dt_out) times.push_back(t_end);
    return times;
}

Trajectory spectral_trajectory(const PoleDecomposition& dec, double t_end, double dt_out) {
    if (dec.degenerate) {
        throw DegenerateSpectrumError("poles nearly coincide; use the ODE backend");
    }
    Trajectory traj;
    for (double t : output_times(t_end, dt_out)) {
        TrajectorySample sample;
        sample.t = t;
        sample.amp = t == 0.0 ? AmplitudeState{dec.init.c1_0, dec.init.c2_0, {}} : state_at(dec, t);
        sample.concurrence = concurrence(sample.amp.c1, sample.amp.c2);
        traj.push_back(sample);
    }
    return traj;
}

} // namespace darkstate
