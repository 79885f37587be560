#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "darkstate/errors.hpp"
#include "darkstate/ode.hpp"
#include "darkstate/spectral.hpp"
#include "test_support.hpp"

using namespace darkstate;

namespace {

// Expand A11 A22 - A12^2 from scratch (lowest degree first), then divide by
// (s + a) with synthetic division. Returns Q highest degree first and the
// division remainder.
std::pair<std::array<cplx, 4>, cplx> expand_and_deflate(const SystemParams& p) {
    const cplx a{p.gamma / 2.0, p.delta_c};
    const cplx i{0.0, 1.0};
    auto mul = [](const std::vector<cplx>& x, const std::vector<cplx>& y) {
        std::vector<cplx> r(x.size() + y.size() - 1);
        for (std::size_t m = 0; m < x.size(); ++m)
            for (std::size_t n = 0; n < y.size(); ++n) r[m + n] += x[m] * y[n];
        return r;
    };
    const std::vector<cplx> a11{p.g1 * p.g1, a, 1.0};
    const std::vector<cplx> a22{p.g2 * p.g2, a, 1.0};
    const std::vector<cplx> a12{i * p.j * a / 2.0 + p.g1 * p.g2, i * p.j / 2.0};
    auto quartic = mul(a11, a22);
    const auto off = mul(a12, a12);
    for (std::size_t k = 0; k < off.size(); ++k) quartic[k] -= off[k];

    // highest-first synthetic division by (s - root), root = -a
    std::array<cplx, 5> hi{quartic[4], quartic[3], quartic[2], quartic[1], quartic[0]};
    std::array<cplx, 4> q{};
    cplx carry = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        carry = hi[k] + carry * (-a);
        q[k] = carry;
    }
    const cplx remainder = hi[4] + carry * (-a);
    return {q, remainder};
}

bool contains_pole(const PoleDecomposition& dec, cplx target, double tol) {
    return std::any_of(dec.poles.begin(), dec.poles.end(), [&](cplx s) { return std::abs(s - target) < tol; });
}

} // namespace

TEST_CASE("assembled cubic for j = 0, g1 = g2 = 1") {
    const RationalSolution sol = assemble({1.0, 1.0, 0.0, 1.0, 0.0}, initial_state(NamedState::E1G2));
    CHECK(sol.cubic_den[0] == cplx{1.0, 0.0});
    CHECK(std::abs(sol.cubic_den[1] - 0.5) < 1e-15);
    CHECK(std::abs(sol.cubic_den[2] - 2.0) < 1e-15);
    CHECK(std::abs(sol.cubic_den[3]) < 1e-15);
}

TEST_CASE("assembled cubic matches symbolic expansion and deflation") {
    std::mt19937_64 rng(21);
    for (int k = 0; k < 500; ++k) {
        const SystemParams p = testing::random_params(rng);
        const auto [q_ref, remainder] = expand_and_deflate(p);
        CHECK(std::abs(remainder) < 1e-12);
        const RationalSolution sol = assemble(p, testing::random_init(rng));
        for (std::size_t c = 0; c < 4; ++c) CHECK(std::abs(sol.cubic_den[c] - q_ref[c]) < 1e-12);

        const auto quartic = unreduced_quartic(p);
        const cplx a = p.kernel_rate();
        CHECK(std::abs(polyval(quartic, -a)) < 1e-12);
        // P(s) = (s + a) Q(s), coefficient by coefficient
        const auto& qc = sol.cubic_den;
        const std::array<cplx, 5> product{qc[0], qc[1] + a * qc[0], qc[2] + a * qc[1], qc[3] + a * qc[2], a * qc[3]};
        for (std::size_t c = 0; c < 5; ++c) CHECK(std::abs(product[c] - quartic[c]) < 1e-12);
    }
}

TEST_CASE("decoupled qubits give poles +-i j/2 and -a") {
    const SystemParams p{0.0, 0.0, 1.0, 1.0, 0.7};
    const PoleDecomposition dec = solve_spectral(p, initial_state(NamedState::E1G2));
    CHECK(contains_pole(dec, {0.0, 0.5}, 1e-12));
    CHECK(contains_pole(dec, {0.0, -0.5}, 1e-12));
    CHECK(contains_pole(dec, -p.kernel_rate(), 1e-12));
}

TEST_CASE("poles for j = 0, g1 = g2 = 1 follow the quadratic formula") {
    const PoleDecomposition dec = solve_spectral({1.0, 1.0, 0.0, 1.0, 0.0}, initial_state(NamedState::E1G2));
    // s^2 + 0.5 s + 2 = 0
    const double im = std::sqrt(7.75) / 2.0;
    CHECK(im == doctest::Approx(1.39194).epsilon(1e-5));
    CHECK(contains_pole(dec, {0.0, 0.0}, 1e-13));
    CHECK(contains_pole(dec, {-0.25, im}, 1e-13));
    CHECK(contains_pole(dec, {-0.25, -im}, 1e-13));
    CHECK_FALSE(dec.degenerate);
    CHECK(dec.polish_residual < 1e-13);
}

TEST_CASE("equal couplings always carry a pole at +i j/2") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int k = 0; k < 300; ++k) {
        const double g = u(rng), j = u(rng);
        const PoleDecomposition dec = solve_spectral({g, g, j, 1.0, u(rng)}, testing::random_init(rng));
        CHECK(contains_pole(dec, {0.0, j / 2.0}, 1e-9));
    }
}

TEST_CASE("vanishing exchange always carries a pole at zero") {
    std::mt19937_64 rng(4);
    for (int k = 0; k < 300; ++k) {
        SystemParams p = testing::random_params(rng);
        p.j = 0.0;
        CHECK(contains_pole(solve_spectral(p, testing::random_init(rng)), {0.0, 0.0}, 1e-12));
    }
}

TEST_CASE("poles coincide with generator eigenvalues") {
    std::mt19937_64 rng(8);
    for (int k = 0; k < 500; ++k) {
        const SystemParams p = testing::random_params(rng);
        const PoleDecomposition dec = solve_spectral(p, testing::random_init(rng));
        Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(testing::reference_generator(p), false);
        for (int e = 0; e < 3; ++e) CHECK(contains_pole(dec, es.eigenvalues()(e), 1e-9));
    }
}

TEST_CASE("residue sums reproduce the initial state and no pole grows") {
    std::mt19937_64 rng(13);
    double worst_sum = 0.0, worst_re = -1.0;
    for (int k = 0; k < 10000; ++k) {
        const SystemParams p = testing::random_params(rng);
        const InitialState init = testing::random_init(rng);
        const PoleDecomposition dec = solve_spectral(p, init);
        if (dec.degenerate) continue;
        cplx s1{}, s2{};
        for (std::size_t j = 0; j < 3; ++j) {
            s1 += dec.residues1[j];
            s2 += dec.residues2[j];
            worst_re = std::max(worst_re, dec.poles[j].real());
        }
        worst_sum = std::max({worst_sum, std::abs(s1 - init.c1_0), std::abs(s2 - init.c2_0)});
    }
    CHECK(worst_sum <= 1e-10);
    CHECK(worst_re <= 1e-9);
}

TEST_CASE("amplitudes at t = 0 reproduce the initial state") {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 200; ++k) {
        const InitialState init = testing::random_init(rng);
        const auto [c1, c2] = amplitudes_at(solve_spectral(testing::random_params(rng), init), 0.0);
        CHECK(std::abs(c1 - init.c1_0) < 1e-10);
        CHECK(std::abs(c2 - init.c2_0) < 1e-10);
    }
}

TEST_CASE("symmetric couplings relax to (1/2, -1/2) from |e,g>") {
    const PoleDecomposition dec = solve_spectral({1.0, 1.0, 0.0, 1.0, 0.0}, initial_state(NamedState::E1G2));
    const auto [c1, c2] = amplitudes_at(dec, 200.0);
    CHECK(std::abs(c1 - 0.5) < 1e-12);
    CHECK(std::abs(c2 + 0.5) < 1e-12);
    CHECK(concurrence(c1, c2) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("asymmetric couplings relax to the dark-state concurrence") {
    const PoleDecomposition dec = solve_spectral({0.6, 1.0, 0.0, 1.0, 0.0}, initial_state(NamedState::E1G2));
    const auto [c1, c2] = amplitudes_at(dec, 400.0);
    CHECK(concurrence(c1, c2) == doctest::Approx(2.0 * 0.6 / (1.36 * 1.36)).epsilon(1e-10));
    CHECK(concurrence(c1, c2) == doctest::Approx(0.64879).epsilon(1e-5));
}

TEST_CASE("closed form matches frozen matrix-exponential values") {
    // scipy.linalg.expm of the generator, t = 3.7
    const SystemParams p{0.7, -1.3, 0.9, 1.0, 0.4};
    const InitialState init{{0.6, 0.0}, {0.0, 0.8}};
    const AmplitudeState s = state_at(solve_spectral(p, init), 3.7);
    CHECK(std::abs(s.c1 - cplx{0.38837645878847754, -0.5437475530740178}) < 1e-12);
    CHECK(std::abs(s.c2 - cplx{0.16919227904460948, -0.0021008584014130527}) < 1e-12);
    CHECK(std::abs(s.b - cplx{0.21055566014209362, 0.038242055762405955}) < 1e-12);

    // gamma = 2 with every rate doubled is the same dynamics at half the time
    const SystemParams p2{1.4, -2.6, 1.8, 2.0, 0.8};
    const AmplitudeState s2 = state_at(solve_spectral(p2, init), 1.85);
    CHECK(std::abs(s2.c1 - s.c1) < 1e-12);
    CHECK(std::abs(s2.b - s.b) < 1e-12);
}

TEST_CASE("swap and sign symmetries") {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 200; ++k) {
        const SystemParams p = testing::random_params(rng);
        const InitialState init = testing::random_init(rng);
        const PoleDecomposition a = solve_spectral(p, init);
        const PoleDecomposition swapped = solve_spectral({p.g2, p.g1, p.j, p.gamma, p.delta_c}, {init.c2_0, init.c1_0});
        const PoleDecomposition flipped = solve_spectral({-p.g1, -p.g2, p.j, p.gamma, p.delta_c}, init);
        if (a.degenerate || swapped.degenerate || flipped.degenerate) continue;
        for (double t : {0.3, 2.0, 7.5}) {
            const auto [c1, c2] = amplitudes_at(a, t);
            const auto [d1, d2] = amplitudes_at(swapped, t);
            CHECK(std::abs(c1 - d2) < 1e-10);
            CHECK(std::abs(c2 - d1) < 1e-10);
            const auto [f1, f2] = amplitudes_at(flipped, t);
            CHECK(std::abs(std::abs(f1) - std::abs(c1)) < 1e-10);
            CHECK(std::abs(std::abs(f2) - std::abs(c2)) < 1e-10);
        }
    }
}

TEST_CASE("degenerate poles are flagged and closed-form evaluation refuses") {
    // j = g1 = g2 = 0: double pole at s = 0
    const PoleDecomposition dec = solve_spectral({0.0, 0.0, 0.0, 1.0, 0.0}, initial_state(NamedState::PLUS));
    CHECK(dec.degenerate);
    CHECK_THROWS_AS(amplitudes_at(dec, 1.0), DegenerateSpectrumError);
    CHECK_THROWS_AS(spectral_trajectory(dec, 1.0, 0.1), DegenerateSpectrumError);

    // exceptional point: g1^2 + g2^2 = gamma^2 / 16 with j = 0 gives a double pole at -gamma/4
    const PoleDecomposition ep = solve_spectral({0.25, 0.0, 0.0, 1.0, 0.0}, initial_state(NamedState::E1G2));
    CHECK(ep.degenerate);
    CHECK(contains_pole(ep, {-0.25, 0.0}, 1e-6));
}

TEST_CASE("near-defective diagnostic accompanies huge residues") {
    const PoleDecomposition ep = solve_spectral({0.25, 0.0, 0.0, 1.0, 0.0}, initial_state(NamedState::E1G2));
    double biggest = 0.0;
    for (std::size_t j = 0; j < 3; ++j) biggest = std::max({biggest, std::abs(ep.residues1[j]), std::abs(ep.residues2[j])});
    CHECK(ep.near_defective == (biggest > NEAR_DEFECTIVE_RESIDUE || !std::isfinite(biggest)));

    const PoleDecomposition fine = solve_spectral({1.0, 0.3, 0.2, 1.0, 0.0}, initial_state(NamedState::E1G2));
    CHECK_FALSE(fine.near_defective);
}

TEST_CASE("reconstructed pseudomode amplitude matches the ODE backend") {
    std::mt19937_64 rng(29);
    for (int k = 0; k < 20; ++k) {
        const SystemParams p = testing::random_params(rng);
        const InitialState init = testing::random_init(rng);
        const PoleDecomposition dec = solve_spectral(p, init);
        if (dec.degenerate) continue;
        const Trajectory spec = spectral_trajectory(dec, 10.0, 0.5);
        const Trajectory ode = integrate(build_generator(p), init, 10.0, 0.5);
        REQUIRE(spec.size() == ode.size());
        for (std::size_t n = 0; n < spec.size(); ++n) CHECK(std::abs(spec[n].amp.b - ode[n].amp.b) < 1e-7);
    }
}

TEST_CASE("output grid includes both ends") {
    const auto t = output_times(1.0, 0.3);
    REQUIRE(t.size() == 5);
    CHECK(t.front() == 0.0);
    CHECK(t.back() == 1.0);
    CHECK(output_times(1.0, 0.25).size() == 5);
    CHECK_THROWS_AS(output_times(0.0, 0.1), std::invalid_argument);
}
