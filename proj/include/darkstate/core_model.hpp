// core_model.hpp: Parameter space, initial states, memory kernel and concurrence
//
// Two identical qubits exchange an excitation with strength j and couple with
// strengths g1, g2 to a common reservoir whose density of states is a
// Lorentzian of full width gamma, detuned by delta_c from the qubit transition.
// Only the single-excitation sector is modelled.

#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace darkstate {

using cplx = std::complex<double>;

inline constexpr cplx I_UNIT{0.0, 1.0};

struct SystemParams {
    double g1{0.0};      // qubit-1 / reservoir coupling (sign unrestricted)
    double g2{0.0};      // qubit-2 / reservoir coupling (sign unrestricted)
    double j{0.0};       // qubit-qubit exchange strength
    double gamma{1.0};   // Lorentzian full width, > 0
    double delta_c{0.0}; // reservoir peak minus qubit transition frequency

    // Throws std::invalid_argument unless gamma > 0 and every field is finite.
    void validate() const;

    // Same physics with every rate divided by gamma (gamma == 1 afterwards).
    SystemParams canonical() const;

    // a = gamma/2 + i delta_c, the kernel's complex decay rate.
    cplx kernel_rate() const { return {0.5 * gamma, delta_c}; }

    bool operator==(const SystemParams&) const = default;
};

struct InitialState {
    cplx c1_0{1.0, 0.0};
    cplx c2_0{0.0, 0.0};

    // |c1|^2 + |c2|^2 must equal 1 within 1e-12; no renormalisation is attempted.
    void validate() const;
    double norm() const { return std::norm(c1_0) + std::norm(c2_0); }

    bool operator==(const InitialState&) const = default;
};

struct AmplitudeState {
    cplx c1{};
    cplx c2{};
    cplx b{}; // pseudomode amplitude carrying the reservoir's collective response

    double norm() const { return std::norm(c1) + std::norm(c2) + std::norm(b); }
};

struct Tolerances {
    double pole_survival_eps{1e-9};
    double backend_agreement_eps{1e-6};
    double root_polish_eps{1e-13};

    void validate() const;
};

struct TrajectorySample {
    double t{0.0};
    AmplitudeState amp;
    double concurrence{0.0};
};

using Trajectory = std::vector<TrajectorySample>;

enum class NamedState { E1G2, G1E2, PLUS, MINUS, PLUS_I, MINUS_I };

// Memory kernel I(tau) = exp(-(gamma/2 + i delta_c) tau), tau >= 0.
// Throws std::domain_error for negative tau.
cplx kernel_eval(double tau, const SystemParams& params);

// 2 |c1| |c2|, the pure-state single-excitation concurrence.
double concurrence(cplx c1, cplx c2);

InitialState initial_state(NamedState name);

// Case-insensitive lookup of "e1g2", "g1e2", "plus", "minus", "plus_i", "minus_i"
// (also accepts "plus-i"). Throws UsageError on anything else.
NamedState parse_state_name(std::string_view name);
std::string_view state_name(NamedState name);

} // namespace darkstate
