#include "darkstate/core_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "darkstate/errors.hpp"

namespace darkstate {

void SystemParams::validate() const {
    if (!std::isfinite(g1) || !std::isfinite(g2) || !std::isfinite(j) || !std::isfinite(delta_c) ||
        !std::isfinite(gamma)) {
        throw std::invalid_argument("system parameters must be finite");
    }
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("gamma must be strictly positive");
    }
}

SystemParams SystemParams::canonical() const {
    validate();
    return {g1 / gamma, g2 / gamma, j / gamma, 1.0, delta_c / gamma};
}

void InitialState::validate() const {
    if (!std::isfinite(c1_0.real()) || !std::isfinite(c1_0.imag()) || !std::isfinite(c2_0.real()) ||
        !std::isfinite(c2_0.imag())) {
        throw std::invalid_argument("initial amplitudes must be finite");
    }
    if (std::abs(norm() - 1.0) > 1e-12) {
        throw std::invalid_argument("initial state is not normalised (|c1|^2 + |c2|^2 = " +
                                    std::to_string(norm()) + ")");
    }
}

void Tolerances::validate() const {
    if (!(pole_survival_eps > 0.0) || !(backend_agreement_eps > 0.0) || !(root_polish_eps > 0.0)) {
        throw std::invalid_argument("tolerances must be strictly positive");
    }
}

cplx kernel_eval(double tau, const SystemParams& params) {
    if (tau < 0.0) {
        throw std::domain_error("kernel is only defined for non-negative time lags");
    }
    return std::exp(-params.kernel_rate() * tau);
}

double concurrence(cplx c1, cplx c2) { return 2.0 * std::abs(c1) * std::abs(c2); }

InitialState initial_state(NamedState name) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (name) {
    case NamedState::E1G2:
        return {{1.0, 0.0}, {0.0, 0.0}};
    case NamedState::G1E2:
        return {{0.0, 0.0}, {1.0, 0.0}};
    case NamedState::PLUS:
        return {{r, 0.0}, {r, 0.0}};
    case NamedState::MINUS:
        return {{r, 0.0}, {-r, 0.0}};
    case NamedState::PLUS_I:
        return {{r, 0.0}, {0.0, r}};
    case NamedState::MINUS_I:
        return {{r, 0.0}, {0.0, -r}};
    }
    throw UsageError("unknown initial state");
}

NamedState parse_state_name(std::string_view name) {
    std::string key(name);
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char ch) {
        return ch == '-' ? '_' : static_cast<char>(std::tolower(ch));
    });
    if (key == "e1g2") return NamedState::E1G2;
    if (key == "g1e2") return NamedState::G1E2;
    if (key == "plus") return NamedState::PLUS;
    if (key == "minus") return NamedState::MINUS;
    if (key == "plus_i") return NamedState::PLUS_I;
    if (key == "minus_i") return NamedState::MINUS_I;
    throw UsageError("unknown initial state '" + std::string(name) +
                     "' (expected e1g2, g1e2, plus, minus, plus_i, minus_i)");
}

std::string_view state_name(NamedState name) {
    switch (name) {
    case NamedState::E1G2: return "e1g2";
    case NamedState::G1E2: return "g1e2";
    case NamedState::PLUS: return "plus";
    case NamedState::MINUS: return "minus";
    case NamedState::PLUS_I: return "plus_i";
    case NamedState::MINUS_I: return "minus_i";
    }
    return "unknown";
}

} // namespace darkstate
