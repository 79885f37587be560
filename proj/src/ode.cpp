#include "darkstate/ode.hpp"

#include <algorithm>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include "darkstate/errors.hpp"
#include "darkstate/spectral.hpp"

namespace darkstate {

namespace {

using State = std::array<cplx, 3>;

struct LinearRhs {
    const Eigen::Matrix3cd* m;

    void operator()(const State& x, State& dxdt, double /*t*/) const {
        const auto& a = *m;
        for (int r = 0; r < 3; ++r) {
            dxdt[r] = a(r, 0) * x[0] + a(r, 1) * x[1] + a(r, 2) * x[2];
        }
    }
};

} // namespace

Generator build_generator(const SystemParams& params) {
    const SystemParams p = params.canonical();
    const cplx mi = -I_UNIT;
    Generator gen;
    gen.gamma = params.gamma;
    gen.m << cplx{}, mi * 0.5 * p.j, mi * p.g1,
             mi * 0.5 * p.j, cplx{}, mi * p.g2,
             mi * p.g1, mi * p.g2, -p.kernel_rate();
    return gen;
}

std::array<cplx, 3> generator_eigenvalues(const Generator& gen) {
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> solver(gen.m, false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigenvalue solver did not converge");
    }
    std::array<cplx, 3> ev{};
    for (int k = 0; k < 3; ++k) ev[k] = solver.eigenvalues()(k) * gen.gamma;
    return ev;
}

Trajectory integrate(const Generator& gen, const InitialState& init, double t_end, double dt_out,
                     const IntegratorOptions& options) {
    return integrate(gen, AmplitudeState{init.c1_0, init.c2_0, cplx{}}, t_end, dt_out, options);
}

Trajectory integrate(const Generator& gen, const AmplitudeState& start, double t_end, double dt_out,
                     const IntegratorOptions& options) {
    namespace odeint = boost::numeric::odeint;

    const std::vector<double> times = output_times(t_end, dt_out);
    std::vector<double> taus(times.size());
    std::transform(times.begin(), times.end(), taus.begin(), [&](double t) { return t * gen.gamma; });

    State x{start.c1, start.c2, start.b};
    Trajectory traj;
    traj.reserve(times.size());
    auto observer = [&](const State& s, double tau) {
        TrajectorySample sample;
        sample.t = tau / gen.gamma;
        sample.amp = {s[0], s[1], s[2]};
        sample.concurrence = concurrence(s[0], s[1]);
        traj.push_back(sample);
    };

    auto stepper = odeint::make_dense_output(options.abs_tol, options.rel_tol,
                                             odeint::runge_kutta_dopri5<State>());
    const double initial_dt = std::min(1e-3, dt_out * gen.gamma);
    try {
        odeint::integrate_times(stepper, LinearRhs{&gen.m}, x, taus.begin(), taus.end(), initial_dt,
                                observer, odeint::max_step_checker(options.max_steps_between_outputs));
    } catch (const odeint::step_adjustment_error& e) {
        throw IntegratorStallError(std::string("step size underflow: ") + e.what());
    } catch (const odeint::no_progress_error& e) {
        throw IntegratorStallError(std::string("integrator stalled: ") + e.what());
    }
    // report exact sample times rather than tau / gamma round trips
    for (std::size_t k = 0; k < traj.size() && k < times.size(); ++k) traj[k].t = times[k];
    return traj;
}

} // namespace darkstate
