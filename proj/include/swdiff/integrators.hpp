#pragma once

// Fixed-step explicit ODE integration (Euler, classical RK4) for
// piecewise-smooth right-hand sides, with stride-based recording.
// Divergence (any non-finite state or derivative) raises an error carrying
// the failing time; it is never silently propagated into a trajectory.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trajectory.hpp"

namespace swdiff {

struct OdeSystem {
    int dimension = 0;
    // rhs(t, state, dxdt): writes the derivative into dxdt (pre-sized to dimension).
    std::function<void(double, const std::vector<double>&, std::vector<double>&)> rhs;
};

struct SimPlan {
    double t_start = 0.0;
    double t_end = 0.0;
    double dt = 0.0;
    std::uint64_t record_stride = 100;

    std::uint64_t n_steps() const {
        return static_cast<std::uint64_t>(std::llround((t_end - t_start) / dt));
    }

    void validate() const {
        if (!(t_end > t_start)) throw std::invalid_argument("SimPlan: t_end must exceed t_start");
        if (!(dt > 0.0)) throw std::invalid_argument("SimPlan: dt must be positive");
        if (n_steps() < 1) throw std::invalid_argument("SimPlan: span must cover at least one step");
        if (record_stride < 1) throw std::invalid_argument("SimPlan: record_stride must be >= 1");
    }
};

enum class StepMethod { Euler, Rk4 };

inline StepMethod parse_step_method(const std::string& s) {
    if (s == "euler") return StepMethod::Euler;
    if (s == "rk4") return StepMethod::Rk4;
    throw std::invalid_argument("unknown integration method '" + s + "' (expected euler or rk4)");
}

inline const char* step_method_name(StepMethod m) {
    return m == StepMethod::Euler ? "euler" : "rk4";
}

class SimulationDivergence : public std::runtime_error {
public:
    SimulationDivergence(double t, const std::string& what_part)
        : std::runtime_error("divergence at t=" + format_double(t) + ": " + what_part), time(t) {}
    double time;
};

namespace detail {

inline void check_finite(const std::vector<double>& v, double t, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw SimulationDivergence(t, what);
}

struct StepWorkspace {
    std::vector<double> k1, k2, k3, k4, tmp;
    explicit StepWorkspace(std::size_t n) : k1(n), k2(n), k3(n), k4(n), tmp(n) {}
};

inline void euler_step_inplace(const OdeSystem& sys, double t, std::vector<double>& x, double dt,
                               StepWorkspace& w) {
    sys.rhs(t, x, w.k1);
    check_finite(w.k1, t, "non-finite derivative");
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += dt * w.k1[i];
}

inline void rk4_step_inplace(const OdeSystem& sys, double t, std::vector<double>& x, double dt,
                             StepWorkspace& w) {
    const std::size_t n = x.size();
    sys.rhs(t, x, w.k1);
    for (std::size_t i = 0; i < n; ++i) w.tmp[i] = x[i] + 0.5 * dt * w.k1[i];
    sys.rhs(t + 0.5 * dt, w.tmp, w.k2);
    for (std::size_t i = 0; i < n; ++i) w.tmp[i] = x[i] + 0.5 * dt * w.k2[i];
    sys.rhs(t + 0.5 * dt, w.tmp, w.k3);
    for (std::size_t i = 0; i < n; ++i) w.tmp[i] = x[i] + dt * w.k3[i];
    sys.rhs(t + dt, w.tmp, w.k4);
    check_finite(w.k4, t, "non-finite derivative");
    for (std::size_t i = 0; i < n; ++i)
        x[i] += (dt / 6.0) * (w.k1[i] + 2.0 * w.k2[i] + 2.0 * w.k3[i] + w.k4[i]);
}

}  // namespace detail

inline std::vector<double> step_euler(const OdeSystem& sys, double t, std::vector<double> state,
                                      double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_euler: dt must be positive");
    detail::StepWorkspace w(state.size());
    detail::euler_step_inplace(sys, t, state, dt, w);
    detail::check_finite(state, t, "non-finite state");
    return state;
}

inline std::vector<double> step_rk4(const OdeSystem& sys, double t, std::vector<double> state,
                                    double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_rk4: dt must be positive");
    detail::StepWorkspace w(state.size());
    detail::rk4_step_inplace(sys, t, state, dt, w);
    detail::check_finite(state, t, "non-finite state");
    return state;
}

// One recorded column: either a state entry (state_index >= 0) or a function
// of time, used for truth columns evaluated on the recording grid.
struct RecordColumn {
    std::string name;
    int state_index = -1;
    std::function<double(double)> time_fn;
};

inline Trajectory simulate(const OdeSystem& sys, const std::vector<double>& x0, const SimPlan& plan,
                           StepMethod method, const std::vector<RecordColumn>& recorder) {
    plan.validate();
    if (static_cast<int>(x0.size()) != sys.dimension)
        throw std::invalid_argument("simulate: x0 dimension does not match system");
    for (const auto& col : recorder)
        if (col.state_index >= sys.dimension)
            throw std::invalid_argument("simulate: recorder references state " +
                                        std::to_string(col.state_index) + " beyond dimension");

    const std::uint64_t n = plan.n_steps();
    const std::uint64_t samples = n / plan.record_stride + 1;

    Trajectory traj;
    traj.times.reserve(samples);
    traj.column_names.reserve(recorder.size());
    traj.columns.resize(recorder.size());
    for (std::size_t c = 0; c < recorder.size(); ++c) {
        traj.column_names.push_back(recorder[c].name);
        traj.columns[c].reserve(samples);
    }

    std::vector<double> x = x0;
    detail::StepWorkspace w(x.size());
    for (std::uint64_t j = 0; j <= n; ++j) {
        const double t = plan.t_start + static_cast<double>(j) * plan.dt;
        if (j % plan.record_stride == 0) {
            detail::check_finite(x, t, "non-finite state");
            traj.times.push_back(t);
            for (std::size_t c = 0; c < recorder.size(); ++c) {
                const auto& col = recorder[c];
                traj.columns[c].push_back(col.state_index >= 0
                                              ? x[static_cast<std::size_t>(col.state_index)]
                                              : col.time_fn(t));
            }
        }
        if (j == n) break;
        if (method == StepMethod::Euler)
            detail::euler_step_inplace(sys, t, x, plan.dt, w);
        else
            detail::rk4_step_inplace(sys, t, x, plan.dt, w);
    }
    return traj;
}

}  // namespace swdiff
