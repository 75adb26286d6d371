#include "vsi/sim_avg.hpp"

#include <cmath>

#include "vsi/errors.hpp"
#include "vsi/format.hpp"

namespace vsi {

namespace {
constexpr double kCurrentLimit = 1e6;  // A; anything beyond this is a blow-up
}

AvgDerivative average_derivative(const ConverterParams& p, const AvgState& state,
                                 const AvgInputs& in) {
    const double l = p.inductance;
    AvgDerivative d;
    d.di_ld = (-p.r_eq * state.i_ld + p.omega_s * l * state.i_lq + in.d_d * in.u_in - in.u_od) / l;
    d.di_lq = (-p.r_eq * state.i_lq - p.omega_s * l * state.i_ld + in.d_q * in.u_in - in.u_oq) / l;
    return d;
}

AvgOutputs average_outputs(const AvgState& state, const AvgInputs& in) {
    AvgOutputs out;
    out.i_in = 1.5 * (in.d_d * state.i_ld + in.d_q * state.i_lq);
    out.i_od = state.i_ld;
    out.i_oq = state.i_lq;
    return out;
}

AvgInputs operating_inputs(const ConverterParams& p, const OperatingPoint& op) {
    return AvgInputs{op.d_d, op.d_q, p.u_in, p.u_od, p.u_oq};
}

SimTrace simulate_average(const ConverterParams& p, const AvgInputFn& inputs,
                          const AvgState& initial, double duration, double dt) {
    if (!(dt > 0.0)) throw UsageError("dt must be positive");
    if (!(duration >= dt)) throw UsageError("duration must cover at least one step");
    // Explicit RK4 wants the step well inside the stability region; the state
    // matrix has norm hypot(r_eq/L, omega_s), so cap dt at a tenth of that.
    const double a_norm = std::hypot(p.r_eq / p.inductance, p.omega_s);
    if (a_norm > 0.0 && dt > 0.1 / a_norm)
        throw UsageError("dt = " + to_shortest(dt) + " s is too coarse for the model dynamics; "
                         "need dt <= " + to_shortest(0.1 / a_norm) + " s");

    const auto n_steps = static_cast<std::size_t>(std::llround(duration / dt));

    SimTrace trace;
    trace.dt = dt;
    trace.channels = {"i_ld_a", "i_lq_a", "i_in_a", "i_od_a", "i_oq_a"};
    trace.data.assign(trace.channels.size(), {});
    for (auto& column : trace.data) column.reserve(n_steps + 1);
    trace.metadata["integrator"] = "rk4_fixed";
    trace.metadata["dt_s"] = to_shortest(dt);
    trace.metadata["scenario"] = "averaged dq model";
    trace.metadata["params"] = serialize_params(p);

    AvgState state = initial;
    for (std::size_t k = 0; k <= n_steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        state.t = t;

        if (!std::isfinite(state.i_ld) || !std::isfinite(state.i_lq) ||
            std::abs(state.i_ld) > kCurrentLimit || std::abs(state.i_lq) > kCurrentLimit)
            throw DivergedError("averaged simulation diverged at sample " + std::to_string(k) +
                                " (t = " + to_shortest(t) + " s)", k);

        const AvgInputs in_now = inputs(t);
        const AvgOutputs out = average_outputs(state, in_now);
        trace.data[0].push_back(state.i_ld);
        trace.data[1].push_back(state.i_lq);
        trace.data[2].push_back(out.i_in);
        trace.data[3].push_back(out.i_od);
        trace.data[4].push_back(out.i_oq);

        if (k == n_steps) break;

        const auto f = [&](double i_ld, double i_lq, double at) {
            return average_derivative(p, AvgState{i_ld, i_lq, at}, inputs(at));
        };
        const AvgDerivative k1 = f(state.i_ld, state.i_lq, t);
        const AvgDerivative k2 =
            f(state.i_ld + 0.5 * dt * k1.di_ld, state.i_lq + 0.5 * dt * k1.di_lq, t + 0.5 * dt);
        const AvgDerivative k3 =
            f(state.i_ld + 0.5 * dt * k2.di_ld, state.i_lq + 0.5 * dt * k2.di_lq, t + 0.5 * dt);
        const AvgDerivative k4 = f(state.i_ld + dt * k3.di_ld, state.i_lq + dt * k3.di_lq, t + dt);

        state.i_ld += dt / 6.0 * (k1.di_ld + 2.0 * k2.di_ld + 2.0 * k3.di_ld + k4.di_ld);
        state.i_lq += dt / 6.0 * (k1.di_lq + 2.0 * k2.di_lq + 2.0 * k3.di_lq + k4.di_lq);
    }
    return trace;
}

SimTrace simulate_average(const ConverterParams& p, const AvgInputs& inputs,
                          const AvgState& initial, double duration, double dt) {
    return simulate_average(p, [&inputs](double) { return inputs; }, initial, duration, dt);
}

}  // namespace vsi
