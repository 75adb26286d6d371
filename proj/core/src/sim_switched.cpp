#include "vsi/sim_switched.hpp"

#include <cmath>

#include "vsi/errors.hpp"
#include "vsi/format.hpp"

namespace vsi {

namespace {
constexpr double kCurrentLimit = 1e6;  // A
}

AbcTriple duty_waveforms(const OperatingPoint& op, double theta) {
    const AbcTriple d = park_inverse(Dq0Triple{op.d_d, op.d_q, op.d_0}, theta);
    const auto in_range = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_range(d.a) || !in_range(d.b) || !in_range(d.c))
        throw InfeasibleError("duty reference leaves [0,1] at theta = " + to_shortest(theta) +
                              ": (" + to_shortest(d.a) + ", " + to_shortest(d.b) + ", " +
                              to_shortest(d.c) + "); raise or centre the zero-sequence offset");
    return d;
}

double carrier(double t, double f_sw) {
    if (!(f_sw > 0.0)) throw UsageError("carrier frequency must be positive");
    const double cycles = t * f_sw;
    return cycles - std::floor(cycles);
}

SwitchState switch_states(const AbcTriple& duties, double carrier_value) {
    return SwitchState{carrier_value < duties.a, carrier_value < duties.b,
                       carrier_value < duties.c};
}

AbcTriple grid_voltages(const ConverterParams& p, double t) {
    const double theta = p.omega_s * t;
    // Inverse transform of the dq set-point (u_od, u_oq); zero sequence absent.
    return park_inverse(Dq0Triple{p.u_od, p.u_oq, 0.0}, theta);
}

AbcTriple bridge_derivative(const ConverterParams& p, const SwitchedState& state, SwitchState sw,
                            double t) {
    const double u_nn = u_nn_of_state(sw, p.u_in);
    const AbcTriple grid = grid_voltages(p, t);
    const double l = p.inductance;
    AbcTriple d;
    d.a = ((sw.a ? p.u_in : 0.0) - p.r_eq * state.i_a - grid.a - u_nn) / l;
    d.b = ((sw.b ? p.u_in : 0.0) - p.r_eq * state.i_b - grid.b - u_nn) / l;
    d.c = ((sw.c ? p.u_in : 0.0) - p.r_eq * state.i_c - grid.c - u_nn) / l;
    return d;
}

SimTrace simulate_switched(const ConverterParams& p, const OperatingPoint& op, double duration,
                           double dt, const SwitchedState& initial) {
    if (!(dt > 0.0)) throw UsageError("dt must be positive");
    if (!(duration >= dt)) throw UsageError("duration must cover at least one step");
    if (dt > 1.0 / (20.0 * p.f_sw))
        throw UsageError("dt = " + to_shortest(dt) + " s gives fewer than 20 samples per "
                         "switching period; the PWM would be unrecognizable");

    const auto n_steps = static_cast<std::size_t>(std::llround(duration / dt));

    SimTrace trace;
    trace.dt = dt;
    trace.channels = {"i_a_a", "i_b_a", "i_c_a", "i_in_a", "u_nn_v", "u_an_v",
                      "d_a",   "d_b",   "d_c",   "i_od_a", "i_oq_a"};
    trace.data.assign(trace.channels.size(), {});
    for (auto& column : trace.data) column.reserve(n_steps + 1);
    trace.metadata["integrator"] = "rk4_fixed";
    trace.metadata["dt_s"] = to_shortest(dt);
    trace.metadata["scenario"] = "switched bridge, open-loop duties";
    trace.metadata["d_0"] = to_shortest(op.d_0);
    trace.metadata["params"] = serialize_params(p);

    SwitchedState state = initial;
    for (std::size_t k = 0; k <= n_steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        state.t = t;

        if (!std::isfinite(state.i_a) || !std::isfinite(state.i_b) || !std::isfinite(state.i_c) ||
            std::abs(state.i_a) > kCurrentLimit || std::abs(state.i_b) > kCurrentLimit ||
            std::abs(state.i_c) > kCurrentLimit)
            throw DivergedError("switched simulation diverged at sample " + std::to_string(k) +
                                " (t = " + to_shortest(t) + " s)", k);

        // One comparator decision per step, held for the whole step. Sampling
        // at the midpoint makes the held state the round-to-nearest
        // quantization of the true switching instants; sampling at the step
        // start would quantize every duty upward by half a sample.
        const double t_sample = t + 0.5 * dt;
        const AbcTriple duties = duty_waveforms(op, p.omega_s * t_sample);
        const SwitchState sw = switch_states(duties, carrier(t_sample, p.f_sw));
        const double u_nn = u_nn_of_state(sw, p.u_in);

        const double i_in = (sw.a ? state.i_a : 0.0) + (sw.b ? state.i_b : 0.0) +
                            (sw.c ? state.i_c : 0.0);
        const Dq0Triple i_dq =
            park_forward(AbcTriple{state.i_a, state.i_b, state.i_c}, p.omega_s * t);

        trace.data[0].push_back(state.i_a);
        trace.data[1].push_back(state.i_b);
        trace.data[2].push_back(state.i_c);
        trace.data[3].push_back(i_in);
        trace.data[4].push_back(u_nn);
        trace.data[5].push_back((sw.a ? p.u_in : 0.0) - u_nn);
        trace.data[6].push_back(duties.a);
        trace.data[7].push_back(duties.b);
        trace.data[8].push_back(duties.c);
        trace.data[9].push_back(i_dq.d);
        trace.data[10].push_back(i_dq.q);

        if (k == n_steps) break;

        const auto f = [&](const SwitchedState& s, double at) {
            return bridge_derivative(p, s, sw, at);
        };
        const AbcTriple k1 = f(state, t);
        const auto advance = [&](const AbcTriple& d, double h) {
            return SwitchedState{state.i_a + h * d.a, state.i_b + h * d.b, state.i_c + h * d.c, t};
        };
        const AbcTriple k2 = f(advance(k1, 0.5 * dt), t + 0.5 * dt);
        const AbcTriple k3 = f(advance(k2, 0.5 * dt), t + 0.5 * dt);
        const AbcTriple k4 = f(advance(k3, dt), t + dt);

        state.i_a += dt / 6.0 * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a);
        state.i_b += dt / 6.0 * (k1.b + 2.0 * k2.b + 2.0 * k3.b + k4.b);
        state.i_c += dt / 6.0 * (k1.c + 2.0 * k2.c + 2.0 * k3.c + k4.c);
    }
    return trace;
}

SimTrace switching_average(const SimTrace& trace, double window) {
    if (trace.dt <= 0.0) throw UsageError("trace has no sample period");
    const double ratio = window / trace.dt;
    const auto n_window = static_cast<std::size_t>(std::llround(ratio));
    if (n_window < 2) throw UsageError("averaging window must cover at least 2 samples");
    if (std::abs(ratio - static_cast<double>(n_window)) > 1e-9 * ratio)
        throw UsageError("averaging window must be a whole number of samples (window = " +
                         to_shortest(window) + " s, dt = " + to_shortest(trace.dt) + " s)");
    const std::size_t n = trace.size();
    if (n_window > n) throw UsageError("averaging window is longer than the trace");

    SimTrace out;
    out.dt = trace.dt;
    out.metadata = trace.metadata;
    out.metadata["window_s"] = to_shortest(window);
    out.metadata["scenario"] = trace.metadata.count("scenario")
                                   ? trace.metadata.at("scenario") + ", switching average"
                                   : "switching average";
    out.warmup_samples = n_window - 1;
    out.channels.reserve(trace.channels.size());
    for (const auto& name : trace.channels) out.channels.push_back(name + "_avg");

    out.data.assign(trace.channels.size(), std::vector<double>(n, 0.0));
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t c = 0; c < trace.channels.size(); ++c) {
        const auto& column = trace.data[c];
        for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + column[k];
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t start = k + 1 >= n_window ? k + 1 - n_window : 0;
            out.data[c][k] = (prefix[k + 1] - prefix[start]) / static_cast<double>(k + 1 - start);
        }
    }
    return out;
}

}  // namespace vsi
