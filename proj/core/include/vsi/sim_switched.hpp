#pragma once

#include "vsi/frames.hpp"
#include "vsi/params.hpp"
#include "vsi/steady_state.hpp"
#include "vsi/svm.hpp"
#include "vsi/trace.hpp"

namespace vsi {

// Phase currents of the switched bridge. With an isolated neutral they sum to
// zero up to integrator noise; nothing enforces it beyond the physics.
struct SwitchedState {
    double i_a = 0.0;  // A
    double i_b = 0.0;  // A
    double i_c = 0.0;  // A
    double t = 0.0;    // s
};

// abc duty references at angle theta: the operating-point duties rotated back
// out of the synchronous frame plus the zero-sequence offset. Every value must
// land in [0, 1]; anything else means the zero-sequence choice (or an
// overmodulating operating point) is infeasible and throws InfeasibleError.
AbcTriple duty_waveforms(const OperatingPoint& op, double theta);

// Rising sawtooth in [0, 1) with period 1/f_sw.
double carrier(double t, double f_sw);

// Comparator bank: upper switch of leg x closes while carrier < d_x.
SwitchState switch_states(const AbcTriple& duties, double carrier_value);

// Balanced grid phase voltages (peak u_od, angle omega_s*t, q-component adds
// the quadrature term when u_oq is nonzero).
AbcTriple grid_voltages(const ConverterParams& p, double t);

// Instantaneous per-phase current derivatives, A/s:
//   di_x/dt = (s_x*u_in - r_eq*i_x - u_xn(t) - u_nN) / L
// with u_nN = upper_count*u_in/3 from the switch state.
AbcTriple bridge_derivative(const ConverterParams& p, const SwitchedState& state, SwitchState sw,
                            double t);

// Fully switched run: duty generation -> sawtooth comparison -> bridge -> RK4,
// with the switch state evaluated once per step (at the step midpoint, which
// quantizes duties round-to-nearest instead of always-up) and held constant
// across the step. Requires dt <= 1/(20*f_sw). Channels per sample k (state
// at t = k*dt, modulation applied over [t, t+dt)):
//   i_a_a,i_b_a,i_c_a, i_in_a (= sum s_x*i_x), u_nn_v, u_an_v,
//   d_a,d_b,d_c, i_od_a,i_oq_a (instantaneous dq of the phase currents).
SimTrace simulate_switched(const ConverterParams& p, const OperatingPoint& op, double duration,
                           double dt, const SwitchedState& initial = {});

// Trailing moving average of every channel over `window` seconds (must be a
// whole number of samples, at least 2), emitted at the original rate with
// channels renamed `<name>_avg`. The first window-1 samples only average the
// available prefix; warmup_samples marks them. Averaging over one switching
// period turns the PWM waveforms back into their local averages.
SimTrace switching_average(const SimTrace& trace, double window);

}  // namespace vsi
