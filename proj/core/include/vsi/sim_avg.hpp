#pragma once

#include <functional>

#include "vsi/params.hpp"
#include "vsi/steady_state.hpp"
#include "vsi/trace.hpp"

namespace vsi {

// State of the averaged dq model: switching ripple is gone by construction,
// the two inductor-current components are the only dynamics left.
struct AvgState {
    double i_ld = 0.0;  // A
    double i_lq = 0.0;  // A
    double t = 0.0;     // s
};

// Inputs of the averaged model. Duties first: they are the actuation.
struct AvgInputs {
    double d_d = 0.0;
    double d_q = 0.0;
    double u_in = 0.0;  // V
    double u_od = 0.0;  // V
    double u_oq = 0.0;  // V
};

struct AvgOutputs {
    double i_in = 0.0;  // A
    double i_od = 0.0;  // A
    double i_oq = 0.0;  // A
};

// Right-hand side of the averaged model:
//   L di_ld/dt = -r_eq*i_ld + omega_s*L*i_lq + d_d*u_in - u_od
//   L di_lq/dt = -r_eq*i_lq - omega_s*L*i_ld + d_q*u_in - u_oq
// Returned as (di_ld/dt, di_lq/dt) in A/s.
struct AvgDerivative {
    double di_ld = 0.0;
    double di_lq = 0.0;
};
AvgDerivative average_derivative(const ConverterParams& p, const AvgState& state,
                                 const AvgInputs& in);

// i_in = (3/2)(d_d*i_ld + d_q*i_lq); the output current IS the inductor
// current in this topology (no filter capacitor), so i_od/i_oq echo the state.
AvgOutputs average_outputs(const AvgState& state, const AvgInputs& in);

// Convenience: the inputs that hold the converter at the given operating point.
AvgInputs operating_inputs(const ConverterParams& p, const OperatingPoint& op);

// Classical fixed-step RK4 from `initial` over `duration`. Channels:
// i_ld_a, i_lq_a, i_in_a, i_od_a, i_oq_a; duration/dt + 1 samples. Inputs may
// vary in time (step-response experiments); the constant overload is the
// common case. Throws UsageError for a non-positive or unstable dt and
// DivergedError (with the sample index) if any state leaves +-1e6 A or stops
// being finite.
using AvgInputFn = std::function<AvgInputs(double t)>;
SimTrace simulate_average(const ConverterParams& p, const AvgInputFn& inputs,
                          const AvgState& initial, double duration, double dt);
SimTrace simulate_average(const ConverterParams& p, const AvgInputs& inputs,
                          const AvgState& initial, double duration, double dt);

}  // namespace vsi
