#pragma once

#include "vsi/params.hpp"

namespace vsi {

// Steady-state solution the converter is driven at: duty-cycle components in
// the synchronous frame plus the resulting inductor (= output) currents. The
// analytic solution assumes the d-axis rides on the grid voltage vector, so
// i_lq and u_oq_set are zero by construction (unity power factor).
struct OperatingPoint {
    double d_d = 0.0;       // d-channel duty ratio
    double d_q = 0.0;       // q-channel duty ratio
    double d_0 = 0.0;       // zero-sequence duty offset
    double i_ld = 0.0;      // d-channel inductor current, A
    double i_lq = 0.0;      // q-channel inductor current, A (0 for solved points)
    double u_oq_set = 0.0;  // q-channel output voltage, V (0 for solved points)
};

// Combined residuals of the steady-state equations: d/q voltage balance in
// volts and the input-current identity in amperes. All three vanish for a
// solver-produced point.
struct SteadyStateResiduals {
    double r_d = 0.0;   // V
    double r_q = 0.0;   // V
    double r_in = 0.0;  // A
};

// d-channel duty from the power-balance quadratic; always the larger root,
// d_d >= u_od/(2*u_in). Throws InfeasibleError when the discriminant is
// negative (regeneration beyond what the resistances can absorb).
double solve_duty_d(const ConverterParams& p);

// i_ld = (2/3)*i_in/d_d. Throws InfeasibleError for d_d = 0.
double solve_inductor_current_d(const ConverterParams& p, double d_d);

// d_q = 2*omega_s*L*i_in / (3*u_in*d_d): the cross-coupling voltage the
// q-channel duty has to cancel. Throws InfeasibleError for d_d = 0.
double solve_duty_q(const ConverterParams& p, double d_d);

// Full operating point with the given zero-sequence offset. d_0 must lie
// strictly inside (A, 1-A) with A = sqrt(d_d^2 + d_q^2), otherwise some abc
// duty waveform would leave [0, 1]; violations throw InfeasibleError. Params
// with u_oq != 0 are rejected: the closed-form solution only exists for the
// voltage-aligned frame.
OperatingPoint operating_point(const ConverterParams& p, double d_0 = 0.5);

// Substitutes an operating point back into the steady-state equations.
SteadyStateResiduals residuals(const ConverterParams& p, const OperatingPoint& op);

// Active/reactive power delivered to the grid, amplitude-invariant scaling:
// p = (3/2)(u_od*i_ld + u_oq*i_lq), q = (3/2)(u_oq*i_ld - u_od*i_lq).
struct ComplexPower {
    double p = 0.0;  // W
    double q = 0.0;  // var
};
ComplexPower complex_power(double u_od, double u_oq, double i_ld, double i_lq);

}  // namespace vsi
