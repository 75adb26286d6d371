#include "vsi/steady_state.hpp"

#include <cmath>

#include "vsi/errors.hpp"
#include "vsi/format.hpp"

namespace vsi {

double solve_duty_d(const ConverterParams& p) {
    // From u_in*i_in = (3/2)*i_ld*(u_od + r_eq*i_ld) with i_ld = (2/3)*i_in/d_d:
    // u_in*d_d^2 - u_od*d_d - (2/3)*r_eq*i_in = 0.
    const double disc = p.u_od * p.u_od + (8.0 / 3.0) * p.r_eq * p.u_in * p.i_in;
    if (disc < 0.0)
        throw InfeasibleError("no real operating point: discriminant " + to_shortest(disc) +
                              " < 0 (regenerating more than the resistances can absorb)");
    return (p.u_od + std::sqrt(disc)) / (2.0 * p.u_in);
}

double solve_inductor_current_d(const ConverterParams& p, double d_d) {
    if (d_d == 0.0) throw InfeasibleError("d_d = 0: inductor current undefined");
    return (2.0 / 3.0) * p.i_in / d_d;
}

double solve_duty_q(const ConverterParams& p, double d_d) {
    if (d_d == 0.0) throw InfeasibleError("d_d = 0: q-channel duty undefined");
    return 2.0 * p.omega_s * p.inductance * p.i_in / (3.0 * p.u_in * d_d);
}

OperatingPoint operating_point(const ConverterParams& p, double d_0) {
    if (p.u_oq != 0.0)
        throw InfeasibleError("analytic operating point requires u_oq_v = 0 (d-axis aligned "
                              "with the grid voltage); got " + to_shortest(p.u_oq));
    OperatingPoint op;
    op.d_d = solve_duty_d(p);
    op.d_q = solve_duty_q(p, op.d_d);
    op.i_ld = solve_inductor_current_d(p, op.d_d);
    op.i_lq = 0.0;
    op.u_oq_set = 0.0;

    // abc duties are d_0 plus a sinusoid of amplitude A; keeping d_0 strictly
    // inside (A, 1-A) keeps every waveform strictly inside [0, 1].
    const double amplitude = std::hypot(op.d_d, op.d_q);
    if (!(d_0 > amplitude && d_0 < 1.0 - amplitude))
        throw InfeasibleError("zero-sequence duty " + to_shortest(d_0) +
                              " is outside the feasible band (" + to_shortest(amplitude) + ", " +
                              to_shortest(1.0 - amplitude) + ")");
    op.d_0 = d_0;
    return op;
}

SteadyStateResiduals residuals(const ConverterParams& p, const OperatingPoint& op) {
    SteadyStateResiduals r;
    r.r_d = -p.r_eq * op.i_ld + p.omega_s * p.inductance * op.i_lq + op.d_d * p.u_in - p.u_od;
    r.r_q = -p.r_eq * op.i_lq - p.omega_s * p.inductance * op.i_ld + op.d_q * p.u_in - p.u_oq;
    r.r_in = p.i_in - 1.5 * (op.d_d * op.i_ld + op.d_q * op.i_lq);
    return r;
}

ComplexPower complex_power(double u_od, double u_oq, double i_ld, double i_lq) {
    ComplexPower s;
    s.p = 1.5 * (u_od * i_ld + u_oq * i_lq);
    s.q = 1.5 * (u_oq * i_ld - u_od * i_lq);
    return s;
}

}  // namespace vsi
