#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vsi {

// Electrical and PWM parameters of the converter. u_od/u_oq are the grid
// voltage in the synchronous frame under the amplitude-invariant transform,
// so u_od is the PEAK of the phase-to-neutral voltage, not an RMS value.
// omega_s and r_eq are derived fields; derive_fields() keeps them in sync.
struct ConverterParams {
    double f_sw = 0.0;         // switching frequency, Hz
    double f_grid = 0.0;       // grid fundamental frequency, Hz
    double omega_s = 0.0;      // grid angular frequency, rad/s (2*pi*f_grid)
    double u_in = 0.0;         // DC input voltage, V
    double i_in = 0.0;         // DC input current set-point, A
    double u_od = 0.0;         // d-channel grid voltage, V (peak of phase voltage)
    double u_oq = 0.0;         // q-channel grid voltage, V
    double inductance = 0.0;   // per-phase filter inductance, H
    double r_l = 0.0;          // inductor series resistance, ohm
    double r_on = 0.0;         // switch on-state resistance, ohm
    double r_s = 0.0;          // equivalent grid resistance, ohm
    double r_eq = 0.0;         // total series resistance, ohm (r_l + r_on + r_s)
};

// Recomputes omega_s and r_eq from the independent fields.
void derive_fields(ConverterParams& p);

// One entry per violated invariant; empty means the params are usable.
std::vector<std::string> validate(const ConverterParams& p);

// Parses the `key = value` config format (see serialize_params for the key
// list), derives omega_s/r_eq, and validates. Unknown, duplicate, or missing
// keys and non-numeric values all throw ConfigError naming the offender.
ConverterParams load_params(std::istream& source);
ConverterParams load_params(const std::string& text);
ConverterParams load_params_file(const std::string& path);

// Canonical config document for these params. load_params(serialize_params(p))
// reproduces every field bit for bit.
std::string serialize_params(const ConverterParams& p);

}  // namespace vsi
