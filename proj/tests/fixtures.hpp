#pragma once

#include <string>

#include "vsi/params.hpp"

namespace vsi::test {

// The 30 V demo rig every numeric fixture in the suite is pinned to.
inline const std::string kDemoConfig =
    "f_sw_hz = 100e3\n"
    "f_grid_hz = 50\n"
    "u_in_v = 30\n"
    "i_in_a = 2\n"
    "u_od_v = 8.6\n"
    "u_oq_v = 0\n"
    "l_h = 73e-6\n"
    "r_l_ohm = 0.015\n"
    "r_on_ohm = 0.1\n"
    "r_s_ohm = 0.05\n";

inline ConverterParams demo_params() { return load_params(kDemoConfig); }

inline ConverterParams lossless_demo_params() {
    ConverterParams p = demo_params();
    p.r_l = p.r_on = p.r_s = 0.0;
    derive_fields(p);
    return p;
}

}  // namespace vsi::test
