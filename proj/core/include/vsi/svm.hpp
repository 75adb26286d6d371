#pragma once

#include <array>
#include <string_view>

namespace vsi {

// One bridge configuration: true = upper switch of that leg closed (the lower
// switch is always its complement; shoot-through is unrepresentable).
struct SwitchState {
    bool a = false;
    bool b = false;
    bool c = false;
    bool operator==(const SwitchState&) const = default;
};

// Number of closed upper switches (0..3); determines the common-mode voltage.
int upper_count(SwitchState s);

// Neutral-to-negative-rail voltage for a balanced grid with isolated neutral:
// u_nN = k * u_dc / 3 with k = upper_count. The bridge can only produce four
// discrete levels, which is exactly what the switched traces show.
double u_nn_of_state(SwitchState s, double u_dc);

// The eight bridge states indexed SV0..SV7. SV0/SV7 are the zero states; the
// active states SV1..SV6 step counter-clockwise by 60 degrees around the
// voltage hexagon starting at angle 0:
//   SV1=(1,0,0) SV2=(1,1,0) SV3=(0,1,0) SV4=(0,1,1) SV5=(0,0,1) SV6=(1,0,1)
std::array<SwitchState, 8> enumerate_states();
std::string_view state_label(int sv_index);  // "SV0".."SV7"

// 60-degree sector of a reference angle, 1..6. Half-open intervals
// [k*pi/3, (k+1)*pi/3), theta taken modulo 2*pi, so exact boundary angles
// land in the higher sector and 0 (or 2*pi) lands in sector 1.
int sector_of(double theta);

// Symmetric switching sequence for one carrier period in the given sector:
// both zero states bracket the two adjacent active states, mirrored in the
// second half so every transition toggles exactly one leg.
struct SectorSequence {
    int sector = 0;
    std::array<int, 8> state_ids{};           // indices into enumerate_states()
    std::array<SwitchState, 8> states{};
    std::array<double, 8> u_nn_levels{};      // u_nN of each position for u_dc
};
SectorSequence sector_sequence(int sector, double u_dc);  // throws UsageError

}  // namespace vsi
