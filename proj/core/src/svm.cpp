#include "vsi/svm.hpp"

#include <cmath>
#include <numbers>

#include "vsi/errors.hpp"

namespace vsi {

namespace {

constexpr std::array<std::string_view, 8> kLabels{"SV0", "SV1", "SV2", "SV3",
                                                  "SV4", "SV5", "SV6", "SV7"};

// Half-period state order per sector: zero, one-hot active, two-hot active,
// all-on. The mirror half is generated, not stored.
constexpr std::array<std::array<int, 4>, 6> kHalfSequences{{
    {0, 1, 2, 7},  // sector 1: SV1 (100) then SV2 (110)
    {0, 3, 2, 7},  // sector 2: SV3 (010) then SV2 (110)
    {0, 3, 4, 7},  // sector 3: SV3 (010) then SV4 (011)
    {0, 5, 4, 7},  // sector 4: SV5 (001) then SV4 (011)
    {0, 5, 6, 7},  // sector 5: SV5 (001) then SV6 (101)
    {0, 1, 6, 7},  // sector 6: SV1 (100) then SV6 (101)
}};

}  // namespace

int upper_count(SwitchState s) {
    return static_cast<int>(s.a) + static_cast<int>(s.b) + static_cast<int>(s.c);
}

double u_nn_of_state(SwitchState s, double u_dc) {
    return static_cast<double>(upper_count(s)) * u_dc / 3.0;
}

std::array<SwitchState, 8> enumerate_states() {
    return {{
        {false, false, false},  // SV0
        {true, false, false},   // SV1
        {true, true, false},    // SV2
        {false, true, false},   // SV3
        {false, true, true},    // SV4
        {false, false, true},   // SV5
        {true, false, true},    // SV6
        {true, true, true},     // SV7
    }};
}

std::string_view state_label(int sv_index) {
    if (sv_index < 0 || sv_index > 7) throw UsageError("switch-state index must be 0..7");
    return kLabels[static_cast<std::size_t>(sv_index)];
}

int sector_of(double theta) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double norm = std::fmod(theta, two_pi);
    if (norm < 0.0) norm += two_pi;
    int k = static_cast<int>(std::floor(norm / (std::numbers::pi / 3.0)));
    // fmod/floor rounding at the wrap can nudge k to 6; clamp, never wrap.
    if (k > 5) k = 5;
    if (k < 0) k = 0;
    return k + 1;
}

SectorSequence sector_sequence(int sector, double u_dc) {
    if (sector < 1 || sector > 6) throw UsageError("sector must be 1..6");

    SectorSequence seq;
    seq.sector = sector;
    const auto& half = kHalfSequences[static_cast<std::size_t>(sector - 1)];
    for (int i = 0; i < 4; ++i) {
        seq.state_ids[static_cast<std::size_t>(i)] = half[static_cast<std::size_t>(i)];
        seq.state_ids[static_cast<std::size_t>(7 - i)] = half[static_cast<std::size_t>(i)];
    }
    const auto states = enumerate_states();
    for (std::size_t i = 0; i < 8; ++i) {
        seq.states[i] = states[static_cast<std::size_t>(seq.state_ids[i])];
        seq.u_nn_levels[i] = u_nn_of_state(seq.states[i], u_dc);
    }
    return seq;
}

}  // namespace vsi
