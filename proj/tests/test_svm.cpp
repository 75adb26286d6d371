#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "vsi/errors.hpp"
#include "vsi/svm.hpp"

using namespace vsi;

namespace {
constexpr double kPi = std::numbers::pi;

int hamming(SwitchState x, SwitchState y) {
    return (x.a != y.a) + (x.b != y.b) + (x.c != y.c);
}
}  // namespace

TEST_CASE("svm: the eight bridge states in hexagon order") {
    const auto states = enumerate_states();
    CHECK(states[0] == SwitchState{false, false, false});
    CHECK(states[1] == SwitchState{true, false, false});
    CHECK(states[2] == SwitchState{true, true, false});
    CHECK(states[3] == SwitchState{false, true, false});
    CHECK(states[4] == SwitchState{false, true, true});
    CHECK(states[5] == SwitchState{false, false, true});
    CHECK(states[6] == SwitchState{true, false, true});
    CHECK(states[7] == SwitchState{true, true, true});
    CHECK(state_label(0) == "SV0");
    CHECK(state_label(7) == "SV7");
    CHECK_THROWS_AS(state_label(8), UsageError);
    CHECK_THROWS_AS(state_label(-1), UsageError);
}

TEST_CASE("svm: common-mode voltage counts the closed upper switches") {
    const auto states = enumerate_states();
    const int expected_counts[8] = {0, 1, 2, 1, 2, 1, 2, 3};
    for (int i = 0; i < 8; ++i) {
        CHECK(upper_count(states[i]) == expected_counts[i]);
        CHECK(u_nn_of_state(states[i], 30.0) == expected_counts[i] * 10.0);
    }
}

TEST_CASE("svm: sector lookup uses half-open 60-degree bins") {
    CHECK(sector_of(0.0) == 1);
    CHECK(sector_of(kPi / 3.0 - 1e-9) == 1);
    CHECK(sector_of(kPi / 3.0) == 2);  // x/x = 1 exactly, so the boundary steps up
    CHECK(sector_of(1.2) == 2);
    CHECK(sector_of(2.5) == 3);
    CHECK(sector_of(3.5) == 4);
    CHECK(sector_of(4.5) == 5);
    CHECK(sector_of(5.5) == 6);
    CHECK(sector_of(2.0 * kPi - 1e-9) == 6);
    CHECK(sector_of(2.0 * kPi) == 1);
    CHECK(sector_of(-0.1) == 6);
    CHECK(sector_of(4.0 * kPi + 3.5) == 4);
}

TEST_CASE("svm: sequences are palindromes bracketed by the zero states") {
    for (int sector = 1; sector <= 6; ++sector) {
        const SectorSequence seq = sector_sequence(sector, 30.0);
        CHECK(seq.sector == sector);
        for (int i = 0; i < 4; ++i) CHECK(seq.state_ids[i] == seq.state_ids[7 - i]);
        CHECK(seq.state_ids[0] == 0);
        CHECK(seq.state_ids[3] == 7);
    }
}

TEST_CASE("svm: every state change toggles exactly one leg") {
    for (int sector = 1; sector <= 6; ++sector) {
        const SectorSequence seq = sector_sequence(sector, 30.0);
        for (int i = 1; i < 8; ++i) {
            const int h = hamming(seq.states[i - 1], seq.states[i]);
            if (i == 4)
                CHECK(h == 0);  // SV7 held across the carrier peak
            else
                CHECK(h == 1);
        }
    }
}

TEST_CASE("svm: each sector uses its two adjacent active vectors") {
    for (int sector = 1; sector <= 6; ++sector) {
        const SectorSequence seq = sector_sequence(sector, 30.0);
        const std::set<int> active{seq.state_ids[1], seq.state_ids[2]};
        const std::set<int> expected{sector, sector % 6 + 1};
        CHECK(active == expected);
    }
}

TEST_CASE("svm: common-mode ladder for a 30 V link") {
    const SectorSequence seq = sector_sequence(1, 30.0);
    const double expected[8] = {0.0, 10.0, 20.0, 30.0, 30.0, 20.0, 10.0, 0.0};
    for (int i = 0; i < 8; ++i) CHECK(seq.u_nn_levels[i] == expected[i]);
}

TEST_CASE("svm: sector argument is validated") {
    CHECK_THROWS_AS(sector_sequence(0, 30.0), UsageError);
    CHECK_THROWS_AS(sector_sequence(7, 30.0), UsageError);
}
