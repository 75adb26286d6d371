#include <numbers>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "vsi/errors.hpp"
#include "vsi/params.hpp"

using namespace vsi;

namespace {

bool mentions(const std::exception& e, const std::string& needle) {
    return std::string(e.what()).find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("params: demo config parses with derived fields") {
    const ConverterParams p = test::demo_params();
    CHECK(p.f_sw == 100e3);
    CHECK(p.f_grid == 50.0);
    CHECK(p.u_in == 30.0);
    CHECK(p.i_in == 2.0);
    CHECK(p.u_od == 8.6);
    CHECK(p.u_oq == 0.0);
    CHECK(p.inductance == 73e-6);
    CHECK(p.r_l == 0.015);
    CHECK(p.r_on == 0.1);
    CHECK(p.r_s == 0.05);
    CHECK(p.omega_s == 2.0 * std::numbers::pi * 50.0);
    CHECK(p.r_eq == 0.015 + 0.1 + 0.05);
}

TEST_CASE("params: installed demo config file matches the inline fixture") {
    const ConverterParams file = load_params_file(VSI_DEMO_CONFIG);
    const ConverterParams inline_p = test::demo_params();
    CHECK(serialize_params(file) == serialize_params(inline_p));
}

TEST_CASE("params: comments, blank lines and spacing are tolerated") {
    const ConverterParams p = load_params(
        "# leading comment\n"
        "\n"
        "f_sw_hz=100e3   # trailing comment\n"
        "  f_grid_hz =\t50\n"
        "u_in_v= 30\nu_od_v =8.6\nu_oq_v = 0\ni_in_a = 2\n"
        "l_h = 73e-6\nr_l_ohm = 0.015\nr_on_ohm = 0.1\nr_s_ohm = 0.05\n");
    CHECK(p.f_sw == 100e3);
    CHECK(p.f_grid == 50.0);
}

TEST_CASE("params: unknown key is rejected with its line number") {
    try {
        load_params(test::kDemoConfig + "bogus_key = 1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "bogus_key"));
        CHECK(mentions(e, "line 11"));
    }
}

TEST_CASE("params: duplicate key is rejected") {
    CHECK_THROWS_AS(load_params(test::kDemoConfig + "u_in_v = 31\n"), ConfigError);
}

TEST_CASE("params: missing key is named") {
    try {
        load_params("f_sw_hz = 100e3\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "f_grid_hz"));
    }
}

TEST_CASE("params: non-numeric value is rejected") {
    std::string text = test::kDemoConfig;
    const auto pos = text.find("u_in_v = 30");
    text.replace(pos, 11, "u_in_v = 3f");
    CHECK_THROWS_AS(load_params(text), ConfigError);
}

TEST_CASE("params: line without '=' is rejected") {
    CHECK_THROWS_AS(load_params(test::kDemoConfig + "nonsense\n"), ConfigError);
}

TEST_CASE("params: missing file is a ConfigError") {
    CHECK_THROWS_AS(load_params_file("/nonexistent/vsi.cfg"), ConfigError);
}

TEST_CASE("params: validate reports one entry per violation") {
    ConverterParams p;  // all zero: several violations at once
    const auto report = validate(p);
    CHECK(report.size() >= 3);

    ConverterParams demo = test::demo_params();
    CHECK(validate(demo).empty());

    demo.f_sw = 90.0 * demo.f_grid;  // too close to the fundamental
    const auto close = validate(demo);
    REQUIRE(close.size() == 1);
    CHECK(close[0].find("f_sw") != std::string::npos);
}

TEST_CASE("params: validate flags stale derived fields") {
    ConverterParams p = test::demo_params();
    p.r_l = 0.5;  // r_eq now stale
    CHECK(!validate(p).empty());
    derive_fields(p);
    CHECK(validate(p).empty());
}

TEST_CASE("params: config violating the invariants fails to load") {
    std::string text = test::kDemoConfig;
    const auto pos = text.find("l_h = 73e-6");
    text.replace(pos, 11, "l_h = 0");
    CHECK_THROWS_AS(load_params(text), ConfigError);
}

TEST_CASE("params: serialize/load round trip is bit identical") {
    const ConverterParams p = test::demo_params();
    const std::string first = serialize_params(p);
    const ConverterParams q = load_params(first);
    CHECK(q.f_sw == p.f_sw);
    CHECK(q.f_grid == p.f_grid);
    CHECK(q.u_in == p.u_in);
    CHECK(q.i_in == p.i_in);
    CHECK(q.u_od == p.u_od);
    CHECK(q.u_oq == p.u_oq);
    CHECK(q.inductance == p.inductance);
    CHECK(q.r_l == p.r_l);
    CHECK(q.r_on == p.r_on);
    CHECK(q.r_s == p.r_s);
    CHECK(q.omega_s == p.omega_s);
    CHECK(q.r_eq == p.r_eq);
    CHECK(serialize_params(q) == first);
}

TEST_CASE("params: round trip survives awkward binary values") {
    ConverterParams p = test::demo_params();
    p.u_od = 0.1 + 0.2;          // classic non-representable decimal
    p.inductance = 7.3e-5 / 3.0; // long mantissa
    derive_fields(p);
    const ConverterParams q = load_params(serialize_params(p));
    CHECK(q.u_od == p.u_od);
    CHECK(q.inductance == p.inductance);
}
