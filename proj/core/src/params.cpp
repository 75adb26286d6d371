#include "vsi/params.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>

#include "vsi/errors.hpp"
#include "vsi/format.hpp"

namespace vsi {

namespace {

struct KeyBinding {
    const char* key;
    double ConverterParams::*field;
};

// Canonical key order; also the serialization order. Unit suffixes are part
// of the key on purpose: the source data mixes milliohms and microhenries,
// and spelled-out SI units kill that class of mistake.
constexpr std::array<KeyBinding, 10> kKeys{{
    {"f_sw_hz", &ConverterParams::f_sw},
    {"f_grid_hz", &ConverterParams::f_grid},
    {"u_in_v", &ConverterParams::u_in},
    {"i_in_a", &ConverterParams::i_in},
    {"u_od_v", &ConverterParams::u_od},
    {"u_oq_v", &ConverterParams::u_oq},
    {"l_h", &ConverterParams::inductance},
    {"r_l_ohm", &ConverterParams::r_l},
    {"r_on_ohm", &ConverterParams::r_on},
    {"r_s_ohm", &ConverterParams::r_s},
}};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view text, std::string_view key, int line_no) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw ConfigError("config line " + std::to_string(line_no) + ": value for '" +
                          std::string(key) + "' is not a number: '" + std::string(text) + "'");
    return value;
}

}  // namespace

void derive_fields(ConverterParams& p) {
    p.omega_s = 2.0 * std::numbers::pi * p.f_grid;
    p.r_eq = p.r_l + p.r_on + p.r_s;
}

std::vector<std::string> validate(const ConverterParams& p) {
    std::vector<std::string> report;
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(p.f_sw) || !finite(p.f_grid) || !finite(p.omega_s) || !finite(p.u_in) ||
        !finite(p.i_in) || !finite(p.u_od) || !finite(p.u_oq) || !finite(p.inductance) ||
        !finite(p.r_l) || !finite(p.r_on) || !finite(p.r_s) || !finite(p.r_eq))
        report.push_back("all parameters must be finite");
    if (!(p.f_sw > 0.0)) report.push_back("f_sw_hz must be positive");
    if (!(p.f_grid > 0.0)) report.push_back("f_grid_hz must be positive");
    if (!(p.f_sw >= 100.0 * p.f_grid))
        report.push_back("f_sw_hz must be at least 100x f_grid_hz; switching-period averages "
                         "are meaningless for a slow carrier");
    if (!(p.u_in > 0.0)) report.push_back("u_in_v must be positive");
    if (!(p.inductance > 0.0)) report.push_back("l_h must be positive");
    if (p.r_l < 0.0) report.push_back("r_l_ohm must be non-negative");
    if (p.r_on < 0.0) report.push_back("r_on_ohm must be non-negative");
    if (p.r_s < 0.0) report.push_back("r_s_ohm must be non-negative");
    if (p.r_eq != p.r_l + p.r_on + p.r_s)
        report.push_back("r_eq is stale: call derive_fields after editing resistances");
    if (p.omega_s != 2.0 * std::numbers::pi * p.f_grid)
        report.push_back("omega_s is stale: call derive_fields after editing f_grid");
    return report;
}

ConverterParams load_params(std::istream& source) {
    ConverterParams p;
    std::array<bool, kKeys.size()> seen{};

    std::string line;
    int line_no = 0;
    while (std::getline(source, line)) {
        ++line_no;
        std::string_view sv = line;
        if (auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);
        sv = trim(sv);
        if (sv.empty()) continue;

        auto eq = sv.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value', got '" + std::string(sv) + "'");
        std::string_view key = trim(sv.substr(0, eq));
        std::string_view value = trim(sv.substr(eq + 1));

        std::size_t idx = kKeys.size();
        for (std::size_t i = 0; i < kKeys.size(); ++i)
            if (key == kKeys[i].key) { idx = i; break; }
        if (idx == kKeys.size())
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" +
                              std::string(key) + "'");
        if (seen[idx])
            throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" +
                              std::string(key) + "'");
        seen[idx] = true;
        p.*(kKeys[idx].field) = parse_number(value, key, line_no);
    }

    std::string missing;
    for (std::size_t i = 0; i < kKeys.size(); ++i)
        if (!seen[i]) missing += missing.empty() ? kKeys[i].key : (std::string(", ") + kKeys[i].key);
    if (!missing.empty()) throw ConfigError("config is missing required keys: " + missing);

    derive_fields(p);
    if (auto report = validate(p); !report.empty()) {
        std::string msg = "config rejected:";
        for (const auto& r : report) msg += "\n  " + r;
        throw ConfigError(msg);
    }
    return p;
}

ConverterParams load_params(const std::string& text) {
    std::istringstream in(text);
    return load_params(in);
}

ConverterParams load_params_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return load_params(in);
}

std::string serialize_params(const ConverterParams& p) {
    std::string out;
    for (const auto& [key, field] : kKeys) {
        out += key;
        out += " = ";
        out += to_shortest(p.*field);
        out += '\n';
    }
    return out;
}

}  // namespace vsi
