#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vsi/params.hpp"
#include "vsi/steady_state.hpp"

namespace vsi::cli {

struct VerifyTolerances {
    double i_od_rel = 0.05;
    double i_oq_abs = 0.1;
    double i_in_rel = 0.05;
    double tf_rel = 1e-9;
};

struct VerifyCheck {
    std::string name;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool relative = false;
    bool pass = false;
};

struct VerifyReport {
    OperatingPoint op;
    SteadyStateResiduals residuals{};
    double avg_i_od = 0.0, avg_i_oq = 0.0, avg_i_in = 0.0;
    double sw_i_od = 0.0, sw_i_oq = 0.0, sw_i_in = 0.0;
    double tf_max_rel_dev = 0.0;
    double avg_duration = 0.0, avg_dt = 0.0, avg_window = 0.0;
    double sw_duration = 0.0, sw_dt = 0.0, sw_window = 0.0;
    std::vector<VerifyCheck> checks;
    bool pass = false;
};

// Full cross-validation pass: analytic point, transfer-function oracle on a
// lossless twin, averaged and switched simulations, tolerance checks.
VerifyReport run_verify(const ConverterParams& p, double d_0, const VerifyTolerances& tol);

void print_report(const VerifyReport& report, std::ostream& out);

// Entry point used by main() and by tests; args excludes the program name.
// Returns the process exit code: 0 success, 1 failed verification, 2 usage or
// config error, 3 infeasible point or pole hit, 4 diverged simulation.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vsi::cli
