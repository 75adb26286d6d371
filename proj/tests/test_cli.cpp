#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    CliResult r;
    r.code = vsi::cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

const std::string kConfig = VSI_DEMO_CONFIG;

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "vsi_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (const char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("cli: help exits cleanly") {
    const CliResult r = run_cli({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("vsi-ssa") != std::string::npos);
    CHECK(r.out.find("operating-point") != std::string::npos);
}

TEST_CASE("cli: a subcommand is required") {
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"frobnicate", "--config", kConfig}).code == 2);
}

TEST_CASE("cli: unknown flag is a usage error") {
    const CliResult r = run_cli({"operating-point", "--config", kConfig, "--frob"});
    CHECK(r.code == 2);
    CHECK(!r.err.empty());
}

TEST_CASE("cli: missing config file maps to exit 2") {
    const CliResult r = run_cli({"operating-point", "--config", "/nonexistent/x.cfg"});
    CHECK(r.code == 2);
    CHECK(r.err.find("cannot open") != std::string::npos);
}

TEST_CASE("cli: operating-point prints the solution and residuals") {
    const CliResult r = run_cli({"operating-point", "--config", kConfig});
    CHECK(r.code == 0);
    CHECK(r.out.find("d_d = 0.310") != std::string::npos);
    CHECK(r.out.find("d_q = 0.00328") != std::string::npos);
    CHECK(r.out.find("d_0 = 0.5\n") != std::string::npos);
    CHECK(r.out.find("i_ld_a = 4.296") != std::string::npos);
    CHECK(r.out.find("i_lq_a = 0\n") != std::string::npos);
    CHECK(r.out.find("residual_d_v = ") != std::string::npos);
    CHECK(r.out.find("residual_in_a = ") != std::string::npos);
}

TEST_CASE("cli: infeasible zero-sequence offset maps to exit 3") {
    const CliResult r = run_cli({"operating-point", "--config", kConfig, "--d0", "0.1"});
    CHECK(r.code == 3);
    CHECK(r.err.find("feasible band") != std::string::npos);
}

TEST_CASE("cli: freqresp writes both sources for the requested entries") {
    const fs::path out_path = scratch_dir() / "freqresp.csv";
    const CliResult r = run_cli({"freqresp", "--config", kConfig, "--entries", "Y_in, G_co_d",
                                 "--fmin", "10", "--fmax", "1000", "--points", "12", "--out",
                                 out_path.string()});
    CHECK(r.code == 0);
    const std::string csv = slurp(out_path);
    CHECK(csv.rfind("freq_hz,entry,re,im,mag_db,phase_deg,phase_unwrapped_deg,source\n", 0) == 0);
    CHECK(count_lines(csv) == 1 + 2 * 12 * 2);
    CHECK(csv.find(",numeric\n") != std::string::npos);
    CHECK(csv.find(",closed_form\n") != std::string::npos);
    CHECK(csv.find("Y_in") != std::string::npos);
    CHECK(csv.find("G_co_d") != std::string::npos);
}

TEST_CASE("cli: freqresp output does not depend on the worker count") {
    const fs::path seq_path = scratch_dir() / "freqresp_seq.csv";
    const fs::path par_path = scratch_dir() / "freqresp_par.csv";
    setenv("VSI_SSA_THREADS", "1", 1);
    CHECK(run_cli({"freqresp", "--config", kConfig, "--points", "20", "--out",
                   seq_path.string()}).code == 0);
    setenv("VSI_SSA_THREADS", "4", 1);
    CHECK(run_cli({"freqresp", "--config", kConfig, "--points", "20", "--out",
                   par_path.string()}).code == 0);
    unsetenv("VSI_SSA_THREADS");
    CHECK(slurp(seq_path) == slurp(par_path));
}

TEST_CASE("cli: freqresp rejects bad sweeps and bad env") {
    const fs::path out_path = scratch_dir() / "freqresp_bad.csv";
    CHECK(run_cli({"freqresp", "--config", kConfig, "--entries", "G_nope", "--out",
                   out_path.string()}).code == 2);
    CHECK(run_cli({"freqresp", "--config", kConfig, "--fmin", "100", "--fmax", "100", "--out",
                   out_path.string()}).code == 2);
    setenv("VSI_SSA_THREADS", "many", 1);
    const CliResult r = run_cli({"freqresp", "--config", kConfig, "--out", out_path.string()});
    unsetenv("VSI_SSA_THREADS");
    CHECK(r.code == 2);
    CHECK(r.err.find("VSI_SSA_THREADS") != std::string::npos);
}

TEST_CASE("cli: simulate averaged writes the trace and its switching average") {
    const fs::path out_path = scratch_dir() / "avg.csv";
    const fs::path avg_path = scratch_dir() / "avg_avg.csv";
    const CliResult r = run_cli({"simulate", "--config", kConfig, "--mode", "averaged",
                                 "--duration", "0.002", "--out", out_path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("wrote") != std::string::npos);
    const std::string raw = slurp(out_path);
    CHECK(raw.rfind("t_s,i_ld_a,i_lq_a,i_in_a,i_od_a,i_oq_a\n", 0) == 0);
    CHECK(count_lines(raw) == 1 + 2001);
    const std::string avg = slurp(avg_path);
    CHECK(avg.rfind("t_s,i_ld_a_avg,i_lq_a_avg,i_in_a_avg,i_od_a_avg,i_oq_a_avg\n", 0) == 0);
}

TEST_CASE("cli: simulate switched writes the PWM channels") {
    const fs::path out_path = scratch_dir() / "sw.csv";
    const CliResult r = run_cli({"simulate", "--config", kConfig, "--mode", "switched",
                                 "--duration", "0.0002", "--out", out_path.string()});
    CHECK(r.code == 0);
    const std::string raw = slurp(out_path);
    CHECK(raw.rfind("t_s,i_a_a,i_b_a,i_c_a,i_in_a,u_nn_v,u_an_v,d_a,d_b,d_c,i_od_a,i_oq_a\n", 0) ==
          0);
    CHECK(count_lines(raw) == 1 + 401);
    CHECK(slurp(scratch_dir() / "sw_avg.csv")
              .rfind("t_s,i_a_a_avg,i_b_a_avg,i_c_a_avg,i_in_a_avg,u_nn_v_avg,u_an_v_avg,"
                     "d_a_avg,d_b_avg,d_c_avg,i_od_a_avg,i_oq_a_avg\n",
                     0) == 0);
}

TEST_CASE("cli: simulate rejects a step that cannot resolve the carrier") {
    const fs::path out_path = scratch_dir() / "bad_dt.csv";
    const CliResult r = run_cli({"simulate", "--config", kConfig, "--mode", "switched", "--dt",
                                 "1e-6", "--out", out_path.string()});
    CHECK(r.code == 2);
}

TEST_CASE("cli: simulate requires a known mode") {
    const fs::path out_path = scratch_dir() / "bad_mode.csv";
    CHECK(run_cli({"simulate", "--config", kConfig, "--mode", "spice", "--out",
                   out_path.string()}).code == 2);
}

TEST_CASE("cli: svm-table prints all six sectors with the voltage ladder") {
    const CliResult r = run_cli({"svm-table", "--config", kConfig});
    CHECK(r.code == 0);
    CHECK(r.out.find("u_in_v = 30") != std::string::npos);
    CHECK(r.out.find("sector 1\n  states: SV0 SV1 SV2 SV7 SV7 SV2 SV1 SV0\n"
                     "  u_nn_v: 0 10 20 30 30 20 10 0") != std::string::npos);
    CHECK(r.out.find("sector 6\n  states: SV0 SV1 SV6 SV7 SV7 SV6 SV1 SV0") != std::string::npos);
}

TEST_CASE("cli: verify passes on the demo rig") {
    const CliResult r = run_cli({"verify", "--config", kConfig});
    CHECK(r.code == 0);
    CHECK(r.out.find("verdict: PASS") != std::string::npos);
    CHECK(r.out.find("i_od switched vs averaged") != std::string::npos);
    CHECK(r.out.find("transfer functions vs closed forms") != std::string::npos);
}

TEST_CASE("cli: verify fails honestly under an impossible tolerance") {
    const CliResult r = run_cli({"verify", "--config", kConfig, "--tol-i-in-rel", "1e-9"});
    CHECK(r.code == 1);
    CHECK(r.out.find("verdict: FAIL") != std::string::npos);
    CHECK(r.out.find("i_in switched vs set-point") != std::string::npos);
    CHECK(r.out.find("FAIL") != std::string::npos);
}
