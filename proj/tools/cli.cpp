#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "vsi/errors.hpp"
#include "vsi/format.hpp"
#include "vsi/sim_avg.hpp"
#include "vsi/sim_switched.hpp"
#include "vsi/smallsignal.hpp"
#include "vsi/svm.hpp"
#include "vsi/trace.hpp"

namespace vsi::cli {
namespace {

std::string stage_msg(const char* name, const char* what) {
    return std::string("verify stage ") + name + ": " + what;
}

// Reruns typed exceptions with the verify stage prepended so a failure deep in
// a simulation still names the stage it happened in.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        throw ConfigError(stage_msg(name, e.what()));
    } catch (const UsageError& e) {
        throw UsageError(stage_msg(name, e.what()));
    } catch (const InfeasibleError& e) {
        throw InfeasibleError(stage_msg(name, e.what()));
    } catch (const PoleError& e) {
        throw PoleError(stage_msg(name, e.what()));
    } catch (const DivergedError& e) {
        throw DivergedError(stage_msg(name, e.what()), e.sample_index);
    }
}

std::vector<TransferId> all_entries() {
    std::vector<TransferId> entries;
    entries.reserve(kTransferCount);
    for (int i = 0; i < kTransferCount; ++i) entries.push_back(static_cast<TransferId>(i));
    return entries;
}

std::vector<TransferId> parse_entries(const std::string& list) {
    if (list.empty()) return all_entries();
    std::vector<TransferId> entries;
    std::stringstream source(list);
    std::string item;
    while (std::getline(source, item, ',')) {
        const auto begin = item.find_first_not_of(" \t");
        if (begin == std::string::npos) throw UsageError("empty entry name in --entries");
        const auto end = item.find_last_not_of(" \t");
        entries.push_back(parse_transfer_name(item.substr(begin, end - begin + 1)));
    }
    if (entries.empty()) throw UsageError("--entries parsed to an empty list");
    return entries;
}

// Worker count for the frequency sweep: VSI_SSA_THREADS wins when set (0 means
// sequential), otherwise the hardware concurrency, always capped by the number
// of sweep points.
unsigned sweep_threads(std::size_t points) {
    unsigned threads = std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
    if (const char* env = std::getenv("VSI_SSA_THREADS")) {
        const std::string_view text{env};
        unsigned value = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size())
            throw UsageError("VSI_SSA_THREADS must be a non-negative integer, got '" +
                             std::string(text) + "'");
        threads = value == 0 ? 1 : value;
    }
    const std::size_t cap = std::max<std::size_t>(points, 1);
    return static_cast<unsigned>(std::min<std::size_t>(threads, cap));
}

std::string averaged_path(const std::string& path) {
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + "_avg";
    return path.substr(0, dot) + "_avg" + path.substr(dot);
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot open output file '" + path + "'");
    return out;
}

int cmd_operating_point(const ConverterParams& p, double d_0, std::ostream& out) {
    const OperatingPoint op = operating_point(p, d_0);
    const SteadyStateResiduals res = residuals(p, op);
    const ComplexPower power = complex_power(p.u_od, p.u_oq, op.i_ld, op.i_lq);
    out << "d_d = " << to_shortest(op.d_d) << '\n'
        << "d_q = " << to_shortest(op.d_q) << '\n'
        << "d_0 = " << to_shortest(op.d_0) << '\n'
        << "i_ld_a = " << to_shortest(op.i_ld) << '\n'
        << "i_lq_a = " << to_shortest(op.i_lq) << '\n'
        << "p_w = " << to_shortest(power.p) << '\n'
        << "q_var = " << to_shortest(power.q) << '\n'
        << "residual_d_v = " << to_shortest(res.r_d) << '\n'
        << "residual_q_v = " << to_shortest(res.r_q) << '\n'
        << "residual_in_a = " << to_shortest(res.r_in) << '\n';
    return 0;
}

int cmd_freqresp(const ConverterParams& p, double d_0, const std::string& entries_list,
                 double f_min, double f_max, int points, const std::string& out_path,
                 std::ostream& log) {
    const std::vector<TransferId> entries = parse_entries(entries_list);
    const std::vector<double> freqs = log_spaced_frequencies(f_min, f_max, points);
    const OperatingPoint op = operating_point(p, d_0);
    const StateSpaceModel model = build_state_space(p, op);
    const unsigned threads = sweep_threads(freqs.size());
    const ResponseTable numeric = frequency_response_numeric(model, freqs, entries, threads);
    const ResponseTable closed = frequency_response_closed_form(p, op, freqs, entries);
    std::ofstream file = open_output(out_path);
    write_response_csv_header(file, true);
    write_response_csv_rows(file, numeric, "numeric");
    write_response_csv_rows(file, closed, "closed_form");
    log << "wrote " << out_path << ": " << entries.size() << " entries x " << freqs.size()
        << " frequencies x 2 sources (" << threads << (threads == 1 ? " thread)\n" : " threads)\n");
    return 0;
}

int cmd_simulate(const ConverterParams& p, double d_0, const std::string& mode, double duration,
                 double dt_opt, const std::string& out_path, std::ostream& log) {
    const OperatingPoint op = operating_point(p, d_0);
    const double t_sw = 1.0 / p.f_sw;
    SimTrace trace;
    // Defaults spelled exactly like the simulator's own dt bound; dividing the
    // rounded t_sw instead can land one ulp past it and get rejected.
    if (mode == "averaged") {
        const double dt = dt_opt > 0.0 ? dt_opt : 1.0 / (10.0 * p.f_sw);
        trace = simulate_average(p, operating_inputs(p, op), AvgState{}, duration, dt);
    } else {
        const double dt = dt_opt > 0.0 ? dt_opt : 1.0 / (20.0 * p.f_sw);
        trace = simulate_switched(p, op, duration, dt);
    }
    const SimTrace averaged = switching_average(trace, t_sw);
    {
        std::ofstream file = open_output(out_path);
        trace.write_csv(file);
    }
    const std::string avg_path = averaged_path(out_path);
    {
        std::ofstream file = open_output(avg_path);
        averaged.write_csv(file);
    }
    log << "wrote " << out_path << " and " << avg_path << ": " << trace.size()
        << " samples, dt = " << to_shortest(trace.dt) << " s\n";
    return 0;
}

int cmd_svm_table(const ConverterParams& p, std::ostream& out) {
    out << "u_in_v = " << to_shortest(p.u_in) << '\n';
    for (int sector = 1; sector <= 6; ++sector) {
        const SectorSequence seq = sector_sequence(sector, p.u_in);
        out << "sector " << sector << "\n  states:";
        for (const int id : seq.state_ids) out << ' ' << state_label(id);
        out << "\n  u_nn_v:";
        for (const double level : seq.u_nn_levels) out << ' ' << to_shortest(level);
        out << '\n';
    }
    return 0;
}

}  // namespace

VerifyReport run_verify(const ConverterParams& p, double d_0, const VerifyTolerances& tol) {
    VerifyReport r;
    r.op = stage("operating-point", [&] { return operating_point(p, d_0); });
    r.residuals = residuals(p, r.op);

    // Transfer-function oracle: on a lossless twin of the converter the
    // state-space sweep must agree with the closed forms to round-off, since
    // the closed forms neglect exactly the resistance that was removed.
    stage("transfer-functions", [&] {
        ConverterParams lossless = p;
        lossless.r_l = lossless.r_on = lossless.r_s = 0.0;
        derive_fields(lossless);
        OperatingPoint op0;
        op0.d_d = solve_duty_d(lossless);
        op0.d_q = solve_duty_q(lossless, op0.d_d);
        op0.d_0 = 0.5;
        op0.i_ld = solve_inductor_current_d(lossless, op0.d_d);
        const StateSpaceModel model = build_state_space(lossless, op0);
        const std::vector<double> freqs = log_spaced_frequencies(1.0, 1e4, 50);
        const std::vector<TransferId> entries = all_entries();
        const ResponseTable numeric = frequency_response_numeric(model, freqs, entries, 1);
        const ResponseTable closed = frequency_response_closed_form(lossless, op0, freqs, entries);
        double worst = 0.0;
        for (std::size_t e = 0; e < entries.size(); ++e) {
            for (std::size_t k = 0; k < freqs.size(); ++k) {
                const ResponseCell& a = numeric.cells[e][k];
                const ResponseCell& b = closed.cells[e][k];
                if (a.pole || b.pole) continue;
                const double scale = std::max(std::abs(b.value), 1e-300);
                worst = std::max(worst, std::abs(a.value - b.value) / scale);
            }
        }
        r.tf_max_rel_dev = worst;
        return 0;
    });

    r.avg_dt = 1.0 / (10.0 * p.f_sw);
    r.avg_duration = 2.5 / p.f_grid;
    r.avg_window = 1.0 / (20.0 * p.f_grid);
    const SimTrace avg = stage("averaged-simulation", [&] {
        return simulate_average(p, operating_inputs(p, r.op), AvgState{}, r.avg_duration, r.avg_dt);
    });
    const std::vector<ChannelStats> avg_stats = steady_state_of_trace(avg, r.avg_window);
    r.avg_i_od = avg_stats[avg.channel_index("i_od_a")].mean;
    r.avg_i_oq = avg_stats[avg.channel_index("i_oq_a")].mean;
    r.avg_i_in = avg_stats[avg.channel_index("i_in_a")].mean;

    r.sw_dt = 1.0 / (20.0 * p.f_sw);
    r.sw_duration = 5.0 / p.f_grid;
    r.sw_window = 1.0 / p.f_grid;
    const SimTrace sw = stage("switched-simulation", [&] {
        return simulate_switched(p, r.op, r.sw_duration, r.sw_dt);
    });
    const std::vector<ChannelStats> sw_stats = steady_state_of_trace(sw, r.sw_window);
    r.sw_i_od = sw_stats[sw.channel_index("i_od_a")].mean;
    r.sw_i_oq = sw_stats[sw.channel_index("i_oq_a")].mean;
    r.sw_i_in = sw_stats[sw.channel_index("i_in_a")].mean;

    const auto add_check = [&r](std::string name, double deviation, double tolerance,
                                bool relative) {
        r.checks.push_back(
            {std::move(name), deviation, tolerance, relative, std::abs(deviation) <= tolerance});
    };
    const auto rel_dev = [](double value, double reference) {
        return (value - reference) / std::max(std::abs(reference), 1e-9);
    };
    add_check("i_od switched vs averaged", rel_dev(r.sw_i_od, r.avg_i_od), tol.i_od_rel, true);
    add_check("i_oq switched magnitude", r.sw_i_oq, tol.i_oq_abs, false);
    add_check("i_in switched vs set-point", rel_dev(r.sw_i_in, p.i_in), tol.i_in_rel, true);
    add_check("transfer functions vs closed forms", r.tf_max_rel_dev, tol.tf_rel, true);
    r.pass = std::all_of(r.checks.begin(), r.checks.end(),
                         [](const VerifyCheck& c) { return c.pass; });
    return r;
}

void print_report(const VerifyReport& r, std::ostream& out) {
    out << "operating point\n"
        << "  d_d = " << to_shortest(r.op.d_d) << ", d_q = " << to_shortest(r.op.d_q)
        << ", d_0 = " << to_shortest(r.op.d_0) << '\n'
        << "  i_ld_a = " << to_shortest(r.op.i_ld) << ", i_lq_a = " << to_shortest(r.op.i_lq)
        << '\n'
        << "  residuals: d_v = " << to_shortest(r.residuals.r_d)
        << ", q_v = " << to_shortest(r.residuals.r_q)
        << ", in_a = " << to_shortest(r.residuals.r_in) << '\n';
    out << "transfer functions (lossless twin, 15 entries x 50 frequencies)\n"
        << "  max deviation from closed forms = " << to_shortest(r.tf_max_rel_dev) << " rel\n";
    out << "averaged simulation (" << to_shortest(r.avg_duration)
        << " s, dt = " << to_shortest(r.avg_dt)
        << " s, trailing window = " << to_shortest(r.avg_window) << " s)\n"
        << "  i_od_a = " << to_shortest(r.avg_i_od) << ", i_oq_a = " << to_shortest(r.avg_i_oq)
        << ", i_in_a = " << to_shortest(r.avg_i_in) << '\n';
    out << "switched simulation (" << to_shortest(r.sw_duration)
        << " s, dt = " << to_shortest(r.sw_dt)
        << " s, trailing window = " << to_shortest(r.sw_window) << " s)\n"
        << "  i_od_a = " << to_shortest(r.sw_i_od) << ", i_oq_a = " << to_shortest(r.sw_i_oq)
        << ", i_in_a = " << to_shortest(r.sw_i_in) << '\n';
    out << "checks\n";
    for (const VerifyCheck& c : r.checks) {
        const char* unit = c.relative ? " rel" : " A";
        out << "  " << c.name << ": deviation " << to_shortest(c.deviation) << unit
            << ", tolerance " << to_shortest(c.tolerance) << unit << ": "
            << (c.pass ? "PASS" : "FAIL") << '\n';
    }
    out << "verdict: " << (r.pass ? "PASS" : "FAIL") << '\n';
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{
        "three-phase grid-connected inverter: analytic operating points, small-signal "
        "transfer functions, averaged and switched simulation",
        "vsi-ssa"};
    app.require_subcommand(1);

    std::string config_path;
    double d_0 = 0.5;

    CLI::App* op_cmd =
        app.add_subcommand("operating-point", "solve and print the steady-state operating point");
    CLI::App* fr_cmd =
        app.add_subcommand("freqresp", "sweep the small-signal transfer functions to CSV");
    CLI::App* sim_cmd = app.add_subcommand("simulate", "run the averaged or switched model to CSV");
    CLI::App* ver_cmd = app.add_subcommand(
        "verify", "cross-validate the analytic, averaged and switched models against each other");
    CLI::App* svm_cmd = app.add_subcommand("svm-table", "print the space-vector switching tables");

    for (CLI::App* sub : {op_cmd, fr_cmd, sim_cmd, ver_cmd, svm_cmd})
        sub->add_option("--config", config_path, "converter config file")->required();
    for (CLI::App* sub : {op_cmd, fr_cmd, sim_cmd, ver_cmd})
        sub->add_option("--d0", d_0, "zero-sequence duty offset")->capture_default_str();

    std::string entries;
    double f_min = 1.0;
    double f_max = 1e4;
    int points = 200;
    std::string fr_out;
    fr_cmd->add_option("--entries", entries,
                       "comma-separated transfer-function names (default: all 15)");
    fr_cmd->add_option("--fmin", f_min, "sweep start, Hz")->capture_default_str();
    fr_cmd->add_option("--fmax", f_max, "sweep end, Hz")->capture_default_str();
    fr_cmd->add_option("--points", points, "number of log-spaced frequencies")
        ->capture_default_str();
    fr_cmd->add_option("--out", fr_out, "output CSV path")->required();

    std::string mode;
    double duration = 0.1;
    double dt = 0.0;
    std::string sim_out;
    sim_cmd->add_option("--mode", mode, "model to run")
        ->required()
        ->check(CLI::IsMember({"averaged", "switched"}));
    sim_cmd->add_option("--duration", duration, "simulated time, s")->capture_default_str();
    sim_cmd->add_option("--dt", dt,
                        "integrator step, s; must divide the switching period (default: a tenth "
                        "of it for averaged, a twentieth for switched)");
    sim_cmd->add_option("--out", sim_out,
                        "output CSV path (a switching-averaged _avg sibling is written next to it)")
        ->required();

    VerifyTolerances tol;
    ver_cmd->add_option("--tol-i-od-rel", tol.i_od_rel,
                        "relative tolerance, switched vs averaged i_od")
        ->capture_default_str();
    ver_cmd->add_option("--tol-i-oq-abs", tol.i_oq_abs,
                        "absolute tolerance on the switched i_oq, A")
        ->capture_default_str();
    ver_cmd->add_option("--tol-i-in-rel", tol.i_in_rel,
                        "relative tolerance, switched i_in vs set-point")
        ->capture_default_str();
    ver_cmd->add_option("--tol-tf-rel", tol.tf_rel,
                        "relative tolerance, state-space sweep vs closed forms")
        ->capture_default_str();

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("vsi-ssa");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        const ConverterParams p = load_params_file(config_path);
        if (op_cmd->parsed()) return cmd_operating_point(p, d_0, out);
        if (fr_cmd->parsed())
            return cmd_freqresp(p, d_0, entries, f_min, f_max, points, fr_out, out);
        if (sim_cmd->parsed()) return cmd_simulate(p, d_0, mode, duration, dt, sim_out, out);
        if (ver_cmd->parsed()) {
            const VerifyReport report = run_verify(p, d_0, tol);
            print_report(report, out);
            return report.pass ? 0 : 1;
        }
        if (svm_cmd->parsed()) return cmd_svm_table(p, out);
        err << "error: no subcommand selected\n";
        return 2;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const InfeasibleError& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const PoleError& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const DivergedError& e) {
        err << "error: " << e.what() << '\n';
        return 4;
    }
}

}  // namespace vsi::cli
