#include "vsi/smallsignal.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <ostream>
#include <thread>

#include "vsi/errors.hpp"
#include "vsi/format.hpp"

namespace vsi {

namespace {

constexpr std::array<std::string_view, kTransferCount> kNames{
    "Y_in",   "T_oi_d",  "T_oi_q", "G_ci_d",  "G_ci_q",
    "G_io_d", "Y_o_d",   "G_cr_qd", "G_co_d",  "G_co_qd",
    "G_io_q", "G_cr_dq", "Y_o_q",  "G_co_dq", "G_co_q",
};

constexpr std::array<TransferSlot, kTransferCount> kSlots{{
    {0, 0, 1.0}, {0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}, {0, 4, 1.0},
    {1, 0, 1.0}, {1, 1, -1.0}, {1, 2, 1.0}, {1, 3, 1.0}, {1, 4, 1.0},
    {2, 0, 1.0}, {2, 1, 1.0}, {2, 2, -1.0}, {2, 3, 1.0}, {2, 4, 1.0},
}};

std::string complex_str(std::complex<double> z) {
    return "(" + to_shortest(z.real()) + ", " + to_shortest(z.imag()) + "i)";
}

}  // namespace

std::string_view transfer_name(TransferId id) {
    return kNames[static_cast<int>(id)];
}

TransferId parse_transfer_name(std::string_view name) {
    for (int i = 0; i < kTransferCount; ++i)
        if (kNames[i] == name) return static_cast<TransferId>(i);
    std::string valid;
    for (auto n : kNames) valid += valid.empty() ? std::string(n) : (", " + std::string(n));
    throw UsageError("unknown transfer-function entry '" + std::string(name) +
                     "'; valid names: " + valid);
}

TransferSlot transfer_slot(TransferId id) {
    return kSlots[static_cast<int>(id)];
}

std::complex<double> named_transfer(const Eigen::Matrix<std::complex<double>, 3, 5>& g,
                                    TransferId id) {
    const TransferSlot slot = kSlots[static_cast<int>(id)];
    return slot.sign * g(slot.row, slot.col);
}

StateSpaceModel build_state_space(const ConverterParams& p, const OperatingPoint& op) {
    const SteadyStateResiduals r = residuals(p, op);
    if (std::abs(r.r_d) > 1e-6 || std::abs(r.r_q) > 1e-6 || std::abs(r.r_in) > 1e-6)
        throw UsageError("operating point does not satisfy the steady-state equations "
                         "(residuals " + to_shortest(r.r_d) + " V, " + to_shortest(r.r_q) +
                         " V, " + to_shortest(r.r_in) + " A); linearizing around a "
                         "non-equilibrium would give meaningless transfer functions");
    if (op.d_d == 0.0) throw InfeasibleError("d_d = 0: feedthrough entry i_in/d_d undefined");

    const double l = p.inductance;
    StateSpaceModel m;
    m.a << -p.r_eq / l, p.omega_s,
           -p.omega_s, -p.r_eq / l;
    m.b << op.d_d / l, -1.0 / l, 0.0, p.u_in / l, 0.0,
           op.d_q / l, 0.0, -1.0 / l, 0.0, p.u_in / l;
    m.c << 1.5 * op.d_d, 1.5 * op.d_q,
           1.0, 0.0,
           0.0, 1.0;
    m.d.setZero();
    m.d(0, 3) = p.i_in / op.d_d;
    return m;
}

Eigen::Matrix<std::complex<double>, 3, 5> transfer_matrix_numeric(const StateSpaceModel& m,
                                                                  std::complex<double> s) {
    using cd = std::complex<double>;
    const cd det = (s - m.a(0, 0)) * (s - m.a(1, 1)) - cd(m.a(0, 1) * m.a(1, 0));
    const double scale = std::norm(s) + m.a.squaredNorm();
    if (std::abs(det) <= 1e-12 * scale) {
        const cd tr(m.a(0, 0) + m.a(1, 1));
        const cd disc = tr * tr - 4.0 * cd(m.a(0, 0) * m.a(1, 1) - m.a(0, 1) * m.a(1, 0));
        const cd root = std::sqrt(disc);
        throw PoleError("sI - A is singular at s = " + complex_str(s) + "; model poles are " +
                        complex_str(0.5 * (tr + root)) + " and " + complex_str(0.5 * (tr - root)));
    }

    // adj(sI - A) for the 2x2 case; exact and branch-free.
    Eigen::Matrix<cd, 2, 2> adj;
    adj << s - m.a(1, 1), cd(m.a(0, 1)),
           cd(m.a(1, 0)), s - m.a(0, 0);

    const Eigen::Matrix<cd, 2, 5> x = (adj * m.b.cast<cd>()) / det;
    return m.c.cast<cd>() * x + m.d.cast<cd>();
}

RationalTransferFunction closed_form_tf(const ConverterParams& p, const OperatingPoint& op,
                                        TransferId which) {
    const double w = p.omega_s;
    const double l = p.inductance;
    const double uin = p.u_in;
    const double dd = op.d_d;
    const double dq = op.d_q;

    RationalTransferFunction tf;
    tf.den = {w * w, 0.0, 1.0};
    switch (which) {
        case TransferId::Y_in:
            tf.num = {0.0, 1.5 * (dd * dd + dq * dq) / l, 0.0};
            break;
        case TransferId::T_oi_d:
            tf.num = {1.5 * dq * w / l, -1.5 * dd / l, 0.0};
            break;
        case TransferId::T_oi_q:
            tf.num = {-1.5 * dd * w / l, -1.5 * dq / l, 0.0};
            break;
        case TransferId::G_ci_d: {
            if (dd == 0.0) throw InfeasibleError("d_d = 0: i_in/d_d feedthrough undefined");
            // The constant term cancels exactly when d_q carries the full
            // cross-coupling voltage (the solver's choice); kept in general
            // form so hand-built operating points stay honest.
            const double feed = p.i_in / dd;
            tf.num = {feed * w * w - 1.5 * uin * dq * w / l, 1.5 * uin * dd / l, feed};
            break;
        }
        case TransferId::G_ci_q:
            tf.num = {1.5 * uin * dd * w / l, 1.5 * uin * dq / l, 0.0};
            break;
        case TransferId::G_io_d:
            tf.num = {dq * w / l, dd / l, 0.0};
            break;
        case TransferId::Y_o_d:
            tf.num = {0.0, 1.0 / l, 0.0};
            break;
        case TransferId::G_cr_qd:
            tf.num = {-w / l, 0.0, 0.0};
            break;
        case TransferId::G_co_d:
            tf.num = {0.0, uin / l, 0.0};
            break;
        case TransferId::G_co_qd:
            tf.num = {uin * w / l, 0.0, 0.0};
            break;
        case TransferId::G_io_q:
            tf.num = {-dd * w / l, dq / l, 0.0};
            break;
        case TransferId::G_cr_dq:
            tf.num = {w / l, 0.0, 0.0};
            break;
        case TransferId::Y_o_q:
            tf.num = {0.0, 1.0 / l, 0.0};
            break;
        case TransferId::G_co_dq:
            tf.num = {-uin * w / l, 0.0, 0.0};
            break;
        case TransferId::G_co_q:
            tf.num = {0.0, uin / l, 0.0};
            break;
    }
    return tf;
}

std::array<RationalTransferFunction, kTransferCount> closed_form_table(const ConverterParams& p,
                                                                       const OperatingPoint& op) {
    std::array<RationalTransferFunction, kTransferCount> table;
    for (int i = 0; i < kTransferCount; ++i)
        table[i] = closed_form_tf(p, op, static_cast<TransferId>(i));
    return table;
}

std::complex<double> eval_tf(const RationalTransferFunction& tf, std::complex<double> s) {
    const auto horner = [s](const std::array<double, 3>& c) {
        return (std::complex<double>(c[2]) * s + c[1]) * s + c[0];
    };
    return horner(tf.num) / horner(tf.den);
}

std::vector<double> log_spaced_frequencies(double f_min_hz, double f_max_hz, int points) {
    if (!(f_min_hz > 0.0) || !(f_max_hz > f_min_hz))
        throw UsageError("frequency range must satisfy 0 < f_min < f_max");
    if (points < 2) throw UsageError("a frequency sweep needs at least 2 points");
    std::vector<double> f(points);
    const double log_min = std::log(f_min_hz);
    const double log_max = std::log(f_max_hz);
    for (int k = 0; k < points; ++k)
        f[k] = std::exp(log_min + (log_max - log_min) * k / (points - 1));
    return f;
}

namespace {

void check_sweep_args(std::span<const double> freqs_hz, std::span<const TransferId> entries) {
    if (entries.empty()) throw UsageError("no transfer-function entries requested");
    if (freqs_hz.empty()) throw UsageError("no frequencies requested");
    for (double f : freqs_hz)
        if (!(f > 0.0)) throw UsageError("frequencies must be positive; got " + to_shortest(f));
}

void unwrap_phases(ResponseTable& table) {
    const std::size_t nf = table.freqs_hz.size();
    table.phase_unwrapped_deg.assign(table.entries.size(), std::vector<double>(nf, 0.0));
    for (std::size_t e = 0; e < table.entries.size(); ++e) {
        bool have_prev = false;
        double prev = 0.0;
        for (std::size_t k = 0; k < nf; ++k) {
            const ResponseCell& cell = table.cells[e][k];
            if (cell.pole) continue;
            const double raw =
                std::atan2(cell.value.imag(), cell.value.real()) * 180.0 / std::numbers::pi;
            const double unwrapped =
                have_prev ? raw + 360.0 * std::round((prev - raw) / 360.0) : raw;
            table.phase_unwrapped_deg[e][k] = unwrapped;
            prev = unwrapped;
            have_prev = true;
        }
    }
}

}  // namespace

ResponseTable frequency_response_numeric(const StateSpaceModel& m,
                                         std::span<const double> freqs_hz,
                                         std::span<const TransferId> entries, unsigned threads) {
    check_sweep_args(freqs_hz, entries);

    ResponseTable table;
    table.entries.assign(entries.begin(), entries.end());
    table.freqs_hz.assign(freqs_hz.begin(), freqs_hz.end());
    table.cells.assign(entries.size(), std::vector<ResponseCell>(freqs_hz.size()));

    const std::size_t nf = freqs_hz.size();
    const auto eval_point = [&](std::size_t k) {
        const std::complex<double> s(0.0, 2.0 * std::numbers::pi * table.freqs_hz[k]);
        try {
            const auto g = transfer_matrix_numeric(m, s);
            for (std::size_t e = 0; e < table.entries.size(); ++e)
                table.cells[e][k].value = named_transfer(g, table.entries[e]);
        } catch (const PoleError&) {
            // The pole lives in the common denominator, so it hits every entry.
            for (std::size_t e = 0; e < table.entries.size(); ++e) table.cells[e][k].pole = true;
        }
    };

    std::size_t n_workers = threads <= 1 ? 1 : std::min<std::size_t>(threads, nf);
    if (n_workers <= 1) {
        for (std::size_t k = 0; k < nf; ++k) eval_point(k);
    } else {
        // Strided split; every point writes only its own slots, so the result
        // is byte-identical no matter how many workers run.
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(n_workers);
        pool.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t k = w; k < nf; k += n_workers) eval_point(k);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& err : errors)
            if (err) std::rethrow_exception(err);
    }

    unwrap_phases(table);
    return table;
}

ResponseTable frequency_response_closed_form(const ConverterParams& p, const OperatingPoint& op,
                                             std::span<const double> freqs_hz,
                                             std::span<const TransferId> entries) {
    check_sweep_args(freqs_hz, entries);

    ResponseTable table;
    table.entries.assign(entries.begin(), entries.end());
    table.freqs_hz.assign(freqs_hz.begin(), freqs_hz.end());
    table.cells.assign(entries.size(), std::vector<ResponseCell>(freqs_hz.size()));

    for (std::size_t e = 0; e < table.entries.size(); ++e) {
        const RationalTransferFunction tf = closed_form_tf(p, op, table.entries[e]);
        for (std::size_t k = 0; k < freqs_hz.size(); ++k) {
            const std::complex<double> s(0.0, 2.0 * std::numbers::pi * freqs_hz[k]);
            const std::complex<double> den = (std::complex<double>(tf.den[2]) * s + tf.den[1]) * s + tf.den[0];
            if (std::abs(den) <= 1e-12 * (std::norm(s) + std::abs(tf.den[0]))) {
                table.cells[e][k].pole = true;
                continue;
            }
            table.cells[e][k].value = eval_tf(tf, s);
        }
    }

    unwrap_phases(table);
    return table;
}

void write_response_csv_header(std::ostream& out, bool with_source) {
    out << "freq_hz,entry,re,im,mag_db,phase_deg,phase_unwrapped_deg";
    if (with_source) out << ",source";
    out << '\n';
}

void write_response_csv_rows(std::ostream& out, const ResponseTable& table,
                             const std::string& source_label) {
    for (std::size_t k = 0; k < table.freqs_hz.size(); ++k) {
        for (std::size_t e = 0; e < table.entries.size(); ++e) {
            out << to_shortest(table.freqs_hz[k]) << ',' << transfer_name(table.entries[e]) << ',';
            const ResponseCell& cell = table.cells[e][k];
            if (cell.pole) {
                out << "pole,pole,pole,pole,pole";
            } else {
                const double mag = std::abs(cell.value);
                const double phase =
                    std::atan2(cell.value.imag(), cell.value.real()) * 180.0 / std::numbers::pi;
                out << to_shortest(cell.value.real()) << ',' << to_shortest(cell.value.imag())
                    << ',' << to_shortest(20.0 * std::log10(mag)) << ',' << to_shortest(phase)
                    << ',' << to_shortest(table.phase_unwrapped_deg[e][k]);
            }
            if (!source_label.empty()) out << ',' << source_label;
            out << '\n';
        }
    }
}

Eigen::Vector2d linearized_derivative(const ConverterParams& p, const OperatingPoint& op,
                                      const Eigen::Vector2d& state_dev,
                                      const Eigen::Matrix<double, 5, 1>& input_dev) {
    const StateSpaceModel m = build_state_space(p, op);
    return m.a * state_dev + m.b * input_dev;
}

}  // namespace vsi
