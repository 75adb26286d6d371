#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "vsi/params.hpp"
#include "vsi/steady_state.hpp"

namespace vsi {

// Linearized dynamics around an operating point.
// State  x = [i_ld, i_lq] (deviations, A)
// Input  u = [u_in, u_od, u_oq, d_d, d_q] (deviations)
// Output y = [i_in, i_od, i_oq] (deviations, A)
struct StateSpaceModel {
    Eigen::Matrix2d a;
    Eigen::Matrix<double, 2, 5> b;
    Eigen::Matrix<double, 3, 2> c;
    Eigen::Matrix<double, 3, 5> d;
};

// Populates the matrices from the operating point. The point must actually
// satisfy the steady-state equations (residuals below 1e-6), otherwise the
// linearization is around a non-equilibrium and the caller gets an exception
// instead of silently wrong transfer functions.
StateSpaceModel build_state_space(const ConverterParams& p, const OperatingPoint& op);

// C(sI - A)^{-1} B + D via the closed-form 2x2 adjugate. Throws PoleError
// when s sits on an eigenvalue of A (relative determinant below 1e-12).
Eigen::Matrix<std::complex<double>, 3, 5> transfer_matrix_numeric(const StateSpaceModel& m,
                                                                  std::complex<double> s);

// The fifteen named entries of the transfer matrix, row-major over
// (output, input). Y_o_d / Y_o_q are reported as admittances, i.e. the
// negatives of the raw matrix entries (output current flows INTO the grid,
// so the self-admittance enters the matrix with a minus sign).
enum class TransferId {
    Y_in, T_oi_d, T_oi_q, G_ci_d, G_ci_q,
    G_io_d, Y_o_d, G_cr_qd, G_co_d, G_co_qd,
    G_io_q, G_cr_dq, Y_o_q, G_co_dq, G_co_q,
};
inline constexpr int kTransferCount = 15;

std::string_view transfer_name(TransferId id);
TransferId parse_transfer_name(std::string_view name);  // throws UsageError
// Row/column of the entry in the 3x5 matrix and the sign linking the named
// quantity to the raw matrix entry (-1 for the two self-admittances).
struct TransferSlot {
    int row;
    int col;
    double sign;
};
TransferSlot transfer_slot(TransferId id);

// Named transfer value extracted from a numeric transfer matrix.
std::complex<double> named_transfer(const Eigen::Matrix<std::complex<double>, 3, 5>& g,
                                    TransferId id);

// Rational function num(s)/den(s), coefficients in ascending powers of s.
// For the closed forms the denominator is always s^2 + omega_s^2.
struct RationalTransferFunction {
    std::array<double, 3> num{};
    std::array<double, 3> den{};
};
std::complex<double> eval_tf(const RationalTransferFunction& tf, std::complex<double> s);

// Closed-form transfer functions with the series resistance neglected in the
// dynamics (the duties and currents still come from the given operating
// point). Stored in expanded polynomial form: the textbook factored forms put
// d_q in denominators and blow up at d_q = 0 even though the functions are
// perfectly regular there.
RationalTransferFunction closed_form_tf(const ConverterParams& p, const OperatingPoint& op,
                                        TransferId which);
std::array<RationalTransferFunction, kTransferCount> closed_form_table(const ConverterParams& p,
                                                                       const OperatingPoint& op);

// One evaluated point of a frequency sweep. Pole cells mark frequencies that
// hit an undamped resonance exactly; their value is meaningless.
struct ResponseCell {
    std::complex<double> value{0.0, 0.0};
    bool pole = false;
};

// Sweep result: cells[e][k] is entry e at freqs_hz[k]. Unwrapped phase is
// continued across frequencies per entry (nearest-branch), skipping poles.
struct ResponseTable {
    std::vector<TransferId> entries;
    std::vector<double> freqs_hz;
    std::vector<std::vector<ResponseCell>> cells;
    std::vector<std::vector<double>> phase_unwrapped_deg;
};

// Numeric sweep of the full model. threads = 0 or 1 runs sequentially; more
// threads split the frequency axis, results are slot-indexed so the output is
// identical regardless of thread count. Throws UsageError on an empty or
// non-positive frequency list or empty entry list.
ResponseTable frequency_response_numeric(const StateSpaceModel& m,
                                         std::span<const double> freqs_hz,
                                         std::span<const TransferId> entries,
                                         unsigned threads = 1);

// Same sweep evaluated from the closed forms (resistance-free dynamics).
ResponseTable frequency_response_closed_form(const ConverterParams& p, const OperatingPoint& op,
                                             std::span<const double> freqs_hz,
                                             std::span<const TransferId> entries);

std::vector<double> log_spaced_frequencies(double f_min_hz, double f_max_hz, int points);

// CSV export. Header: freq_hz,entry,re,im,mag_db,phase_deg,phase_unwrapped_deg
// plus a trailing `source` column when source_label is non-empty. Pole rows
// carry the literal word `pole` in every value field.
void write_response_csv_header(std::ostream& out, bool with_source);
void write_response_csv_rows(std::ostream& out, const ResponseTable& table,
                             const std::string& source_label = "");

// A*dx + B*du for deviations around the operating point; the long way of
// writing "the linearization", kept as an explicit entry point so it can be
// finite-difference checked against the nonlinear averaged model.
Eigen::Vector2d linearized_derivative(const ConverterParams& p, const OperatingPoint& op,
                                      const Eigen::Vector2d& state_dev,
                                      const Eigen::Matrix<double, 5, 1>& input_dev);

}  // namespace vsi
