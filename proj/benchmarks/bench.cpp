#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "vsi/frames.hpp"
#include "vsi/params.hpp"
#include "vsi/sim_avg.hpp"
#include "vsi/sim_switched.hpp"
#include "vsi/smallsignal.hpp"
#include "vsi/steady_state.hpp"

namespace {

vsi::ConverterParams demo_params() {
    vsi::ConverterParams p;
    p.f_sw = 100e3;
    p.f_grid = 50.0;
    p.u_in = 30.0;
    p.i_in = 2.0;
    p.u_od = 8.6;
    p.u_oq = 0.0;
    p.inductance = 73e-6;
    p.r_l = 0.015;
    p.r_on = 0.1;
    p.r_s = 0.05;
    vsi::derive_fields(p);
    return p;
}

void bm_operating_point(benchmark::State& state) {
    const vsi::ConverterParams p = demo_params();
    for (auto _ : state) {
        benchmark::DoNotOptimize(vsi::operating_point(p));
    }
}
BENCHMARK(bm_operating_point);

void bm_park_round_trip(benchmark::State& state) {
    const vsi::AbcTriple abc{8.6, -4.3, -4.3};
    double theta = 0.0;
    for (auto _ : state) {
        theta += 1e-3;
        benchmark::DoNotOptimize(vsi::park_inverse(vsi::park_forward(abc, theta), theta));
    }
}
BENCHMARK(bm_park_round_trip);

void bm_transfer_matrix(benchmark::State& state) {
    const vsi::ConverterParams p = demo_params();
    const vsi::StateSpaceModel m = vsi::build_state_space(p, vsi::operating_point(p));
    const std::complex<double> s{0.0, 2.0 * 3.141592653589793 * 1e3};
    for (auto _ : state) {
        benchmark::DoNotOptimize(vsi::transfer_matrix_numeric(m, s));
    }
}
BENCHMARK(bm_transfer_matrix);

void bm_frequency_sweep(benchmark::State& state) {
    const vsi::ConverterParams p = demo_params();
    const vsi::StateSpaceModel m = vsi::build_state_space(p, vsi::operating_point(p));
    const std::vector<double> freqs = vsi::log_spaced_frequencies(1.0, 1e4, 200);
    std::vector<vsi::TransferId> ids;
    for (int i = 0; i < vsi::kTransferCount; ++i) ids.push_back(static_cast<vsi::TransferId>(i));
    for (auto _ : state) {
        benchmark::DoNotOptimize(vsi::frequency_response_numeric(m, freqs, ids, 1));
    }
}
BENCHMARK(bm_frequency_sweep);

void bm_simulate_averaged_1ms(benchmark::State& state) {
    const vsi::ConverterParams p = demo_params();
    const vsi::OperatingPoint op = vsi::operating_point(p);
    const vsi::AvgInputs in = vsi::operating_inputs(p, op);
    for (auto _ : state) {
        benchmark::DoNotOptimize(vsi::simulate_average(p, in, vsi::AvgState{}, 1e-3, 1e-6));
    }
}
BENCHMARK(bm_simulate_averaged_1ms);

void bm_simulate_switched_1ms(benchmark::State& state) {
    const vsi::ConverterParams p = demo_params();
    const vsi::OperatingPoint op = vsi::operating_point(p);
    for (auto _ : state) {
        benchmark::DoNotOptimize(vsi::simulate_switched(p, op, 1e-3, 5e-7));
    }
}
BENCHMARK(bm_simulate_switched_1ms);

}  // namespace

BENCHMARK_MAIN();
