#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "polarsim/class_a.hpp"
#include "polarsim/construction.hpp"
#include "polarsim/density.hpp"
#include "polarsim/ofdm.hpp"
#include "polarsim/polar.hpp"
#include "polarsim/rng.hpp"

using namespace polarsim;

namespace {

PolarCode bench_code(int n) {
    return make_code(n, heuristic_construct(n, 1 << (n - 1), 0.5));
}

ClassAParams bench_noise() { return params_for_total_variance(0.1, 0.1, 1.0); }

}  // namespace

static void BM_Encode(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    PolarCode code = bench_code(n);
    std::vector<std::uint8_t> message(code.dimension(), 1), codeword;
    for (auto _ : state) {
        encode(code, message, codeword);
        benchmark::DoNotOptimize(codeword.data());
    }
    state.SetItemsProcessed(state.iterations() * code.block_length());
}
BENCHMARK(BM_Encode)->Arg(8)->Arg(10);

static void BM_ScDecode(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    PolarCode code = bench_code(n);
    ScDecoder decoder(code);
    ClassA chan(bench_noise());
    SplitMix64 rng = make_stream(7, 7);

    std::vector<std::uint8_t> message(code.dimension(), 0), codeword, u_hat, out;
    encode(code, message, codeword);
    std::vector<double> noise, llrs(codeword.size());
    chan.sample_real(codeword.size(), rng, noise);
    for (std::size_t i = 0; i < codeword.size(); ++i) {
        llrs[i] = chan.llr((codeword[i] ? -1.0 : 1.0) + noise[i]);
    }
    clamp_llrs(llrs);

    for (auto _ : state) {
        decoder.decode(llrs, u_hat, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * code.block_length());
}
BENCHMARK(BM_ScDecode)->Arg(8)->Arg(10);

static void BM_SampleAndLlr(benchmark::State& state) {
    ClassA chan(bench_noise());
    SplitMix64 rng = make_stream(7, 8);
    std::vector<double> noise, llrs(1024);
    for (auto _ : state) {
        chan.sample_real(1024, rng, noise);
        for (int i = 0; i < 1024; ++i) llrs[i] = chan.llr(1.0 + noise[i]);
        benchmark::DoNotOptimize(llrs.data());
    }
    state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_SampleAndLlr);

static void BM_CheckConvolve(benchmark::State& state) {
    LlrGrid grid{1.0 / 16.0, static_cast<int>(state.range(0))};
    DensityOps ops(grid);
    QuantizedDensity a = gaussian_llr_density(1.0, grid);
    QuantizedDensity out;
    for (auto _ : state) {
        ops.check_convolve(a, a, out);
        benchmark::DoNotOptimize(out.mass.data());
    }
}
BENCHMARK(BM_CheckConvolve)->Arg(480)->Arg(960);

static void BM_VarConvolve(benchmark::State& state) {
    LlrGrid grid{1.0 / 16.0, static_cast<int>(state.range(0))};
    DensityOps ops(grid);
    QuantizedDensity a = gaussian_llr_density(1.0, grid);
    QuantizedDensity out;
    for (auto _ : state) {
        ops.var_convolve(a, a, out);
        benchmark::DoNotOptimize(out.mass.data());
    }
}
BENCHMARK(BM_VarConvolve)->Arg(480)->Arg(960);

static void BM_Fft(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Fft fft(n);
    SplitMix64 rng = make_stream(7, 9);
    std::vector<std::complex<double>> x(static_cast<std::size_t>(n));
    for (auto& v : x) {
        v = {static_cast<double>(rng() >> 11) * 0x1.0p-53,
             static_cast<double>(rng() >> 11) * 0x1.0p-53};
    }
    for (auto _ : state) {
        fft.forward(x);
        benchmark::DoNotOptimize(x.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Fft)->Arg(256)->Arg(1024);

static void BM_OfdmBlock(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Fft fft(n);
    ClassA chan(bench_noise());
    SplitMix64 rng = make_stream(7, 10);
    std::vector<std::uint8_t> codeword(static_cast<std::size_t>(n), 0);
    std::vector<std::complex<double>> signal, noise;
    std::vector<double> llrs;
    LlrCalibration cal = analytic_ofdm_llr(chan);
    for (auto _ : state) {
        ofdm_transmit(fft, codeword, signal);
        chan.sample_complex(static_cast<std::size_t>(n), rng, noise);
        for (int i = 0; i < n; ++i) signal[i] += noise[i];
        ofdm_receive(fft, signal, Nonlinearity::blanking, 2.0, cal, llrs);
        benchmark::DoNotOptimize(llrs.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_OfdmBlock)->Arg(1024);

BENCHMARK_MAIN();
