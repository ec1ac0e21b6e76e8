#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "polarsim/class_a.hpp"

namespace polarsim {

// Radix-2 FFT with unitary scaling: both directions multiply by 1/sqrt(N),
// so forward and inverse are exact adjoints and a round trip is the
// identity up to rounding. Twiddles and the bit-reversal permutation are
// precomputed per instance; transforms are single threaded and bit
// reproducible.
class Fft {
public:
    explicit Fft(int size);  // power of two in [2, 2^22]

    int size() const { return n_; }

    void forward(std::vector<std::complex<double>>& x) const;
    void inverse(std::vector<std::complex<double>>& x) const;

private:
    int n_;
    std::vector<int> rev_;
    std::vector<std::complex<double>> tw_;  // e^{-2 pi i k / N}, k < N/2

    void transform(std::vector<std::complex<double>>& x, bool inv) const;
};

// Memoryless receiver front ends applied to the time-domain signal before
// the FFT. Blanking zeros samples with |y| >= threshold; clipping rescales
// them to magnitude `threshold` keeping the phase. Both leave quieter
// samples untouched and never increase sample energy.
enum class Nonlinearity { none, blanking, clipping };

void apply_nonlinearity(std::vector<std::complex<double>>& y, Nonlinearity nl,
                        double threshold);

// Per-subcarrier LLR model L_k = 2 * gain * Re(Y_k) / noise_var, treating
// the post-FFT disturbance on each subcarrier as Gaussian. `noise_var` is
// the per-real-dimension residual variance. The matching channel density
// for bound computations is the BPSK Gaussian density with noise variance
// effective_noise_variance() = noise_var / gain^2.
struct LlrCalibration {
    double gain = 1.0;
    double noise_var = 1.0;
};

double effective_noise_variance(const LlrCalibration& cal);

// Closed-form calibration for a linear front end (no nonlinearity): unit
// gain, per-real-dimension variance total_variance() / 2 for the complex
// mixture under the total-power convention E|z|^2 = total_variance().
LlrCalibration analytic_ofdm_llr(const ClassA& channel);

// Pilot-based calibration: simulates `pilot_blocks` OFDM blocks of known
// random BPSK data through noise, front end and FFT, then least-squares
// fits Re(Y) = gain * X + e. Deterministic for a fixed seed (one keyed
// stream per pilot block). Throws NumericalError if the fit degenerates
// (non-positive gain or residual variance), which happens for nonsensical
// thresholds such as blanking everything.
LlrCalibration calibrate_ofdm_llr(const ClassA& channel, int n_fft, Nonlinearity nl,
                                  double threshold, int pilot_blocks,
                                  std::uint64_t seed);

// BPSK onto subcarriers (bit 0 -> +1) followed by the unitary inverse
// transform; codeword size must equal fft.size().
void ofdm_transmit(const Fft& fft, const std::vector<std::uint8_t>& codeword,
                   std::vector<std::complex<double>>& time_signal);

// Front end, forward transform and per-subcarrier LLRs, in place: on return
// `received` holds the frequency-domain signal.
void ofdm_receive(const Fft& fft, std::vector<std::complex<double>>& received,
                  Nonlinearity nl, double threshold, const LlrCalibration& cal,
                  std::vector<double>& llrs);

}  // namespace polarsim
