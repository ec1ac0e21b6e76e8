#include "polarsim/ofdm.hpp"

#include <cmath>

#include "polarsim/errors.hpp"
#include "polarsim/rng.hpp"

namespace polarsim {

namespace {

constexpr std::uint64_t kPilotStreamTag = 0x70696c6full;

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

Fft::Fft(int size) : n_(size) {
    if (!is_pow2(size) || size < 2 || size > (1 << 22)) {
        throw InvalidParams("Fft: size must be a power of two in [2, 2^22]");
    }
    int bits = 0;
    while ((1 << bits) < n_) ++bits;
    rev_.resize(n_);
    for (int i = 0; i < n_; ++i) {
        int r = 0;
        for (int b = 0; b < bits; ++b) {
            if (i & (1 << b)) r |= 1 << (bits - 1 - b);
        }
        rev_[i] = r;
    }
    tw_.resize(n_ / 2);
    const double step = -2.0 * M_PI / static_cast<double>(n_);
    for (int k = 0; k < n_ / 2; ++k) {
        tw_[k] = std::polar(1.0, step * static_cast<double>(k));
    }
}

void Fft::transform(std::vector<std::complex<double>>& x, bool inv) const {
    if (static_cast<int>(x.size()) != n_) {
        throw DimensionError("Fft: buffer size does not match transform size");
    }
    for (int i = 0; i < n_; ++i) {
        if (rev_[i] > i) std::swap(x[i], x[rev_[i]]);
    }
    for (int m = 2; m <= n_; m <<= 1) {
        int halfm = m / 2;
        int stride = n_ / m;
        for (int base = 0; base < n_; base += m) {
            for (int k = 0; k < halfm; ++k) {
                std::complex<double> w = tw_[k * stride];
                if (inv) w = std::conj(w);
                std::complex<double> t = w * x[base + k + halfm];
                std::complex<double> u = x[base + k];
                x[base + k] = u + t;
                x[base + k + halfm] = u - t;
            }
        }
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
    for (auto& v : x) v *= scale;
}

void Fft::forward(std::vector<std::complex<double>>& x) const { transform(x, false); }
void Fft::inverse(std::vector<std::complex<double>>& x) const { transform(x, true); }

void apply_nonlinearity(std::vector<std::complex<double>>& y, Nonlinearity nl,
                        double threshold) {
    if (nl == Nonlinearity::none) return;
    if (!(threshold > 0.0) || !std::isfinite(threshold)) {
        throw InvalidParams("apply_nonlinearity: threshold must be positive and finite");
    }
    if (nl == Nonlinearity::blanking) {
        for (auto& v : y) {
            if (std::abs(v) >= threshold) v = 0.0;
        }
    } else {
        for (auto& v : y) {
            double mag = std::abs(v);
            if (mag >= threshold) v *= threshold / mag;
        }
    }
}

double effective_noise_variance(const LlrCalibration& cal) {
    if (!(cal.gain > 0.0) || !(cal.noise_var > 0.0)) {
        throw InvalidParams("effective_noise_variance: gain and variance must be positive");
    }
    return cal.noise_var / (cal.gain * cal.gain);
}

LlrCalibration analytic_ofdm_llr(const ClassA& channel) {
    return LlrCalibration{1.0, channel.total_variance() / 2.0};
}

LlrCalibration calibrate_ofdm_llr(const ClassA& channel, int n_fft, Nonlinearity nl,
                                  double threshold, int pilot_blocks,
                                  std::uint64_t seed) {
    if (!is_pow2(n_fft)) throw InvalidParams("calibrate_ofdm_llr: n_fft must be a power of two");
    if (pilot_blocks < 1) throw InvalidParams("calibrate_ofdm_llr: need at least one pilot block");

    Fft fft(n_fft);
    std::vector<std::uint8_t> bits(n_fft);
    std::vector<std::complex<double>> sig(n_fft);
    std::vector<std::complex<double>> noise;

    double sxy = 0.0, syy = 0.0;
    const double total = static_cast<double>(pilot_blocks) * n_fft;

    for (int b = 0; b < pilot_blocks; ++b) {
        SplitMix64 rng = make_stream(seed, kPilotStreamTag, static_cast<std::uint64_t>(b));
        std::uint64_t word = 0;
        for (int k = 0; k < n_fft; ++k) {
            if (k % 64 == 0) word = rng();
            bits[k] = static_cast<std::uint8_t>((word >> (k % 64)) & 1u);
        }
        ofdm_transmit(fft, bits, sig);
        channel.sample_complex(static_cast<std::size_t>(n_fft), rng, noise);
        for (int k = 0; k < n_fft; ++k) sig[k] += noise[k];
        apply_nonlinearity(sig, nl, threshold);
        fft.forward(sig);
        for (int k = 0; k < n_fft; ++k) {
            double x = bits[k] ? -1.0 : 1.0;
            double r = sig[k].real();
            sxy += x * r;
            syy += r * r;
        }
    }

    double gain = sxy / total;
    double resid = syy / total - gain * gain;
    if (!(gain > 0.0) || !(resid > 0.0) || !std::isfinite(gain) || !std::isfinite(resid)) {
        throw NumericalError("calibrate_ofdm_llr: degenerate fit (check threshold)");
    }
    return LlrCalibration{gain, resid};
}

void ofdm_transmit(const Fft& fft, const std::vector<std::uint8_t>& codeword,
                   std::vector<std::complex<double>>& time_signal) {
    if (static_cast<int>(codeword.size()) != fft.size()) {
        throw DimensionError("ofdm_transmit: codeword length does not match FFT size");
    }
    time_signal.resize(codeword.size());
    for (std::size_t k = 0; k < codeword.size(); ++k) {
        time_signal[k] = codeword[k] ? -1.0 : 1.0;
    }
    fft.inverse(time_signal);
}

void ofdm_receive(const Fft& fft, std::vector<std::complex<double>>& received,
                  Nonlinearity nl, double threshold, const LlrCalibration& cal,
                  std::vector<double>& llrs) {
    if (!(cal.gain > 0.0) || !(cal.noise_var > 0.0)) {
        throw InvalidParams("ofdm_receive: calibration must have positive gain and variance");
    }
    apply_nonlinearity(received, nl, threshold);
    fft.forward(received);
    llrs.resize(received.size());
    const double scale = 2.0 * cal.gain / cal.noise_var;
    for (std::size_t k = 0; k < received.size(); ++k) {
        llrs[k] = scale * received[k].real();
    }
}

}  // namespace polarsim
