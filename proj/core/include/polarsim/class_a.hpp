#pragma once
#include <complex>
#include <cstddef>
#include <vector>

#include "polarsim/rng.hpp"

namespace polarsim {

// Middleton Class A parameters.
//   impulsive_index (A): mean number of impulse events per observation, in (0, 1]
//   gamma:              background-to-impulsive power ratio, > 0
//   sigma_g2:           background Gaussian variance, > 0
//   truncation_m (M):   number of Poisson mixture terms retained, >= 1
struct ClassAParams {
    double impulsive_index = 0.1;
    double gamma = 0.1;
    double sigma_g2 = 0.1;
    int truncation_m = 20;
};

struct MixtureTerm {
    double weight;  // renormalized Poisson weight exp(-A) A^m / m!
    double sigma2;  // component variance sigma_g2 * (m / (A*gamma) + 1)
};

// Validated Class A mixture with precomputed per-term constants.
// The real-noise density is the Poisson-weighted Gaussian mixture
//   p(z) = sum_m w_m N(z; 0, sigma_m^2)
// truncated to M terms, with the retained weights renormalized to sum to 1.
// M = 1 degenerates to a plain Gaussian with variance sigma_g2.
class ClassA {
public:
    explicit ClassA(const ClassAParams& p);  // throws InvalidParams

    const ClassAParams& params() const { return params_; }
    const std::vector<MixtureTerm>& terms() const { return terms_; }

    double pdf_real(double z) const;
    double log_pdf_real(double z) const;

    // Circularly symmetric complex mixture density with per-component
    // variance sigma_m^2 (the literal complex-mixture form, E|z|^2 = 2
    // sigma_z^2). Note: sample_complex() uses the total-power convention
    // instead, sigma_m^2/2 per component so that E|z|^2 = total_variance().
    // The README documents this convention split.
    double pdf_complex(std::complex<double> z) const;

    // Noise variance per real dimension: the truncated series
    // sum_m w_m sigma_m^2. Equals sigma_g2 * (1 + gamma) / gamma in exact
    // arithmetic; closed_form_variance() exposes that for cross-checks.
    double total_variance() const;

    // Exact bit-channel LLR for unit-energy BPSK (bit 0 -> +1):
    //   llr(y) = log p(y - 1) - log p(y + 1),
    // an odd function of y. Normalization constants cancel in the ratio, so
    // the value is independent of weight renormalization.
    double llr(double y) const;

    // Two-stage mixture draws: component m with probability w_m, then a
    // zero-mean Gaussian with variance sigma_m^2 (real case) or sigma_m^2/2
    // per real/imaginary component (complex case).
    void sample_real(std::size_t n, SplitMix64& rng, std::vector<double>& out) const;
    void sample_complex(std::size_t n, SplitMix64& rng,
                        std::vector<std::complex<double>>& out) const;

private:
    ClassAParams params_;
    std::vector<MixtureTerm> terms_;
    std::vector<double> log_norm_;    // log w_m - 0.5 log(2 pi sigma_m^2)
    std::vector<double> inv_2s2_;     // 1 / (2 sigma_m^2)
    std::vector<double> cum_weight_;  // cumulative weights for sampling
};

// sigma_g2 * (1 + gamma) / gamma, the exact mixture variance per real
// dimension (independent of A; the Poisson series telescopes).
double closed_form_variance(const ClassAParams& p);

// Parameters hitting a target total variance at fixed A and gamma:
// sigma_g2 = sigma_z2 * gamma / (1 + gamma).
ClassAParams params_for_total_variance(double impulsive_index, double gamma,
                                       double sigma_z2, int truncation_m = 20);

// SNR convention used throughout: SNR_dB = -10 log10(sigma_z^2) for
// unit-energy BPSK, i.e. the axis measures total noise power. Applies to
// single-carrier and OFDM alike.
double sigma_z2_from_snr_db(double snr_db);
double snr_db_from_sigma_z2(double sigma_z2);

}  // namespace polarsim
