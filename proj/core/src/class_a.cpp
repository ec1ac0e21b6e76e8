#include "polarsim/class_a.hpp"

#include <cmath>
#include <random>

#include "polarsim/errors.hpp"

namespace polarsim {

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;
// Terms whose exponent falls this far below the running maximum contribute
// less than double rounding noise to a log-sum-exp.
constexpr double kLseSkip = 45.0;
}  // namespace

ClassA::ClassA(const ClassAParams& p) : params_(p) {
    if (!std::isfinite(p.impulsive_index) || p.impulsive_index <= 0.0 ||
        p.impulsive_index > 1.0)
        throw InvalidParams("impulsive_index must be in (0, 1]");
    if (!std::isfinite(p.gamma) || p.gamma <= 0.0)
        throw InvalidParams("gamma must be positive");
    if (!std::isfinite(p.sigma_g2) || p.sigma_g2 <= 0.0)
        throw InvalidParams("sigma_g2 must be positive");
    if (p.truncation_m < 1 || p.truncation_m > 400)
        throw InvalidParams("truncation_m must be in [1, 400]");

    const double A = p.impulsive_index;
    const int M = p.truncation_m;
    terms_.reserve(M);
    double sum = 0.0;
    for (int m = 0; m < M; ++m) {
        double w = std::exp(-A + m * std::log(A) - std::lgamma(m + 1.0));
        terms_.push_back({w, p.sigma_g2 * (m / (A * p.gamma) + 1.0)});
        sum += w;
    }
    log_norm_.reserve(M);
    inv_2s2_.reserve(M);
    cum_weight_.reserve(M);
    double cum = 0.0;
    for (auto& t : terms_) {
        t.weight /= sum;
        cum += t.weight;
        cum_weight_.push_back(cum);
        log_norm_.push_back(std::log(t.weight) - 0.5 * std::log(kTwoPi * t.sigma2));
        inv_2s2_.push_back(0.5 / t.sigma2);
    }
    cum_weight_.back() = 1.0;  // absorb rounding so sampling never falls off the end
}

double ClassA::log_pdf_real(double z) const {
    const double z2 = z * z;
    const std::size_t M = terms_.size();
    double mx = -HUGE_VAL;
    for (std::size_t m = 0; m < M; ++m) {
        double e = log_norm_[m] - z2 * inv_2s2_[m];
        if (e > mx) mx = e;
    }
    double acc = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
        double e = log_norm_[m] - z2 * inv_2s2_[m];
        if (e >= mx - kLseSkip) acc += std::exp(e - mx);
    }
    return mx + std::log(acc);
}

double ClassA::pdf_real(double z) const { return std::exp(log_pdf_real(z)); }

double ClassA::pdf_complex(std::complex<double> z) const {
    const double r2 = std::norm(z);
    double acc = 0.0;
    for (const auto& t : terms_)
        acc += t.weight / (kTwoPi * t.sigma2) * std::exp(-r2 / (2.0 * t.sigma2));
    return acc;
}

double ClassA::total_variance() const {
    double acc = 0.0;
    for (const auto& t : terms_) acc += t.weight * t.sigma2;
    return acc;
}

double ClassA::llr(double y) const {
    // Shared normalization constants cancel, so the renormalized weights give
    // the same ratio as the raw Poisson series.
    return log_pdf_real(y - 1.0) - log_pdf_real(y + 1.0);
}

void ClassA::sample_real(std::size_t n, SplitMix64& rng, std::vector<double>& out) const {
    out.resize(n);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t M = cum_weight_.size();
    for (std::size_t i = 0; i < n; ++i) {
        double u = uni(rng);
        std::size_t m = 0;
        while (m + 1 < M && u > cum_weight_[m]) ++m;
        out[i] = gauss(rng) * std::sqrt(terms_[m].sigma2);
    }
}

void ClassA::sample_complex(std::size_t n, SplitMix64& rng,
                            std::vector<std::complex<double>>& out) const {
    out.resize(n);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t M = cum_weight_.size();
    for (std::size_t i = 0; i < n; ++i) {
        double u = uni(rng);
        std::size_t m = 0;
        while (m + 1 < M && u > cum_weight_[m]) ++m;
        // total-power convention: sigma_m^2/2 per component, E|z|^2 = sigma_m^2
        double s = std::sqrt(0.5 * terms_[m].sigma2);
        out[i] = {gauss(rng) * s, gauss(rng) * s};
    }
}

double closed_form_variance(const ClassAParams& p) {
    return p.sigma_g2 * (1.0 + p.gamma) / p.gamma;
}

ClassAParams params_for_total_variance(double impulsive_index, double gamma,
                                       double sigma_z2, int truncation_m) {
    return ClassAParams{impulsive_index, gamma, sigma_z2 * gamma / (1.0 + gamma),
                        truncation_m};
}

double sigma_z2_from_snr_db(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

double snr_db_from_sigma_z2(double sigma_z2) { return -10.0 * std::log10(sigma_z2); }

}  // namespace polarsim
