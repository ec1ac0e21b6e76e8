#pragma once

#include <cstdint>
#include <string>

#include "polarsim/class_a.hpp"
#include "polarsim/density.hpp"
#include "polarsim/ofdm.hpp"

namespace polarsim {

// One experiment, as read from an INI-style config file. Sections and keys
// (all optional unless noted, defaults below):
//
//   [noise]      impulsive_index, gamma, truncation_m
//   [code]       n (required), k (required), construction = de | heuristic,
//                design_snr_db, info_set_file
//   [modulation] scheme = sc | ofdm, nonlinearity = none | blanking | clipping,
//                threshold, llr_calibration = empirical | analytic, pilot_blocks
//   [snr]        start_db (required), stop_db (required), step_db
//   [stopping]   min_block_errors, max_blocks
//   [run]        seed, workers
//   [density]    grid_step, grid_half, histogram_samples
//
// The SNR axis is SNR_dB = -10 log10(sigma_z^2) for unit-energy BPSK; at
// every operating point sigma_g2 is derived from the point's total noise
// power via params_for_total_variance, so [noise] never fixes sigma_g2.
struct ExperimentConfig {
    // [noise]
    double impulsive_index = 0.1;
    double gamma = 0.1;
    int truncation_m = 20;

    // [code]
    int n = 0;  // required: N = 2^n
    int k = 0;  // required
    std::string construction = "de";
    double design_snr_db = 0.0;
    std::string info_set_file;  // when set, load instead of constructing

    // [modulation]
    std::string scheme = "sc";
    Nonlinearity nonlinearity = Nonlinearity::none;
    double threshold = 0.0;
    std::string llr_calibration = "empirical";
    int pilot_blocks = 2000;

    // [snr]
    double snr_start_db = 0.0;
    double snr_stop_db = 0.0;
    double snr_step_db = 1.0;
    bool has_snr = false;

    // [stopping]
    std::uint64_t min_block_errors = 100;
    std::uint64_t max_blocks = 10'000'000;

    // [run]
    std::uint64_t seed = 1;
    int workers = 1;

    // [density]
    double grid_step = 1.0 / 16.0;
    int grid_half = 960;
    std::uint64_t histogram_samples = 10'000'000;

    bool operator==(const ExperimentConfig&) const = default;

    ClassAParams noise_at_sigma_z2(double sigma_z2) const {
        return params_for_total_variance(impulsive_index, gamma, sigma_z2, truncation_m);
    }
    LlrGrid grid() const { return LlrGrid{grid_step, grid_half}; }
    int block_length() const { return 1 << n; }
    std::vector<double> snr_points_db() const;
};

// Parse and validate. Throws ConfigError with a 1-based line number for
// syntax problems, unknown sections/keys, unparsable or out-of-range values;
// cross-field violations report the config path instead of a line.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Canonical single-string rendering: fixed section and key order, %.17g
// floats. Two configs render identically iff every field (minus `workers`
// when excluded) matches, which makes the rendering a stable hash input.
std::string canonical_config_text(const ExperimentConfig& cfg, bool include_workers);

// FNV-1a over the canonical text without `workers`: runs that differ only
// in parallelism hash identically, so their outputs are comparable.
std::string config_hash_hex(const ExperimentConfig& cfg);

}  // namespace polarsim
