#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "polarsim/config.hpp"
#include "polarsim/construction.hpp"
#include "polarsim/csv.hpp"
#include "polarsim/polar.hpp"

namespace polarsim {

// One Monte Carlo operating point. fer = block_errors / blocks and
// ber = bit_errors / (K * blocks); ci95 is the half-width of the Wilson 95%
// interval on the block error rate.
struct FerRecord {
    double snr_db = 0.0;
    std::uint64_t blocks = 0;
    std::uint64_t block_errors = 0;
    std::uint64_t bit_errors = 0;
    double fer = 0.0;
    double ber = 0.0;
    double ci95 = 0.0;
};

// Analytic block-error bounds at one operating point, plus the quantization
// diagnostics of the initial density that produced them (mass clamped into
// the end bins, and the worst violation of the exp(-l) density symmetry).
struct BoundRecord {
    double snr_db = 0.0;
    double blep_product = 0.0;
    double blep_sum = 0.0;
    double init_saturated = 0.0;
    double init_symmetry = 0.0;
};

struct WilsonInterval {
    double center = 0.0;
    double half = 0.0;
};

// Wilson score interval for a binomial proportion at 95% confidence. Unlike
// the normal interval it stays inside [0, 1] and behaves at zero counts.
WilsonInterval wilson_interval(std::uint64_t errors, std::uint64_t trials);

// Builds the information set prescribed by the config at its design SNR:
// density evolution or the Bhattacharyya heuristic, over the exact-LLR
// channel for single-carrier or the calibrated effective Gaussian channel
// for OFDM.
ConstructionResult construct_code(const ExperimentConfig& cfg);

// The code the experiment runs: loaded from cfg.info_set_file when set
// (block length must match cfg.n), otherwise freshly constructed.
PolarCode resolve_code(const ExperimentConfig& cfg);

// Monte Carlo FER/BER sweep over the config's SNR grid. Blocks are simulated
// in fixed-size rounds (256 blocks, capped by max_blocks); after each round
// the stopping rule is evaluated: stop once block_errors >= min_block_errors
// or blocks >= max_blocks. Each block draws from a counter-based stream
// keyed by (seed, point, block), and rounds are split across cfg.workers
// threads with integer tallies, so results are bit-identical for any worker
// count.
std::vector<FerRecord> run_fer(const ExperimentConfig& cfg, const PolarCode& code);

// Analytic bound sweep for the same code: per point, build the initial
// density (exact-LLR histogram for single-carrier, effective Gaussian for
// OFDM), evolve it, and bound the block error over the code's fixed
// information set.
std::vector<BoundRecord> run_bound(const ExperimentConfig& cfg, const PolarCode& code);

// CSV renderings, headed by "# config-hash: <hex>" for provenance.
CsvTable fer_table(const std::vector<FerRecord>& records, const std::string& config_hash);
CsvTable bound_table(const std::vector<BoundRecord>& records,
                     const std::string& config_hash);

// SNR at which a decreasing curve (snr ascending, value descending) crosses
// `target`, interpolated linearly in log10(value). Empty when the curve
// never brackets the target with positive values.
std::optional<double> crossing_snr(const std::vector<std::pair<double, double>>& curve,
                                   double target);

}  // namespace polarsim
