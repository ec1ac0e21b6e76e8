#include "polarsim/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <thread>

#include "polarsim/errors.hpp"
#include "polarsim/ofdm.hpp"
#include "polarsim/rng.hpp"

namespace polarsim {

namespace {

constexpr std::uint64_t kBlockTag = 0xb10cull;
constexpr std::uint64_t kConstructTag = 0xc0575ull;
constexpr std::uint64_t kRound = 256;

struct Tally {
    std::uint64_t block_errors = 0;
    std::uint64_t bit_errors = 0;
};

// Seed for calibration pilot streams, decorrelated from block streams and
// distinct per operating point.
std::uint64_t calib_seed(std::uint64_t master, std::uint64_t point) {
    return mix64(master + 0x9e3779b97f4a7c15ull * (point + 1)) ^ kConstructTag;
}

// Per-real-dimension variance of the Gaussian channel the OFDM receiver
// effectively sees at total noise power sigma_z2, under the configured
// calibration mode.
double ofdm_effective_variance(const ExperimentConfig& cfg, const ClassA& chan,
                               std::uint64_t point) {
    if (cfg.llr_calibration == "analytic") {
        return effective_noise_variance(analytic_ofdm_llr(chan));
    }
    auto cal = calibrate_ofdm_llr(chan, cfg.block_length(), cfg.nonlinearity,
                                  cfg.threshold, cfg.pilot_blocks,
                                  calib_seed(cfg.seed, point));
    return effective_noise_variance(cal);
}

// Per-thread simulation state for one operating point.
struct BlockWorker {
    const ExperimentConfig& cfg;
    const ClassA& chan;
    const Fft* fft;  // null for single-carrier
    const LlrCalibration cal;
    std::uint64_t point;
    ScDecoder decoder;

    std::vector<std::uint8_t> message, codeword, u_hat, message_hat;
    std::vector<double> noise_re, llrs;
    std::vector<std::complex<double>> signal, noise_c;

    BlockWorker(const ExperimentConfig& c, const ClassA& ch, const Fft* f,
                LlrCalibration calibration, std::uint64_t pt, const PolarCode& code)
        : cfg(c), chan(ch), fft(f), cal(calibration), point(pt), decoder(code) {}

    // Returns bit errors in the message; zero means the block was clean.
    std::uint32_t run(std::uint64_t block) {
        const int N = cfg.block_length();
        const int K = decoder.code().dimension();
        SplitMix64 rng = make_stream(cfg.seed, kBlockTag, point, block);

        message.resize(static_cast<std::size_t>(K));
        std::uint64_t word = 0;
        for (int i = 0; i < K; ++i) {
            if (i % 64 == 0) word = rng();
            message[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
        }
        encode(decoder.code(), message, codeword);

        if (fft == nullptr) {
            chan.sample_real(static_cast<std::size_t>(N), rng, noise_re);
            llrs.resize(static_cast<std::size_t>(N));
            for (int i = 0; i < N; ++i) {
                double y = (codeword[i] ? -1.0 : 1.0) + noise_re[i];
                llrs[i] = chan.llr(y);
            }
        } else {
            ofdm_transmit(*fft, codeword, signal);
            chan.sample_complex(static_cast<std::size_t>(N), rng, noise_c);
            for (int i = 0; i < N; ++i) signal[i] += noise_c[i];
            ofdm_receive(*fft, signal, cfg.nonlinearity, cfg.threshold, cal, llrs);
        }
        clamp_llrs(llrs);
        decoder.decode(llrs, u_hat, message_hat);

        std::uint32_t diff = 0;
        for (int i = 0; i < K; ++i) diff += message[i] != message_hat[i];
        return diff;
    }
};

}  // namespace

WilsonInterval wilson_interval(std::uint64_t errors, std::uint64_t trials) {
    if (trials == 0) throw InvalidParams("wilson_interval: trials must be positive");
    if (errors > trials) throw InvalidParams("wilson_interval: errors exceed trials");
    const double z = 1.959963984540054;  // 97.5th percentile of the standard normal
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    WilsonInterval w;
    w.center = (p + z2 / (2.0 * n)) / denom;
    w.half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return w;
}

ConstructionResult construct_code(const ExperimentConfig& cfg) {
    double sz2 = sigma_z2_from_snr_db(cfg.design_snr_db);
    ClassA chan(cfg.noise_at_sigma_z2(sz2));
    const bool sc = cfg.scheme == "sc";

    if (cfg.construction == "heuristic") {
        double z0 = sc ? bhattacharyya_initial(chan)
                       : std::exp(-1.0 / (2.0 * ofdm_effective_variance(cfg, chan, 0)));
        return heuristic_construct(cfg.n, cfg.k, z0);
    }

    LlrGrid grid = cfg.grid();
    QuantizedDensity init =
        sc ? class_a_llr_density(chan, grid, cfg.histogram_samples,
                                 cfg.seed ^ kConstructTag, cfg.workers)
           : gaussian_llr_density(ofdm_effective_variance(cfg, chan, 0), grid);
    DensityOps ops(grid);
    return de_construct(ops, init, cfg.n, cfg.k, cfg.workers);
}

PolarCode resolve_code(const ExperimentConfig& cfg) {
    if (!cfg.info_set_file.empty()) {
        PolarCode code = read_info_set(cfg.info_set_file);
        if (code.n != cfg.n) {
            throw ConfigError("info-set file block length 2^" + std::to_string(code.n) +
                              " does not match configured n = " + std::to_string(cfg.n));
        }
        if (code.dimension() != cfg.k) {
            throw ConfigError("info-set file dimension " +
                              std::to_string(code.dimension()) +
                              " does not match configured k = " + std::to_string(cfg.k));
        }
        return code;
    }
    return make_code(cfg.n, construct_code(cfg));
}

std::vector<FerRecord> run_fer(const ExperimentConfig& cfg, const PolarCode& code) {
    if (code.n != cfg.n || code.dimension() != cfg.k) {
        throw ConfigError("code does not match configured (n, k)");
    }
    const bool ofdm = cfg.scheme == "ofdm";
    const int K = code.dimension();
    std::optional<Fft> fft;
    if (ofdm) fft.emplace(cfg.block_length());

    std::vector<FerRecord> out;
    auto points = cfg.snr_points_db();
    for (std::size_t p = 0; p < points.size(); ++p) {
        double sz2 = sigma_z2_from_snr_db(points[p]);
        ClassA chan(cfg.noise_at_sigma_z2(sz2));
        LlrCalibration cal;
        if (ofdm) {
            cal = cfg.llr_calibration == "analytic"
                      ? analytic_ofdm_llr(chan)
                      : calibrate_ofdm_llr(chan, cfg.block_length(), cfg.nonlinearity,
                                           cfg.threshold, cfg.pilot_blocks,
                                           calib_seed(cfg.seed, p));
        }

        Tally total;
        std::uint64_t done = 0;
        while (true) {
            std::uint64_t size = std::min<std::uint64_t>(kRound, cfg.max_blocks - done);
            if (size == 0) break;
            int used = static_cast<int>(
                std::min<std::uint64_t>(static_cast<std::uint64_t>(cfg.workers), size));

            auto work = [&](std::uint64_t first, std::uint64_t last, Tally& t) {
                BlockWorker w(cfg, chan, ofdm ? &*fft : nullptr, cal, p, code);
                for (std::uint64_t b = first; b < last; ++b) {
                    std::uint32_t bits = w.run(b);
                    if (bits) {
                        ++t.block_errors;
                        t.bit_errors += bits;
                    }
                }
            };

            if (used == 1) {
                work(done, done + size, total);
            } else {
                std::vector<Tally> parts(used);
                std::vector<std::thread> pool;
                pool.reserve(used);
                for (int i = 0; i < used; ++i) {
                    std::uint64_t first = done + size * i / used;
                    std::uint64_t last = done + size * (i + 1) / used;
                    pool.emplace_back(work, first, last, std::ref(parts[i]));
                }
                for (auto& t : pool) t.join();
                for (const auto& part : parts) {
                    total.block_errors += part.block_errors;
                    total.bit_errors += part.bit_errors;
                }
            }

            done += size;
            if (total.block_errors >= cfg.min_block_errors) break;
        }

        FerRecord r;
        r.snr_db = points[p];
        r.blocks = done;
        r.block_errors = total.block_errors;
        r.bit_errors = total.bit_errors;
        r.fer = static_cast<double>(total.block_errors) / static_cast<double>(done);
        r.ber = static_cast<double>(total.bit_errors) /
                (static_cast<double>(done) * static_cast<double>(K));
        r.ci95 = wilson_interval(total.block_errors, done).half;
        out.push_back(r);
    }
    return out;
}

std::vector<BoundRecord> run_bound(const ExperimentConfig& cfg, const PolarCode& code) {
    if (code.n != cfg.n || code.dimension() != cfg.k) {
        throw ConfigError("code does not match configured (n, k)");
    }
    const bool sc = cfg.scheme == "sc";
    LlrGrid grid = cfg.grid();
    DensityOps ops(grid);

    std::vector<BoundRecord> out;
    auto points = cfg.snr_points_db();
    for (std::size_t p = 0; p < points.size(); ++p) {
        double sz2 = sigma_z2_from_snr_db(points[p]);
        ClassA chan(cfg.noise_at_sigma_z2(sz2));
        QuantizedDensity init =
            sc ? class_a_llr_density(chan, grid, cfg.histogram_samples,
                                     cfg.seed ^ kConstructTag, cfg.workers)
               : gaussian_llr_density(ofdm_effective_variance(cfg, chan, p), grid);

        auto pe = de_leaf_error_probs(ops, init, cfg.n, cfg.workers);
        BoundRecord r;
        r.snr_db = points[p];
        blep_over_info_set(pe, code.info_set, r.blep_product, r.blep_sum);
        r.init_saturated = init.saturated;
        r.init_symmetry = init.symmetry_deviation();
        out.push_back(r);
    }
    return out;
}

CsvTable fer_table(const std::vector<FerRecord>& records, const std::string& config_hash) {
    CsvTable t;
    t.comments.push_back("# config-hash: " + config_hash);
    t.header = {"snr_db", "blocks", "block_errors", "bit_errors", "fer", "ber", "ci95"};
    for (const auto& r : records) {
        t.rows.push_back({format_double(r.snr_db), std::to_string(r.blocks),
                          std::to_string(r.block_errors), std::to_string(r.bit_errors),
                          format_double(r.fer), format_double(r.ber),
                          format_double(r.ci95)});
    }
    return t;
}

CsvTable bound_table(const std::vector<BoundRecord>& records,
                     const std::string& config_hash) {
    CsvTable t;
    t.comments.push_back("# config-hash: " + config_hash);
    t.header = {"snr_db", "blep_product", "blep_sum", "init_saturated", "init_symmetry"};
    for (const auto& r : records) {
        t.rows.push_back({format_double(r.snr_db), format_double(r.blep_product),
                          format_double(r.blep_sum), format_double(r.init_saturated),
                          format_double(r.init_symmetry)});
    }
    return t;
}

std::optional<double> crossing_snr(const std::vector<std::pair<double, double>>& curve,
                                   double target) {
    if (!(target > 0.0)) throw InvalidParams("crossing_snr: target must be positive");
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        double v0 = curve[i].second, v1 = curve[i + 1].second;
        if (v0 >= target && v1 < target && v1 > 0.0) {
            if (v0 == target) return curve[i].first;
            double x0 = curve[i].first, x1 = curve[i + 1].first;
            double f = (std::log10(v0) - std::log10(target)) /
                       (std::log10(v0) - std::log10(v1));
            return x0 + f * (x1 - x0);
        }
    }
    return std::nullopt;
}

}  // namespace polarsim
