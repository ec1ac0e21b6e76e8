#include "polarsim/config.hpp"

#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "polarsim/errors.hpp"

namespace polarsim {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, int line) {
    double d = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(d)) {
        throw ConfigError("cannot parse '" + v + "' as a finite number", line);
    }
    return d;
}

long long parse_int(const std::string& v, int line) {
    long long i = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), i);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw ConfigError("cannot parse '" + v + "' as an integer", line);
    }
    return i;
}

std::uint64_t parse_u64(const std::string& v, int line) {
    std::uint64_t i = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), i);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw ConfigError("cannot parse '" + v + "' as an unsigned integer", line);
    }
    return i;
}

void check(bool ok, const char* msg, int line) {
    if (!ok) throw ConfigError(msg, line);
}

std::string fmt_g(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

const char* nl_name(Nonlinearity nl) {
    switch (nl) {
        case Nonlinearity::none: return "none";
        case Nonlinearity::blanking: return "blanking";
        default: return "clipping";
    }
}

}  // namespace

std::vector<double> ExperimentConfig::snr_points_db() const {
    std::vector<double> pts;
    for (int i = 0;; ++i) {
        double s = snr_start_db + i * snr_step_db;
        if (s > snr_stop_db + 1e-9) break;
        pts.push_back(s);
    }
    return pts;
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string raw, section;
    std::set<std::string> seen;
    bool has_n = false, has_k = false, has_start = false, has_stop = false;
    bool has_threshold = false;
    int lineno = 0;

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;

        if (line.front() == '[') {
            check(line.back() == ']', "unterminated section header", lineno);
            section = trim(line.substr(1, line.size() - 2));
            check(section == "noise" || section == "code" || section == "modulation" ||
                      section == "snr" || section == "stopping" || section == "run" ||
                      section == "density",
                  "unknown section", lineno);
            continue;
        }

        std::size_t eq = line.find('=');
        check(eq != std::string::npos, "expected 'key = value'", lineno);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        check(!key.empty(), "empty key", lineno);
        check(!value.empty(), "empty value", lineno);
        check(!section.empty(), "key outside any [section]", lineno);
        check(seen.insert(section + "." + key).second, "duplicate key", lineno);

        if (section == "noise") {
            if (key == "impulsive_index") {
                cfg.impulsive_index = parse_double(value, lineno);
                check(cfg.impulsive_index > 0.0 && cfg.impulsive_index <= 1.0,
                      "impulsive_index must be in (0, 1]", lineno);
            } else if (key == "gamma") {
                cfg.gamma = parse_double(value, lineno);
                check(cfg.gamma > 0.0, "gamma must be positive", lineno);
            } else if (key == "truncation_m") {
                long long m = parse_int(value, lineno);
                check(m >= 1 && m <= 400, "truncation_m must be in [1, 400]", lineno);
                cfg.truncation_m = static_cast<int>(m);
            } else {
                throw ConfigError("unknown key '" + key + "' in [noise]", lineno);
            }
        } else if (section == "code") {
            if (key == "n") {
                long long n = parse_int(value, lineno);
                check(n >= 1 && n <= 22, "n must be in [1, 22]", lineno);
                cfg.n = static_cast<int>(n);
                has_n = true;
            } else if (key == "k") {
                long long k = parse_int(value, lineno);
                check(k >= 1, "k must be at least 1", lineno);
                cfg.k = static_cast<int>(k);
                has_k = true;
            } else if (key == "construction") {
                check(value == "de" || value == "heuristic",
                      "construction must be 'de' or 'heuristic'", lineno);
                cfg.construction = value;
            } else if (key == "design_snr_db") {
                cfg.design_snr_db = parse_double(value, lineno);
            } else if (key == "info_set_file") {
                cfg.info_set_file = value;
            } else {
                throw ConfigError("unknown key '" + key + "' in [code]", lineno);
            }
        } else if (section == "modulation") {
            if (key == "scheme") {
                check(value == "sc" || value == "ofdm", "scheme must be 'sc' or 'ofdm'",
                      lineno);
                cfg.scheme = value;
            } else if (key == "nonlinearity") {
                if (value == "none") cfg.nonlinearity = Nonlinearity::none;
                else if (value == "blanking") cfg.nonlinearity = Nonlinearity::blanking;
                else if (value == "clipping") cfg.nonlinearity = Nonlinearity::clipping;
                else throw ConfigError("nonlinearity must be none, blanking or clipping",
                                       lineno);
            } else if (key == "threshold") {
                cfg.threshold = parse_double(value, lineno);
                check(cfg.threshold > 0.0, "threshold must be positive", lineno);
                has_threshold = true;
            } else if (key == "llr_calibration") {
                check(value == "empirical" || value == "analytic",
                      "llr_calibration must be 'empirical' or 'analytic'", lineno);
                cfg.llr_calibration = value;
            } else if (key == "pilot_blocks") {
                long long p = parse_int(value, lineno);
                check(p >= 1 && p <= 1'000'000, "pilot_blocks must be in [1, 10^6]", lineno);
                cfg.pilot_blocks = static_cast<int>(p);
            } else {
                throw ConfigError("unknown key '" + key + "' in [modulation]", lineno);
            }
        } else if (section == "snr") {
            if (key == "start_db") {
                cfg.snr_start_db = parse_double(value, lineno);
                has_start = true;
            } else if (key == "stop_db") {
                cfg.snr_stop_db = parse_double(value, lineno);
                has_stop = true;
            } else if (key == "step_db") {
                cfg.snr_step_db = parse_double(value, lineno);
                check(cfg.snr_step_db > 0.0, "step_db must be positive", lineno);
            } else {
                throw ConfigError("unknown key '" + key + "' in [snr]", lineno);
            }
        } else if (section == "stopping") {
            if (key == "min_block_errors") {
                cfg.min_block_errors = parse_u64(value, lineno);
                check(cfg.min_block_errors >= 1, "min_block_errors must be at least 1",
                      lineno);
            } else if (key == "max_blocks") {
                cfg.max_blocks = parse_u64(value, lineno);
                check(cfg.max_blocks >= 1, "max_blocks must be at least 1", lineno);
            } else {
                throw ConfigError("unknown key '" + key + "' in [stopping]", lineno);
            }
        } else if (section == "run") {
            if (key == "seed") {
                cfg.seed = parse_u64(value, lineno);
            } else if (key == "workers") {
                long long w = parse_int(value, lineno);
                check(w >= 1 && w <= 256, "workers must be in [1, 256]", lineno);
                cfg.workers = static_cast<int>(w);
            } else {
                throw ConfigError("unknown key '" + key + "' in [run]", lineno);
            }
        } else {  // density
            if (key == "grid_step") {
                cfg.grid_step = parse_double(value, lineno);
                check(cfg.grid_step > 0.0 && cfg.grid_step <= 10.0,
                      "grid_step must be in (0, 10]", lineno);
            } else if (key == "grid_half") {
                long long h = parse_int(value, lineno);
                check(h >= 1 && h <= (1 << 20), "grid_half must be in [1, 2^20]", lineno);
                cfg.grid_half = static_cast<int>(h);
            } else if (key == "histogram_samples") {
                cfg.histogram_samples = parse_u64(value, lineno);
                check(cfg.histogram_samples >= 100'000,
                      "histogram_samples must be at least 10^5", lineno);
            } else {
                throw ConfigError("unknown key '" + key + "' in [density]", lineno);
            }
        }
    }

    if (!has_n || !has_k) throw ConfigError("[code] must set both n and k");
    if (!has_start || !has_stop) throw ConfigError("[snr] must set start_db and stop_db");
    if (cfg.k > (1 << cfg.n)) throw ConfigError("[code] k exceeds the block length 2^n");
    if (cfg.snr_stop_db < cfg.snr_start_db) {
        throw ConfigError("[snr] stop_db must not be below start_db");
    }
    if ((cfg.snr_stop_db - cfg.snr_start_db) / cfg.snr_step_db > 10'000.0) {
        throw ConfigError("[snr] grid has more than 10^4 points");
    }
    if (cfg.nonlinearity != Nonlinearity::none) {
        if (cfg.scheme != "ofdm") {
            throw ConfigError("[modulation] nonlinearity requires scheme = ofdm");
        }
        if (!has_threshold) {
            throw ConfigError("[modulation] nonlinearity requires a threshold");
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config_text(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string canonical_config_text(const ExperimentConfig& cfg, bool include_workers) {
    std::ostringstream o;
    o << "[noise]\n";
    o << "impulsive_index = " << fmt_g(cfg.impulsive_index) << "\n";
    o << "gamma = " << fmt_g(cfg.gamma) << "\n";
    o << "truncation_m = " << cfg.truncation_m << "\n";
    o << "[code]\n";
    o << "n = " << cfg.n << "\n";
    o << "k = " << cfg.k << "\n";
    o << "construction = " << cfg.construction << "\n";
    o << "design_snr_db = " << fmt_g(cfg.design_snr_db) << "\n";
    if (!cfg.info_set_file.empty()) o << "info_set_file = " << cfg.info_set_file << "\n";
    o << "[modulation]\n";
    o << "scheme = " << cfg.scheme << "\n";
    o << "nonlinearity = " << nl_name(cfg.nonlinearity) << "\n";
    if (cfg.nonlinearity != Nonlinearity::none) {
        o << "threshold = " << fmt_g(cfg.threshold) << "\n";
    }
    o << "llr_calibration = " << cfg.llr_calibration << "\n";
    o << "pilot_blocks = " << cfg.pilot_blocks << "\n";
    o << "[snr]\n";
    o << "start_db = " << fmt_g(cfg.snr_start_db) << "\n";
    o << "stop_db = " << fmt_g(cfg.snr_stop_db) << "\n";
    o << "step_db = " << fmt_g(cfg.snr_step_db) << "\n";
    o << "[stopping]\n";
    o << "min_block_errors = " << cfg.min_block_errors << "\n";
    o << "max_blocks = " << cfg.max_blocks << "\n";
    o << "[run]\n";
    o << "seed = " << cfg.seed << "\n";
    if (include_workers) o << "workers = " << cfg.workers << "\n";
    o << "[density]\n";
    o << "grid_step = " << fmt_g(cfg.grid_step) << "\n";
    o << "grid_half = " << cfg.grid_half << "\n";
    o << "histogram_samples = " << cfg.histogram_samples << "\n";
    return o.str();
}

std::string config_hash_hex(const ExperimentConfig& cfg) {
    std::string text = canonical_config_text(cfg, false);
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return std::string(buf);
}

}  // namespace polarsim
