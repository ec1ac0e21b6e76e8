#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "polarsim/config.hpp"
#include "polarsim/construction.hpp"
#include "polarsim/csv.hpp"
#include "polarsim/errors.hpp"
#include "polarsim/polar.hpp"
#include "polarsim/simulate.hpp"

namespace {

using namespace polarsim;

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::string info_set_path;
    int workers = 0;  // 0 = keep the config's value
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_info_set) {
    cmd->add_option("--config", opts.config_path, "experiment config file")
        ->required();
    cmd->add_option("--out", opts.out_path, "output file")->required();
    if (with_info_set) {
        cmd->add_option("--info-set", opts.info_set_path,
                        "use this info-set file instead of constructing");
    }
    cmd->add_option("--workers", opts.workers, "override [run] workers");
}

ExperimentConfig load_with_overrides(const CommonOpts& opts) {
    ExperimentConfig cfg = load_config(opts.config_path);
    if (!opts.info_set_path.empty()) cfg.info_set_file = opts.info_set_path;
    if (opts.workers > 0) cfg.workers = opts.workers;
    return cfg;
}

int cmd_construct(const CommonOpts& opts, const std::string& reliability_path) {
    ExperimentConfig cfg = load_with_overrides(opts);
    ConstructionResult res = construct_code(cfg);
    write_info_set(opts.out_path, make_code(cfg.n, res));
    if (!reliability_path.empty()) write_reliability_csv(reliability_path, res);
    std::printf("constructed N=%d K=%d method=%s blep_product=%s blep_sum=%s\n",
                cfg.block_length(), cfg.k, cfg.construction.c_str(),
                format_double(res.blep_product).c_str(),
                format_double(res.blep_sum).c_str());
    return 0;
}

int cmd_simulate(const CommonOpts& opts) {
    ExperimentConfig cfg = load_with_overrides(opts);
    PolarCode code = resolve_code(cfg);
    auto records = run_fer(cfg, code);
    write_csv(opts.out_path, fer_table(records, config_hash_hex(cfg)));
    return 0;
}

int cmd_bound(const CommonOpts& opts) {
    ExperimentConfig cfg = load_with_overrides(opts);
    PolarCode code = resolve_code(cfg);
    auto records = run_bound(cfg, code);
    write_csv(opts.out_path, bound_table(records, config_hash_hex(cfg)));
    return 0;
}

int cmd_sweep_design(const CommonOpts& opts, double from, double to, double step) {
    if (!(step > 0.0) || to < from) {
        throw InvalidParams("sweep-design-snr: need from <= to and a positive step");
    }
    ExperimentConfig base = load_with_overrides(opts);
    base.info_set_file.clear();  // each design point constructs its own code

    CsvTable t;
    t.comments.push_back("# config-hash: " + config_hash_hex(base));
    t.comments.push_back("# sweep: design_snr_db " + format_double(from) + " .. " +
                         format_double(to) + " step " + format_double(step));
    t.header = {"design_snr_db", "snr_db",     "blocks", "block_errors",
                "bit_errors",    "fer",        "ber",    "ci95"};
    for (int i = 0;; ++i) {
        double d = from + i * step;
        if (d > to + 1e-9) break;
        ExperimentConfig cfg = base;
        cfg.design_snr_db = d;
        PolarCode code = resolve_code(cfg);
        for (const auto& r : run_fer(cfg, code)) {
            t.rows.push_back({format_double(d), format_double(r.snr_db),
                              std::to_string(r.blocks), std::to_string(r.block_errors),
                              std::to_string(r.bit_errors), format_double(r.fer),
                              format_double(r.ber), format_double(r.ci95)});
        }
    }
    write_csv(opts.out_path, t);
    return 0;
}

int cmd_sweep_threshold(const CommonOpts& opts, const std::vector<double>& thresholds) {
    ExperimentConfig base = load_with_overrides(opts);
    if (base.nonlinearity == Nonlinearity::none) {
        throw InvalidParams(
            "sweep-threshold: config must select a blanking or clipping front end");
    }
    if (thresholds.empty()) throw InvalidParams("sweep-threshold: no thresholds given");

    CsvTable t;
    t.comments.push_back("# config-hash: " + config_hash_hex(base));
    t.header = {"threshold", "snr_db",     "blocks", "block_errors",
                "bit_errors", "fer",       "ber",    "ci95"};
    for (double T : thresholds) {
        if (!(T > 0.0)) throw InvalidParams("sweep-threshold: thresholds must be positive");
        ExperimentConfig cfg = base;
        cfg.threshold = T;
        PolarCode code = resolve_code(cfg);
        for (const auto& r : run_fer(cfg, code)) {
            t.rows.push_back({format_double(T), format_double(r.snr_db),
                              std::to_string(r.blocks), std::to_string(r.block_errors),
                              std::to_string(r.bit_errors), format_double(r.fer),
                              format_double(r.ber), format_double(r.ci95)});
        }
    }
    write_csv(opts.out_path, t);
    return 0;
}

std::string label_of(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = base.find_last_of('.');
    if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
    return base;
}

int cmd_compare(const std::string& out_path, const std::vector<std::string>& inputs) {
    struct Source {
        std::string label;
        CsvTable table;
        int snr_col;
    };
    std::vector<Source> sources;
    std::vector<double> keys;
    for (const auto& path : inputs) {
        Source s{label_of(path), read_csv(path), -1};
        s.snr_col = s.table.column("snr_db");
        if (s.snr_col < 0) throw IoError(path + ": no snr_db column to merge on");
        for (const auto& row : s.table.rows) {
            double v = std::stod(row[s.snr_col]);
            bool known = false;
            for (double k : keys) known = known || std::fabs(k - v) < 1e-9;
            if (!known) keys.push_back(v);
        }
        sources.push_back(std::move(s));
    }
    std::sort(keys.begin(), keys.end());

    CsvTable out;
    out.header = {"snr_db"};
    for (const auto& s : sources) {
        std::string hash = "none";
        for (const auto& c : s.table.comments) {
            if (c.rfind("# config-hash: ", 0) == 0) hash = c.substr(15);
        }
        out.comments.push_back("# merged-from: " + s.label + " (config-hash " + hash + ")");
        for (std::size_t c = 0; c < s.table.header.size(); ++c) {
            if (static_cast<int>(c) == s.snr_col) continue;
            out.header.push_back(s.label + "_" + s.table.header[c]);
        }
    }
    for (double key : keys) {
        std::vector<std::string> row{format_double(key)};
        for (const auto& s : sources) {
            const std::vector<std::string>* found = nullptr;
            for (const auto& r : s.table.rows) {
                if (std::fabs(std::stod(r[s.snr_col]) - key) < 1e-9) {
                    found = &r;
                    break;
                }
            }
            for (std::size_t c = 0; c < s.table.header.size(); ++c) {
                if (static_cast<int>(c) == s.snr_col) continue;
                row.push_back(found ? (*found)[c] : "");
            }
        }
        out.rows.push_back(std::move(row));
    }
    write_csv(out_path, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polar codes over Class A impulsive noise: construction, bounds, simulation"};
    app.require_subcommand(1);

    CommonOpts construct_opts;
    std::string reliability_path;
    auto* construct = app.add_subcommand(
        "construct", "build an information set at the design SNR and save it");
    add_common(construct, construct_opts, false);
    construct->add_option("--reliability", reliability_path,
                          "also write per-channel reliabilities as CSV");

    CommonOpts simulate_opts;
    auto* simulate =
        app.add_subcommand("simulate", "Monte Carlo FER/BER sweep, results as CSV");
    add_common(simulate, simulate_opts, true);

    CommonOpts bound_opts;
    auto* bound =
        app.add_subcommand("bound", "analytic block-error bound sweep, results as CSV");
    add_common(bound, bound_opts, true);

    CommonOpts sweep_design_opts;
    double design_from = 0.0, design_to = 0.0, design_step = 0.5;
    auto* sweep_design = app.add_subcommand(
        "sweep-design-snr", "simulate one FER sweep per construction design SNR");
    add_common(sweep_design, sweep_design_opts, false);
    sweep_design->add_option("--from", design_from, "first design SNR (dB)")->required();
    sweep_design->add_option("--to", design_to, "last design SNR (dB)")->required();
    sweep_design->add_option("--step", design_step, "design SNR step (dB)");

    CommonOpts sweep_thresh_opts;
    std::vector<double> thresholds;
    auto* sweep_thresh = app.add_subcommand(
        "sweep-threshold", "simulate one FER sweep per front-end threshold");
    add_common(sweep_thresh, sweep_thresh_opts, true);
    sweep_thresh->add_option("--thresholds", thresholds, "threshold values")
        ->required()
        ->delimiter(',');

    std::string compare_out;
    std::vector<std::string> compare_inputs;
    auto* compare = app.add_subcommand(
        "compare", "merge result CSVs on snr_db into one figure-ready table");
    compare->add_option("--out", compare_out, "merged output file")->required();
    compare->add_option("inputs", compare_inputs, "CSV files to merge")
        ->required()
        ->expected(-1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (construct->parsed()) return cmd_construct(construct_opts, reliability_path);
        if (simulate->parsed()) return cmd_simulate(simulate_opts);
        if (bound->parsed()) return cmd_bound(bound_opts);
        if (sweep_design->parsed()) {
            return cmd_sweep_design(sweep_design_opts, design_from, design_to, design_step);
        }
        if (sweep_thresh->parsed()) return cmd_sweep_threshold(sweep_thresh_opts, thresholds);
        if (compare->parsed()) return cmd_compare(compare_out, compare_inputs);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "polarsim: %s\n", e.what());
        return 1;
    }
    return 0;
}
