#include "polarsim/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "polarsim/errors.hpp"
#include "polarsim/rng.hpp"

using namespace polarsim;

namespace {

ExperimentConfig base_cfg(int n, int k) {
    ExperimentConfig cfg;
    cfg.n = n;
    cfg.k = k;
    cfg.has_snr = true;
    return cfg;
}

bool same_records(const std::vector<FerRecord>& a, const std::vector<FerRecord>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].snr_db != b[i].snr_db || a[i].blocks != b[i].blocks ||
            a[i].block_errors != b[i].block_errors ||
            a[i].bit_errors != b[i].bit_errors || a[i].fer != b[i].fer ||
            a[i].ber != b[i].ber || a[i].ci95 != b[i].ci95) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("wilson interval matches reference values") {
    auto w = wilson_interval(5, 100);
    CHECK(w.center == doctest::Approx(0.0666470741931436).epsilon(1e-12));
    CHECK(w.half == doctest::Approx(0.0451033950387756).epsilon(1e-12));

    w = wilson_interval(0, 100);
    CHECK(w.center == doctest::Approx(0.0184967491034928).epsilon(1e-12));
    CHECK(w.half == doctest::Approx(0.0184967491034928).epsilon(1e-12));
    CHECK(std::abs(w.center - w.half) < 1e-15);  // lower edge at zero counts is 0

    w = wilson_interval(100, 200);
    CHECK(w.center == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(w.half == doctest::Approx(0.0686391403961082).epsilon(1e-12));

    CHECK_THROWS_AS((void)wilson_interval(1, 0), InvalidParams);
    CHECK_THROWS_AS((void)wilson_interval(5, 4), InvalidParams);
}

TEST_CASE("wilson interval covers the true proportion in at least 93 of 100 trials") {
    const double p = 0.05;
    const std::uint64_t n = 2000;
    int covered = 0;
    for (int trial = 0; trial < 100; ++trial) {
        SplitMix64 rng = make_stream(2026, 815, static_cast<std::uint64_t>(trial));
        std::uint64_t hits = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            hits += u < p;
        }
        auto w = wilson_interval(hits, n);
        if (w.center - w.half <= p && p <= w.center + w.half) ++covered;
    }
    CHECK(covered >= 93);
}

TEST_CASE("noiseless channel yields zero errors and runs to max_blocks") {
    auto cfg = base_cfg(4, 8);
    cfg.construction = "heuristic";
    cfg.snr_start_db = 90.0;
    cfg.snr_stop_db = 90.0;
    cfg.min_block_errors = 100;
    cfg.max_blocks = 1000;

    auto code = resolve_code(cfg);
    auto records = run_fer(cfg, code);
    REQUIRE(records.size() == 1);
    CHECK(records[0].snr_db == 90.0);
    CHECK(records[0].blocks == 1000);
    CHECK(records[0].block_errors == 0);
    CHECK(records[0].bit_errors == 0);
    CHECK(records[0].fer == 0.0);
    CHECK(records[0].ber == 0.0);
    CHECK(records[0].ci95 > 0.0);
}

TEST_CASE("max_blocks caps the very first round") {
    auto cfg = base_cfg(4, 8);
    cfg.construction = "heuristic";
    cfg.snr_start_db = -20.0;
    cfg.snr_stop_db = -20.0;
    cfg.min_block_errors = 1;
    cfg.max_blocks = 10;

    auto code = resolve_code(cfg);
    auto records = run_fer(cfg, code);
    REQUIRE(records.size() == 1);
    CHECK(records[0].blocks == 10);
}

TEST_CASE("stopping rule fires only at round boundaries") {
    auto cfg = base_cfg(4, 8);
    cfg.construction = "heuristic";
    cfg.snr_start_db = -10.0;
    cfg.snr_stop_db = -10.0;
    cfg.min_block_errors = 5;
    cfg.max_blocks = 100000;

    auto code = resolve_code(cfg);
    auto records = run_fer(cfg, code);
    REQUIRE(records.size() == 1);
    // At this SNR nearly every block fails, so the rule is satisfied far
    // inside the first fixed-size round; the run must still finish it.
    CHECK(records[0].blocks == 256);
    CHECK(records[0].block_errors >= 5);
    CHECK(records[0].fer ==
          static_cast<double>(records[0].block_errors) / 256.0);
}

TEST_CASE("single-carrier results are byte-identical across worker counts") {
    auto cfg = base_cfg(6, 32);
    cfg.construction = "heuristic";
    cfg.snr_start_db = 0.0;
    cfg.snr_stop_db = 0.0;
    cfg.min_block_errors = 50;
    cfg.max_blocks = 2048;

    auto code = resolve_code(cfg);
    cfg.workers = 1;
    auto serial = run_fer(cfg, code);
    cfg.workers = 3;
    auto threaded = run_fer(cfg, code);
    CHECK(same_records(serial, threaded));
    CHECK(serial[0].blocks % 256 == 0);
}

TEST_CASE("ofdm with blanking is byte-identical across worker counts") {
    auto cfg = base_cfg(6, 32);
    cfg.construction = "heuristic";
    cfg.scheme = "ofdm";
    cfg.nonlinearity = Nonlinearity::blanking;
    cfg.threshold = 2.0;
    cfg.pilot_blocks = 50;
    cfg.snr_start_db = -2.0;
    cfg.snr_stop_db = -2.0;
    cfg.min_block_errors = 50;
    cfg.max_blocks = 1024;

    auto code = resolve_code(cfg);
    cfg.workers = 1;
    auto serial = run_fer(cfg, code);
    cfg.workers = 4;
    auto threaded = run_fer(cfg, code);
    CHECK(same_records(serial, threaded));
}

TEST_CASE("crossing_snr interpolates in log10 of the curve value") {
    std::vector<std::pair<double, double>> curve = {
        {0.0, 1e-1}, {1.0, 1e-2}, {2.0, 1e-3}, {3.0, 1e-4}};

    auto x = crossing_snr(curve, 1e-3);
    REQUIRE(x.has_value());
    CHECK(*x == doctest::Approx(2.0).epsilon(1e-12));

    x = crossing_snr(curve, std::pow(10.0, -2.5));
    REQUIRE(x.has_value());
    CHECK(*x == doctest::Approx(1.5).epsilon(1e-12));

    CHECK(!crossing_snr(curve, 0.5).has_value());
    CHECK(!crossing_snr(curve, 1e-5).has_value());
    CHECK(!crossing_snr({}, 1e-3).has_value());
    CHECK_THROWS_AS((void)crossing_snr(curve, 0.0), InvalidParams);
    CHECK_THROWS_AS((void)crossing_snr(curve, -1.0), InvalidParams);
}

TEST_CASE("construct_code honours the configured method") {
    auto cfg = base_cfg(3, 4);
    cfg.snr_start_db = 0.0;
    cfg.snr_stop_db = 0.0;

    cfg.construction = "heuristic";
    auto h = construct_code(cfg);
    CHECK(h.method == ConstructMethod::heuristic);
    REQUIRE(h.info_set.size() == 4);
    CHECK(h.per_channel.size() == 8);

    cfg.construction = "de";
    cfg.grid_half = 480;
    cfg.histogram_samples = 100000;
    auto d = construct_code(cfg);
    CHECK(d.method == ConstructMethod::density_evolution);
    REQUIRE(d.info_set.size() == 4);
    for (std::size_t i = 1; i < d.info_set.size(); ++i) {
        CHECK(d.info_set[i - 1] < d.info_set[i]);
    }
    CHECK(d.info_set.back() < 8);
    CHECK(d.blep_product <= d.blep_sum);
}

TEST_CASE("resolve_code round trips through an info-set file") {
    auto cfg = base_cfg(3, 4);
    cfg.construction = "heuristic";
    cfg.snr_start_db = 0.0;
    cfg.snr_stop_db = 0.0;

    auto fresh = resolve_code(cfg);
    std::string path = "resolve_code_test.info";
    write_info_set(path, fresh);

    cfg.info_set_file = path;
    auto loaded = resolve_code(cfg);
    CHECK(loaded.n == fresh.n);
    CHECK(loaded.info_set == fresh.info_set);

    cfg.n = 4;
    cfg.k = 4;
    CHECK_THROWS_AS((void)resolve_code(cfg), ConfigError);
    cfg.n = 3;
    cfg.k = 5;
    CHECK_THROWS_AS((void)resolve_code(cfg), ConfigError);
    std::remove(path.c_str());
}

TEST_CASE("run_fer and run_bound reject a mismatched code") {
    auto cfg = base_cfg(4, 8);
    cfg.snr_start_db = 0.0;
    cfg.snr_stop_db = 0.0;
    PolarCode wrong;
    wrong.n = 3;
    wrong.info_set = {0, 1, 2, 3, 4, 5, 6, 7};
    CHECK_THROWS_AS((void)run_fer(cfg, wrong), ConfigError);
    CHECK_THROWS_AS((void)run_bound(cfg, wrong), ConfigError);
}

TEST_CASE("single-carrier bounds decrease with snr and dominate sensibly") {
    auto cfg = base_cfg(5, 16);
    cfg.construction = "de";
    cfg.grid_half = 480;
    cfg.histogram_samples = 100000;
    cfg.snr_start_db = -4.0;
    cfg.snr_stop_db = 0.0;
    cfg.snr_step_db = 2.0;

    auto code = resolve_code(cfg);
    auto records = run_bound(cfg, code);
    REQUIRE(records.size() == 3);
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(records[i].blep_product > 0.0);
        CHECK(records[i].blep_product <= records[i].blep_sum);
        CHECK(records[i].init_saturated >= 0.0);
        CHECK(records[i].init_saturated < 0.5);
        CHECK(std::isfinite(records[i].init_symmetry));
        if (i > 0) CHECK(records[i].blep_product < records[i - 1].blep_product);
    }
}

TEST_CASE("ofdm analytic bounds come from the effective gaussian channel") {
    auto cfg = base_cfg(5, 16);
    cfg.construction = "de";
    cfg.scheme = "ofdm";
    cfg.llr_calibration = "analytic";
    cfg.grid_half = 480;
    cfg.snr_start_db = -2.0;
    cfg.snr_stop_db = 0.0;
    cfg.snr_step_db = 2.0;

    auto code = resolve_code(cfg);
    auto records = run_bound(cfg, code);
    REQUIRE(records.size() == 2);
    CHECK(records[0].blep_product > records[1].blep_product);
    CHECK(records[0].blep_product <= records[0].blep_sum);
    // A quantized gaussian start should respect the llr symmetry tightly.
    CHECK(records[0].init_symmetry < 1e-6);
}

TEST_CASE("result tables carry the config hash and exact columns") {
    FerRecord r;
    r.snr_db = -2.0;
    r.blocks = 512;
    r.block_errors = 100;
    r.bit_errors = 1234;
    r.fer = 100.0 / 512.0;
    r.ber = 0.015;
    r.ci95 = 0.03;
    auto t = fer_table({r}, "deadbeef00000000");
    REQUIRE(t.comments.size() == 1);
    CHECK(t.comments[0] == "# config-hash: deadbeef00000000");
    REQUIRE(t.header.size() == 7);
    CHECK(t.header[0] == "snr_db");
    CHECK(t.header[4] == "fer");
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0][0] == "-2");
    CHECK(t.rows[0][1] == "512");
    CHECK(t.rows[0][2] == "100");
    CHECK(t.rows[0][3] == "1234");
    CHECK(t.rows[0][4] == format_double(100.0 / 512.0));

    BoundRecord b;
    b.snr_db = -2.0;
    b.blep_product = 0.25;
    b.blep_sum = 0.5;
    b.init_saturated = 0.0;
    b.init_symmetry = 1e-8;
    auto bt = bound_table({b}, "deadbeef00000000");
    REQUIRE(bt.header.size() == 5);
    CHECK(bt.header[1] == "blep_product");
    CHECK(bt.rows[0][1] == "0.25");
    CHECK(bt.rows[0][2] == "0.5");
}
