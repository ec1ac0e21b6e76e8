#include "polarsim/construction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracle_helpers.hpp"
#include "polarsim/errors.hpp"

using namespace polarsim;

namespace {

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

long double q_func(long double x) { return 0.5L * std::erfc(x / std::sqrt(2.0L)); }

}  // namespace

TEST_CASE("bhattacharyya parameter: gaussian closed form exp(-1/(2 sigma^2))") {
    for (double s2 : {0.5, 0.25, 1.0 / (2.0 * std::log(2.0))}) {
        ClassA ch(ClassAParams{0.5, 1.0, s2, 1});
        double z = bhattacharyya_initial(ch);
        CHECK(z == doctest::Approx(std::exp(-1.0 / (2.0 * s2))).epsilon(1e-6));
    }
    // The midpoint design value: z0 = 1/2 at sigma^2 = 1/(2 ln 2).
    ClassA mid(ClassAParams{0.5, 1.0, 1.0 / (2.0 * std::log(2.0)), 1});
    CHECK(bhattacharyya_initial(mid) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("bhattacharyya parameter: frozen mixture references") {
    ClassA a(ClassAParams{0.1, 0.1, 0.1, 20});
    CHECK(std::fabs(bhattacharyya_initial(a) - 0.285437617789608) < 1e-8);
    ClassA b(ClassAParams{0.3, 0.25, 0.04, 25});
    CHECK(std::fabs(bhattacharyya_initial(b) - 0.210881656578789) < 1e-8);
}

TEST_CASE("erasure-style recursion: frozen leaves and fixpoints") {
    auto z4 = heuristic_z_leaves(0.5, 2);
    REQUIRE(z4.size() == 4);
    CHECK(z4[0] == 0.9375);
    CHECK(z4[1] == 0.5625);
    CHECK(z4[2] == 0.4375);
    CHECK(z4[3] == 0.0625);

    for (double z : heuristic_z_leaves(0.0, 4)) CHECK(z == 0.0);
    for (double z : heuristic_z_leaves(1.0, 4)) CHECK(z == 1.0);

    auto z32 = heuristic_z_leaves(0.7, 5);
    for (double z : z32) {
        CHECK(z >= 0.0);
        CHECK(z <= 1.0);
    }
    CHECK(z32.back() == doctest::Approx(std::pow(0.7, 32.0)).epsilon(1e-12));

    CHECK_THROWS_AS((void)heuristic_z_leaves(-0.1, 3), InvalidParams);
    CHECK_THROWS_AS((void)heuristic_z_leaves(1.1, 3), InvalidParams);
    CHECK_THROWS_AS((void)heuristic_z_leaves(0.5, 0), InvalidParams);
    CHECK_THROWS_AS((void)heuristic_z_leaves(0.5, 23), InvalidParams);
}

TEST_CASE("heuristic construction picks the smallest leaves") {
    auto r = heuristic_construct(3, 4, 0.5);
    CHECK(r.method == ConstructMethod::heuristic);
    REQUIRE(r.per_channel.size() == 8);
    CHECK(r.info_set == std::vector<std::uint32_t>{3, 5, 6, 7});

    // Degenerate channel: every leaf ties at zero, lower indices win.
    auto tied = heuristic_construct(2, 2, 0.0);
    CHECK(tied.info_set == std::vector<std::uint32_t>{0, 1});

    CHECK_THROWS_AS((void)heuristic_construct(2, 0, 0.5), InvalidParams);
    CHECK_THROWS_AS((void)heuristic_construct(2, 5, 0.5), InvalidParams);
}

TEST_CASE("block error bounds over an information set") {
    std::vector<double> pe{0.01, 0.02};
    double prod = 0.0, sum = 0.0;
    blep_over_info_set(pe, {0, 1}, prod, sum);
    CHECK(prod == doctest::Approx(1.0 - 0.99 * 0.98).epsilon(1e-12));
    CHECK(sum == doctest::Approx(0.03).epsilon(1e-12));

    std::vector<double> hot{1.0, 0.5};
    blep_over_info_set(hot, {0, 1}, prod, sum);
    CHECK(prod == 1.0);
    CHECK(sum == 1.0);

    std::vector<double> heavy{0.8, 0.9};
    blep_over_info_set(heavy, {0, 1}, prod, sum);
    CHECK(prod == doctest::Approx(0.98).epsilon(1e-12));
    CHECK(sum == 1.0);

    CHECK_THROWS_AS(blep_over_info_set(pe, {}, prod, sum), InvalidParams);
    CHECK_THROWS_AS(blep_over_info_set(pe, {2}, prod, sum), DimensionError);
    std::vector<double> bad{1.5};
    CHECK_THROWS_AS(blep_over_info_set(bad, {0}, prod, sum), InvalidParams);
}

TEST_CASE("llr histogram: deterministic and independent of worker count") {
    ClassA ch(ClassAParams{0.1, 0.1, 0.1, 20});
    LlrGrid g;
    const std::uint64_t samples = 1u << 18;
    auto d1 = class_a_llr_density(ch, g, samples, 42, 1);
    auto d3 = class_a_llr_density(ch, g, samples, 42, 3);
    CHECK(bitwise_equal(d1.mass, d3.mass));
    CHECK(d1.saturated == d3.saturated);
    // Integer counts over a power-of-two sample count make the total exact.
    CHECK(d1.total() == 1.0);
    CHECK(d1.saturated == 0.0);

    auto other_seed = class_a_llr_density(ch, g, samples, 43, 1);
    CHECK_FALSE(bitwise_equal(d1.mass, other_seed.mass));

    CHECK_THROWS_AS((void)class_a_llr_density(ch, g, 0, 1, 1), InvalidParams);
}

TEST_CASE("llr histogram reproduces the gaussian closed form when M = 1") {
    double v = 0.8;
    ClassA ch(ClassAParams{0.5, 1.0, v, 1});
    LlrGrid g;
    const std::uint64_t samples = 10'000'000;
    auto hist = class_a_llr_density(ch, g, samples, 7, 1);
    auto exact = gaussian_llr_density(v, g);

    CHECK(std::fabs(hist.mean() - 2.0 / v) < 0.01 * (2.0 / v));

    double sup = 0.0;
    for (int i = 0; i < g.bins(); ++i) {
        sup = std::max(sup, std::fabs(hist.mass[i] - exact.mass[i]));
    }
    CHECK(sup < 5e-4);

    long double pe_exact = q_func(1.0L / std::sqrt((long double)v));
    CHECK(std::fabs(hist.error_probability() - (double)pe_exact) < 1e-3);
}

TEST_CASE("multi-level evolution: worker split does not change a single bit") {
    LlrGrid g{0.5, 8};
    DensityOps ops(g);
    QuantizedDensity init(g);
    init.mass[g.half - 4] = 0.0625;
    init.mass[g.half - 1] = 0.125;
    init.mass[g.half] = 0.0625;
    init.mass[g.half + 2] = 0.5;
    init.mass[g.half + 3] = 0.125;
    init.mass[g.half + 6] = 0.125;

    auto solo = de_evolve(ops, init, 3, 1);
    auto split = de_evolve(ops, init, 3, 3);
    REQUIRE(solo.size() == 8);
    REQUIRE(split.size() == 8);
    for (std::size_t i = 0; i < solo.size(); ++i) {
        CAPTURE(i);
        CHECK(bitwise_equal(solo[i].mass, split[i].mass));
    }

    auto pe = de_leaf_error_probs(ops, init, 3, 2);
    REQUIRE(pe.size() == 8);
    for (std::size_t i = 0; i < pe.size(); ++i) {
        CHECK(pe[i] == solo[i].error_probability());
    }
}

TEST_CASE("evolution input validation") {
    LlrGrid g{0.5, 8};
    DensityOps ops(g);
    QuantizedDensity ok(g);
    ok.mass[g.half] = 1.0;
    CHECK_THROWS_AS((void)de_evolve(ops, ok, 0, 1), InvalidParams);
    CHECK_THROWS_AS((void)de_evolve(ops, ok, 23, 1), InvalidParams);

    QuantizedDensity unnormalized(g);
    unnormalized.mass[g.half] = 0.5;
    CHECK_THROWS_AS((void)de_evolve(ops, unnormalized, 2, 1), InvalidParams);

    QuantizedDensity wrong(LlrGrid{0.25, 8});
    wrong.mass[8] = 1.0;
    CHECK_THROWS_AS((void)de_evolve(ops, wrong, 2, 1), DimensionError);
}

TEST_CASE("density evolution and the erasure heuristic agree on most of the set") {
    double v = 0.9;
    LlrGrid g;
    DensityOps ops(g);
    auto init = gaussian_llr_density(v, g);
    int n = 6, K = 32;
    auto de = de_construct(ops, init, n, K, 1);
    CHECK(de.method == ConstructMethod::density_evolution);

    double z0 = std::exp(-1.0 / (2.0 * v));
    auto hz = heuristic_construct(n, K, z0);

    std::vector<std::uint32_t> common;
    std::set_intersection(de.info_set.begin(), de.info_set.end(), hz.info_set.begin(),
                          hz.info_set.end(), std::back_inserter(common));
    CAPTURE(common.size());
    CHECK(common.size() >= 29);  // at least 90 percent of K = 32
}

TEST_CASE("de_construct output is internally consistent") {
    LlrGrid g;
    DensityOps ops(g);
    auto init = gaussian_llr_density(1.2, g);
    int n = 4, K = 8;
    auto r = de_construct(ops, init, n, K, 1);

    auto pe = de_leaf_error_probs(ops, init, n, 1);
    CHECK(bitwise_equal(r.per_channel, pe));

    // Selection: the K smallest with ties to the lower index.
    std::vector<std::uint32_t> order(pe.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
        if (pe[x] != pe[y]) return pe[x] < pe[y];
        return x < y;
    });
    order.resize(K);
    std::sort(order.begin(), order.end());
    CHECK(r.info_set == order);

    double prod = 0.0, sum = 0.0;
    blep_over_info_set(r.per_channel, r.info_set, prod, sum);
    CHECK(r.blep_product == prod);
    CHECK(r.blep_sum == sum);
    CHECK(r.blep_product <= r.blep_sum);
}

TEST_CASE("leaf error probabilities are stable under grid refinement") {
    double v = 1.0;
    LlrGrid coarse;                 // 1/16 step
    LlrGrid fine{1.0 / 32.0, 1920};  // half step, same +-60 range
    DensityOps oc(coarse), of(fine);
    auto pc = de_leaf_error_probs(oc, gaussian_llr_density(v, coarse), 2, 1);
    auto pf = de_leaf_error_probs(of, gaussian_llr_density(v, fine), 2, 1);
    REQUIRE(pc.size() == 4);
    REQUIRE(pf.size() == 4);
    for (int i = 0; i < 4; ++i) {
        CAPTURE(i);
        CAPTURE(pc[i]);
        CAPTURE(pf[i]);
        CHECK(std::fabs(pc[i] - pf[i]) < 0.05 * std::max(pc[i], pf[i]));
    }
}

TEST_CASE("reliability csv: exact golden content") {
    auto r = heuristic_construct(2, 2, 0.5);
    std::string path = "reliability_test.csv";
    write_reliability_csv(path, r);

    std::ifstream in(path);
    REQUIRE(in.good());
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    std::remove(path.c_str());

    CHECK(all ==
          "index,reliability,rank,member\n"
          "0,0.9375,3,0\n"
          "1,0.5625,2,0\n"
          "2,0.4375,1,1\n"
          "3,0.0625,0,1\n");
}

TEST_CASE("make_code wires the selected set into a usable code") {
    auto r = heuristic_construct(2, 2, 0.5);
    auto code = make_code(2, r);
    CHECK(code.n == 2);
    CHECK(code.info_set == r.info_set);
    CHECK_THROWS_AS((void)make_code(3, r), DimensionError);
}
