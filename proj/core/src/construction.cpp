#include "polarsim/construction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <thread>

#include "polarsim/errors.hpp"

namespace polarsim {

namespace {

constexpr std::uint64_t kDensityStreamTag = 0x64656e73ull;  // chunk streams
constexpr std::size_t kDensityChunk = 1u << 16;

int clamp_workers(int workers) {
    if (workers < 1) return 1;
    if (workers > 256) return 256;
    return workers;
}

// K indices with the smallest reliability figure, ties resolved toward the
// lower index, returned sorted ascending.
std::vector<std::uint32_t> select_info(const std::vector<double>& per_channel, int K) {
    const auto n = per_channel.size();
    if (K < 1 || static_cast<std::size_t>(K) > n) {
        throw InvalidParams("information set size must be in [1, N]");
    }
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (per_channel[a] != per_channel[b]) return per_channel[a] < per_channel[b];
        return a < b;
    });
    order.resize(static_cast<std::size_t>(K));
    std::sort(order.begin(), order.end());
    return order;
}

void finish_result(ConstructionResult& r, int K) {
    r.info_set = select_info(r.per_channel, K);
    blep_over_info_set(r.per_channel, r.info_set, r.blep_product, r.blep_sum);
}

// Composite Simpson rule over [lo, hi] with m intervals (m even).
template <class F>
double simpson(const F& f, double lo, double hi, std::size_t m) {
    double h = (hi - lo) / static_cast<double>(m);
    double s = f(lo) + f(hi);
    double four = 0.0, two = 0.0;
    for (std::size_t i = 1; i < m; i += 2) four += f(lo + h * static_cast<double>(i));
    for (std::size_t i = 2; i < m; i += 2) two += f(lo + h * static_cast<double>(i));
    return (s + 4.0 * four + 2.0 * two) * h / 3.0;
}

}  // namespace

double bhattacharyya_initial(const ClassA& channel) {
    double sigma_max = std::sqrt(channel.terms().back().sigma2);
    double span = 1.0 + 12.0 * sigma_max;
    auto integrand = [&](double y) {
        return std::exp(0.5 * (channel.log_pdf_real(y - 1.0) + channel.log_pdf_real(y + 1.0)));
    };
    double prev = simpson(integrand, -span, span, 1u << 12);
    for (std::size_t m = 1u << 13; m <= (1u << 22); m <<= 1) {
        double cur = simpson(integrand, -span, span, m);
        if (std::fabs(cur - prev) < 1e-10) return cur;
        prev = cur;
    }
    throw NumericalError("bhattacharyya_initial: quadrature did not converge");
}

std::vector<double> heuristic_z_leaves(double z0, int n) {
    if (!(z0 >= 0.0 && z0 <= 1.0)) {
        throw InvalidParams("heuristic_z_leaves: z0 must lie in [0, 1]");
    }
    if (n < 1 || n > 22) {
        throw InvalidParams("heuristic_z_leaves: n must be in [1, 22]");
    }
    std::vector<double> z{z0}, next;
    for (int level = 0; level < n; ++level) {
        next.resize(z.size() * 2);
        for (std::size_t i = 0; i < z.size(); ++i) {
            next[2 * i] = 2.0 * z[i] - z[i] * z[i];
            next[2 * i + 1] = z[i] * z[i];
        }
        z.swap(next);
    }
    return z;
}

ConstructionResult heuristic_construct(int n, int K, double z0) {
    ConstructionResult r;
    r.method = ConstructMethod::heuristic;
    r.per_channel = heuristic_z_leaves(z0, n);
    finish_result(r, K);
    return r;
}

QuantizedDensity class_a_llr_density(const ClassA& channel, const LlrGrid& grid,
                                     std::uint64_t samples, std::uint64_t seed,
                                     int workers) {
    if (samples == 0) throw InvalidParams("class_a_llr_density: need at least one sample");
    workers = clamp_workers(workers);
    const std::uint64_t nchunks = (samples + kDensityChunk - 1) / kDensityChunk;
    const int bins = grid.bins();

    std::vector<std::uint64_t> counts(static_cast<std::size_t>(bins), 0);
    std::uint64_t clamped = 0;

    auto run_chunks = [&](std::uint64_t first, std::uint64_t last,
                          std::vector<std::uint64_t>& local_counts,
                          std::uint64_t& local_clamped) {
        std::vector<double> z;
        for (std::uint64_t c = first; c < last; ++c) {
            std::uint64_t begin = c * kDensityChunk;
            std::size_t count = static_cast<std::size_t>(
                std::min<std::uint64_t>(kDensityChunk, samples - begin));
            SplitMix64 rng = make_stream(seed, kDensityStreamTag, c);
            channel.sample_real(count, rng, z);
            for (std::size_t i = 0; i < count; ++i) {
                double llr = channel.llr(1.0 + z[i]);
                long long k = std::llround(llr / grid.step);
                if (k < -grid.half || k > grid.half) {
                    ++local_clamped;
                    k = std::clamp<long long>(k, -grid.half, grid.half);
                }
                ++local_counts[static_cast<std::size_t>(k + grid.half)];
            }
        }
    };

    if (workers == 1 || nchunks == 1) {
        run_chunks(0, nchunks, counts, clamped);
    } else {
        int used = static_cast<int>(std::min<std::uint64_t>(workers, nchunks));
        std::vector<std::vector<std::uint64_t>> parts(
            used, std::vector<std::uint64_t>(static_cast<std::size_t>(bins), 0));
        std::vector<std::uint64_t> part_clamped(used, 0);
        std::vector<std::thread> pool;
        pool.reserve(used);
        for (int w = 0; w < used; ++w) {
            std::uint64_t first = nchunks * w / used;
            std::uint64_t last = nchunks * (w + 1) / used;
            pool.emplace_back([&, w, first, last] {
                run_chunks(first, last, parts[w], part_clamped[w]);
            });
        }
        for (auto& t : pool) t.join();
        for (int w = 0; w < used; ++w) {
            clamped += part_clamped[w];
            for (int i = 0; i < bins; ++i) counts[i] += parts[w][i];
        }
    }

    QuantizedDensity d(grid);
    double inv = 1.0 / static_cast<double>(samples);
    for (int i = 0; i < bins; ++i) {
        d.mass[i] = static_cast<double>(counts[i]) * inv;
    }
    d.saturated = static_cast<double>(clamped) * inv;
    return d;
}

void de_level(const DensityOps& ops, const std::vector<QuantizedDensity>& in,
              std::vector<QuantizedDensity>& out, int workers) {
    if (in.empty()) throw InvalidParams("de_level: empty input");
    out.resize(in.size() * 2);
    workers = clamp_workers(workers);
    int used = static_cast<int>(std::min<std::size_t>(workers, in.size()));

    auto run = [&](std::size_t first, std::size_t last) {
        for (std::size_t i = first; i < last; ++i) {
            ops.check_convolve(in[i], in[i], out[2 * i]);
            ops.var_convolve(in[i], in[i], out[2 * i + 1]);
        }
    };

    if (used == 1) {
        run(0, in.size());
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(used);
    for (int w = 0; w < used; ++w) {
        std::size_t first = in.size() * w / used;
        std::size_t last = in.size() * (w + 1) / used;
        pool.emplace_back([&run, first, last] { run(first, last); });
    }
    for (auto& t : pool) t.join();
}

std::vector<QuantizedDensity> de_evolve(const DensityOps& ops,
                                        const QuantizedDensity& initial, int n,
                                        int workers) {
    if (n < 1 || n > 22) throw InvalidParams("de_evolve: n must be in [1, 22]");
    if (initial.grid != ops.grid()) {
        throw DimensionError("de_evolve: initial density grid does not match DensityOps grid");
    }
    if (std::fabs(initial.total() - 1.0) > 1e-3) {
        throw InvalidParams("de_evolve: initial density is not normalized");
    }
    std::vector<QuantizedDensity> cur{initial}, next;
    for (int level = 0; level < n; ++level) {
        de_level(ops, cur, next, workers);
        cur.swap(next);
    }
    return cur;
}

std::vector<double> de_leaf_error_probs(const DensityOps& ops,
                                        const QuantizedDensity& initial, int n,
                                        int workers) {
    auto leaves = de_evolve(ops, initial, n, workers);
    std::vector<double> pe(leaves.size());
    for (std::size_t i = 0; i < leaves.size(); ++i) pe[i] = leaves[i].error_probability();
    return pe;
}

ConstructionResult de_construct(const DensityOps& ops, const QuantizedDensity& initial,
                                int n, int K, int workers) {
    ConstructionResult r;
    r.method = ConstructMethod::density_evolution;
    r.per_channel = de_leaf_error_probs(ops, initial, n, workers);
    finish_result(r, K);
    return r;
}

void blep_over_info_set(const std::vector<double>& pe,
                        const std::vector<std::uint32_t>& info_set,
                        double& product_bound, double& sum_bound) {
    if (info_set.empty()) throw InvalidParams("blep_over_info_set: empty information set");
    double log_ok = 0.0;
    double sum = 0.0;
    bool certain = false;
    for (std::uint32_t idx : info_set) {
        if (idx >= pe.size()) throw DimensionError("blep_over_info_set: index out of range");
        double p = pe[idx];
        if (!(p >= 0.0 && p <= 1.0)) {
            throw InvalidParams("blep_over_info_set: probabilities must lie in [0, 1]");
        }
        sum += p;
        if (p >= 1.0) {
            certain = true;
        } else {
            log_ok += std::log1p(-p);
        }
    }
    product_bound = certain ? 1.0 : -std::expm1(log_ok);
    sum_bound = std::min(1.0, sum);
}

void write_reliability_csv(const std::string& path, const ConstructionResult& r) {
    const auto n = r.per_channel.size();
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (r.per_channel[a] != r.per_channel[b]) return r.per_channel[a] < r.per_channel[b];
        return a < b;
    });
    std::vector<std::uint32_t> rank(n);
    for (std::uint32_t i = 0; i < n; ++i) rank[order[i]] = i;
    std::vector<char> member(n, 0);
    for (std::uint32_t idx : r.info_set) {
        if (idx >= n) throw DimensionError("write_reliability_csv: info index out of range");
        member[idx] = 1;
    }

    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw IoError("cannot open reliability csv for writing: " + path);
    std::fprintf(f, "index,reliability,rank,member\n");
    for (std::size_t i = 0; i < n; ++i) {
        std::fprintf(f, "%zu,%.17g,%u,%d\n", i, r.per_channel[i], rank[i],
                     static_cast<int>(member[i]));
    }
    if (std::fclose(f) != 0) throw IoError("failed to finish writing reliability csv: " + path);
}

PolarCode make_code(int n, const ConstructionResult& r) {
    if (n < 1 || n > 22 || r.per_channel.size() != (std::size_t{1} << n)) {
        throw DimensionError("make_code: construction size does not match 2^n");
    }
    return PolarCode(n, r.info_set);
}

}  // namespace polarsim
