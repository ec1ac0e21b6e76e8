#include "polarsim/density.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "polarsim/errors.hpp"
#include "polarsim/polar.hpp"

namespace polarsim {

int LlrGrid::index_of(double llr) const {
    if (!std::isfinite(llr)) {
        throw NumericalError("cannot place non-finite llr on density grid");
    }
    double k = llr / step;
    long long rounded = std::llround(k);
    if (rounded < -half) rounded = -half;
    if (rounded > half) rounded = half;
    return static_cast<int>(rounded) + half;
}

double QuantizedDensity::total() const {
    return std::accumulate(mass.begin(), mass.end(), 0.0);
}

double QuantizedDensity::mean() const {
    double s = 0.0;
    for (int i = 0; i < static_cast<int>(mass.size()); ++i) {
        s += mass[i] * grid.center(i);
    }
    return s;
}

double QuantizedDensity::error_probability() const {
    double below = 0.0;
    for (int i = 0; i < grid.half; ++i) below += mass[i];
    return below + 0.5 * mass[grid.half];
}

double QuantizedDensity::symmetry_deviation() const {
    double worst = 0.0;
    for (int k = 1; k <= grid.half; ++k) {
        double l = k * grid.step;
        double dev = std::fabs(mass[grid.half - k] - std::exp(-l) * mass[grid.half + k]);
        if (dev > worst) worst = dev;
    }
    return worst;
}

QuantizedDensity gaussian_llr_density(double noise_variance, const LlrGrid& grid) {
    if (!(noise_variance > 0.0) || !std::isfinite(noise_variance)) {
        throw InvalidParams("gaussian_llr_density: noise variance must be positive");
    }
    double mu = 2.0 / noise_variance;
    double sd = 2.0 / std::sqrt(noise_variance);
    // Standard normal CDF at (x - mu) / sd, in a form that keeps relative
    // accuracy deep in the lower tail.
    auto cdf = [&](double x) { return 0.5 * std::erfc((mu - x) / (sd * std::sqrt(2.0))); };

    QuantizedDensity d(grid);
    double h = 0.5 * grid.step;
    double lo_edge = grid.center(0) - h;
    double hi_edge = grid.center(grid.bins() - 1) + h;
    double prev = cdf(lo_edge);
    d.saturated = prev;  // lower tail, folded into the first bin below
    double run = prev;
    for (int i = 0; i < grid.bins() - 1; ++i) {
        double cur = cdf(grid.center(i) + h);
        d.mass[i] = cur - prev;
        run += d.mass[i];
        prev = cur;
    }
    d.mass[0] += d.saturated;
    // Everything above the last interior edge, upper tail included.
    d.mass[grid.bins() - 1] = 1.0 - run;
    d.saturated += 1.0 - cdf(hi_edge);
    return d;
}

DensityOps::DensityOps(const LlrGrid& grid) : grid_(grid) {
    if (grid.half < 1 || grid.half > (1 << 20) || !(grid.step > 0.0)) {
        throw InvalidParams("DensityOps: grid must have positive step and 1 <= half <= 2^20");
    }
    int b = grid.bins();
    check_bin_.resize(static_cast<std::size_t>(b) * b);
    for (int i = 0; i < b; ++i) {
        double a = grid.center(i);
        std::int32_t* row = check_bin_.data() + static_cast<std::size_t>(i) * b;
        for (int j = 0; j < b; ++j) {
            row[j] = grid.index_of(f_combine(a, grid.center(j)));
        }
    }
}

void DensityOps::require_grid(const QuantizedDensity& a, const QuantizedDensity& b,
                              const char* op) const {
    if (a.grid != grid_ || b.grid != grid_ ||
        a.mass.size() != static_cast<std::size_t>(grid_.bins()) ||
        b.mass.size() != static_cast<std::size_t>(grid_.bins())) {
        throw DimensionError(std::string(op) + ": operand grid does not match DensityOps grid");
    }
}

void DensityOps::check_convolve(const QuantizedDensity& a, const QuantizedDensity& b,
                                QuantizedDensity& out) const {
    require_grid(a, b, "check_convolve");
    if (&out == &a || &out == &b) {
        throw InvalidParams("check_convolve: output must not alias an operand");
    }
    int bins = grid_.bins();
    out.grid = grid_;
    out.mass.assign(bins, 0.0);
    out.saturated = 0.0;
    for (int i = 0; i < bins; ++i) {
        double ai = a.mass[i];
        if (ai == 0.0) continue;
        const std::int32_t* row = check_bin_.data() + static_cast<std::size_t>(i) * bins;
        for (int j = 0; j < bins; ++j) {
            double bj = b.mass[j];
            if (bj == 0.0) continue;
            out.mass[row[j]] += ai * bj;
        }
    }
}

void DensityOps::var_convolve(const QuantizedDensity& a, const QuantizedDensity& b,
                              QuantizedDensity& out) const {
    require_grid(a, b, "var_convolve");
    if (&out == &a || &out == &b) {
        throw InvalidParams("var_convolve: output must not alias an operand");
    }
    int bins = grid_.bins();
    int half = grid_.half;
    out.grid = grid_;
    out.mass.assign(bins, 0.0);
    out.saturated = 0.0;
    for (int i = 0; i < bins; ++i) {
        double ai = a.mass[i];
        if (ai == 0.0) continue;
        for (int j = 0; j < bins; ++j) {
            double bj = b.mass[j];
            if (bj == 0.0) continue;
            int k = i + j - half;
            if (k < 0) {
                out.saturated += ai * bj;
                k = 0;
            } else if (k >= bins) {
                out.saturated += ai * bj;
                k = bins - 1;
            }
            out.mass[k] += ai * bj;
        }
    }
}

void write_density_csv(const std::string& path, const QuantizedDensity& d) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw IoError("cannot open density csv for writing: " + path);
    std::fprintf(f, "bin,llr,mass\n");
    for (int i = 0; i < d.grid.bins(); ++i) {
        std::fprintf(f, "%d,%.17g,%.17g\n", i - d.grid.half, d.grid.center(i), d.mass[i]);
    }
    if (std::fclose(f) != 0) throw IoError("failed to finish writing density csv: " + path);
}

}  // namespace polarsim
