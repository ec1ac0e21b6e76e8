#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace polarsim {

// Uniform symmetric grid over log-likelihood ratios. Bin k (stored at index
// k + half) is centered at k*step for k in [-half, half]. Values between bin
// centers round to the nearest center, ties away from zero; values beyond the
// outermost centers clamp to the end bins.
struct LlrGrid {
    double step = 1.0 / 16.0;
    int half = 960;

    int bins() const { return 2 * half + 1; }
    double center(int idx) const { return (idx - half) * step; }
    int index_of(double llr) const;

    bool operator==(const LlrGrid&) const = default;
};

// Probability masses on an LlrGrid. `saturated` accumulates the mass (or
// sample fraction) that had to be clamped into the end bins; it is a
// diagnostic only and is already included in `mass`.
struct QuantizedDensity {
    LlrGrid grid;
    std::vector<double> mass;
    double saturated = 0.0;

    QuantizedDensity() = default;
    explicit QuantizedDensity(const LlrGrid& g) : grid(g), mass(g.bins(), 0.0) {}

    double total() const;
    double mean() const;

    // Probability that a hard decision on a sample from this density is
    // wrong given that the all-plus hypothesis is true: mass strictly below
    // zero plus half of the bin exactly at zero.
    double error_probability() const;

    // Largest absolute violation of the symmetry a(-l) = exp(-l) * a(l)
    // across bin pairs. Small for densities of symmetric binary-input
    // channels; grows when quantization or estimation error creeps in.
    double symmetry_deviation() const;
};

// Exact-bin-integral discretization of the LLR density of unit-energy BPSK
// over real AWGN with noise variance v: a Gaussian with mean 2/v and
// variance 4/v. The end bins absorb the tails beyond the grid, and that
// tail mass is also reported in `saturated`.
QuantizedDensity gaussian_llr_density(double noise_variance, const LlrGrid& grid);

// Density transforms for one polarization step. The check transform pushes
// every pair of bin centers through the exact check-node combine and rounds
// the result to the nearest bin; the variable transform adds bin indices and
// clamps at the grid ends. Both conserve mass up to rounding and are
// deterministic: the accumulation order is fixed (outer operand ascending,
// inner operand ascending, zero-mass bins skipped).
//
// Construction precomputes the bins^2 check-combine table (int32 entries),
// so build one instance per grid and reuse it across a whole evolution.
class DensityOps {
public:
    explicit DensityOps(const LlrGrid& grid);

    const LlrGrid& grid() const { return grid_; }

    void check_convolve(const QuantizedDensity& a, const QuantizedDensity& b,
                        QuantizedDensity& out) const;
    void var_convolve(const QuantizedDensity& a, const QuantizedDensity& b,
                      QuantizedDensity& out) const;

private:
    LlrGrid grid_;
    std::vector<std::int32_t> check_bin_;

    void require_grid(const QuantizedDensity& a, const QuantizedDensity& b,
                      const char* op) const;
};

// Three-column dump (bin index, llr, mass) for plotting and debugging.
void write_density_csv(const std::string& path, const QuantizedDensity& d);

}  // namespace polarsim
