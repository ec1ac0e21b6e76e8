#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polarsim/class_a.hpp"
#include "polarsim/density.hpp"
#include "polarsim/polar.hpp"

namespace polarsim {

enum class ConstructMethod { heuristic, density_evolution };

// Outcome of picking an information set. per_channel holds one reliability
// figure per synthetic bit channel, indexed the same way the decoder indexes
// decisions: erasure-style Z upper bounds for the heuristic, leaf error
// probabilities for density evolution. The two block-error figures are union
// bounds over the chosen set, see blep_over_info_set.
struct ConstructionResult {
    ConstructMethod method = ConstructMethod::heuristic;
    std::vector<double> per_channel;
    std::vector<std::uint32_t> info_set;
    double blep_product = 0.0;
    double blep_sum = 0.0;
};

// Bhattacharyya parameter of the binary-input channel y = x + z with
// x = +-1 equiprobable and z Class A: the integral of
// sqrt(p(y - 1) * p(y + 1)) over the real line, evaluated by Simpson
// quadrature with interval doubling until successive estimates agree to
// 1e-10. Throws NumericalError if that never happens.
double bhattacharyya_initial(const ClassA& channel);

// Erasure-style reliability recursion from a single channel parameter z0:
// each level maps z to 2z - z^2 on the check branch and z^2 on the variable
// branch. Returns the 2^n leaves ordered to match the decoder's bit-channel
// indexing (even offspring from the check branch, odd from the variable).
std::vector<double> heuristic_z_leaves(double z0, int n);

ConstructionResult heuristic_construct(int n, int K, double z0);

// Histogram estimate of the density of llr(1 + z), the channel LLR
// conditioned on sending +1, from `samples` draws of z. Work is split into
// fixed-size chunks with one counter-based stream per chunk, so the result
// is identical for any worker count. Saturated samples land in the end bins
// and their fraction is reported in `saturated`.
QuantizedDensity class_a_llr_density(const ClassA& channel, const LlrGrid& grid,
                                     std::uint64_t samples, std::uint64_t seed,
                                     int workers = 1);

// One polarization level: out[2*i] is the check transform of in[i] with
// itself, out[2*i + 1] the variable transform. `out` is resized to twice the
// input. Sibling pairs are independent, so they are distributed over
// `workers` threads; the result does not depend on the split.
void de_level(const DensityOps& ops, const std::vector<QuantizedDensity>& in,
              std::vector<QuantizedDensity>& out, int workers = 1);

// n levels of de_level starting from one channel density; returns all 2^n
// leaf densities in decoder order.
std::vector<QuantizedDensity> de_evolve(const DensityOps& ops,
                                        const QuantizedDensity& initial, int n,
                                        int workers = 1);

// Same evolution, reduced to the per-leaf error probabilities.
std::vector<double> de_leaf_error_probs(const DensityOps& ops,
                                        const QuantizedDensity& initial, int n,
                                        int workers = 1);

ConstructionResult de_construct(const DensityOps& ops, const QuantizedDensity& initial,
                                int n, int K, int workers = 1);

// Union bounds on block error over a fixed information set, given per-leaf
// error probabilities: product form 1 - prod(1 - p_i) and the plain sum
// clipped at 1.
void blep_over_info_set(const std::vector<double>& pe,
                        const std::vector<std::uint32_t>& info_set,
                        double& product_bound, double& sum_bound);

// Sidecar CSV: index, reliability, rank (0 = most reliable), member
// (1 if the index is in the information set).
void write_reliability_csv(const std::string& path, const ConstructionResult& r);

PolarCode make_code(int n, const ConstructionResult& r);

}  // namespace polarsim
