#pragma once
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace polarsim {

// Exact check-node combine 2 atanh(tanh(a/2) tanh(b/2)), evaluated in the
// stable min-plus-correction form: equals log((1+e^{a+b})/(e^a+e^b)) to full
// precision without overflow. The density evolution analysis assumes this
// exact rule, so the decoder must not substitute min-sum.
double f_combine(double a, double b);

// Variable-node combine for a known upper bit u.
inline double g_combine(double a, double b, unsigned u) { return b + (u ? -a : a); }

// Magnitude cap applied to channel LLRs before decoding. Densities saturate
// at the same range so analysis and decoder share one contract.
constexpr double kLlrCap = 60.0;

inline std::uint32_t bit_reverse(std::uint32_t x, int nbits) {
    std::uint32_t r = 0;
    for (int i = 0; i < nbits; ++i)
        if (x & (1u << i)) r |= 1u << (nbits - 1 - i);
    return r;
}

// Block code description: N = 2^n, sorted zero-based information set of size
// K, the remaining bit channels frozen to zero.
struct PolarCode {
    int n = 0;
    std::vector<std::uint32_t> info_set;
    std::vector<std::uint8_t> is_info;  // N flags derived from info_set

    PolarCode() = default;
    PolarCode(int block_exp, std::vector<std::uint32_t> info);  // throws InvalidParams

    int block_length() const { return 1 << n; }
    int dimension() const { return (int)info_set.size(); }
};

// c = u B_N F2^{(x)n}: message scattered into information positions, frozen
// positions zero, bit-reversal permutation, then n in-place XOR butterfly
// stages. O(N log N).
void encode(const PolarCode& code, std::span<const std::uint8_t> message,
            std::vector<std::uint8_t>& codeword);

// Successive cancellation decoder using the exact tanh rule. Iterative
// layered schedule, O(N log N) time, O(N) scratch. Instances own their
// scratch buffers: use one decoder per worker thread.
class ScDecoder {
public:
    explicit ScDecoder(PolarCode code);

    const PolarCode& code() const { return code_; }

    // channel_llrs: N values, positive favors bit 0. An LLR of exactly zero
    // decides bit 0. Fills u_hat (all N positions) and message (the K
    // information positions in info_set order).
    void decode(std::span<const double> channel_llrs, std::vector<std::uint8_t>& u_hat,
                std::vector<std::uint8_t>& message);

private:
    PolarCode code_;
    std::vector<std::vector<double>> p_;        // layer d holds 2^d llrs
    std::vector<std::vector<std::uint8_t>> c_;  // pending even-step partial sums
    std::vector<std::uint8_t> buf_, buf2_;
};

void clamp_llrs(std::vector<double>& llrs, double cap = kLlrCap);

// Info-set file: header line "N=<N> K=<K>", then one sorted zero-based index
// per line. Identical codes serialize to byte-identical files.
void write_info_set(const std::string& path, const PolarCode& code);
PolarCode read_info_set(const std::string& path);  // throws IoError

}  // namespace polarsim
