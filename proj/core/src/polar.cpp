#include "polarsim/polar.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "polarsim/errors.hpp"

namespace polarsim {

double f_combine(double a, double b) {
    // Equivalent to max(a+b,0) - max(a,b) plus the two log1p corrections,
    // i.e. the exact boxplus. No atanh, so saturated inputs stay finite.
    double m = std::min(std::abs(a), std::abs(b));
    double s = (std::signbit(a) != std::signbit(b)) ? -m : m;
    return s + std::log1p(std::exp(-std::abs(a + b))) -
           std::log1p(std::exp(-std::abs(a - b)));
}

PolarCode::PolarCode(int block_exp, std::vector<std::uint32_t> info)
    : n(block_exp), info_set(std::move(info)) {
    if (n < 1 || n > 22) throw InvalidParams("block exponent must be in [1, 22]");
    const std::uint32_t N = 1u << n;
    if (info_set.empty() || info_set.size() > N)
        throw InvalidParams("information set size must be in [1, N]");
    for (std::size_t i = 0; i < info_set.size(); ++i) {
        if (info_set[i] >= N) throw InvalidParams("information index out of range");
        if (i > 0 && info_set[i] <= info_set[i - 1])
            throw InvalidParams("information set must be sorted and duplicate free");
    }
    is_info.assign(N, 0);
    for (auto i : info_set) is_info[i] = 1;
}

void encode(const PolarCode& code, std::span<const std::uint8_t> message,
            std::vector<std::uint8_t>& codeword) {
    if ((int)message.size() != code.dimension())
        throw DimensionError("message length does not match code dimension");
    const int N = code.block_length();
    codeword.assign(N, 0);
    // scatter into u, apply the bit-reversal permutation in the same pass
    for (std::size_t i = 0; i < message.size(); ++i)
        codeword[bit_reverse(code.info_set[i], code.n)] = message[i] & 1;
    // n XOR butterfly stages; stage order is immaterial (disjoint index bits)
    for (int h = 1; h < N; h <<= 1)
        for (int i = 0; i < N; i += 2 * h)
            for (int j = i; j < i + h; ++j) codeword[j] ^= codeword[j + h];
}

ScDecoder::ScDecoder(PolarCode code) : code_(std::move(code)) {
    p_.resize(code_.n);
    c_.resize(code_.n);
    for (int d = 0; d < code_.n; ++d) {
        p_[d].assign(std::size_t(1) << d, 0.0);
        c_[d].assign(std::size_t(1) << d, 0);
    }
    buf_.assign(code_.block_length(), 0);
    buf2_.assign(code_.block_length(), 0);
}

void ScDecoder::decode(std::span<const double> channel_llrs,
                       std::vector<std::uint8_t>& u_hat,
                       std::vector<std::uint8_t>& message) {
    const int n = code_.n;
    const std::uint32_t N = 1u << n;
    if (channel_llrs.size() != N)
        throw DimensionError("channel llr vector length does not match block length");
    u_hat.assign(N, 0);
    message.resize(code_.dimension());

    // child value at layer d+1 (layer n is the channel itself)
    auto child = [&](int d1, std::uint32_t i) -> double {
        return (d1 == n) ? channel_llrs[i] : p_[d1][i];
    };
    auto refresh_f = [&](int d) {
        const std::uint32_t w = 1u << d;
        for (std::uint32_t b = 0; b < w; ++b)
            p_[d][b] = f_combine(child(d + 1, 2 * b), child(d + 1, 2 * b + 1));
    };

    for (std::uint32_t phi = 0; phi < N; ++phi) {
        if (phi == 0) {
            for (int d = n - 1; d >= 0; --d) refresh_f(d);
        } else {
            const int t = std::countr_zero(phi);
            const std::uint32_t w = 1u << t;
            for (std::uint32_t b = 0; b < w; ++b)
                p_[t][b] = g_combine(child(t + 1, 2 * b), child(t + 1, 2 * b + 1), c_[t][b]);
            for (int d = t - 1; d >= 0; --d) refresh_f(d);
        }

        u_hat[phi] = code_.is_info[phi] ? (p_[0][0] >= 0.0 ? 0 : 1) : 0;

        // propagate partial sums: climb while this layer's step is odd
        buf_[0] = u_hat[phi];
        for (int d = 0; d < n; ++d) {
            const std::uint32_t w = 1u << d;
            if (((phi >> d) & 1u) == 0) {
                std::copy_n(buf_.begin(), w, c_[d].begin());
                break;
            }
            if (d == n - 1) break;  // re-encoded codeword would land on the channel layer
            for (std::uint32_t i = 0; i < w; ++i) {
                buf2_[2 * i] = c_[d][i] ^ buf_[i];
                buf2_[2 * i + 1] = buf_[i];
            }
            std::swap(buf_, buf2_);
        }
    }

    for (std::size_t i = 0; i < code_.info_set.size(); ++i)
        message[i] = u_hat[code_.info_set[i]];
}

void clamp_llrs(std::vector<double>& llrs, double cap) {
    for (auto& l : llrs) l = std::clamp(l, -cap, cap);
}

void write_info_set(const std::string& path, const PolarCode& code) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "N=" << code.block_length() << " K=" << code.dimension() << "\n";
    for (auto i : code.info_set) out << i << "\n";
    if (!out) throw IoError("write failed: " + path);
}

PolarCode read_info_set(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::string header;
    if (!std::getline(in, header)) throw IoError("empty info set file: " + path);
    long N = 0, K = 0;
    if (std::sscanf(header.c_str(), "N=%ld K=%ld", &N, &K) != 2)
        throw IoError("malformed info set header in " + path + ": '" + header + "'");
    if (N < 2 || (N & (N - 1)) != 0)
        throw IoError("block length in " + path + " is not a power of two");
    if (K < 1 || K > N) throw IoError("dimension out of range in " + path);
    std::vector<std::uint32_t> info;
    info.reserve(K);
    std::string line;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(line, &pos);
        } catch (const std::exception&) {
            throw IoError(path + ":" + std::to_string(line_no) + ": not an index: '" + line + "'");
        }
        if (pos != line.size())
            throw IoError(path + ":" + std::to_string(line_no) + ": trailing junk: '" + line + "'");
        info.push_back((std::uint32_t)v);
    }
    if ((long)info.size() != K)
        throw IoError(path + ": expected " + std::to_string(K) + " indices, found " +
                      std::to_string(info.size()));
    int n = 0;
    while ((1L << n) < N) ++n;
    try {
        return PolarCode(n, std::move(info));
    } catch (const InvalidParams& e) {
        throw IoError(path + ": " + e.what());
    }
}

}  // namespace polarsim
