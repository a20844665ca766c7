#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace birelay {

// Philox4x64-10 counter-based generator (Salmon et al., Random123 family;
// same parameters as NumPy's Philox bit generator). Stateless block function:
// a 256-bit counter and a 128-bit key map to four 64-bit words. Streams are
// split by convention, not by state:
//
//   counter = { block_seq, carry, stream_id, element_index }
//   key     = { user_seed, domain_tag }
//
// so every (seed, domain, stream, element) names an independent stream whose
// blocks are enumerated by block_seq. The stream bumps block_seq before each
// block, matching NumPy's Philox(counter=[0, 0, stream, element],
// key=[seed, domain]) word for word. Output is reproducible bit-for-bit for
// a given seed regardless of evaluation order or chunking.
struct Philox4x64 {
    using Counter = std::array<std::uint64_t, 4>;
    using Key = std::array<std::uint64_t, 2>;
    using Block = std::array<std::uint64_t, 4>;

    static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ull;
    static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ull;
    static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
    static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

    static Block generate(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round != 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            ctr = round_once(ctr, key);
        }
        return ctr;
    }

  private:
    static Counter round_once(const Counter& c, const Key& k) {
        const auto prod0 = static_cast<unsigned __int128>(kMul0) * c[0];
        const auto prod1 = static_cast<unsigned __int128>(kMul1) * c[2];
        const auto hi0 = static_cast<std::uint64_t>(prod0 >> 64);
        const auto lo0 = static_cast<std::uint64_t>(prod0);
        const auto hi1 = static_cast<std::uint64_t>(prod1 >> 64);
        const auto lo1 = static_cast<std::uint64_t>(prod1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

// Domain tags keep unrelated subsystems on disjoint Philox streams even when
// the user passes the same seed to both.
inline constexpr std::uint64_t kDomainFading = 1;
inline constexpr std::uint64_t kDomainLatticeTrial = 2;

// Buffered word source for one (seed, domain, stream, element) stream.
class PhiloxStream {
  public:
    PhiloxStream(std::uint64_t seed, std::uint64_t domain, std::uint64_t stream_id,
                 std::uint64_t element_index)
        : key_{seed, domain}, ctr_{0, 0, stream_id, element_index} {}

    std::uint64_t next_u64() {
        if (pos_ == 4) {
            if (++ctr_[0] == 0) ++ctr_[1];  // carry; in practice never reached
            buffer_ = Philox4x64::generate(ctr_, key_);
            pos_ = 0;
        }
        return buffer_[pos_++];
    }

    // Uniform on [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe as a log() argument.
    double next_double_positive() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Box-Muller pair of independent standard normals. Consumes two words.
    std::array<double, 2> next_gaussian_pair() {
        const double u1 = next_double_positive();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(theta), r * std::sin(theta)};
    }

    // Complex circularly-symmetric Gaussian, per-component std deviation sigma.
    std::complex<double> next_complex_gaussian(double sigma_component) {
        const auto z = next_gaussian_pair();
        return {sigma_component * z[0], sigma_component * z[1]};
    }

    // Uniform on [-width/2, width/2).
    double next_centered_uniform(double width) { return (next_double() - 0.5) * width; }

    std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

  private:
    Philox4x64::Key key_;
    Philox4x64::Counter ctr_;
    Philox4x64::Block buffer_{};
    int pos_ = 4;
};

}  // namespace birelay
