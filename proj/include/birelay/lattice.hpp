#pragma once

#include <complex>
#include <cstdint>

#include "birelay/channel.hpp"

namespace birelay {

// One complex message symbol: a pair of fine-lattice indices in [0, M).
struct MessageSymbol {
    int re = 0;
    int im = 0;
    bool operator==(const MessageSymbol&) const = default;
};

// Scaled-integer nested lattice pair on each real component: coarse lattice
// q Z (the shaping region is [-q/2, q/2)) and fine lattice (q/M) Z, giving M
// residues per component. Dithered fine-lattice points are uniform over the
// shaping region, so a complex symbol carries power q^2/6.
class ScalarNestedLattice {
  public:
    ScalarNestedLattice(double coarse_scale, int fine_per_coarse);

    // Lattice whose dithered codewords average the given symbol power.
    static ScalarNestedLattice calibrated(double p_lambda, int fine_per_coarse);

    double q() const { return q_; }
    int fine_per_coarse() const { return m_; }
    double fine_spacing() const { return q_ / m_; }
    double power() const { return q_ * q_ / 6.0; }

    // Fine-lattice point of a message, componentwise index * spacing.
    std::complex<double> point(const MessageSymbol& symbol) const;

  private:
    double q_;
    int m_;
};

// Reduction modulo the coarse lattice: x - q round(x / q), in [-q/2, q/2).
double mod_coarse(double x, double q);
std::complex<double> mod_coarse(std::complex<double> x, double q);

// Source transmit sample: the dithered mod-reduced codeword, pre-divided by
// the node's own channel coefficient so both codewords arrive at the relay
// aligned at power p_lambda.
std::complex<double> encode_node(const ScalarNestedLattice& lattice,
                                 const MessageSymbol& message,
                                 std::complex<double> dither,
                                 std::complex<double> h);

// Relay's estimate of the componentwise mod-M message sum: strip both
// dithers modulo the coarse lattice, then quantize to the fine lattice.
MessageSymbol relay_decode(const ScalarNestedLattice& lattice,
                           std::complex<double> y,
                           std::complex<double> dither_a,
                           std::complex<double> dither_b);

// Relay transmit sample for a decoded sum: its own dithered codeword scaled
// from the lattice power up to p_r. Scaling below the lattice power would
// make the terminals' inverse scaling amplify noise, so p_r < p_lambda is
// rejected.
std::complex<double> relay_broadcast(const ScalarNestedLattice& lattice,
                                     const MessageSymbol& sum,
                                     std::complex<double> dither, double p_r);

// Terminal-side estimate of the broadcast sum: undo the channel and the
// relay's power scaling, strip the relay dither, quantize.
MessageSymbol node_decode(const ScalarNestedLattice& lattice,
                          std::complex<double> y,
                          std::complex<double> dither_r,
                          std::complex<double> h, double p_r);

// Partner message from a sum estimate and the node's own message,
// componentwise mod M.
MessageSymbol node_extract(const MessageSymbol& sum_estimate,
                           const MessageSymbol& own, int fine_per_coarse);

// Philox stream ids inside the lattice-trial domain, one per independent
// randomness source of a trial.
inline constexpr std::uint64_t kStreamMessageA = 1;
inline constexpr std::uint64_t kStreamMessageB = 2;
inline constexpr std::uint64_t kStreamDitherA = 3;
inline constexpr std::uint64_t kStreamDitherB = 4;
inline constexpr std::uint64_t kStreamDitherR = 5;
inline constexpr std::uint64_t kStreamNoiseMac = 6;
inline constexpr std::uint64_t kStreamNoiseBcA = 7;
inline constexpr std::uint64_t kStreamNoiseBcB = 8;

struct LatticeTrialConfig {
    double p_lambda = 1.0;       // aligned receive power at the relay
    double p_r = 1.0;            // relay transmit power
    int fine_per_coarse = 4;     // M, residues per real component
    int n_symbols = 10000;
    std::uint64_t seed = 0;
    double noise_variance = 1.0;  // complex noise power; 0 for noiseless runs
};

struct TrialReport {
    double relay_ser = 0.0;           // wrong sum symbols at the relay
    double end_to_end_ser_a = 0.0;    // node a's wrong partner symbols
    double end_to_end_ser_b = 0.0;
    double empirical_power_a = 0.0;   // measured mean |x|^2 per transmitter
    double empirical_power_b = 0.0;
    double empirical_power_r = 0.0;
    int n_symbols = 0;
};

// Full two-phase round trip over n_symbols uses of one realization. All
// randomness comes from the eight per-purpose Philox streams above, so a
// report is a pure function of (realization, config). Requires
// p_r >= p_lambda / min(g_a, g_b) so both downlinks can carry the lattice.
TrialReport run_trial(const ChannelRealization& realization,
                      const LatticeTrialConfig& config);

}  // namespace birelay
