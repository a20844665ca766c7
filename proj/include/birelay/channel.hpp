#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace birelay {

// One coherence interval's reciprocal channel gains. Gains are stored as full
// complex values: the lattice simulator needs the phase for channel
// inversion, the rate solvers only read the squared magnitudes.
class ChannelRealization {
  public:
    ChannelRealization(std::complex<double> h_a, std::complex<double> h_b);

    std::complex<double> h_a() const { return h_a_; }
    std::complex<double> h_b() const { return h_b_; }
    double gain_a() const { return std::norm(h_a_); }
    double gain_b() const { return std::norm(h_b_); }
    double kappa_sq() const { return std::norm(h_a_) / std::norm(h_b_); }

    // The a<->b mirrored realization.
    ChannelRealization swapped() const { return {h_b_, h_a_}; }

  private:
    std::complex<double> h_a_;
    std::complex<double> h_b_;
};

// Gain ratio |h_a|^2 / |h_b|^2 driving the closed-form case splits.
double kappa_sq(const ChannelRealization& r);

// L block-fading realizations together with the seed and variance that
// produced them, so any ensemble can be regenerated bit-identically.
struct FadingEnsemble {
    std::vector<ChannelRealization> realizations;
    std::uint64_t seed = 0;
    double variance = 1.0;

    std::size_t size() const { return realizations.size(); }
};

// Draws L i.i.d. complex circularly-symmetric Gaussian gain pairs with
// E[|h|^2] = variance (so |h| is Rayleigh). Deterministic in seed; interval i
// reads only the Philox stream (seed, fading-domain, 0, i). Degenerate draws
// with |h| < 1e-12 are redrawn from the next block of the same stream.
FadingEnsemble sample_rayleigh(std::size_t L, std::uint64_t seed, double variance);

// Text-table export/import: comment header with seed/L/variance, then one row
// per interval with columns re_h_a, im_h_a, re_h_b, im_h_b at full double
// precision.
void save_ensemble(const FadingEnsemble& ensemble, std::ostream& out);
void save_ensemble(const FadingEnsemble& ensemble, const std::string& path);
FadingEnsemble load_ensemble(std::istream& in);
FadingEnsemble load_ensemble(const std::string& path);

}  // namespace birelay
