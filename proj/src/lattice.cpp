#include "birelay/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "birelay/philox.hpp"

namespace birelay {
namespace {

// Nearest fine-lattice index of one mod-reduced component, as a residue.
int quantize_component(double w, double spacing, int m) {
    const int n = static_cast<int>(std::floor(w / spacing + 0.5));
    return ((n % m) + m) % m;
}

MessageSymbol quantize(const ScalarNestedLattice& lattice,
                       std::complex<double> w) {
    const double spacing = lattice.fine_spacing();
    const int m = lattice.fine_per_coarse();
    return {quantize_component(w.real(), spacing, m),
            quantize_component(w.imag(), spacing, m)};
}

}  // namespace

ScalarNestedLattice::ScalarNestedLattice(double coarse_scale,
                                         int fine_per_coarse)
    : q_(coarse_scale), m_(fine_per_coarse) {
    if (!(coarse_scale > 0.0))
        throw std::invalid_argument("coarse scale must be positive");
    if (fine_per_coarse < 2)
        throw std::invalid_argument("need at least 2 residues per component");
}

ScalarNestedLattice ScalarNestedLattice::calibrated(double p_lambda,
                                                    int fine_per_coarse) {
    if (!(p_lambda > 0.0))
        throw std::invalid_argument("lattice power must be positive");
    return {std::sqrt(6.0 * p_lambda), fine_per_coarse};
}

std::complex<double> ScalarNestedLattice::point(
    const MessageSymbol& symbol) const {
    if (symbol.re < 0 || symbol.re >= m_ || symbol.im < 0 || symbol.im >= m_)
        throw std::invalid_argument("message index out of range");
    const double spacing = fine_spacing();
    return {symbol.re * spacing, symbol.im * spacing};
}

double mod_coarse(double x, double q) {
    if (!(q > 0.0)) throw std::invalid_argument("modulus must be positive");
    return x - q * std::floor(x / q + 0.5);
}

std::complex<double> mod_coarse(std::complex<double> x, double q) {
    return {mod_coarse(x.real(), q), mod_coarse(x.imag(), q)};
}

std::complex<double> encode_node(const ScalarNestedLattice& lattice,
                                 const MessageSymbol& message,
                                 std::complex<double> dither,
                                 std::complex<double> h) {
    if (std::norm(h) == 0.0)
        throw std::invalid_argument("cannot invert a zero channel");
    return mod_coarse(lattice.point(message) - dither, lattice.q()) / h;
}

MessageSymbol relay_decode(const ScalarNestedLattice& lattice,
                           std::complex<double> y,
                           std::complex<double> dither_a,
                           std::complex<double> dither_b) {
    // Adding the dithers back and reducing leaves the two fine points' sum
    // (plus noise) modulo the coarse lattice.
    return quantize(lattice, mod_coarse(y + dither_a + dither_b, lattice.q()));
}

std::complex<double> relay_broadcast(const ScalarNestedLattice& lattice,
                                     const MessageSymbol& sum,
                                     std::complex<double> dither, double p_r) {
    const double p_lambda = lattice.power();
    if (p_r < p_lambda * (1.0 - 1e-12))
        throw std::invalid_argument(
            "relay power below the lattice power cannot carry the codeword");
    const double scale = std::sqrt(p_r / p_lambda);
    return scale * mod_coarse(lattice.point(sum) - dither, lattice.q());
}

MessageSymbol node_decode(const ScalarNestedLattice& lattice,
                          std::complex<double> y,
                          std::complex<double> dither_r,
                          std::complex<double> h, double p_r) {
    if (std::norm(h) == 0.0)
        throw std::invalid_argument("cannot invert a zero channel");
    if (!(p_r > 0.0)) throw std::invalid_argument("p_r must be positive");
    const double scale = std::sqrt(lattice.power() / p_r);
    const std::complex<double> w = y * scale / h + dither_r;
    return quantize(lattice, mod_coarse(w, lattice.q()));
}

MessageSymbol node_extract(const MessageSymbol& sum_estimate,
                           const MessageSymbol& own, int fine_per_coarse) {
    const int m = fine_per_coarse;
    if (m < 2) throw std::invalid_argument("need at least 2 residues");
    return {((sum_estimate.re - own.re) % m + m) % m,
            ((sum_estimate.im - own.im) % m + m) % m};
}

TrialReport run_trial(const ChannelRealization& realization,
                      const LatticeTrialConfig& config) {
    if (config.n_symbols < 1)
        throw std::invalid_argument("need at least one symbol");
    if (!(config.noise_variance >= 0.0))
        throw std::invalid_argument("noise variance must be non-negative");
    const double g_min = std::min(realization.gain_a(), realization.gain_b());
    if (config.p_r * g_min < config.p_lambda * (1.0 - 1e-12))
        throw std::invalid_argument(
            "p_r must be at least p_lambda / min(g_a, g_b)");

    const auto lattice =
        ScalarNestedLattice::calibrated(config.p_lambda, config.fine_per_coarse);
    const double q = lattice.q();
    const int m = lattice.fine_per_coarse();
    const std::uint64_t seed = config.seed;

    PhiloxStream msg_a(seed, kDomainLatticeTrial, kStreamMessageA, 0);
    PhiloxStream msg_b(seed, kDomainLatticeTrial, kStreamMessageB, 0);
    PhiloxStream dither_a(seed, kDomainLatticeTrial, kStreamDitherA, 0);
    PhiloxStream dither_b(seed, kDomainLatticeTrial, kStreamDitherB, 0);
    PhiloxStream dither_r(seed, kDomainLatticeTrial, kStreamDitherR, 0);
    PhiloxStream noise_mac(seed, kDomainLatticeTrial, kStreamNoiseMac, 0);
    PhiloxStream noise_bc_a(seed, kDomainLatticeTrial, kStreamNoiseBcA, 0);
    PhiloxStream noise_bc_b(seed, kDomainLatticeTrial, kStreamNoiseBcB, 0);

    auto draw_message = [m](PhiloxStream& s) {
        return MessageSymbol{static_cast<int>(s.next_below(m)),
                             static_cast<int>(s.next_below(m))};
    };
    auto draw_dither = [q](PhiloxStream& s) {
        const double re = s.next_centered_uniform(q);
        const double im = s.next_centered_uniform(q);
        return std::complex<double>{re, im};
    };
    const double sigma = std::sqrt(config.noise_variance / 2.0);

    const std::complex<double> h_a = realization.h_a();
    const std::complex<double> h_b = realization.h_b();
    long relay_errors = 0;
    long errors_a = 0;
    long errors_b = 0;
    double power_a = 0.0;
    double power_b = 0.0;
    double power_r = 0.0;

    for (int i = 0; i < config.n_symbols; ++i) {
        const MessageSymbol m_a = draw_message(msg_a);
        const MessageSymbol m_b = draw_message(msg_b);
        const std::complex<double> u_a = draw_dither(dither_a);
        const std::complex<double> u_b = draw_dither(dither_b);
        const std::complex<double> u_r = draw_dither(dither_r);

        const std::complex<double> x_a = encode_node(lattice, m_a, u_a, h_a);
        const std::complex<double> x_b = encode_node(lattice, m_b, u_b, h_b);
        power_a += std::norm(x_a);
        power_b += std::norm(x_b);

        const std::complex<double> y_r =
            h_a * x_a + h_b * x_b + noise_mac.next_complex_gaussian(sigma);
        const MessageSymbol sum_hat = relay_decode(lattice, y_r, u_a, u_b);
        const MessageSymbol sum_true{(m_a.re + m_b.re) % m,
                                     (m_a.im + m_b.im) % m};
        relay_errors += !(sum_hat == sum_true);

        const std::complex<double> x_r =
            relay_broadcast(lattice, sum_hat, u_r, config.p_r);
        power_r += std::norm(x_r);

        const std::complex<double> y_a =
            h_a * x_r + noise_bc_a.next_complex_gaussian(sigma);
        const std::complex<double> y_b =
            h_b * x_r + noise_bc_b.next_complex_gaussian(sigma);
        const MessageSymbol partner_at_a =
            node_extract(node_decode(lattice, y_a, u_r, h_a, config.p_r), m_a, m);
        const MessageSymbol partner_at_b =
            node_extract(node_decode(lattice, y_b, u_r, h_b, config.p_r), m_b, m);
        errors_a += !(partner_at_a == m_b);
        errors_b += !(partner_at_b == m_a);
    }

    TrialReport report;
    const double n = config.n_symbols;
    report.relay_ser = relay_errors / n;
    report.end_to_end_ser_a = errors_a / n;
    report.end_to_end_ser_b = errors_b / n;
    report.empirical_power_a = power_a / n;
    report.empirical_power_b = power_b / n;
    report.empirical_power_r = power_r / n;
    report.n_symbols = config.n_symbols;
    return report;
}

}  // namespace birelay
