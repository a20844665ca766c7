#include "birelay/channel.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "birelay/philox.hpp"

namespace birelay {

namespace {
constexpr double kDegenerateGain = 1e-12;
}

ChannelRealization::ChannelRealization(std::complex<double> h_a, std::complex<double> h_b)
    : h_a_(h_a), h_b_(h_b) {
    if (!(std::abs(h_a) > 0.0) || !(std::abs(h_b) > 0.0))
        throw std::invalid_argument("ChannelRealization: zero channel gain");
    if (!std::isfinite(h_a.real()) || !std::isfinite(h_a.imag()) ||
        !std::isfinite(h_b.real()) || !std::isfinite(h_b.imag()))
        throw std::invalid_argument("ChannelRealization: non-finite channel gain");
}

double kappa_sq(const ChannelRealization& r) { return r.kappa_sq(); }

FadingEnsemble sample_rayleigh(std::size_t L, std::uint64_t seed, double variance) {
    if (L == 0) throw std::invalid_argument("sample_rayleigh: L must be >= 1");
    if (!(variance > 0.0)) throw std::invalid_argument("sample_rayleigh: variance must be > 0");

    const double sigma = std::sqrt(variance / 2.0);
    FadingEnsemble ensemble;
    ensemble.seed = seed;
    ensemble.variance = variance;
    ensemble.realizations.reserve(L);
    for (std::size_t i = 0; i < L; ++i) {
        PhiloxStream stream(seed, kDomainFading, 0, i);
        std::complex<double> h_a, h_b;
        do {
            h_a = stream.next_complex_gaussian(sigma);
            h_b = stream.next_complex_gaussian(sigma);
        } while (std::abs(h_a) < kDegenerateGain || std::abs(h_b) < kDegenerateGain);
        ensemble.realizations.emplace_back(h_a, h_b);
    }
    return ensemble;
}

namespace {

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void save_ensemble(const FadingEnsemble& ensemble, std::ostream& out) {
    out << "# seed: " << ensemble.seed << "\n";
    out << "# L: " << ensemble.size() << "\n";
    out << "# variance: " << fmt_full(ensemble.variance) << "\n";
    out << "re_h_a,im_h_a,re_h_b,im_h_b\n";
    for (const auto& r : ensemble.realizations) {
        out << fmt_full(r.h_a().real()) << ',' << fmt_full(r.h_a().imag()) << ','
            << fmt_full(r.h_b().real()) << ',' << fmt_full(r.h_b().imag()) << "\n";
    }
}

void save_ensemble(const FadingEnsemble& ensemble, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_ensemble: cannot open " + path);
    save_ensemble(ensemble, out);
    if (!out) throw std::runtime_error("save_ensemble: write failed for " + path);
}

FadingEnsemble load_ensemble(std::istream& in) {
    FadingEnsemble ensemble;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream meta(line.substr(1));
            std::string tag;
            meta >> tag;
            if (tag == "seed:")
                meta >> ensemble.seed;
            else if (tag == "variance:")
                meta >> ensemble.variance;
            continue;
        }
        if (!header_seen) {  // column header row
            header_seen = true;
            continue;
        }
        std::istringstream row(line);
        double v[4];
        char comma;
        row >> v[0] >> comma >> v[1] >> comma >> v[2] >> comma >> v[3];
        if (!row) throw std::runtime_error("load_ensemble: malformed row: " + line);
        ensemble.realizations.emplace_back(std::complex<double>(v[0], v[1]),
                                           std::complex<double>(v[2], v[3]));
    }
    if (ensemble.realizations.empty())
        throw std::runtime_error("load_ensemble: no data rows");
    return ensemble;
}

FadingEnsemble load_ensemble(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_ensemble: cannot open " + path);
    return load_ensemble(in);
}

}  // namespace birelay
