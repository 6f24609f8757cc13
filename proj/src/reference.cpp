#include "sbfd/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace sbfd::ref {

IqBuffer modulate(const SymbolGrid& grid) {
    const auto& num = grid.numerology;
    const std::size_t n = num.fft_size;
    const std::size_t sps = num.samples_per_symbol();
    const double dc0 = static_cast<double>(n / 2);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));

    IqBuffer out;
    out.numerology = num;
    out.samples.resize(grid.m.cols * sps);
    for (std::size_t s = 0; s < grid.m.cols; ++s) {
        const cplx* col = grid.m.col(s);
        cplx* body = out.samples.data() + s * sps + num.cp_samples;
        for (std::size_t k = 0; k < n; ++k) {
            cplx acc = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                const double ph = 2.0 * M_PI * (static_cast<double>(r) - dc0) *
                                  static_cast<double>(k) / static_cast<double>(n);
                acc += col[r] * std::polar(1.0, ph);
            }
            body[k] = acc * scale;
        }
        for (std::size_t k = 0; k < num.cp_samples; ++k)
            out.samples[s * sps + k] = body[n - num.cp_samples + k];
    }
    return out;
}

SymbolGrid ofdm_demodulate(const IqBuffer& buffer) {
    const auto& num = buffer.numerology;
    const std::size_t n = num.fft_size;
    const std::size_t sps = num.samples_per_symbol();
    if (buffer.samples.size() < sps)
        throw std::invalid_argument("ref::ofdm_demodulate: buffer shorter than one symbol");
    const std::size_t nsym = buffer.samples.size() / sps;
    const double dc0 = static_cast<double>(n / 2);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));

    SymbolGrid g(num, nsym);
    for (std::size_t s = 0; s < nsym; ++s) {
        const cplx* body = buffer.samples.data() + s * sps + num.cp_samples;
        cplx* col = g.m.col(s);
        for (std::size_t r = 0; r < n; ++r) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double ph = -2.0 * M_PI * (static_cast<double>(r) - dc0) *
                                  static_cast<double>(k) / static_cast<double>(n);
                acc += body[k] * std::polar(1.0, ph);
            }
            col[r] = acc * scale;
        }
    }
    return g;
}

std::vector<cplx> doppler_spectrum(std::span<const cplx> slow_time, std::size_t pad_len) {
    const std::size_t m = slow_time.size();
    if (pad_len < m) throw std::invalid_argument("ref::doppler_spectrum: pad_len < input length");
    std::vector<cplx> tapered(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double w =
            m > 1 ? 0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(i) /
                                          static_cast<double>(m - 1)))
                  : 1.0;
        tapered[i] = slow_time[i] * w;
    }
    std::vector<cplx> out(pad_len);
    for (std::size_t q = 0; q < pad_len; ++q) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            acc += tapered[i] * std::polar(1.0, -2.0 * M_PI * static_cast<double>(q) *
                                                    static_cast<double>(i) /
                                                    static_cast<double>(pad_len));
        out[q] = acc;
    }
    return out;
}

std::vector<cplx> range_profile(std::span<const cplx> across_bins) {
    const std::size_t n = across_bins.size();
    std::vector<cplx> out(n);
    for (std::size_t l = 0; l < n; ++l) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            acc += across_bins[i] * std::polar(1.0, 2.0 * M_PI * static_cast<double>(i) *
                                                        static_cast<double>(l) /
                                                        static_cast<double>(n));
        out[l] = acc;
    }
    return out;
}

} // namespace sbfd::ref
