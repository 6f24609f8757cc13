#include "sbfd/modulator.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sbfd/fft.hpp"

namespace sbfd {

void assemble_symbol(const SubbandAllocation& alloc, std::span<const cplx> payload, cplx* dst) {
    if (payload.size() != alloc.data.size())
        throw std::invalid_argument("assemble: payload length != data subcarrier count");
    for (std::size_t r = 0; r < alloc.fft_size; ++r) dst[r] = 0.0;
    for (std::size_t i = 0; i < alloc.data.size(); ++i) dst[alloc.data[i] - 1] = payload[i];
    for (const auto p : alloc.pilots) dst[p - 1] = 1.0;
}

SymbolGrid assemble_grid(const SubbandAllocation& alloc, const OfdmNumerology& num,
                         std::span<const cplx> payload, std::size_t num_symbols) {
    if (alloc.fft_size != num.fft_size)
        throw std::invalid_argument("assemble: allocation/numerology fft_size mismatch");
    SymbolGrid g(num, num_symbols);
    if (num_symbols == 0) return g;
    assemble_symbol(alloc, payload, g.m.col(0));
    for (std::size_t s = 1; s < num_symbols; ++s)
        std::copy(g.m.col(0), g.m.col(0) + num.fft_size, g.m.col(s));
    return g;
}

SymbolGrid assemble_grid(const SubbandAllocation& alloc, const OfdmNumerology& num,
                         const CMat& payload_cols) {
    if (alloc.fft_size != num.fft_size)
        throw std::invalid_argument("assemble: allocation/numerology fft_size mismatch");
    if (payload_cols.rows != alloc.data.size())
        throw std::invalid_argument("assemble: payload length != data subcarrier count");
    SymbolGrid g(num, payload_cols.cols);
    for (std::size_t s = 0; s < payload_cols.cols; ++s)
        assemble_symbol(alloc, std::span<const cplx>(payload_cols.col(s), payload_cols.rows),
                        g.m.col(s));
    return g;
}

void modulate_symbol(const OfdmNumerology& num, const cplx* grid_col, cplx* out_samples,
                     cplx* scratch) {
    const std::size_t n = num.fft_size;
    const std::size_t dc0 = n / 2; // 0-based row of the DC bin
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    // shift so the DC-centered row lands on frequency index 0
    for (std::size_t m = 0; m < n; ++m) scratch[m] = grid_col[(m + dc0) % n];
    cplx* body = out_samples + num.cp_samples;
    fft_inverse(n, scratch, body);
    for (std::size_t k = 0; k < n; ++k) body[k] *= scale;
    for (std::size_t k = 0; k < num.cp_samples; ++k)
        out_samples[k] = body[n - num.cp_samples + k];
}

void demodulate_symbol(const OfdmNumerology& num, const cplx* in_samples, cplx* grid_col,
                       cplx* scratch) {
    const std::size_t n = num.fft_size;
    const std::size_t dc0 = n / 2;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    fft_forward(n, in_samples + num.cp_samples, scratch);
    for (std::size_t r = 0; r < n; ++r) grid_col[r] = scratch[(r + n - dc0) % n] * scale;
}

IqBuffer modulate(const SymbolGrid& grid, Exec exec) {
    const auto& num = grid.numerology;
    num.validate();
    if (grid.m.rows != num.fft_size)
        throw std::invalid_argument("modulate: grid rows != fft_size");
    const std::size_t sps = num.samples_per_symbol();
    IqBuffer out;
    out.numerology = num;
    out.samples.resize(grid.m.cols * sps);
    fft_warm(num.fft_size);

    const auto nsym = static_cast<long long>(grid.m.cols);
#pragma omp parallel if (exec == Exec::Parallel)
    {
        std::vector<cplx> scratch(num.fft_size);
#pragma omp for schedule(static)
        for (long long s = 0; s < nsym; ++s)
            modulate_symbol(num, grid.m.col(static_cast<std::size_t>(s)),
                            out.samples.data() + static_cast<std::size_t>(s) * sps,
                            scratch.data());
    }
    return out;
}

SymbolGrid ofdm_demodulate(const IqBuffer& buffer, Exec exec) {
    const auto& num = buffer.numerology;
    num.validate();
    const std::size_t sps = num.samples_per_symbol();
    if (buffer.samples.size() < sps)
        throw std::invalid_argument("ofdm_demodulate: buffer shorter than one symbol");
    const std::size_t nsym = buffer.samples.size() / sps;
    if (buffer.samples.size() % sps != 0)
        std::fprintf(stderr,
                     "ofdm_demodulate: discarding %zu trailing samples (partial symbol)\n",
                     buffer.samples.size() - nsym * sps);

    SymbolGrid g(num, nsym);
    fft_warm(num.fft_size);
    const auto n = static_cast<long long>(nsym);
#pragma omp parallel if (exec == Exec::Parallel)
    {
        std::vector<cplx> scratch(num.fft_size);
#pragma omp for schedule(static)
        for (long long s = 0; s < n; ++s)
            demodulate_symbol(num, buffer.samples.data() + static_cast<std::size_t>(s) * sps,
                              g.m.col(static_cast<std::size_t>(s)), scratch.data());
    }
    return g;
}

} // namespace sbfd
