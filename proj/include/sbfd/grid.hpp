#ifndef SBFD_GRID_HPP
#define SBFD_GRID_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "sbfd/allocation.hpp"
#include "sbfd/numerology.hpp"

namespace sbfd {

using cplx = std::complex<double>;

/// Column-major complex matrix; one column per OFDM symbol.
struct CMat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<cplx> v;

    CMat() = default;
    CMat(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c) {}

    cplx* col(std::size_t c) { return v.data() + c * rows; }
    const cplx* col(std::size_t c) const { return v.data() + c * rows; }

    cplx& at(std::size_t r, std::size_t c) { return v[c * rows + r]; }
    const cplx& at(std::size_t r, std::size_t c) const { return v[c * rows + r]; }
};

/// Frequency-domain grid over all fft_size subcarriers (1-based row r
/// holds bin r+1 semantics are kept by the callers; storage is 0-based).
struct SymbolGrid {
    OfdmNumerology numerology;
    CMat m;

    SymbolGrid() = default;
    SymbolGrid(const OfdmNumerology& num, std::size_t num_symbols)
        : numerology(num), m(num.fft_size, num_symbols) {}

    std::size_t num_symbols() const { return m.cols; }
};

/// Grid restricted to one allocation's active subcarriers (row i holds
/// bin alloc.active[i]).
struct SubbandGrid {
    SubbandAllocation alloc;
    OfdmNumerology numerology;
    CMat m;

    std::size_t num_symbols() const { return m.cols; }
};

/// Baseband time-domain samples at numerology.sample_rate_hz.
struct IqBuffer {
    OfdmNumerology numerology;
    double start_timestamp_s = 0.0;
    std::vector<cplx> samples;

    std::size_t num_symbols() const { return samples.size() / numerology.samples_per_symbol(); }
};

} // namespace sbfd

#endif // SBFD_GRID_HPP
