#ifndef SBFD_REFERENCE_HPP
#define SBFD_REFERENCE_HPP

#include <span>
#include <vector>

#include "sbfd/grid.hpp"

namespace sbfd::ref {

// Serial reference implementations. These evaluate the defining DFT sums
// directly (no FFT library, no OpenMP) and exist as independent oracles for
// the fast kernels plus a baseline for the benchmark tool. O(N^2) per
// symbol; intended for test-sized inputs.

IqBuffer modulate(const SymbolGrid& grid);
SymbolGrid ofdm_demodulate(const IqBuffer& buffer);

/// Hann-tapered, zero-padded Doppler spectrum of one slow-time series:
/// out[q] = sum_m x[m] hann[m] e^{-j2pi q m / pad_len}, q = 0..pad_len-1.
std::vector<cplx> doppler_spectrum(std::span<const cplx> slow_time, std::size_t pad_len);

/// Inverse DFT across subcarriers: out[l] = sum_n x[n] e^{+j2pi n l / N}.
std::vector<cplx> range_profile(std::span<const cplx> across_bins);

} // namespace sbfd::ref

#endif // SBFD_REFERENCE_HPP
