#ifndef SBFD_FFT_HPP
#define SBFD_FFT_HPP

#include <complex>
#include <cstddef>

namespace sbfd {

// Unscaled out-of-place DFTs backed by FFTW (plans cached per length,
// FFTW_ESTIMATE so planning is deterministic). Thread-safe; in != out.
// forward: X[k] = sum_n x[n] e^{-j2pi kn/N}
// inverse: x[n] = sum_k X[k] e^{+j2pi kn/N}
void fft_forward(std::size_t n, const std::complex<double>* in, std::complex<double>* out);
void fft_inverse(std::size_t n, const std::complex<double>* in, std::complex<double>* out);

/// Create the plans for length n eagerly (call before entering a parallel
/// region so execution never races plan creation).
void fft_warm(std::size_t n);

} // namespace sbfd

#endif // SBFD_FFT_HPP
