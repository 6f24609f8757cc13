#ifndef SBFD_ZC_HPP
#define SBFD_ZC_HPP

#include <complex>
#include <cstdint>
#include <vector>

namespace sbfd {

struct ZcParams {
    std::uint32_t length = 0; // L
    std::uint32_t root = 0;   // u, 1 <= u < L, gcd(u, L) == 1
};

/// Zadoff-Chu sequence of length L with root u:
///   x[m] = exp(-j pi u m (m+1) / L)  for odd L,
///   x[m] = exp(-j pi u m^2 / L)      for even L.
/// Every element has unit magnitude. Throws if the root is invalid.
std::vector<std::complex<double>> generate_zc(const ZcParams& params);

} // namespace sbfd

#endif // SBFD_ZC_HPP
