#ifndef SBFD_QPSK_HPP
#define SBFD_QPSK_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace sbfd {

inline constexpr double kInvSqrt2 = 0.7071067811865475244;

/// Gray-mapped unit-energy QPSK: (b0,b1) -> ((1-2*b0) + j(1-2*b1))/sqrt(2).
inline std::complex<double> qpsk_point(std::uint8_t b0, std::uint8_t b1) {
    return {(1.0 - 2.0 * b0) * kInvSqrt2, (1.0 - 2.0 * b1) * kInvSqrt2};
}

inline std::vector<std::complex<double>> map_qpsk(std::span<const std::uint8_t> bits) {
    if (bits.size() % 2 != 0) throw std::invalid_argument("map_qpsk: odd bit count");
    std::vector<std::complex<double>> out(bits.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = qpsk_point(bits[2 * i], bits[2 * i + 1]);
    return out;
}

/// Nearest-neighbor (sign) demapping, inverse of map_qpsk.
inline void demap_qpsk(std::complex<double> s, std::uint8_t& b0, std::uint8_t& b1) {
    b0 = s.real() < 0.0 ? 1 : 0;
    b1 = s.imag() < 0.0 ? 1 : 0;
}

inline const std::complex<double> kQpskIdeal[4] = {
    qpsk_point(0, 0), qpsk_point(0, 1), qpsk_point(1, 0), qpsk_point(1, 1)};

} // namespace sbfd

#endif // SBFD_QPSK_HPP
