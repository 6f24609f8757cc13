#include "sbfd/zc.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sbfd {

std::vector<std::complex<double>> generate_zc(const ZcParams& params) {
    const std::uint64_t L = params.length;
    const std::uint64_t u = params.root;
    if (L < 2) throw std::invalid_argument("generate_zc: length must be >= 2");
    if (u < 1 || u >= L) throw std::invalid_argument("generate_zc: root must satisfy 1 <= u < L");
    if (std::gcd(u, L) != 1) throw std::invalid_argument("generate_zc: gcd(root, length) != 1");

    // Phase argument is periodic with period 2L; reduce in integers so long
    // sequences keep full phase precision.
    const std::uint64_t two_l = 2 * L;
    std::vector<std::complex<double>> x(L);
    for (std::uint64_t m = 0; m < L; ++m) {
        const std::uint64_t quad = (L % 2 == 1) ? (m * (m + 1)) % two_l : (m * m) % two_l;
        const std::uint64_t k = (u * quad) % two_l;
        x[m] = std::polar(1.0, -M_PI * static_cast<double>(k) / static_cast<double>(L));
    }
    return x;
}

} // namespace sbfd
