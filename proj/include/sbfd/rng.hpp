#ifndef SBFD_RNG_HPP
#define SBFD_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace sbfd {

/// splitmix64 finalizer; used to derive independent sub-stream seeds from
/// (scenario seed, run, stream tag, index) so results do not depend on
/// chunking or thread count.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) { return mix64(a ^ mix64(b)); }

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix64(mix64(a, b), c);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
    return mix64(mix64(a, b, c), d);
}

// Stream tags for derived seeds.
inline constexpr std::uint64_t kStreamNoise = 0x6e6f697365ULL;    // "noise"
inline constexpr std::uint64_t kStreamBits = 0x62697473ULL;       // "bits"
inline constexpr std::uint64_t kStreamTrajectory = 0x74726a;

/// Deterministic RNG for noise and payload bits. Box-Muller is hand-rolled
/// so the sample stream is identical across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { // in [0, 1)
        return (eng_() >> 11) * 0x1.0p-53;
    }

    double uniform_signed() { return 2.0 * uniform() - 1.0; }

    /// Standard complex circularly-symmetric Gaussian, E|z|^2 = 1.
    /// Marsaglia polar method (no trig calls).
    std::complex<double> gaussian_c() {
        double x, y, s;
        do {
            x = uniform_signed();
            y = uniform_signed();
            s = x * x + y * y;
        } while (s >= 1.0 || s == 0.0);
        const double k = std::sqrt(-std::log(s) / s); // variance 1/2 per component
        return {x * k, y * k};
    }

    std::uint8_t bit() { return static_cast<std::uint8_t>(eng_() >> 63); }

  private:
    std::mt19937_64 eng_;
};

} // namespace sbfd

#endif // SBFD_RNG_HPP
