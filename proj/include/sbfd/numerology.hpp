#ifndef SBFD_NUMEROLOGY_HPP
#define SBFD_NUMEROLOGY_HPP

#include <cstddef>
#include <stdexcept>

namespace sbfd {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s

/// OFDM numerology; every derived timing quantity comes from here.
/// Defaults are the 2048-subcarrier / 20 MS/s / 6.8 GHz configuration
/// with a 512-sample cyclic prefix (128 us total symbol duration).
struct OfdmNumerology {
    std::size_t fft_size = 2048;
    double sample_rate_hz = 20e6;
    double center_frequency_hz = 6.8e9;
    std::size_t cp_samples = 512;

    // 1-based DC-centered bin index, n0 = N/2 + 1
    std::size_t dc_bin() const { return fft_size / 2 + 1; }

    double subcarrier_spacing_hz() const { return sample_rate_hz / static_cast<double>(fft_size); }
    double useful_duration_s() const { return static_cast<double>(fft_size) / sample_rate_hz; }
    double symbol_duration_s() const {
        return static_cast<double>(fft_size + cp_samples) / sample_rate_hz;
    }
    std::size_t samples_per_symbol() const { return fft_size + cp_samples; }

    void validate() const {
        if (fft_size < 2) throw std::invalid_argument("numerology: fft_size must be >= 2");
        if (sample_rate_hz <= 0.0) throw std::invalid_argument("numerology: sample_rate must be > 0");
        if (center_frequency_hz <= 0.0)
            throw std::invalid_argument("numerology: center_frequency must be > 0");
    }

    bool operator==(const OfdmNumerology&) const = default;
};

} // namespace sbfd

#endif // SBFD_NUMEROLOGY_HPP
