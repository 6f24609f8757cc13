#ifndef SBFD_SPECTRUM_HPP
#define SBFD_SPECTRUM_HPP

#include <span>
#include <vector>

#include "sbfd/grid.hpp"

namespace sbfd {

/// Two-sided power spectrum, frequency axis as offset from the center
/// frequency (fftshifted, -fs/2 .. fs/2).
struct PsdSeries {
    std::vector<double> freq_offset_hz;
    std::vector<double> power_db;
};

/// Welch accumulator: Hann window, 50% overlap, mean of |X|^2 segments.
/// Samples may be pushed incrementally (the streaming pipeline feeds chunks).
class WelchAccumulator {
  public:
    explicit WelchAccumulator(std::size_t segment_length);

    void push(std::span<const cplx> samples);
    std::size_t segments() const { return segments_; }

    /// Throws if no complete segment was accumulated.
    PsdSeries finalize(double sample_rate_hz) const;

  private:
    void process_segment(const cplx* seg);

    std::size_t nseg_;
    std::size_t hop_;
    std::vector<double> window_;
    double window_power_ = 0.0;
    std::vector<double> acc_;
    std::vector<cplx> carry_;
    std::size_t segments_ = 0;
};

/// Welch-style averaged spectrum of a whole buffer.
PsdSeries psd(const IqBuffer& buffer, std::size_t segment_length);

/// 10*log10(max|s|^2 / mean|s|^2). Throws on an all-zero or empty input.
double papr_db(std::span<const cplx> samples);

/// PAPR per OFDM symbol (CP included).
std::vector<double> papr_per_symbol_db(const IqBuffer& buffer);

} // namespace sbfd

#endif // SBFD_SPECTRUM_HPP
