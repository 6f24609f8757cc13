#ifndef SBFD_SENSING_HPP
#define SBFD_SENSING_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "sbfd/grid.hpp"
#include "sbfd/scenario.hpp"

namespace sbfd {

struct SensingConfig {
    std::uint32_t window = 1216;
    std::uint32_t hop = 304;
    std::uint32_t zero_pad_factor = 4;     // Doppler FFT length = factor * window
    double dc_exclusion_bins = 1.0;        // natural Doppler bins masked around zero
    bool clutter_removal = true;           // per-bin slow-time mean removal
    double detection_threshold_db = 15.0;  // peak-to-floor to declare a mover
    double min_peak_power = 1e-14;         // absolute floor on the normalized map peak
    bool integrate_range = false;          // pick the peak on the range-integrated profile
    bool keep_maps = true;                 // retain the map per window (pipeline sets false)
    double center_frequency_hz = 0.0;      // 0 -> numerology's center frequency

    static SensingConfig from(const SensingOptions& o) {
        SensingConfig c;
        c.window = o.window_symbols;
        c.hop = o.window_hop;
        c.zero_pad_factor = o.zero_pad_factor;
        c.dc_exclusion_bins = o.dc_exclusion_bins;
        c.clutter_removal = o.clutter_removal;
        c.detection_threshold_db = o.detection_threshold_db;
        c.integrate_range = o.integrate_range;
        return c;
    }
};

/// Power surface over range (rows) x Doppler (columns, fftshifted so column
/// 0 is the most negative Doppler). doppler_bins is the zero-padded length,
/// rounded up to a power of two (>= zero_pad_factor * window). Values are
/// normalized by the coherent processing gain so a unit-gain point target
/// peaks near 1.
struct RangeDopplerMap {
    std::size_t range_bins = 0;
    std::size_t doppler_bins = 0;
    std::vector<double> values; // row-major: one Doppler sweep per range bin
    double range_resolution_m = 0.0;
    double doppler_resolution_hz = 0.0; // natural bin, 1/(window * T_sym)
    double window_start_s = 0.0;        // relative to the grid start

    double at(std::size_t r, std::size_t q) const { return values[r * doppler_bins + q]; }
};

struct VelocityEstimate {
    double timestamp_s = 0.0;  // window midpoint
    double velocity_mps = 0.0; // radial, positive receding
    double peak_snr_db = 0.0;  // peak over median floor outside the DC ridge
    bool mover_detected = false;
};

struct SensingWindow {
    std::uint32_t window_start_symbols = 0;
    VelocityEstimate estimate;
    RangeDopplerMap map; // empty when keep_maps is false
};

/// Monostatic OFDM radar processing on one subband: element-wise division by
/// the known transmit grid, optional slow-time mean removal, Hann-tapered
/// zero-padded Doppler DFT per subcarrier, inverse DFT across subcarriers
/// for range, then global-peak velocity with quadratic interpolation.
/// Windows advance by cfg.hop symbols.
std::vector<SensingWindow> sensing_process(const SubbandGrid& rx, const SubbandGrid& tx_known,
                                           const SensingConfig& cfg);

/// Re-base window estimates onto the capture clock and order them in time.
std::vector<VelocityEstimate> velocity_track(std::span<const SensingWindow> windows,
                                             double start_timestamp_s);

/// Per-window core shared by sensing_process and the streaming pipeline.
/// Input is the already-divided grid window D (rows = active bins, cols =
/// window symbols); contents are consumed destructively.
class WindowProcessor {
  public:
    WindowProcessor(std::size_t n_bins, const OfdmNumerology& num, const SensingConfig& cfg);

    SensingWindow process(CMat& d_window, std::uint32_t window_start_symbols) const;

    double doppler_bin_hz() const { return doppler_bin_hz_; }
    double velocity_bin_mps() const; // natural-bin velocity quantum

  private:
    std::size_t n_bins_;
    OfdmNumerology num_;
    SensingConfig cfg_;
    std::size_t pad_len_;
    double doppler_bin_hz_;
    double fc_hz_;
    std::vector<double> hann_;
    double coherent_gain_; // sum(hann) * n_bins, normalizes map amplitudes
};

} // namespace sbfd

#endif // SBFD_SENSING_HPP
