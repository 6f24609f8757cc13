#include "sbfd/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sbfd/fft.hpp"

namespace sbfd {

WindowProcessor::WindowProcessor(std::size_t n_bins, const OfdmNumerology& num,
                                 const SensingConfig& cfg)
    : n_bins_(n_bins), num_(num), cfg_(cfg) {
    if (n_bins_ < 2) throw std::invalid_argument("sensing: need at least 2 subcarriers");
    if (cfg_.window < 2) throw std::invalid_argument("sensing: window must be >= 2");
    if (cfg_.zero_pad_factor < 4)
        throw std::invalid_argument("sensing: zero_pad_factor must be >= 4");
    // round the padded length up to a power of two (>= the requested factor)
    pad_len_ = 1;
    while (pad_len_ < static_cast<std::size_t>(cfg_.window) * cfg_.zero_pad_factor) pad_len_ *= 2;
    doppler_bin_hz_ = 1.0 / (static_cast<double>(cfg_.window) * num_.symbol_duration_s());
    fc_hz_ = cfg_.center_frequency_hz > 0.0 ? cfg_.center_frequency_hz : num_.center_frequency_hz;

    hann_.resize(cfg_.window);
    double hann_sum = 0.0;
    for (std::size_t m = 0; m < cfg_.window; ++m) {
        hann_[m] = 0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(m) /
                                         static_cast<double>(cfg_.window - 1)));
        hann_sum += hann_[m];
    }
    coherent_gain_ = hann_sum * static_cast<double>(n_bins_);
    fft_warm(pad_len_);
    fft_warm(n_bins_);
}

double WindowProcessor::velocity_bin_mps() const {
    return doppler_bin_hz_ * kSpeedOfLight / (2.0 * fc_hz_);
}

SensingWindow WindowProcessor::process(CMat& d, std::uint32_t window_start_symbols) const {
    const std::size_t w = cfg_.window;
    const std::size_t p = pad_len_;
    if (d.rows != n_bins_ || d.cols != w)
        throw std::invalid_argument("sensing: window shape mismatch");

    double input_power = 0.0;
    for (const auto& v : d.v) input_power += std::norm(v);
    if (input_power <= 0.0) throw std::runtime_error("sensing: all-zero window");

    if (cfg_.clutter_removal) {
        for (std::size_t r = 0; r < n_bins_; ++r) {
            cplx mean = 0.0;
            for (std::size_t m = 0; m < w; ++m) mean += d.at(r, m);
            mean /= static_cast<double>(w);
            for (std::size_t m = 0; m < w; ++m) d.at(r, m) -= mean;
        }
    }

    // range transform first (inverse DFT across subcarriers per symbol, with
    // the slow-time Hann applied as a per-column scalar), then the Doppler
    // DFT per range bin; the two transforms commute and this ordering does
    // pad-factor times fewer range transforms.
    CMat range_slow(n_bins_, w);
    {
        const auto wl = static_cast<long long>(w);
#pragma omp parallel
        {
            std::vector<cplx> in(n_bins_);
#pragma omp for schedule(static)
            for (long long m = 0; m < wl; ++m) {
                const auto mm = static_cast<std::size_t>(m);
                const cplx* src = d.col(mm);
                for (std::size_t r = 0; r < n_bins_; ++r) in[r] = src[r] * hann_[mm];
                fft_inverse(n_bins_, in.data(), range_slow.col(mm));
            }
        }
    }

    RangeDopplerMap map;
    map.range_bins = n_bins_;
    map.doppler_bins = p;
    map.values.resize(n_bins_ * p);
    map.range_resolution_m =
        kSpeedOfLight / (2.0 * static_cast<double>(n_bins_) * num_.subcarrier_spacing_hz());
    map.doppler_resolution_hz = doppler_bin_hz_;
    map.window_start_s = static_cast<double>(window_start_symbols) * num_.symbol_duration_s();

    const double norm = 1.0 / coherent_gain_;
    const double norm2 = norm * norm;
    {
        const auto nb = static_cast<long long>(n_bins_);
#pragma omp parallel
        {
            std::vector<cplx> in(p), out(p);
#pragma omp for schedule(static)
            for (long long l = 0; l < nb; ++l) {
                const auto ll = static_cast<std::size_t>(l);
                for (std::size_t m = 0; m < w; ++m) in[m] = range_slow.at(ll, m);
                std::fill(in.begin() + static_cast<std::ptrdiff_t>(w), in.end(), cplx(0.0));
                fft_forward(p, in.data(), out.data());
                double* row = map.values.data() + ll * p;
                // fftshift: row index q holds FFT bin (q + p/2) mod p
                for (std::size_t q = 0; q < p / 2; ++q) row[q] = std::norm(out[q + p / 2]) * norm2;
                for (std::size_t q = p / 2; q < p; ++q) row[q] = std::norm(out[q - p / 2]) * norm2;
            }
        }
    }

    // peak outside the zero-Doppler ridge
    const auto half = static_cast<long long>(p / 2);
    const double pad_per_natural = static_cast<double>(p) / static_cast<double>(w);
    const double excl = cfg_.dc_exclusion_bins * pad_per_natural;
    auto allowed = [&](std::size_t q) {
        return std::abs(static_cast<double>(static_cast<long long>(q) - half)) >= excl;
    };

    double peak = -1.0;
    std::size_t peak_q = 0, peak_r = 0;
    std::vector<double> range_integrated;
    if (cfg_.integrate_range) {
        range_integrated.resize(p, 0.0);
        for (std::size_t r = 0; r < n_bins_; ++r) {
            const double* row = map.values.data() + r * p;
            for (std::size_t q = 0; q < p; ++q) range_integrated[q] += row[q];
        }
        for (std::size_t q = 0; q < p; ++q)
            if (allowed(q) && range_integrated[q] > peak) {
                peak = range_integrated[q];
                peak_q = q;
            }
    } else {
        for (std::size_t r = 0; r < n_bins_; ++r) {
            const double* row = map.values.data() + r * p;
            for (std::size_t q = 0; q < p; ++q)
                if (row[q] > peak && allowed(q)) {
                    peak = row[q];
                    peak_q = q;
                    peak_r = r;
                }
        }
    }

    // median floor over the included cells
    std::vector<double> pool;
    if (cfg_.integrate_range) {
        pool.reserve(p);
        for (std::size_t q = 0; q < p; ++q)
            if (allowed(q)) pool.push_back(range_integrated[q]);
    } else {
        // subsample range rows for the floor estimate; plenty for a median
        const std::size_t rstride = std::max<std::size_t>(1, n_bins_ / 64);
        pool.reserve((n_bins_ / rstride + 1) * p);
        for (std::size_t r = 0; r < n_bins_; r += rstride) {
            const double* row = map.values.data() + r * p;
            for (std::size_t q = 0; q < p; ++q)
                if (allowed(q)) pool.push_back(row[q]);
        }
    }
    double floor_power = 0.0;
    if (!pool.empty()) {
        auto mid = pool.begin() + static_cast<std::ptrdiff_t>(pool.size() / 2);
        std::nth_element(pool.begin(), mid, pool.end());
        floor_power = *mid;
    }

    // quadratic interpolation across Doppler around the peak
    auto value_at = [&](std::size_t q) {
        return cfg_.integrate_range ? range_integrated[q] : map.at(peak_r, q);
    };
    double delta = 0.0;
    if (peak > 0.0 && peak_q > 0 && peak_q + 1 < p) {
        const double pm = value_at(peak_q - 1), p0 = value_at(peak_q), pp = value_at(peak_q + 1);
        const double denom = pm - 2.0 * p0 + pp;
        if (denom < 0.0) delta = std::clamp(0.5 * (pm - pp) / denom, -0.5, 0.5);
    }

    SensingWindow out;
    out.window_start_symbols = window_start_symbols;
    out.estimate.timestamp_s =
        (static_cast<double>(window_start_symbols) + static_cast<double>(w) / 2.0) *
        num_.symbol_duration_s();

    const double pad_bin_hz = 1.0 / (static_cast<double>(p) * num_.symbol_duration_s());
    const double f_peak =
        (static_cast<double>(static_cast<long long>(peak_q) - half) + delta) * pad_bin_hz;

    // a zero floor on a non-zero map means a noiseless, clean peak
    double snr_db = -200.0;
    if (peak > 0.0) snr_db = floor_power > 0.0 ? 10.0 * std::log10(peak / floor_power) : 200.0;
    out.estimate.peak_snr_db = snr_db;
    out.estimate.mover_detected =
        peak >= cfg_.min_peak_power && snr_db >= cfg_.detection_threshold_db;
    // no mover -> the scene is static up to the DC ridge; report zero velocity
    out.estimate.velocity_mps =
        out.estimate.mover_detected ? -f_peak * kSpeedOfLight / (2.0 * fc_hz_) : 0.0;

    if (cfg_.keep_maps) out.map = std::move(map);
    return out;
}

std::vector<SensingWindow> sensing_process(const SubbandGrid& rx, const SubbandGrid& tx_known,
                                           const SensingConfig& cfg) {
    if (rx.m.rows != tx_known.m.rows || rx.m.cols != tx_known.m.cols)
        throw std::invalid_argument("sensing_process: grid shape mismatch");
    if (rx.alloc.active != tx_known.alloc.active)
        throw std::invalid_argument("sensing_process: allocation mismatch");
    if (rx.m.cols < cfg.window)
        throw std::invalid_argument("sensing_process: insufficient symbols for one window");
    if (cfg.hop < 1) throw std::invalid_argument("sensing_process: hop must be >= 1");

    // reciprocal filtering over all known bins
    CMat d_all(rx.m.rows, rx.m.cols);
    for (std::size_t i = 0; i < rx.m.v.size(); ++i) {
        if (std::abs(tx_known.m.v[i]) < 1e-12)
            throw std::runtime_error("sensing_process: zero transmit symbol on a known bin");
        d_all.v[i] = rx.m.v[i] / tx_known.m.v[i];
    }

    SensingConfig wcfg = cfg;
    if (wcfg.center_frequency_hz <= 0.0)
        wcfg.center_frequency_hz = rx.numerology.center_frequency_hz;
    WindowProcessor proc(rx.m.rows, rx.numerology, wcfg);

    std::vector<SensingWindow> windows;
    for (std::size_t start = 0; start + cfg.window <= rx.m.cols;
         start += static_cast<std::size_t>(cfg.hop)) {
        CMat d(rx.m.rows, cfg.window);
        std::copy(d_all.col(start), d_all.col(start) + rx.m.rows * cfg.window, d.v.begin());
        windows.push_back(proc.process(d, static_cast<std::uint32_t>(start)));
    }
    return windows;
}

std::vector<VelocityEstimate> velocity_track(std::span<const SensingWindow> windows,
                                             double start_timestamp_s) {
    std::vector<VelocityEstimate> out;
    out.reserve(windows.size());
    for (const auto& w : windows) {
        VelocityEstimate e = w.estimate;
        e.timestamp_s += start_timestamp_s;
        out.push_back(e);
    }
    std::sort(out.begin(), out.end(),
              [](const VelocityEstimate& a, const VelocityEstimate& b) {
                  return a.timestamp_s < b.timestamp_s;
              });
    return out;
}

} // namespace sbfd
