#include "sbfd/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sbfd/fft.hpp"

namespace sbfd {

WelchAccumulator::WelchAccumulator(std::size_t segment_length)
    : nseg_(segment_length), hop_(segment_length / 2), window_(segment_length),
      acc_(segment_length, 0.0) {
    if (segment_length < 2) throw std::invalid_argument("welch: segment_length must be >= 2");
    for (std::size_t i = 0; i < nseg_; ++i) {
        window_[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(i) /
                                           static_cast<double>(nseg_ - 1)));
        window_power_ += window_[i] * window_[i];
    }
    fft_warm(nseg_);
    carry_.reserve(2 * nseg_);
}

void WelchAccumulator::process_segment(const cplx* seg) {
    std::vector<cplx> in(nseg_), out(nseg_);
    for (std::size_t i = 0; i < nseg_; ++i) in[i] = seg[i] * window_[i];
    fft_forward(nseg_, in.data(), out.data());
    for (std::size_t i = 0; i < nseg_; ++i) acc_[i] += std::norm(out[i]);
    ++segments_;
}

void WelchAccumulator::push(std::span<const cplx> samples) {
    carry_.insert(carry_.end(), samples.begin(), samples.end());
    std::size_t start = 0;
    while (start + nseg_ <= carry_.size()) {
        process_segment(carry_.data() + start);
        start += hop_;
    }
    carry_.erase(carry_.begin(), carry_.begin() + static_cast<std::ptrdiff_t>(start));
}

PsdSeries WelchAccumulator::finalize(double sample_rate_hz) const {
    if (segments_ == 0) throw std::runtime_error("welch: no complete segment accumulated");
    PsdSeries out;
    out.freq_offset_hz.resize(nseg_);
    out.power_db.resize(nseg_);
    const double scale = 1.0 / (static_cast<double>(segments_) * window_power_ * sample_rate_hz);
    const double floor_db = -300.0;
    for (std::size_t i = 0; i < nseg_; ++i) {
        // fftshift: output index i holds FFT bin (i + nseg/2) mod nseg
        const std::size_t src = (i + nseg_ / 2) % nseg_;
        const double k = static_cast<double>(i) - static_cast<double>(nseg_ / 2);
        out.freq_offset_hz[i] = k * sample_rate_hz / static_cast<double>(nseg_);
        const double p = acc_[src] * scale;
        out.power_db[i] = p > 0.0 ? 10.0 * std::log10(p) : floor_db;
    }
    return out;
}

PsdSeries psd(const IqBuffer& buffer, std::size_t segment_length) {
    if (buffer.samples.empty()) throw std::invalid_argument("psd: empty buffer");
    if (segment_length > buffer.samples.size())
        throw std::invalid_argument("psd: segment_length exceeds buffer length");
    WelchAccumulator acc(segment_length);
    acc.push(buffer.samples);
    return acc.finalize(buffer.numerology.sample_rate_hz);
}

double papr_db(std::span<const cplx> samples) {
    if (samples.empty()) throw std::invalid_argument("papr: empty input");
    double peak = 0.0, sum = 0.0;
    for (const auto& s : samples) {
        const double p = std::norm(s);
        peak = std::max(peak, p);
        sum += p;
    }
    if (peak <= 0.0) throw std::invalid_argument("papr: all-zero input");
    return 10.0 * std::log10(peak * static_cast<double>(samples.size()) / sum);
}

std::vector<double> papr_per_symbol_db(const IqBuffer& buffer) {
    const std::size_t sps = buffer.numerology.samples_per_symbol();
    const std::size_t nsym = buffer.samples.size() / sps;
    std::vector<double> out(nsym);
    for (std::size_t s = 0; s < nsym; ++s)
        out[s] = papr_db(std::span<const cplx>(buffer.samples.data() + s * sps, sps));
    return out;
}

} // namespace sbfd
