#include "sbfd/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sbfd/fft.hpp"
#include "sbfd/rng.hpp"

namespace sbfd {

namespace {

constexpr double kMinDistance = 1e-3; // m

double norm3(const Vec3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

Vec3 sub3(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 interpolate_position(const GroundTruthTrack& track, double t_s) {
    const double idx = (t_s - track.start_time_s) * track.sample_rate_hz;
    const auto n = track.size();
    if (idx <= 0.0) return track.positions.front();
    if (idx >= static_cast<double>(n - 1)) return track.positions.back();
    const auto i0 = static_cast<std::size_t>(idx);
    const double a = idx - static_cast<double>(i0);
    Vec3 p;
    for (int k = 0; k < 3; ++k)
        p[k] = (1.0 - a) * track.positions[i0][k] + a * track.positions[i0 + 1][k];
    return p;
}

} // namespace

TargetState target_state(const GroundTruthTrack& track, double t_s) {
    track.validate();
    if (t_s < track.start_time_s - 1e-12 || t_s > track.end_time_s() + 1e-12)
        throw std::invalid_argument("target_state: time outside trajectory span");

    TargetState st;
    st.position = interpolate_position(track, t_s);

    const double h = 0.5 / track.sample_rate_hz;
    const double lo = std::max(t_s - h, track.start_time_s);
    const double hi = std::min(t_s + h, track.end_time_s());
    const Vec3 pa = interpolate_position(track, lo);
    const Vec3 pb = interpolate_position(track, hi);
    const double dt = hi - lo;
    for (int k = 0; k < 3; ++k) st.velocity[k] = dt > 0.0 ? (pb[k] - pa[k]) / dt : 0.0;
    return st;
}

std::vector<PathTap> compute_paths(const Scenario& scenario, const GroundTruthTrack& aligned_track,
                                   double t_s, NodeId tx_node, NodeId rx_node, Mode mode) {
    const auto& tx = scenario.nodes[static_cast<std::size_t>(node_index(tx_node))];
    const auto& rx = scenario.nodes[static_cast<std::size_t>(node_index(rx_node))];
    const double fc = center_frequencies(scenario, mode)[static_cast<std::size_t>(node_index(tx_node))];
    const Vec3 tx_ant = tx.tx_antenna();
    const Vec3 rx_ant = rx.rx_antenna();
    const double start_delay =
        static_cast<double>(tx.start_offset_samples) / scenario.numerology.sample_rate_hz;

    std::vector<PathTap> taps;
    taps.reserve(2);

    PathTap direct;
    direct.kind = TapKind::Direct;
    const double d_direct = norm3(sub3(tx_ant, rx_ant));
    direct.delay_s = d_direct / kSpeedOfLight + start_delay;
    direct.doppler_hz = 0.0;
    direct.gain = tx_node == rx_node
                      ? cplx(scenario.self_leakage_gain, 0.0)
                      : cplx(scenario.direct_path_gain / std::max(d_direct, kMinDistance), 0.0);
    taps.push_back(direct);

    const TargetState st = target_state(aligned_track, t_s);
    const Vec3 to_tgt_from_tx = sub3(st.position, tx_ant);
    const Vec3 to_tgt_from_rx = sub3(st.position, rx_ant);
    const double d1 = norm3(to_tgt_from_tx);
    const double d2 = norm3(to_tgt_from_rx);
    if (d1 < kMinDistance || d2 < kMinDistance)
        throw std::runtime_error("compute_paths: target coincides with a node antenna");

    PathTap refl;
    refl.kind = TapKind::TargetReflection;
    refl.delay_s = (d1 + d2) / kSpeedOfLight + start_delay;
    const double range_rate =
        dot3(to_tgt_from_tx, st.velocity) / d1 + dot3(to_tgt_from_rx, st.velocity) / d2;
    refl.doppler_hz = -(fc / kSpeedOfLight) * range_rate;
    refl.gain = cplx(scenario.target_rcs_gain / (d1 * d2), 0.0);
    taps.push_back(refl);
    return taps;
}

void apply_taps_to_column(const OfdmNumerology& num, double fc_tx_hz,
                          std::span<const PathTap> taps, const cplx* in_col, cplx* accum_col) {
    const std::size_t n = num.fft_size;
    const double df = num.subcarrier_spacing_hz();
    const auto dc0 = static_cast<double>(n / 2);
    for (const auto& tap : taps) {
        if (tap.gain == cplx(0.0)) continue;
        const double tau = tap.delay_s;
        // phase at bin 0 (lowest frequency) and constant per-bin ratio
        const double phase0 = -2.0 * M_PI * (fc_tx_hz + (0.0 - dc0) * df) * tau;
        cplx coeff = tap.gain * std::polar(1.0, phase0);
        const cplx step = std::polar(1.0, -2.0 * M_PI * df * tau);
        for (std::size_t r = 0; r < n; ++r) {
            accum_col[r] += in_col[r] * coeff;
            coeff *= step;
        }
    }
}

IqBuffer propagate(std::span<const IqBuffer> tx_buffers, const Scenario& scenario,
                   const GroundTruthTrack& aligned_track, NodeId rx_node, Mode mode, Exec exec) {
    if (tx_buffers.size() != 3) throw std::invalid_argument("propagate: need 3 tx buffers");
    const auto fcs = center_frequencies(scenario, mode);
    const double fc_rx = fcs[static_cast<std::size_t>(node_index(rx_node))];

    const IqBuffer* proto = nullptr;
    for (const auto& b : tx_buffers) {
        if (b.samples.empty()) continue;
        if (!proto) {
            proto = &b;
        } else {
            if (!(b.numerology == proto->numerology))
                throw std::invalid_argument("propagate: numerology mismatch across buffers");
            if (b.samples.size() != proto->samples.size() ||
                b.start_timestamp_s != proto->start_timestamp_s)
                throw std::invalid_argument("propagate: tx buffers must share length and start");
        }
    }
    if (!proto) throw std::invalid_argument("propagate: all transmitters silent");

    const auto& num = proto->numerology;
    const std::size_t sps = num.samples_per_symbol();
    const std::size_t nsym = proto->samples.size() / sps;
    if (proto->samples.size() % sps != 0)
        throw std::invalid_argument("propagate: buffer length not a whole number of symbols");

    IqBuffer out;
    out.numerology = num;
    out.start_timestamp_s = proto->start_timestamp_s;
    out.samples.assign(proto->samples.size(), cplx(0.0));

    std::vector<int> contributing;
    for (int i = 0; i < 3; ++i) {
        if (tx_buffers[static_cast<std::size_t>(i)].samples.empty()) continue;
        if (fcs[static_cast<std::size_t>(i)] == fc_rx) contributing.push_back(i);
    }
    if (contributing.empty()) throw std::invalid_argument("propagate: no in-band transmitter");

    fft_warm(num.fft_size);
    const double t_sym = num.symbol_duration_s();
    const auto m_total = static_cast<long long>(nsym);
#pragma omp parallel if (exec == Exec::Parallel)
    {
        std::vector<cplx> scratch(num.fft_size), col(num.fft_size), accum(num.fft_size);
#pragma omp for schedule(static)
        for (long long m = 0; m < m_total; ++m) {
            const auto sm = static_cast<std::size_t>(m);
            const double t = out.start_timestamp_s + static_cast<double>(m) * t_sym;
            std::fill(accum.begin(), accum.end(), cplx(0.0));
            for (int i : contributing) {
                const auto& txb = tx_buffers[static_cast<std::size_t>(i)];
                demodulate_symbol(num, txb.samples.data() + sm * sps, col.data(), scratch.data());
                const auto taps =
                    compute_paths(scenario, aligned_track, t, node_from_index(i), rx_node, mode);
                apply_taps_to_column(num, fcs[static_cast<std::size_t>(i)], taps, col.data(),
                                     accum.data());
            }
            modulate_symbol(num, accum.data(), out.samples.data() + sm * sps, scratch.data());
        }
    }
    return out;
}

void add_noise_blocks(std::span<cplx> samples, std::size_t block_len, std::uint64_t seed,
                      double sigma, std::uint64_t first_block) {
    if (block_len == 0) throw std::invalid_argument("add_noise_blocks: block_len must be > 0");
    const auto nblocks = static_cast<long long>((samples.size() + block_len - 1) / block_len);
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < nblocks; ++b) {
        Rng rng(mix64(seed, kStreamNoise, first_block + static_cast<std::uint64_t>(b)));
        const std::size_t lo = static_cast<std::size_t>(b) * block_len;
        const std::size_t hi = std::min(lo + block_len, samples.size());
        for (std::size_t i = lo; i < hi; ++i) samples[i] += sigma * rng.gaussian_c();
    }
}

IqBuffer add_noise(const IqBuffer& buffer, double snr_db, std::uint64_t seed) {
    if (std::isnan(snr_db)) throw std::invalid_argument("add_noise: snr_db is NaN");
    IqBuffer out = buffer;
    if (std::isinf(snr_db) && snr_db > 0.0) return out;
    if (buffer.samples.empty()) throw std::invalid_argument("add_noise: empty buffer");

    double power = 0.0;
    for (const auto& s : buffer.samples) power += std::norm(s);
    power /= static_cast<double>(buffer.samples.size());
    if (power <= 0.0) throw std::invalid_argument("add_noise: all-zero signal, SNR undefined");

    const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
    add_noise_blocks(out.samples, buffer.numerology.samples_per_symbol(), seed, sigma, 0);
    return out;
}

} // namespace sbfd
