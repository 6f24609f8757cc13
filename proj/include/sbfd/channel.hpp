#ifndef SBFD_CHANNEL_HPP
#define SBFD_CHANNEL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "sbfd/grid.hpp"
#include "sbfd/modulator.hpp"
#include "sbfd/scenario.hpp"
#include "sbfd/track.hpp"

namespace sbfd {

enum class TapKind { Direct, TargetReflection };

struct PathTap {
    double delay_s = 0.0;
    double doppler_hz = 0.0;
    cplx gain = 0.0;
    TapKind kind = TapKind::Direct;
};

struct TargetState {
    Vec3 position{};
    Vec3 velocity{};
};

/// Position by linear interpolation between track samples, velocity by the
/// central difference of interpolated positions. Throws outside the span.
TargetState target_state(const GroundTruthTrack& track, double t_s);

/// Taps between a (tx, rx) node pair at time t: one static Direct tap (the
/// residual self-leakage tap when tx == rx) and one moving TargetReflection
/// tap. Doppler is -(fc/c) * d/dt(round-trip distance), so an approaching
/// target has positive Doppler.
std::vector<PathTap> compute_paths(const Scenario& scenario, const GroundTruthTrack& aligned_track,
                                   double t_s, NodeId tx_node, NodeId rx_node, Mode mode);

/// Accumulate taps applied to one frequency-domain symbol column:
/// accum[n] += in[n] * sum_taps gain * exp(-j 2 pi (fc + (n - n0) df) tau).
/// The carrier-phase term exp(-j 2 pi fc tau) carries the Doppler evolution
/// as tau is re-evaluated symbol by symbol.
void apply_taps_to_column(const OfdmNumerology& num, double fc_tx_hz,
                          std::span<const PathTap> taps, const cplx* in_col, cplx* accum_col);

/// Received baseband signal at rx_node per the superposition model: each
/// contributing transmitter's grid is taken per symbol, taps (re-evaluated
/// every symbol, block fading) are applied as frequency-domain phase ramps,
/// and the sum is returned to the time domain. In multiband mode only
/// transmitters sharing the receiver's center frequency contribute. Noise is
/// NOT added here (see add_noise). A transmitter with an empty buffer is
/// treated as silent.
IqBuffer propagate(std::span<const IqBuffer> tx_buffers, const Scenario& scenario,
                   const GroundTruthTrack& aligned_track, NodeId rx_node, Mode mode,
                   Exec exec = Exec::Parallel);

/// Adds circularly-symmetric complex Gaussian noise with variance
/// signal_power / 10^(snr_db/10); deterministic in seed (and independent of
/// chunking: one sub-stream per OFDM symbol block). snr_db = +infinity
/// returns the input unchanged. Throws on an all-zero signal.
IqBuffer add_noise(const IqBuffer& buffer, double snr_db, std::uint64_t seed);

/// In-place noise kernel used by the streaming pipeline: blocks of
/// block_len samples get independent sub-streams seeded by
/// mix64(seed, first_block + i).
void add_noise_blocks(std::span<cplx> samples, std::size_t block_len, std::uint64_t seed,
                      double sigma, std::uint64_t first_block);

} // namespace sbfd

#endif // SBFD_CHANNEL_HPP
