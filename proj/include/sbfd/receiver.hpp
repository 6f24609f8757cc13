#ifndef SBFD_RECEIVER_HPP
#define SBFD_RECEIVER_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "sbfd/grid.hpp"

namespace sbfd {

/// Keep only the allocation's active subcarrier rows (ascending bin order).
SubbandGrid extract_subband(const SymbolGrid& grid, const SubbandAllocation& alloc);

/// Per-subcarrier, per-symbol channel response on the active bins.
struct ChannelEstimate {
    CMat response; // rows = active bins of the allocation
};

/// interpolate == true: pilot-based estimate, Hhat = Y/X on pilot bins then
/// linear interpolation across the remaining active bins per symbol (edges
/// hold the nearest pilot value).
/// interpolate == false: Hhat = Y/X on every active bin using the full known
/// transmit grid (sensing-style, all bins known).
/// Throws when a division bin carries |X| < 1e-12.
ChannelEstimate estimate_channel(const SubbandGrid& rx, const SubbandGrid& tx_known,
                                 bool interpolate);

struct CommConfig {
    std::uint32_t pilot_avg_symbols = 64; // slow-time moving average; 1 = per-symbol
    double h_floor = 1e-6;                // below this |Hhat| a data bin is erased
};

struct CommResult {
    std::vector<std::uint8_t> bits; // decoded; erased bins contribute 0s but are not compared
    std::vector<cplx> equalized;    // ZF-equalized data symbols, symbol-major
    double ber = 0.0;               // bit_errors / bits_compared
    std::uint64_t bits_compared = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t erasures = 0; // erased data bins (reported separately from BER)
};

/// QPSK communication receiver: pilot channel estimate (optionally smoothed
/// over slow time), linear interpolation in frequency, zero-forcing
/// equalization, nearest-neighbor demapping and BER against tx_bits.
/// tx_bits must hold 2 * data_bins * num_symbols entries.
CommResult comm_process(const SubbandGrid& rx, std::span<const std::uint8_t> tx_bits,
                        const CommConfig& cfg = {});

/// Coarse symbol-timing search correlating the cyclic prefix with the symbol
/// tail; returns the sample offset in [0, samples_per_symbol). Not used by
/// the simulation pipeline (symbols are generated aligned) but available for
/// externally captured buffers.
std::size_t cp_timing_search(const IqBuffer& buffer, std::size_t max_symbols = 8);

} // namespace sbfd

#endif // SBFD_RECEIVER_HPP
