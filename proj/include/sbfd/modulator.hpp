#ifndef SBFD_MODULATOR_HPP
#define SBFD_MODULATOR_HPP

#include <span>

#include "sbfd/grid.hpp"

namespace sbfd {

/// Execution policy for the data-parallel kernels. Parallel and Serial
/// produce identical output (each symbol writes its own slot).
enum class Exec { Serial, Parallel };

/// Fill a transmit grid: data bins carry payload in ascending bin order,
/// pilot bins are 1+0j, guard bins 0. The payload covers one symbol and is
/// repeated across all num_symbols columns (sensing convention).
SymbolGrid assemble_grid(const SubbandAllocation& alloc, const OfdmNumerology& num,
                         std::span<const cplx> payload, std::size_t num_symbols);

/// Per-symbol payload variant: payload_cols has alloc.data.size() rows and
/// one column per OFDM symbol (communication convention).
SymbolGrid assemble_grid(const SubbandAllocation& alloc, const OfdmNumerology& num,
                         const CMat& payload_cols);

/// Write one assembled column into dst (length fft_size).
void assemble_symbol(const SubbandAllocation& alloc, std::span<const cplx> payload, cplx* dst);

/// OFDM modulation: per symbol, map bin r (0-based; DC at fft_size/2) to
/// baseband frequency (r - fft_size/2) * subcarrier spacing, inverse DFT
/// scaled by 1/sqrt(N), prepend the cyclic prefix.
IqBuffer modulate(const SymbolGrid& grid, Exec exec = Exec::Parallel);

/// Inverse of modulate: drop CP, forward DFT scaled by 1/sqrt(N), undo the
/// DC-centering shift. A trailing partial symbol is discarded with a warning
/// on stderr. Throws if the buffer is shorter than one symbol.
SymbolGrid ofdm_demodulate(const IqBuffer& buffer, Exec exec = Exec::Parallel);

// Single-symbol kernels shared by the streaming pipeline.
void modulate_symbol(const OfdmNumerology& num, const cplx* grid_col, cplx* out_samples,
                     cplx* scratch);
void demodulate_symbol(const OfdmNumerology& num, const cplx* in_samples, cplx* grid_col,
                       cplx* scratch);

} // namespace sbfd

#endif // SBFD_MODULATOR_HPP
