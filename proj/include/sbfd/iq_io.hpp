#ifndef SBFD_IQ_IO_HPP
#define SBFD_IQ_IO_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sbfd/grid.hpp"

namespace sbfd {

/// Interleaved little-endian float32 (I then Q per sample).
std::vector<std::uint8_t> serialize_iq(std::span<const cplx> samples);

/// Inverse of serialize_iq. Throws if the byte count is not a multiple of 8.
std::vector<cplx> deserialize_iq(std::span<const std::uint8_t> bytes);

/// Write samples to `path` (.cf32) and a JSON sidecar `path + ".json"` with
/// sample_rate_hz, center_frequency_hz and start_timestamp_s.
void write_cf32(const std::filesystem::path& path, const IqBuffer& buffer);

/// Read a .cf32 file; numerology supplies defaults when no sidecar exists.
IqBuffer read_cf32(const std::filesystem::path& path, const OfdmNumerology& numerology);

/// Lossless .cf32 <-> CSV ("i,q" per row, float32 round-trip exact).
void cf32_to_csv(const std::filesystem::path& in, const std::filesystem::path& out);
void csv_to_cf32(const std::filesystem::path& in, const std::filesystem::path& out);

} // namespace sbfd

#endif // SBFD_IQ_IO_HPP
