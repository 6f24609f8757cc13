#ifndef SBFD_PIPELINE_HPP
#define SBFD_PIPELINE_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sbfd/metrics.hpp"
#include "sbfd/scenario.hpp"
#include "sbfd/sensing.hpp"
#include "sbfd/spectrum.hpp"

namespace sbfd {

struct RunOptions {
    std::optional<Mode> mode_override;
    std::uint32_t runs = 6;
    std::optional<std::uint64_t> seed_override;
    std::filesystem::path out_dir;
    int threads = 0; // >0 bounds OpenMP parallelism
    std::optional<bool> identical_payload_override;
};

struct ArtifactEntry {
    std::string relpath; // relative to the output directory
    std::uint64_t bytes = 0;
    std::uint32_t crc32 = 0;
};

struct RunManifest {
    std::string scenario_file;
    std::string scenario_name;
    Mode mode = Mode::Sbfd;
    std::uint32_t runs = 0;
    std::uint64_t seed = 0;
    std::vector<ArtifactEntry> artifacts;
};

/// Per-node sensing output of one run, on the testbed clock.
struct NodeRunOutput {
    NodeId node = NodeId::Node1;
    std::vector<VelocityEstimate> estimates;
    VelocitySeries truth; // ground truth resampled onto the estimate timestamps
};

struct CommRunOutput {
    NodeId rx_node = NodeId::Node1;
    std::uint64_t bits_compared = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t erasures = 0;
    double ber = 0.0;
    std::vector<cplx> constellation; // subsampled equalized data symbols
};

struct SingleRunResult {
    std::array<NodeRunOutput, 3> sensing;
    std::vector<CommRunOutput> comm; // one per receiver; SBFD mode only
    PsdSeries rx_psd;                // received composite at node 2
    GroundTruthTrack aligned_track;  // testbed clock
};

/// Full generate -> propagate -> receive chain for one run, streamed in
/// symbol chunks so arbitrarily long captures stay in bounded memory.
SingleRunResult execute_run(const Scenario& scenario, Mode mode, std::uint32_t run_index);

/// Batch entry point: executes `runs` runs, writes velocity/truth CSVs per
/// run, aggregate RMSE / BER / constellation / PSD artifacts and the
/// manifest (written last). Deterministic for fixed (scenario, seed, runs).
RunManifest run_simulation(const Scenario& scenario, const std::string& scenario_label,
                           const RunOptions& opt);
RunManifest run_simulation(const std::filesystem::path& scenario_file, const RunOptions& opt);

/// PSD / PAPR / allocation audit artifacts for the scenario's transmit
/// waveforms (composite by default, single node when given).
void inspect_waveform(const Scenario& scenario, std::optional<NodeId> node,
                      const std::filesystem::path& out_dir);

/// Lossless cf32 <-> csv conversion dispatched on the file extensions.
void convert_iq_file(const std::filesystem::path& in, const std::filesystem::path& out);

/// Deterministic QPSK payload bits for one comm symbol (shared by the
/// transmit and BER-comparison paths).
std::vector<std::uint8_t> comm_symbol_bits(const Scenario& s, std::uint32_t run_index,
                                           int node_idx, std::uint64_t symbol_index,
                                           std::size_t nbits);

} // namespace sbfd

#endif // SBFD_PIPELINE_HPP
