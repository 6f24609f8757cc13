#ifndef SBFD_SCENARIO_HPP
#define SBFD_SCENARIO_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "sbfd/allocation.hpp"
#include "sbfd/numerology.hpp"
#include "sbfd/track.hpp"

namespace sbfd {

enum class Mode { Sbfd, Multiband, SameBand };

const char* to_string(Mode mode);
Mode mode_from_string(const std::string& s);

NodeId node_from_index(int idx); // 0-based

struct NodeGeometry {
    Vec3 position{0.0, 0.0, 0.0};
    Vec3 tx_offset{0.0, 0.0, 0.0};
    Vec3 rx_offset{0.0, 0.0, 0.0};
    std::int64_t start_offset_samples = 0; // emulated tx start-time offset

    Vec3 tx_antenna() const {
        return {position[0] + tx_offset[0], position[1] + tx_offset[1],
                position[2] + tx_offset[2]};
    }
    Vec3 rx_antenna() const {
        return {position[0] + rx_offset[0], position[1] + rx_offset[1],
                position[2] + rx_offset[2]};
    }
};

struct TrajectorySpec {
    std::string kind = "linear"; // linear | circular | waypoints | file
    double rate_hz = 100.0;
    double duration_s = 6.0;
    TrackParams params;
    std::filesystem::path file;
    // Per-run variation for synthesized tracks: speed/period scale in
    // [1-j, 1+j] and a start/center offset of up to this many meters.
    double per_run_speed_jitter = 0.0;
    double per_run_offset_m = 0.0;
};

struct SensingOptions {
    std::uint32_t window_symbols = 1216;
    std::uint32_t window_hop = 304;
    std::uint32_t zero_pad_factor = 4;
    double dc_exclusion_bins = 1.0;        // natural Doppler bins excluded around 0
    bool clutter_removal = true;           // slow-time mean removal per subcarrier
    double detection_threshold_db = 15.0;  // peak-to-floor needed to declare a mover
    bool integrate_range = false;          // Doppler profile integrated over range bins
};

/// Everything that determines a simulation run.
struct Scenario {
    std::string name = "scenario";
    Mode mode = Mode::Sbfd;
    std::uint64_t seed = 1;
    double duration_s = 5.0;
    double snr_db = 30.0; // +infinity disables noise
    double direct_path_gain = 1.0;
    double self_leakage_gain = 0.01; // -40 dB static Tx->Rx leakage tap
    double target_rcs_gain = 1.0;
    bool identical_payload = false; // same ZC root on every sensing node
    std::uint64_t payload_salt = 0; // perturbs only the QPSK bit streams
    OfdmNumerology numerology;
    std::optional<std::array<double, 3>> center_frequencies_hz; // else mode defaults
    std::uint32_t pilot_spacing = 20;
    // coprime with both the 568-bin subband and 1824-bin full-band payload
    // lengths; chosen for low PAPR under the unit-pilot comb and low mutual
    // cross-correlation
    std::array<std::uint32_t, 3> zc_roots{41, 59, 25};
    std::uint32_t comm_pilot_avg_symbols = 64;
    SensingOptions sensing;
    double testbed_start_s = 0.0; // t1 on the trajectory clock
    std::array<NodeGeometry, 3> nodes;
    TrajectorySpec trajectory;

    void validate() const;
};

Scenario load_scenario(const std::filesystem::path& path);

/// Per-node center frequencies for the effective mode (multiband defaults to
/// center +- 60 MHz per Table-II-style spacing). Validates that SBFD and
/// same-band use a single shared frequency.
std::array<double, 3> center_frequencies(const Scenario& s, Mode mode);

/// Per-node allocations for the effective mode: SBFD uses the three-subband
/// split, multiband and same-band the full-band sensing allocation.
std::array<SubbandAllocation, 3> scenario_allocations(const Scenario& s, Mode mode);

/// ZC root for a sensing node under the effective payload policy.
std::uint32_t zc_root_for(const Scenario& s, int node_idx);

/// Materialize the run's raw trajectory (trajectory clock), applying the
/// seeded per-run variation for synthesized kinds.
GroundTruthTrack make_run_track(const Scenario& s, std::uint32_t run_index);

} // namespace sbfd

#endif // SBFD_SCENARIO_HPP
