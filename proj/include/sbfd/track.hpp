#ifndef SBFD_TRACK_HPP
#define SBFD_TRACK_HPP

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace sbfd {

using Vec3 = std::array<double, 3>;

/// Motion-capture style target trajectory: fixed-rate 3-D positions.
struct GroundTruthTrack {
    double sample_rate_hz = 100.0;
    double start_time_s = 0.0;
    std::vector<Vec3> positions;
    std::string label;

    std::size_t size() const { return positions.size(); }
    double time_at(std::size_t i) const {
        return start_time_s + static_cast<double>(i) / sample_rate_hz;
    }
    double end_time_s() const { return time_at(positions.empty() ? 0 : positions.size() - 1); }
    double span_s() const { return static_cast<double>(positions.size() - 1) / sample_rate_hz; }

    void validate() const; // >= 2 samples, rate > 0, finite coordinates
};

/// CSV loader: header then t_s,x_m,y_m,z_m rows at a nominal rate. Extra
/// columns are ignored with a warning. Rejects non-monotonic or duplicated
/// timestamps and gaps > 2 sample periods.
GroundTruthTrack load_track(const std::filesystem::path& path);

/// Export in the same CSV format load_track reads.
void save_track(const std::filesystem::path& path, const GroundTruthTrack& track);

enum class TrackKind { Linear, Circular, Waypoints };

struct TrackParams {
    // Linear
    Vec3 start{0, 0, 0};
    Vec3 velocity_mps{0, 0, 0};
    // Circular (XY plane around center)
    Vec3 center{0, 0, 0};
    double radius_m = 1.0;
    double period_s = 8.0;
    double phase_rad = 0.0;
    // Waypoints: positions hit at the given times, linear in between,
    // clamped outside. times must be strictly increasing.
    std::vector<double> waypoint_times_s;
    std::vector<Vec3> waypoints;
};

GroundTruthTrack synthesize_track(TrackKind kind, const TrackParams& params, double duration_s,
                                  double rate_hz);

/// Timestamp alignment between the testbed clock and the track clock.
/// offset = testbed_start - track.start_time; aligned time 0 is the testbed
/// start, so an aligned sample time is (raw time - track start) - offset.
struct AlignedTimeline {
    double offset_s = 0.0;
    double aligned_start_s = 0.0;
};

AlignedTimeline align_timelines(double testbed_start_s, const GroundTruthTrack& track);

/// Rebase a track onto the testbed clock (samples before aligned time 0
/// keep negative timestamps; comparisons simply never query them).
GroundTruthTrack apply_alignment(const GroundTruthTrack& track, const AlignedTimeline& tl);

struct VelocitySeries {
    std::vector<double> t_s;
    std::vector<double> v_mps;
};

/// Radial velocity of the track relative to a fixed node position:
/// central differences of range, then a moving average over
/// smoothing_window samples (odd). Positive while receding.
VelocitySeries derive_radial_velocity(const GroundTruthTrack& track, const Vec3& node_position,
                                      std::size_t smoothing_window);

/// Linear interpolation of a series onto target timestamps; throws when a
/// target timestamp falls outside the series span.
std::vector<double> resample_to(const VelocitySeries& series, std::span<const double> target_t_s);

} // namespace sbfd

#endif // SBFD_TRACK_HPP
