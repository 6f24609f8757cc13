#include "sbfd/track.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sbfd {

namespace {

double dist(const Vec3& a, const Vec3& b) {
    const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

} // namespace

void GroundTruthTrack::validate() const {
    if (sample_rate_hz <= 0.0) throw std::runtime_error("track: sample_rate must be > 0");
    if (positions.size() < 2) throw std::runtime_error("track: needs at least 2 samples");
    for (const auto& p : positions)
        for (double c : p)
            if (!std::isfinite(c)) throw std::runtime_error("track: non-finite coordinate");
}

GroundTruthTrack load_track(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open track file " + path.string());
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("track file is empty");

    // count header columns; anything beyond t,x,y,z is ignored
    std::size_t cols = 1;
    for (char c : line)
        if (c == ',') ++cols;
    if (cols < 4) throw std::runtime_error("track header needs t_s,x_m,y_m,z_m");
    if (cols > 4)
        std::fprintf(stderr, "load_track: ignoring %zu extra column(s) in %s\n", cols - 4,
                     path.string().c_str());

    std::vector<double> times;
    std::vector<Vec3> positions;
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        double t, x, y, z;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &t, &x, &y, &z) != 4)
            throw std::runtime_error("malformed track row at line " + std::to_string(lineno));
        if (!times.empty() && t <= times.back())
            throw std::runtime_error("non-monotonic timestamp at line " + std::to_string(lineno));
        times.push_back(t);
        positions.push_back({x, y, z});
    }
    if (times.size() < 2) throw std::runtime_error("track needs at least 2 samples");

    // nominal period from the median spacing
    std::vector<double> dts(times.size() - 1);
    for (std::size_t i = 0; i + 1 < times.size(); ++i) dts[i] = times[i + 1] - times[i];
    std::vector<double> sorted = dts;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double dt_nominal = sorted[sorted.size() / 2];
    if (dt_nominal <= 0.0) throw std::runtime_error("track has non-positive sample period");
    for (std::size_t i = 0; i < dts.size(); ++i)
        if (dts[i] > 2.0 * dt_nominal + 1e-12)
            throw std::runtime_error("track gap exceeds 2 sample periods after sample " +
                                     std::to_string(i));

    GroundTruthTrack track;
    track.sample_rate_hz = 1.0 / dt_nominal;
    track.start_time_s = times.front();
    track.positions = std::move(positions);
    track.label = path.filename().string();
    track.validate();
    return track;
}

void save_track(const std::filesystem::path& path, const GroundTruthTrack& track) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << "t_s,x_m,y_m,z_m\n";
    char line[160];
    for (std::size_t i = 0; i < track.size(); ++i) {
        std::snprintf(line, sizeof(line), "%.9f,%.9g,%.9g,%.9g\n", track.time_at(i),
                      track.positions[i][0], track.positions[i][1], track.positions[i][2]);
        f << line;
    }
}

GroundTruthTrack synthesize_track(TrackKind kind, const TrackParams& params, double duration_s,
                                  double rate_hz) {
    if (duration_s <= 0.0) throw std::invalid_argument("synthesize_track: duration must be > 0");
    if (rate_hz <= 0.0) throw std::invalid_argument("synthesize_track: rate must be > 0");
    const auto n = static_cast<std::size_t>(std::floor(duration_s * rate_hz)) + 1;

    GroundTruthTrack track;
    track.sample_rate_hz = rate_hz;
    track.start_time_s = 0.0;
    track.positions.resize(n);

    switch (kind) {
        case TrackKind::Linear:
            for (std::size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) / rate_hz;
                for (int k = 0; k < 3; ++k)
                    track.positions[i][k] = params.start[k] + params.velocity_mps[k] * t;
            }
            track.label = "linear";
            break;
        case TrackKind::Circular:
            if (params.period_s <= 0.0 || params.radius_m <= 0.0)
                throw std::invalid_argument("synthesize_track: circular needs period, radius > 0");
            for (std::size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) / rate_hz;
                const double a = 2.0 * M_PI * t / params.period_s + params.phase_rad;
                track.positions[i] = {params.center[0] + params.radius_m * std::cos(a),
                                      params.center[1] + params.radius_m * std::sin(a),
                                      params.center[2]};
            }
            track.label = "circular";
            break;
        case TrackKind::Waypoints: {
            const auto& wt = params.waypoint_times_s;
            const auto& wp = params.waypoints;
            if (wt.size() != wp.size() || wt.size() < 2)
                throw std::invalid_argument("synthesize_track: need >= 2 waypoints");
            for (std::size_t i = 1; i < wt.size(); ++i)
                if (wt[i] <= wt[i - 1])
                    throw std::invalid_argument("synthesize_track: waypoint times must increase");
            for (std::size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) / rate_hz;
                if (t <= wt.front()) {
                    track.positions[i] = wp.front();
                } else if (t >= wt.back()) {
                    track.positions[i] = wp.back();
                } else {
                    std::size_t j = 1;
                    while (wt[j] < t) ++j;
                    const double a = (t - wt[j - 1]) / (wt[j] - wt[j - 1]);
                    for (int k = 0; k < 3; ++k)
                        track.positions[i][k] = (1.0 - a) * wp[j - 1][k] + a * wp[j][k];
                }
            }
            track.label = "waypoints";
            break;
        }
    }
    track.validate();
    return track;
}

AlignedTimeline align_timelines(double testbed_start_s, const GroundTruthTrack& track) {
    track.validate();
    if (testbed_start_s < track.start_time_s)
        throw std::invalid_argument("align_timelines: testbed starts before the track");
    if (testbed_start_s > track.end_time_s())
        throw std::invalid_argument("align_timelines: testbed starts after the track ends");
    return {testbed_start_s - track.start_time_s, 0.0};
}

GroundTruthTrack apply_alignment(const GroundTruthTrack& track, const AlignedTimeline& tl) {
    GroundTruthTrack out = track;
    out.start_time_s = -tl.offset_s;
    return out;
}

VelocitySeries derive_radial_velocity(const GroundTruthTrack& track, const Vec3& node_position,
                                      std::size_t smoothing_window) {
    track.validate();
    for (double c : node_position)
        if (!std::isfinite(c))
            throw std::invalid_argument("derive_radial_velocity: non-finite node position");
    if (smoothing_window % 2 == 0)
        throw std::invalid_argument("derive_radial_velocity: smoothing window must be odd");
    if (track.size() < smoothing_window)
        throw std::invalid_argument("derive_radial_velocity: track shorter than smoothing window");

    const std::size_t n = track.size();
    std::vector<double> range(n);
    for (std::size_t i = 0; i < n; ++i) range[i] = dist(track.positions[i], node_position);

    const double dt = 1.0 / track.sample_rate_hz;
    std::vector<double> raw(n);
    raw[0] = (range[1] - range[0]) / dt;
    raw[n - 1] = (range[n - 1] - range[n - 2]) / dt;
    for (std::size_t i = 1; i + 1 < n; ++i) raw[i] = (range[i + 1] - range[i - 1]) / (2.0 * dt);

    // centered moving average, window shrinks near the ends
    const std::size_t half = smoothing_window / 2;
    VelocitySeries out;
    out.t_s.resize(n);
    out.v_mps.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(i + half, n - 1);
        double acc = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) acc += raw[j];
        out.t_s[i] = track.time_at(i);
        out.v_mps[i] = acc / static_cast<double>(hi - lo + 1);
    }
    return out;
}

std::vector<double> resample_to(const VelocitySeries& series, std::span<const double> target_t_s) {
    if (series.t_s.size() < 2) throw std::invalid_argument("resample_to: series too short");
    std::vector<double> out(target_t_s.size());
    for (std::size_t i = 0; i < target_t_s.size(); ++i) {
        const double t = target_t_s[i];
        if (t < series.t_s.front() - 1e-12 || t > series.t_s.back() + 1e-12)
            throw std::invalid_argument("resample_to: timestamp outside series span");
        auto it = std::lower_bound(series.t_s.begin(), series.t_s.end(), t);
        if (it == series.t_s.begin()) {
            out[i] = series.v_mps.front();
        } else if (it == series.t_s.end()) {
            out[i] = series.v_mps.back();
        } else {
            const std::size_t j = static_cast<std::size_t>(it - series.t_s.begin());
            const double t1 = series.t_s[j - 1], t2 = series.t_s[j];
            const double a = (t - t1) / (t2 - t1);
            out[i] = (1.0 - a) * series.v_mps[j - 1] + a * series.v_mps[j];
        }
    }
    return out;
}

} // namespace sbfd
