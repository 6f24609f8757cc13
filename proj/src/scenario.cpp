#include "sbfd/scenario.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sbfd/rng.hpp"

namespace sbfd {

using nlohmann::json;

const char* to_string(Mode mode) {
    switch (mode) {
        case Mode::Sbfd: return "sbfd";
        case Mode::Multiband: return "multiband";
        case Mode::SameBand: return "same_band";
    }
    throw std::invalid_argument("unknown mode");
}

Mode mode_from_string(const std::string& s) {
    if (s == "sbfd") return Mode::Sbfd;
    if (s == "multiband") return Mode::Multiband;
    if (s == "same_band" || s == "same-band" || s == "sameband") return Mode::SameBand;
    throw std::invalid_argument("unknown mode '" + s + "' (sbfd|multiband|same_band)");
}

NodeId node_from_index(int idx) {
    if (idx < 0 || idx > 2) throw std::invalid_argument("node index out of range");
    return static_cast<NodeId>(idx + 1);
}

void Scenario::validate() const {
    numerology.validate();
    if (duration_s <= 0.0) throw std::invalid_argument("scenario: duration must be > 0");
    if (std::isnan(snr_db)) throw std::invalid_argument("scenario: snr_db is NaN");
    if (!(direct_path_gain >= 0.0) || !(self_leakage_gain >= 0.0) || !(target_rcs_gain >= 0.0))
        throw std::invalid_argument("scenario: gains must be finite and >= 0");
    if (pilot_spacing < 2) throw std::invalid_argument("scenario: pilot_spacing must be >= 2");
    if (sensing.window_symbols < 2) throw std::invalid_argument("scenario: window must be >= 2");
    if (sensing.window_hop < 1) throw std::invalid_argument("scenario: hop must be >= 1");
    if (sensing.zero_pad_factor < 4)
        throw std::invalid_argument("scenario: zero_pad_factor must be >= 4");
    if (trajectory.kind != "linear" && trajectory.kind != "circular" &&
        trajectory.kind != "waypoints" && trajectory.kind != "file")
        throw std::invalid_argument("scenario: unknown trajectory kind '" + trajectory.kind + "'");
}

std::array<double, 3> center_frequencies(const Scenario& s, Mode mode) {
    std::array<double, 3> fc;
    if (s.center_frequencies_hz) {
        fc = *s.center_frequencies_hz;
    } else if (mode == Mode::Multiband) {
        const double f0 = s.numerology.center_frequency_hz;
        fc = {f0 - 60e6, f0, f0 + 60e6};
    } else {
        fc.fill(s.numerology.center_frequency_hz);
    }
    if (mode != Mode::Multiband && (fc[0] != fc[1] || fc[1] != fc[2]))
        throw std::invalid_argument(
            "scenario: sbfd/same_band modes require one shared center frequency");
    return fc;
}

std::array<SubbandAllocation, 3> scenario_allocations(const Scenario& s, Mode mode) {
    std::array<SubbandAllocation, 3> a;
    for (int i = 0; i < 3; ++i) {
        a[i] = mode == Mode::Sbfd
                   ? build_allocation(node_from_index(i), s.numerology, s.pilot_spacing)
                   : build_fullband_allocation(node_from_index(i), s.numerology, s.pilot_spacing);
    }
    return a;
}

std::uint32_t zc_root_for(const Scenario& s, int node_idx) {
    return s.identical_payload ? s.zc_roots[0] : s.zc_roots[static_cast<std::size_t>(node_idx)];
}

GroundTruthTrack make_run_track(const Scenario& s, std::uint32_t run_index) {
    const auto& tr = s.trajectory;
    if (tr.kind == "file") return load_track(tr.file);

    Rng rng(mix64(s.seed, kStreamTrajectory, run_index));
    const double u0 = rng.uniform_signed();
    const double u1 = rng.uniform_signed();
    const double u2 = rng.uniform_signed();
    const double speed_scale = 1.0 + tr.per_run_speed_jitter * u0;

    TrackParams p = tr.params;
    TrackKind kind;
    if (tr.kind == "linear") {
        kind = TrackKind::Linear;
        for (int k = 0; k < 3; ++k) p.velocity_mps[k] *= speed_scale;
        p.start[0] += tr.per_run_offset_m * u1;
        p.start[1] += tr.per_run_offset_m * u2;
    } else if (tr.kind == "circular") {
        kind = TrackKind::Circular;
        p.period_s /= speed_scale;
        p.phase_rad += M_PI * u1;
        p.center[0] += tr.per_run_offset_m * u2;
    } else {
        kind = TrackKind::Waypoints;
    }
    auto track = synthesize_track(kind, p, tr.duration_s, tr.rate_hz);
    track.label = s.name + "/run" + std::to_string(run_index);
    return track;
}

namespace {

Vec3 parse_vec3(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 3)
        throw std::invalid_argument(std::string("scenario: ") + what + " must be [x, y, z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

double parse_snr(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "+inf" || s == "none") return INFINITY;
        throw std::invalid_argument("scenario: snr_db string must be \"inf\"");
    }
    return j.get<double>();
}

} // namespace

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open scenario file " + path.string());
    json j;
    try {
        j = json::parse(f);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("scenario parse error in " + path.string() + ": " + e.what());
    }

    Scenario s;
    s.name = j.value("name", path.stem().string());
    if (j.contains("mode")) s.mode = mode_from_string(j["mode"].get<std::string>());
    s.seed = j.value("seed", s.seed);
    s.duration_s = j.value("duration_s", s.duration_s);
    if (j.contains("snr_db")) s.snr_db = parse_snr(j["snr_db"]);
    s.direct_path_gain = j.value("direct_path_gain", s.direct_path_gain);
    s.self_leakage_gain = j.value("self_leakage_gain", s.self_leakage_gain);
    s.target_rcs_gain = j.value("target_rcs_gain", s.target_rcs_gain);
    s.identical_payload = j.value("identical_payload", s.identical_payload);
    s.payload_salt = j.value("payload_salt", s.payload_salt);
    s.pilot_spacing = j.value("pilot_spacing", s.pilot_spacing);
    s.comm_pilot_avg_symbols = j.value("comm_pilot_avg_symbols", s.comm_pilot_avg_symbols);
    s.testbed_start_s = j.value("testbed_start_s", s.testbed_start_s);

    if (j.contains("numerology")) {
        const auto& n = j["numerology"];
        s.numerology.fft_size = n.value("fft_size", s.numerology.fft_size);
        s.numerology.sample_rate_hz = n.value("sample_rate_hz", s.numerology.sample_rate_hz);
        s.numerology.center_frequency_hz =
            n.value("center_frequency_hz", s.numerology.center_frequency_hz);
        s.numerology.cp_samples = n.value("cp_samples", s.numerology.cp_samples);
    }
    if (j.contains("center_frequencies_hz")) {
        const auto& a = j["center_frequencies_hz"];
        if (!a.is_array() || a.size() != 3)
            throw std::invalid_argument("scenario: center_frequencies_hz must have 3 entries");
        s.center_frequencies_hz = {{a[0].get<double>(), a[1].get<double>(), a[2].get<double>()}};
    }
    if (j.contains("zc_roots")) {
        const auto& a = j["zc_roots"];
        if (!a.is_array() || a.size() != 3)
            throw std::invalid_argument("scenario: zc_roots must have 3 entries");
        for (int i = 0; i < 3; ++i) s.zc_roots[i] = a[i].get<std::uint32_t>();
    }
    if (j.contains("sensing")) {
        const auto& n = j["sensing"];
        auto& o = s.sensing;
        o.window_symbols = n.value("window_symbols", o.window_symbols);
        o.window_hop = n.value("window_hop", o.window_hop);
        o.zero_pad_factor = n.value("zero_pad_factor", o.zero_pad_factor);
        o.dc_exclusion_bins = n.value("dc_exclusion_bins", o.dc_exclusion_bins);
        o.clutter_removal = n.value("clutter_removal", o.clutter_removal);
        o.detection_threshold_db = n.value("detection_threshold_db", o.detection_threshold_db);
        o.integrate_range = n.value("integrate_range", o.integrate_range);
    }
    if (j.contains("nodes")) {
        const auto& nodes = j["nodes"];
        if (!nodes.is_array() || nodes.size() != 3)
            throw std::invalid_argument("scenario: nodes must list exactly 3 entries");
        for (int i = 0; i < 3; ++i) {
            const auto& n = nodes[i];
            auto& g = s.nodes[static_cast<std::size_t>(i)];
            g.position = parse_vec3(n.at("position_m"), "node position_m");
            if (n.contains("tx_offset_m")) g.tx_offset = parse_vec3(n["tx_offset_m"], "tx_offset_m");
            if (n.contains("rx_offset_m")) g.rx_offset = parse_vec3(n["rx_offset_m"], "rx_offset_m");
            g.start_offset_samples = n.value("start_offset_samples", g.start_offset_samples);
        }
    }
    if (j.contains("trajectory")) {
        const auto& t = j["trajectory"];
        auto& tr = s.trajectory;
        tr.kind = t.value("kind", tr.kind);
        tr.rate_hz = t.value("rate_hz", tr.rate_hz);
        tr.duration_s = t.value("duration_s", tr.duration_s);
        tr.per_run_speed_jitter = t.value("per_run_speed_jitter", tr.per_run_speed_jitter);
        tr.per_run_offset_m = t.value("per_run_offset_m", tr.per_run_offset_m);
        if (t.contains("file")) {
            tr.file = t["file"].get<std::string>();
            if (tr.file.is_relative()) tr.file = path.parent_path() / tr.file;
        }
        if (t.contains("start_m")) tr.params.start = parse_vec3(t["start_m"], "start_m");
        if (t.contains("velocity_mps"))
            tr.params.velocity_mps = parse_vec3(t["velocity_mps"], "velocity_mps");
        if (t.contains("center_m")) tr.params.center = parse_vec3(t["center_m"], "center_m");
        tr.params.radius_m = t.value("radius_m", tr.params.radius_m);
        tr.params.period_s = t.value("period_s", tr.params.period_s);
        tr.params.phase_rad = t.value("phase_rad", tr.params.phase_rad);
        if (t.contains("waypoints")) {
            for (const auto& w : t["waypoints"]) {
                tr.params.waypoint_times_s.push_back(w.at("t_s").get<double>());
                tr.params.waypoints.push_back(parse_vec3(w.at("p_m"), "waypoint p_m"));
            }
        }
    }

    s.validate();
    return s;
}

} // namespace sbfd
