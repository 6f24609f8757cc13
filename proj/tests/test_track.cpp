#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "sbfd/track.hpp"

using namespace sbfd;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const auto dir = fs::temp_directory_path() / "sbfd_track_test";
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::trunc);
    f << content;
}

} // namespace

TEST_CASE("load_track parses a 100 Hz file; 500 rows cover 5 s of samples") {
    const auto dir = temp_dir();
    std::string csv = "t_s,x_m,y_m,z_m\n";
    for (int i = 0; i < 500; ++i) {
        char line[96];
        std::snprintf(line, sizeof(line), "%.3f,%.3f,%.3f,1.0\n", i / 100.0, i * 0.01, 2.0);
        csv += line;
    }
    write_file(dir / "walk.csv", csv);
    const auto track = load_track(dir / "walk.csv");
    CHECK(track.size() == 500);
    CHECK(track.sample_rate_hz == doctest::Approx(100.0));
    CHECK(static_cast<double>(track.size()) / track.sample_rate_hz == doctest::Approx(5.0));
}

TEST_CASE("load_track rejections") {
    const auto dir = temp_dir();

    write_file(dir / "one.csv", "t_s,x_m,y_m,z_m\n0.0,1,2,3\n");
    CHECK_THROWS(load_track(dir / "one.csv")); // single row

    write_file(dir / "dup.csv", "t_s,x_m,y_m,z_m\n0.0,1,2,3\n0.0,1,2,3\n0.01,1,2,3\n");
    CHECK_THROWS(load_track(dir / "dup.csv")); // duplicated timestamp

    write_file(dir / "mono.csv", "t_s,x_m,y_m,z_m\n0.0,1,2,3\n0.02,1,2,3\n0.01,1,2,3\n");
    CHECK_THROWS(load_track(dir / "mono.csv")); // non-monotonic

    std::string gap = "t_s,x_m,y_m,z_m\n";
    for (int i = 0; i < 10; ++i) {
        char line[64];
        std::snprintf(line, sizeof(line), "%.3f,0,0,0\n", (i < 5 ? i : i + 3) / 100.0);
        gap += line;
    }
    write_file(dir / "gap.csv", gap);
    CHECK_THROWS(load_track(dir / "gap.csv")); // 30 ms gap at 100 Hz

    write_file(dir / "short_header.csv", "t_s,x_m\n0.0,1\n0.01,2\n");
    CHECK_THROWS(load_track(dir / "short_header.csv"));
}

TEST_CASE("extra marker columns are ignored") {
    const auto dir = temp_dir();
    std::string csv = "t_s,x_m,y_m,z_m,marker2_x\n";
    for (int i = 0; i < 10; ++i) {
        char line[96];
        std::snprintf(line, sizeof(line), "%.2f,%.2f,0.0,1.0,9.9\n", i / 100.0, i * 0.1);
        csv += line;
    }
    write_file(dir / "extra.csv", csv);
    const auto track = load_track(dir / "extra.csv");
    CHECK(track.size() == 10);
    CHECK(track.positions[3][0] == doctest::Approx(0.3));
}

TEST_CASE("save/load round trip") {
    const auto dir = temp_dir();
    TrackParams p;
    p.start = {1.0, -2.0, 0.5};
    p.velocity_mps = {0.3, 0.1, -0.05};
    const auto track = synthesize_track(TrackKind::Linear, p, 2.0, 100.0);
    save_track(dir / "rt.csv", track);
    const auto back = load_track(dir / "rt.csv");
    REQUIRE(back.size() == track.size());
    for (std::size_t i = 0; i < track.size(); ++i)
        for (int k = 0; k < 3; ++k)
            CHECK(back.positions[i][k] == doctest::Approx(track.positions[i][k]).epsilon(1e-9));
}

TEST_CASE("synthesize_track kinds") {
    TrackParams lin;
    lin.start = {0, 0, 0};
    lin.velocity_mps = {1, 0, 0};
    const auto tl = synthesize_track(TrackKind::Linear, lin, 5.0, 100.0);
    CHECK(tl.size() == 501);
    CHECK(tl.positions.back()[0] == doctest::Approx(5.0));
    CHECK(tl.positions.back()[1] == 0.0);

    TrackParams circ;
    circ.center = {1, 2, 1};
    circ.radius_m = 2.0;
    circ.period_s = 8.0;
    const auto tc = synthesize_track(TrackKind::Circular, circ, 8.0, 100.0);
    for (std::size_t i = 0; i < tc.size(); ++i) {
        const double dx = tc.positions[i][0] - 1.0, dy = tc.positions[i][1] - 2.0;
        CHECK(std::abs(std::sqrt(dx * dx + dy * dy) - 2.0) < 1e-12);
    }

    TrackParams wp;
    wp.waypoint_times_s = {0.0, 1.0, 2.0, 3.0};
    wp.waypoints = {{0, 0, 0}, {1, 0, 0}, {1, 0, 0}, {1, 1, 0}}; // dwell in [1, 2]
    const auto tw = synthesize_track(TrackKind::Waypoints, wp, 3.0, 100.0);
    for (std::size_t i = 105; i <= 195; ++i) {
        CHECK(tw.positions[i][0] == doctest::Approx(1.0));
        CHECK(tw.positions[i][1] == doctest::Approx(0.0));
    }

    CHECK_THROWS(synthesize_track(TrackKind::Linear, lin, -1.0, 100.0));
    CHECK_THROWS(synthesize_track(TrackKind::Linear, lin, 5.0, 0.0));
}

TEST_CASE("timeline alignment") {
    TrackParams lin;
    lin.velocity_mps = {1, 0, 0};
    const auto track = synthesize_track(TrackKind::Linear, lin, 6.0, 100.0);

    const auto same = align_timelines(0.0, track);
    CHECK(same.offset_s == 0.0);
    CHECK(apply_alignment(track, same).start_time_s == 0.0);

    const auto tl = align_timelines(0.73, track);
    CHECK(tl.offset_s == doctest::Approx(0.73));
    const auto aligned = apply_alignment(track, tl);
    // first 73 samples precede the testbed start
    CHECK(aligned.time_at(72) < 0.0);
    CHECK(aligned.time_at(73) >= -1e-12);

    CHECK_THROWS(align_timelines(-0.5, track)); // testbed before track start
    CHECK_THROWS(align_timelines(6.5, track));  // testbed after track end
}

TEST_CASE("alignment shifts timestamps only") {
    TrackParams lin;
    lin.start = {3, 4, 0};
    lin.velocity_mps = {0.5, -0.25, 0};
    const auto track = synthesize_track(TrackKind::Linear, lin, 4.0, 100.0);
    const auto aligned = apply_alignment(track, align_timelines(0.5, track));

    const Vec3 node{0, 0, 0};
    const auto v0 = derive_radial_velocity(track, node, 5);
    const auto v1 = derive_radial_velocity(aligned, node, 5);
    REQUIRE(v0.v_mps.size() == v1.v_mps.size());
    for (std::size_t i = 0; i < v0.v_mps.size(); ++i) {
        CHECK(v0.v_mps[i] == doctest::Approx(v1.v_mps[i]).epsilon(1e-12));
        CHECK(v1.t_s[i] == doctest::Approx(v0.t_s[i] - 0.5));
    }
}

TEST_CASE("radial velocity: constant range, radial approach, tangential pass") {
    const Vec3 node{0, 0, 1};

    TrackParams circ;
    circ.center = {0, 0, 1};
    circ.radius_m = 2.0;
    circ.period_s = 8.0;
    const auto orbit = synthesize_track(TrackKind::Circular, circ, 8.0, 100.0);
    const auto v_orbit = derive_radial_velocity(orbit, node, 5);
    for (double v : v_orbit.v_mps) CHECK(std::abs(v) < 1e-6);

    TrackParams approach;
    approach.start = {0, 10, 1};
    approach.velocity_mps = {0, -1, 0};
    const auto ta = synthesize_track(TrackKind::Linear, approach, 5.0, 100.0);
    const auto va = derive_radial_velocity(ta, node, 5);
    for (std::size_t i = 2; i + 2 < va.v_mps.size(); ++i)
        CHECK(va.v_mps[i] == doctest::Approx(-1.0).epsilon(1e-3));

    // tangential pass: v_r crosses zero at the closest approach
    TrackParams pass;
    pass.start = {-5, 3, 1};
    pass.velocity_mps = {2, 0, 0};
    const auto tp = synthesize_track(TrackKind::Linear, pass, 5.0, 100.0);
    const auto vp = derive_radial_velocity(tp, node, 5);
    std::size_t zero_idx = 0;
    for (std::size_t i = 1; i < vp.v_mps.size(); ++i)
        if (vp.v_mps[i - 1] < 0.0 && vp.v_mps[i] >= 0.0) zero_idx = i;
    // closest approach at x = 0 -> t = 2.5 s
    CHECK(vp.t_s[zero_idx] == doctest::Approx(2.5).epsilon(0.01));
}

TEST_CASE("radial velocity argument validation") {
    TrackParams lin;
    lin.velocity_mps = {1, 0, 0};
    const auto track = synthesize_track(TrackKind::Linear, lin, 1.0, 100.0);
    CHECK_THROWS(derive_radial_velocity(track, {0, 0, 0}, 4));   // even window
    CHECK_THROWS(derive_radial_velocity(track, {0, 0, 0}, 203)); // longer than track
}

TEST_CASE("resample_to") {
    VelocitySeries s;
    s.t_s = {0.0, 1.0, 2.0};
    s.v_mps = {0.0, 2.0, 0.0};

    const double same[] = {0.0, 1.0, 2.0};
    const auto r1 = resample_to(s, same);
    CHECK(r1 == std::vector<double>{0.0, 2.0, 0.0});

    const double mid[] = {0.5, 1.5};
    const auto r2 = resample_to(s, mid);
    CHECK(r2[0] == doctest::Approx(1.0));
    CHECK(r2[1] == doctest::Approx(1.0));

    const double outside[] = {2.5};
    CHECK_THROWS(resample_to(s, outside));
}
