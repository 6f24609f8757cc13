#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sbfd/channel.hpp"
#include "sbfd/rng.hpp"
#include "sbfd/zc.hpp"

using namespace sbfd;

namespace {

const OfdmNumerology kPaper{};

// single co-located node, unit self-leakage tap, no target return
Scenario identity_scenario() {
    Scenario s;
    s.snr_db = INFINITY;
    s.direct_path_gain = 0.0;
    s.self_leakage_gain = 1.0;
    s.target_rcs_gain = 0.0;
    s.nodes[0].position = {0, 0, 1};
    s.nodes[1].position = {50, 0, 1};
    s.nodes[2].position = {-50, 0, 1};
    s.trajectory.kind = "linear";
    s.trajectory.params.start = {0, 30, 1};
    s.trajectory.params.velocity_mps = {0, 0, 0};
    s.trajectory.duration_s = 10.0;
    return s;
}

GroundTruthTrack track_for(const Scenario& s) { return make_run_track(s, 0); }

SymbolGrid random_grid(std::size_t symbols, std::uint64_t seed) {
    SymbolGrid g(kPaper, symbols);
    Rng rng(seed);
    for (auto& v : g.m.v) v = rng.gaussian_c();
    return g;
}

double max_rel_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double scale = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        scale = std::max(scale, std::abs(a[i]));
        diff = std::max(diff, std::abs(a[i] - b[i]));
    }
    return scale > 0.0 ? diff / scale : diff;
}

} // namespace

TEST_CASE("target_state: static, linear and circular tracks") {
    TrackParams st;
    st.start = {1, 2, 3};
    const auto still = synthesize_track(TrackKind::Linear, st, 2.0, 100.0);
    const auto s0 = target_state(still, 1.0);
    CHECK(s0.velocity[0] == 0.0);
    CHECK(s0.velocity[1] == 0.0);

    TrackParams lin;
    lin.start = {0, 0, 0};
    lin.velocity_mps = {0.4, -0.2, 0.1};
    const auto tl = synthesize_track(TrackKind::Linear, lin, 4.0, 100.0);
    const auto s1 = target_state(tl, 1.7);
    for (int k = 0; k < 3; ++k) {
        CHECK(s1.velocity[k] == doctest::Approx(lin.velocity_mps[k]).epsilon(1e-9));
        CHECK(s1.position[k] == doctest::Approx(lin.velocity_mps[k] * 1.7).epsilon(1e-9));
    }

    TrackParams circ;
    circ.radius_m = 2.0;
    circ.period_s = 8.0;
    const auto tc = synthesize_track(TrackKind::Circular, circ, 8.0, 100.0);
    const auto s2 = target_state(tc, 3.0);
    const double speed = std::hypot(s2.velocity[0], s2.velocity[1]);
    CHECK(speed == doctest::Approx(2.0 * M_PI * 2.0 / 8.0).epsilon(0.01));

    CHECK_THROWS(target_state(tc, 9.0)); // outside span
}

TEST_CASE("compute_paths geometry and doppler") {
    Scenario s = identity_scenario();
    s.target_rcs_gain = 1.0;
    s.trajectory.params.start = {0, 5, 1};       // 5 m from node1
    s.trajectory.params.velocity_mps = {0, 1, 0}; // receding radially at 1 m/s
    const auto track = track_for(s);

    const auto taps = compute_paths(s, track, 0.0, NodeId::Node1, NodeId::Node1, Mode::Sbfd);
    REQUIRE(taps.size() == 2);
    CHECK(taps[0].kind == TapKind::Direct);
    CHECK(taps[0].doppler_hz == 0.0);
    CHECK(taps[0].gain == cplx(1.0)); // self-leakage gain, no distance division

    CHECK(taps[1].kind == TapKind::TargetReflection);
    CHECK(taps[1].delay_s == doctest::Approx(10.0 / kSpeedOfLight).epsilon(1e-9)); // 33.36 ns
    // round-trip doppler of a receding target: -2 fc v / c
    const double expect = -2.0 * 6.8e9 * 1.0 / kSpeedOfLight;
    CHECK(taps[1].doppler_hz == doctest::Approx(expect).epsilon(1e-6));
    CHECK(std::abs(taps[1].doppler_hz) == doctest::Approx(45.33).epsilon(0.002));
    CHECK(std::abs(taps[1].gain) == doctest::Approx(1.0 / 25.0).epsilon(1e-6));

    // approaching -> positive doppler (decreasing round-trip distance)
    s.trajectory.params.velocity_mps = {0, -1, 0};
    const auto track2 = track_for(s);
    const auto taps2 = compute_paths(s, track2, 0.0, NodeId::Node1, NodeId::Node1, Mode::Sbfd);
    CHECK(taps2[1].doppler_hz > 0.0);

    // inter-node direct tap: 1/d gain and d/c delay
    s.direct_path_gain = 2.0;
    const auto taps3 = compute_paths(s, track2, 0.0, NodeId::Node1, NodeId::Node2, Mode::Sbfd);
    CHECK(std::abs(taps3[0].gain) == doctest::Approx(2.0 / 50.0));
    CHECK(taps3[0].delay_s == doctest::Approx(50.0 / kSpeedOfLight));

    // target on top of a node antenna -> error
    s.trajectory.params.start = {0, 0, 1};
    s.trajectory.params.velocity_mps = {0, 0, 0};
    const auto track3 = track_for(s);
    CHECK_THROWS(compute_paths(s, track3, 0.0, NodeId::Node1, NodeId::Node1, Mode::Sbfd));
}

TEST_CASE("propagate: identity channel returns the input") {
    Scenario s = identity_scenario();
    const auto track = track_for(s);
    const auto g = random_grid(4, 21);
    std::array<IqBuffer, 3> tx;
    tx[0] = modulate(g);

    const auto rx = propagate(tx, s, track, NodeId::Node1, Mode::Sbfd);
    CHECK(max_rel_diff(tx[0].samples, rx.samples) < 1e-12);
}

TEST_CASE("propagate: linear in tap gain") {
    Scenario s = identity_scenario();
    const auto track = track_for(s);
    const auto g = random_grid(2, 22);
    std::array<IqBuffer, 3> tx;
    tx[0] = modulate(g);

    const auto rx1 = propagate(tx, s, track, NodeId::Node1, Mode::Sbfd);
    s.self_leakage_gain = 2.0;
    const auto rx2 = propagate(tx, s, track, NodeId::Node1, Mode::Sbfd);
    double worst = 0.0;
    for (std::size_t i = 0; i < rx1.samples.size(); ++i)
        worst = std::max(worst, std::abs(rx2.samples[i] - 2.0 * rx1.samples[i]));
    CHECK(worst < 1e-12);
}

TEST_CASE("propagate: superposition over transmitters") {
    Scenario s = identity_scenario();
    s.direct_path_gain = 1.0;
    s.target_rcs_gain = 0.8;
    s.trajectory.params.start = {1, 4, 1};
    s.trajectory.params.velocity_mps = {0.4, -0.2, 0};
    const auto track = track_for(s);

    std::array<IqBuffer, 3> both, only1, only3;
    both[0] = modulate(random_grid(3, 31));
    both[2] = modulate(random_grid(3, 32));
    only1[0] = both[0];
    only3[2] = both[2];

    const auto rx_both = propagate(both, s, track, NodeId::Node2, Mode::Sbfd);
    const auto rx_1 = propagate(only1, s, track, NodeId::Node2, Mode::Sbfd);
    const auto rx_3 = propagate(only3, s, track, NodeId::Node2, Mode::Sbfd);

    std::vector<cplx> sum(rx_1.samples.size());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = rx_1.samples[i] + rx_3.samples[i];
    CHECK(max_rel_diff(rx_both.samples, sum) < 1e-9);
}

TEST_CASE("propagate: unit-gain delayed tap preserves per-symbol energy") {
    Scenario s = identity_scenario();
    s.nodes[0].start_offset_samples = 100; // 5 us delay, inside the 25.6 us CP
    const auto track = track_for(s);
    const auto g = random_grid(3, 41);
    std::array<IqBuffer, 3> tx;
    tx[0] = modulate(g);
    const auto rx = propagate(tx, s, track, NodeId::Node1, Mode::Sbfd);

    // per-symbol body energy (the delayed CP holds a different slice of the
    // waveform, so the comparison excludes it, as in the Parseval invariant)
    const std::size_t sps = kPaper.samples_per_symbol();
    for (std::size_t sym = 0; sym < 3; ++sym) {
        double ein = 0.0, eout = 0.0;
        for (std::size_t k = kPaper.cp_samples; k < sps; ++k) {
            ein += std::norm(tx[0].samples[sym * sps + k]);
            eout += std::norm(rx.samples[sym * sps + k]);
        }
        CHECK(std::abs(eout - ein) / ein < 1e-6);
    }
}

TEST_CASE("propagate: doppler phase ramp on a DC tone") {
    Scenario s = identity_scenario();
    s.self_leakage_gain = 0.0;
    s.target_rcs_gain = 1.0;
    s.trajectory.params.start = {0, 3, 1};
    s.trajectory.params.velocity_mps = {0, 1, 0}; // receding at exactly 1 m/s
    const auto track = track_for(s);

    SymbolGrid g(kPaper, 64);
    for (std::size_t m = 0; m < 64; ++m) g.m.at(kPaper.dc_bin() - 1, m) = 1.0;
    std::array<IqBuffer, 3> tx;
    tx[0] = modulate(g);

    const auto rx = propagate(tx, s, track, NodeId::Node1, Mode::Sbfd);
    const auto rg = ofdm_demodulate(rx);

    const double f_d = -2.0 * 6.8e9 / kSpeedOfLight; // Hz, receding
    const double expect = 2.0 * M_PI * f_d * kPaper.symbol_duration_s();
    for (std::size_t m = 1; m < 64; ++m) {
        const cplx ratio = rg.m.at(kPaper.dc_bin() - 1, m) / rg.m.at(kPaper.dc_bin() - 1, m - 1);
        CHECK(std::abs(std::arg(ratio) - expect) < 1e-3);
    }
}

TEST_CASE("propagate: multiband gating makes other-frequency transmitters invisible") {
    Scenario s = identity_scenario();
    s.mode = Mode::Multiband;
    s.direct_path_gain = 1.0;
    const auto track = track_for(s);

    std::array<IqBuffer, 3> with, without;
    with[0] = modulate(random_grid(2, 51));
    with[1] = modulate(random_grid(2, 52));
    with[2] = modulate(random_grid(2, 53));
    without[1] = with[1];

    const auto rx_with = propagate(with, s, track, NodeId::Node2, Mode::Multiband);
    const auto rx_without = propagate(without, s, track, NodeId::Node2, Mode::Multiband);
    CHECK(rx_with.samples == rx_without.samples); // bit-identical
}

TEST_CASE("propagate input validation") {
    Scenario s = identity_scenario();
    const auto track = track_for(s);
    std::array<IqBuffer, 3> tx;
    CHECK_THROWS(propagate(tx, s, track, NodeId::Node1, Mode::Sbfd)); // all silent

    tx[0] = modulate(random_grid(2, 61));
    tx[1] = modulate(random_grid(2, 62));
    tx[1].numerology.cp_samples = 256; // mismatch
    CHECK_THROWS(propagate(tx, s, track, NodeId::Node1, Mode::Sbfd));
}

TEST_CASE("add_noise: disabled, deterministic, calibrated") {
    IqBuffer buf;
    buf.numerology = kPaper;
    buf.samples.assign(391 * 2560, cplx(1.0, 0.0)); // > 1e6 samples, unit power

    const auto same = add_noise(buf, INFINITY, 1);
    CHECK(same.samples == buf.samples);

    const auto n1 = add_noise(buf, 0.0, 777);
    const auto n2 = add_noise(buf, 0.0, 777);
    CHECK(n1.samples == n2.samples);

    double noise_power = 0.0;
    for (std::size_t i = 0; i < buf.samples.size(); ++i)
        noise_power += std::norm(n1.samples[i] - buf.samples[i]);
    noise_power /= static_cast<double>(buf.samples.size());
    CHECK(noise_power > 0.95);
    CHECK(noise_power < 1.05);

    IqBuffer zero;
    zero.numerology = kPaper;
    zero.samples.assign(2560, cplx(0.0));
    CHECK_THROWS(add_noise(zero, 10.0, 1));
    CHECK_THROWS(add_noise(buf, NAN, 1));
}

TEST_CASE("noise blocks are independent of chunking") {
    std::vector<cplx> whole(3 * 2560, cplx(0.0));
    add_noise_blocks(whole, 2560, 99, 0.5, 0);

    std::vector<cplx> part1(2560, cplx(0.0)), part23(2 * 2560, cplx(0.0));
    add_noise_blocks(part1, 2560, 99, 0.5, 0);
    add_noise_blocks(part23, 2560, 99, 0.5, 1);

    for (std::size_t i = 0; i < 2560; ++i) CHECK(whole[i] == part1[i]);
    for (std::size_t i = 0; i < part23.size(); ++i) CHECK(whole[2560 + i] == part23[i]);
}
