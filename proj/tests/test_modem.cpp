#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sbfd/modulator.hpp"
#include "sbfd/qpsk.hpp"
#include "sbfd/reference.hpp"
#include "sbfd/rng.hpp"
#include "sbfd/zc.hpp"

using namespace sbfd;

namespace {

const OfdmNumerology kPaper{};

SymbolGrid random_grid(const OfdmNumerology& num, std::size_t symbols, std::uint64_t seed) {
    SymbolGrid g(num, symbols);
    Rng rng(seed);
    for (auto& v : g.m.v) v = rng.gaussian_c();
    return g;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("assemble_grid classifies every bin") {
    const auto alloc = build_allocation(NodeId::Node1, kPaper, 20);
    const auto zc = generate_zc({568, 7});
    const auto g = assemble_grid(alloc, kPaper, zc, 1);

    // zeros outside {65..662}
    for (std::size_t r = 0; r < 2048; ++r) {
        const bool active = r + 1 >= 65 && r + 1 <= 662;
        if (!active) CHECK(g.m.at(r, 0) == cplx(0.0));
    }
    // pilots exactly 1
    for (auto p : alloc.pilots) CHECK(g.m.at(p - 1, 0) == cplx(1.0));
    // data carries the payload in ascending order
    CHECK(std::abs(g.m.at(alloc.data[0] - 1, 0) - zc[0]) < 1e-15);
    CHECK(std::abs(g.m.at(alloc.data[567] - 1, 0) - zc[567]) < 1e-15);
}

TEST_CASE("sensing grids repeat the payload on every symbol") {
    const auto alloc = build_allocation(NodeId::Node2, kPaper, 20);
    const auto zc = generate_zc({568, 13});
    const auto g = assemble_grid(alloc, kPaper, zc, 1216);
    REQUIRE(g.m.cols == 1216);
    for (std::size_t s = 1; s < g.m.cols; ++s)
        for (std::size_t r = 0; r < g.m.rows; ++r) REQUIRE(g.m.at(r, s) == g.m.at(r, 0));
}

TEST_CASE("comm pilot bins are 1 regardless of payload") {
    const auto alloc = build_allocation(NodeId::Node3, kPaper, 20);
    Rng rng(7);
    std::vector<std::uint8_t> bits(2 * alloc.data.size());
    for (auto& b : bits) b = rng.bit();
    const auto g = assemble_grid(alloc, kPaper, map_qpsk(bits), 1);
    for (std::size_t k = 0; k < alloc.pilots.size(); ++k)
        CHECK(g.m.at(1387 + 20 * k - 1, 0) == cplx(1.0));
}

TEST_CASE("assemble rejects payload length mismatch") {
    const auto alloc = build_allocation(NodeId::Node1, kPaper, 20);
    const auto zc = generate_zc({100, 7});
    CHECK_THROWS(assemble_grid(alloc, kPaper, zc, 1));
}

TEST_CASE("all-zero grid modulates to an all-zero buffer") {
    SymbolGrid g(kPaper, 3);
    const auto buf = modulate(g);
    REQUIRE(buf.samples.size() == 3 * 2560);
    for (const auto& s : buf.samples) CHECK(s == cplx(0.0));
}

TEST_CASE("unit DC subcarrier gives a constant 1/sqrt(N) sequence") {
    SymbolGrid g(kPaper, 1);
    g.m.at(kPaper.dc_bin() - 1, 0) = 1.0; // n = n0
    const auto buf = modulate(g);
    const double expect = 1.0 / std::sqrt(2048.0);
    for (const auto& s : buf.samples) {
        CHECK(std::abs(s.real() - expect) < 1e-12);
        CHECK(std::abs(s.imag()) < 1e-12);
    }
}

TEST_CASE("modulate/demodulate round trip within 1e-10") {
    const auto g = random_grid(kPaper, 4, 99);
    const auto back = ofdm_demodulate(modulate(g));
    CHECK(max_abs_diff(g.m.v, back.m.v) < 1e-10);
}

TEST_CASE("fast kernels match the direct-DFT reference") {
    OfdmNumerology small;
    small.fft_size = 64;
    small.cp_samples = 16;
    small.sample_rate_hz = 1e6;
    const auto g = random_grid(small, 3, 5);

    const auto fast = modulate(g);
    const auto slow = ref::modulate(g);
    CHECK(max_abs_diff(fast.samples, slow.samples) < 1e-9);

    const auto gf = ofdm_demodulate(fast);
    const auto gs = ref::ofdm_demodulate(fast);
    CHECK(max_abs_diff(gf.m.v, gs.m.v) < 1e-9);
}

TEST_CASE("serial and parallel execution produce identical output") {
    const auto g = random_grid(kPaper, 8, 11);
    const auto a = modulate(g, Exec::Serial);
    const auto b = modulate(g, Exec::Parallel);
    CHECK(a.samples == b.samples);
    const auto da = ofdm_demodulate(a, Exec::Serial);
    const auto db = ofdm_demodulate(b, Exec::Parallel);
    CHECK(da.m.v == db.m.v);
}

TEST_CASE("parseval under the unitary convention") {
    const auto g = random_grid(kPaper, 2, 42);
    const auto buf = modulate(g);
    const std::size_t sps = kPaper.samples_per_symbol();
    for (std::size_t s = 0; s < 2; ++s) {
        double et = 0.0, ef = 0.0;
        for (std::size_t k = kPaper.cp_samples; k < sps; ++k)
            et += std::norm(buf.samples[s * sps + k]);
        for (std::size_t r = 0; r < kPaper.fft_size; ++r) ef += std::norm(g.m.at(r, s));
        CHECK(std::abs(et - ef) / ef < 1e-9);
    }
}

TEST_CASE("modulation linearity") {
    OfdmNumerology small;
    small.fft_size = 256;
    small.cp_samples = 64;
    small.sample_rate_hz = 1e6;
    const auto g1 = random_grid(small, 2, 1);
    const auto g2 = random_grid(small, 2, 2);
    const cplx a(0.7, -0.3), b(-1.2, 0.5);
    SymbolGrid mix(small, 2);
    for (std::size_t i = 0; i < mix.m.v.size(); ++i) mix.m.v[i] = a * g1.m.v[i] + b * g2.m.v[i];

    const auto bm = modulate(mix);
    const auto b1 = modulate(g1);
    const auto b2 = modulate(g2);
    double worst = 0.0;
    for (std::size_t i = 0; i < bm.samples.size(); ++i)
        worst = std::max(worst, std::abs(bm.samples[i] - (a * b1.samples[i] + b * b2.samples[i])));
    CHECK(worst < 1e-9);
}

TEST_CASE("integer delay within the CP becomes a per-subcarrier phase ramp") {
    const std::size_t d = 137;
    const auto g = random_grid(kPaper, 2, 17);
    const auto buf = modulate(g);

    IqBuffer delayed;
    delayed.numerology = kPaper;
    delayed.samples.assign(buf.samples.size(), cplx(0.0));
    for (std::size_t i = d; i < buf.samples.size(); ++i) delayed.samples[i] = buf.samples[i - d];

    const auto rx = ofdm_demodulate(delayed);
    // symbol 1 is fully protected by the CP of symbol 1
    const double dc0 = 2048.0 / 2.0;
    for (std::size_t r = 0; r < 2048; ++r) {
        const cplx ramp =
            std::polar(1.0, -2.0 * M_PI * (static_cast<double>(r) - dc0) * static_cast<double>(d) / 2048.0);
        CHECK(std::abs(rx.m.at(r, 1) - g.m.at(r, 1) * ramp) < 1e-10);
    }
}

TEST_CASE("demodulation edge cases") {
    IqBuffer tiny;
    tiny.numerology = kPaper;
    tiny.samples.resize(100);
    CHECK_THROWS(ofdm_demodulate(tiny)); // shorter than one symbol

    IqBuffer zero;
    zero.numerology = kPaper;
    zero.samples.assign(2560, cplx(0.0));
    const auto g = ofdm_demodulate(zero);
    for (const auto& v : g.m.v) CHECK(v == cplx(0.0));

    IqBuffer partial;
    partial.numerology = kPaper;
    partial.samples.assign(2560 + 100, cplx(0.0)); // trailing partial symbol discarded
    CHECK(ofdm_demodulate(partial).m.cols == 1);
}
