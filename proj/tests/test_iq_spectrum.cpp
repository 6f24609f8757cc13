#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>

#include "sbfd/iq_io.hpp"
#include "sbfd/modulator.hpp"
#include "sbfd/qpsk.hpp"
#include "sbfd/rng.hpp"
#include "sbfd/spectrum.hpp"
#include "sbfd/zc.hpp"

using namespace sbfd;
namespace fs = std::filesystem;

namespace {

const OfdmNumerology kPaper{};

fs::path temp_dir() {
    const auto dir = fs::temp_directory_path() / "sbfd_iq_test";
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("serialize_iq byte layout") {
    const std::vector<cplx> one{{1.0, 2.0}};
    const auto bytes = serialize_iq(one);
    REQUIRE(bytes.size() == 8);
    float i, q;
    std::memcpy(&i, bytes.data(), 4);
    std::memcpy(&q, bytes.data() + 4, 4);
    CHECK(i == 1.0f);
    CHECK(q == 2.0f);

    CHECK(serialize_iq({}).empty());
    CHECK(deserialize_iq({}).empty());

    // one OFDM symbol: 8 bytes per sample
    std::vector<cplx> sym(2560);
    CHECK(serialize_iq(sym).size() == 20480);
}

TEST_CASE("cf32 round trip is bit-exact for arbitrary float32 data") {
    Rng rng(3);
    std::vector<cplx> samples(4096);
    for (auto& s : samples) {
        // values representable in float32 round-trip exactly
        s = {static_cast<float>(1e3 * rng.uniform_signed()),
             static_cast<float>(1e-30 * rng.uniform_signed())};
    }
    const auto bytes = serialize_iq(samples);
    const auto back = deserialize_iq(bytes);
    REQUIRE(back.size() == samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) CHECK(back[i] == samples[i]);
    CHECK(serialize_iq(back) == bytes);
}

TEST_CASE("deserialize rejects byte counts that are not a multiple of 8") {
    std::vector<std::uint8_t> bytes(12);
    CHECK_THROWS(deserialize_iq(bytes));
}

TEST_CASE("cf32 file with sidecar metadata") {
    const auto dir = temp_dir();
    IqBuffer buf;
    buf.numerology = kPaper;
    buf.numerology.center_frequency_hz = 6.74e9;
    buf.start_timestamp_s = 1.25;
    Rng rng(9);
    buf.samples.resize(1000);
    for (auto& s : buf.samples)
        s = {static_cast<float>(rng.uniform_signed()), static_cast<float>(rng.uniform_signed())};

    write_cf32(dir / "test.cf32", buf);
    const auto back = read_cf32(dir / "test.cf32", kPaper);
    CHECK(back.numerology.center_frequency_hz == 6.74e9);
    CHECK(back.start_timestamp_s == 1.25);
    CHECK(back.samples == buf.samples);
}

TEST_CASE("cf32 <-> csv conversion is lossless") {
    const auto dir = temp_dir();
    IqBuffer buf;
    buf.numerology = kPaper;
    Rng rng(17);
    buf.samples.resize(500);
    for (auto& s : buf.samples)
        s = {static_cast<float>(100.0 * rng.uniform_signed()),
             static_cast<float>(1e-5 * rng.uniform_signed())};
    write_cf32(dir / "a.cf32", buf);

    cf32_to_csv(dir / "a.cf32", dir / "a.csv");
    csv_to_cf32(dir / "a.csv", dir / "b.cf32");

    std::ifstream fa(dir / "a.cf32", std::ios::binary), fb(dir / "b.cf32", std::ios::binary);
    const std::string ba((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    const std::string bb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(ba == bb);

    // empty file -> empty file
    { std::ofstream(dir / "empty.cf32", std::ios::binary | std::ios::trunc); }
    cf32_to_csv(dir / "empty.cf32", dir / "empty.csv");
    csv_to_cf32(dir / "empty.csv", dir / "empty2.cf32");
    CHECK(fs::file_size(dir / "empty2.cf32") == 0);

    // malformed row (single value) -> error
    {
        std::ofstream f(dir / "bad.csv", std::ios::trunc);
        f << "i,q\n1.5\n";
    }
    CHECK_THROWS(csv_to_cf32(dir / "bad.csv", dir / "bad.cf32"));
}

TEST_CASE("psd of a pure DC tone concentrates at zero offset") {
    IqBuffer buf;
    buf.numerology = kPaper;
    buf.samples.assign(8192, cplx(1.0, 0.0));
    const auto p = psd(buf, 1024);
    std::size_t imax = 0;
    for (std::size_t i = 1; i < p.power_db.size(); ++i)
        if (p.power_db[i] > p.power_db[imax]) imax = i;
    CHECK(p.freq_offset_hz[imax] == 0.0);
}

TEST_CASE("sbfd composite psd shows three occupied bands and deep guards") {
    // composite of all three nodes, 48 symbols
    SymbolGrid composite(kPaper, 48);
    for (auto node : {NodeId::Node1, NodeId::Node2, NodeId::Node3}) {
        const auto alloc = build_allocation(node, kPaper, 20);
        const auto zc = generate_zc({static_cast<std::uint32_t>(alloc.data.size()), 7});
        const auto g = assemble_grid(alloc, kPaper, zc, 48);
        for (std::size_t i = 0; i < composite.m.v.size(); ++i) composite.m.v[i] += g.m.v[i];
    }
    const auto buf = modulate(composite);
    const auto p = psd(buf, 2048);

    const double df = kPaper.subcarrier_spacing_hz();
    const double dc0 = 2048.0 / 2.0;
    auto band_mean_db = [&](double lo_bin, double hi_bin) {
        // 1-based bins -> frequency offsets
        const double lo = (lo_bin - 1.0 - dc0) * df;
        const double hi = (hi_bin - 1.0 - dc0) * df;
        double acc = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < p.freq_offset_hz.size(); ++i) {
            if (p.freq_offset_hz[i] >= lo && p.freq_offset_hz[i] <= hi) {
                acc += std::pow(10.0, p.power_db[i] / 10.0);
                ++count;
            }
        }
        REQUIRE(count > 0);
        return 10.0 * std::log10(acc / static_cast<double>(count));
    };

    const double occupied =
        (band_mean_db(65, 662) + band_mean_db(726, 1323) + band_mean_db(1387, 1984)) / 3.0;
    // interior of the two inter-subband gaps and the outer guards
    const double guard_inner = std::max(band_mean_db(673, 715), band_mean_db(1334, 1376));
    const double guard_outer = std::max(band_mean_db(6, 54), band_mean_db(1995, 2043));

    // rect-pulse OFDM sidelobes bound the attainable mean suppression over a
    // 63-bin gap; frozen oracle values are 18.4 dB (inner) / 24.0 dB (outer)
    CHECK(occupied - guard_inner > 15.0);
    CHECK(occupied - guard_outer > 20.0);

    // three distinct occupied bands: each subband individually close to the mean
    for (double lo : {65.0, 726.0, 1387.0})
        CHECK(std::abs(band_mean_db(lo, lo + 597.0) - occupied) < 3.0);
}

TEST_CASE("psd errors") {
    IqBuffer buf;
    buf.numerology = kPaper;
    CHECK_THROWS(psd(buf, 256)); // empty
    buf.samples.resize(100);
    CHECK_THROWS(psd(buf, 256)); // segment longer than buffer
}

TEST_CASE("papr basics") {
    std::vector<cplx> flat(1000, cplx(0.5, -0.5));
    CHECK(papr_db(flat) == doctest::Approx(0.0).epsilon(1e-12));

    Rng rng(5);
    std::vector<cplx> noise(4096);
    for (auto& s : noise) s = rng.gaussian_c();
    CHECK(papr_db(noise) >= 0.0);

    std::vector<cplx> zero(16, cplx(0.0));
    CHECK_THROWS(papr_db(zero));
    CHECK_THROWS(papr_db(std::span<const cplx>{}));
}

TEST_CASE("zc sensing symbols beat random qpsk payloads on papr") {
    const auto alloc = build_allocation(NodeId::Node1, kPaper, 20);
    const auto zc = generate_zc({568, 41}); // node 1 default root
    const auto zc_buf = modulate(assemble_grid(alloc, kPaper, zc, 1));
    const double zc_papr = papr_db(zc_buf.samples);

    Rng rng(31);
    std::vector<double> qpsk_paprs;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::uint8_t> bits(2 * alloc.data.size());
        for (auto& b : bits) b = rng.bit();
        const auto buf = modulate(assemble_grid(alloc, kPaper, map_qpsk(bits), 1));
        qpsk_paprs.push_back(papr_db(buf.samples));
    }
    std::nth_element(qpsk_paprs.begin(), qpsk_paprs.begin() + 50, qpsk_paprs.end());
    CHECK(zc_papr < qpsk_paprs[50]);
}
