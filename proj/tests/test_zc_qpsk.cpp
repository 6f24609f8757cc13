#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "sbfd/qpsk.hpp"
#include "sbfd/rng.hpp"
#include "sbfd/zc.hpp"

using namespace sbfd;
using cd = std::complex<double>;

namespace {

// brute-force normalized cyclic cross-correlation peak
double xcorr_peak(const std::vector<cd>& a, const std::vector<cd>& b) {
    const std::size_t n = a.size();
    double peak = 0.0;
    for (std::size_t lag = 0; lag < n; ++lag) {
        cd acc = 0.0;
        for (std::size_t m = 0; m < n; ++m) acc += a[m] * std::conj(b[(m + lag) % n]);
        peak = std::max(peak, std::abs(acc) / static_cast<double>(n));
    }
    return peak;
}

} // namespace

TEST_CASE("zc direct evaluation, L=3 u=1") {
    const auto x = generate_zc({3, 1});
    // m(m+1)/L at m=0,1,2 -> phases 0, -2pi/3, -2pi
    CHECK(std::abs(x[0] - cd(1, 0)) < 1e-15);
    CHECK(std::abs(x[1] - std::polar(1.0, -2.0 * M_PI / 3.0)) < 1e-15);
    CHECK(std::abs(x[2] - cd(1, 0)) < 1e-12);
}

TEST_CASE("zc unit magnitude") {
    for (const auto& p : {ZcParams{568, 7}, ZcParams{568, 13}, ZcParams{1824, 23},
                          ZcParams{563, 5}}) {
        const auto x = generate_zc(p);
        REQUIRE(x.size() == p.length);
        for (const auto& v : x) CHECK(std::abs(std::abs(v) - 1.0) < 1e-12);
    }
}

TEST_CASE("zc ideal cyclic autocorrelation") {
    // odd length: zero sidelobes to numerical precision
    const auto xo = generate_zc({563, 5});
    const std::size_t n = xo.size();
    for (std::size_t lag : {1ul, 2ul, 41ul, 281ul, 562ul}) {
        cd acc = 0.0;
        for (std::size_t m = 0; m < n; ++m) acc += xo[m] * std::conj(xo[(m + lag) % n]);
        CHECK(std::abs(acc) / static_cast<double>(n) < 1e-9);
    }

    // even length (paper payload size): peak-to-sidelobe better than 20 dB
    const auto xe = generate_zc({568, 7});
    double sidelobe = 0.0;
    for (std::size_t lag = 1; lag < xe.size(); ++lag) {
        cd acc = 0.0;
        for (std::size_t m = 0; m < xe.size(); ++m) acc += xe[m] * std::conj(xe[(m + lag) % xe.size()]);
        sidelobe = std::max(sidelobe, std::abs(acc) / static_cast<double>(xe.size()));
    }
    CHECK(20.0 * std::log10(1.0 / sidelobe) > 20.0);
}

TEST_CASE("zc cross-correlation between the two sensing roots stays low") {
    const auto a = generate_zc({568, 7});
    const auto b = generate_zc({568, 13});
    CHECK(xcorr_peak(a, b) < 0.15);
}

TEST_CASE("zc parameter validation") {
    CHECK_THROWS(generate_zc({568, 2}));  // gcd(2, 568) != 1
    CHECK_THROWS(generate_zc({568, 0}));  // root < 1
    CHECK_THROWS(generate_zc({568, 568}));
    CHECK_THROWS(generate_zc({1, 1}));
}

TEST_CASE("qpsk mapping definition") {
    const std::uint8_t b00[] = {0, 0};
    const std::uint8_t b11[] = {1, 1};
    const std::uint8_t b01[] = {0, 1};
    CHECK(std::abs(map_qpsk(b00)[0] - cd(kInvSqrt2, kInvSqrt2)) < 1e-15);
    CHECK(std::abs(map_qpsk(b11)[0] - cd(-kInvSqrt2, -kInvSqrt2)) < 1e-15);
    CHECK(std::abs(map_qpsk(b01)[0] - cd(kInvSqrt2, -kInvSqrt2)) < 1e-15);
}

TEST_CASE("qpsk over random bits: unit energy and demap inverse") {
    Rng rng(123);
    std::vector<std::uint8_t> bits(1136);
    for (auto& b : bits) b = rng.bit();
    const auto sym = map_qpsk(bits);
    REQUIRE(sym.size() == 568);
    for (const auto& s : sym) CHECK(std::abs(std::abs(s) - 1.0) < 1e-12);
    for (std::size_t i = 0; i < sym.size(); ++i) {
        std::uint8_t b0, b1;
        demap_qpsk(sym[i], b0, b1);
        CHECK(b0 == bits[2 * i]);
        CHECK(b1 == bits[2 * i + 1]);
    }
}

TEST_CASE("qpsk rejects odd bit counts") {
    const std::uint8_t bits[] = {1, 0, 1};
    CHECK_THROWS(map_qpsk(std::span<const std::uint8_t>(bits, 3)));
}
