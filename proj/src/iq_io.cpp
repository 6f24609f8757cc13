#include "sbfd/iq_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace sbfd {

namespace {

// Host is assumed little-endian (x86/aarch64); enforced at build time below.
static_assert(std::endian::native == std::endian::little,
              "cf32 serialization assumes a little-endian host");

std::vector<std::uint8_t> read_all(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    f.seekg(0, std::ios::end);
    const auto size = static_cast<std::size_t>(f.tellg());
    f.seekg(0);
    std::vector<std::uint8_t> bytes(size);
    if (size > 0) f.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size));
    if (!f) throw std::runtime_error("short read on " + path.string());
    return bytes;
}

void write_all(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    if (!bytes.empty())
        f.write(reinterpret_cast<const char*>(bytes.data()),
                static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("short write on " + path.string());
}

} // namespace

std::vector<std::uint8_t> serialize_iq(std::span<const cplx> samples) {
    std::vector<std::uint8_t> bytes(samples.size() * 8);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const float iq[2] = {static_cast<float>(samples[i].real()),
                             static_cast<float>(samples[i].imag())};
        std::memcpy(bytes.data() + i * 8, iq, 8);
    }
    return bytes;
}

std::vector<cplx> deserialize_iq(std::span<const std::uint8_t> bytes) {
    if (bytes.size() % 8 != 0)
        throw std::invalid_argument("deserialize_iq: byte count not a multiple of 8");
    std::vector<cplx> samples(bytes.size() / 8);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        float iq[2];
        std::memcpy(iq, bytes.data() + i * 8, 8);
        samples[i] = {static_cast<double>(iq[0]), static_cast<double>(iq[1])};
    }
    return samples;
}

void write_cf32(const std::filesystem::path& path, const IqBuffer& buffer) {
    write_all(path, serialize_iq(buffer.samples));
    nlohmann::ordered_json meta;
    meta["sample_rate_hz"] = buffer.numerology.sample_rate_hz;
    meta["center_frequency_hz"] = buffer.numerology.center_frequency_hz;
    meta["start_timestamp_s"] = buffer.start_timestamp_s;
    std::ofstream f(path.string() + ".json", std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write sidecar for " + path.string());
    f << meta.dump(2) << "\n";
}

IqBuffer read_cf32(const std::filesystem::path& path, const OfdmNumerology& numerology) {
    IqBuffer b;
    b.numerology = numerology;
    b.samples = deserialize_iq(read_all(path));
    const std::filesystem::path sidecar = path.string() + ".json";
    if (std::filesystem::exists(sidecar)) {
        std::ifstream f(sidecar);
        nlohmann::json meta = nlohmann::json::parse(f);
        b.numerology.sample_rate_hz = meta.value("sample_rate_hz", numerology.sample_rate_hz);
        b.numerology.center_frequency_hz =
            meta.value("center_frequency_hz", numerology.center_frequency_hz);
        b.start_timestamp_s = meta.value("start_timestamp_s", 0.0);
    }
    return b;
}

void cf32_to_csv(const std::filesystem::path& in, const std::filesystem::path& out) {
    const auto samples = deserialize_iq(read_all(in));
    std::ofstream f(out, std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + out.string() + " for writing");
    f << "i,q\n";
    char line[80];
    for (const auto& s : samples) {
        // %.9g round-trips float32 exactly
        std::snprintf(line, sizeof(line), "%.9g,%.9g\n", s.real(), s.imag());
        f << line;
    }
}

void csv_to_cf32(const std::filesystem::path& in, const std::filesystem::path& out) {
    std::ifstream f(in);
    if (!f) throw std::runtime_error("cannot open " + in.string());
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("empty csv " + in.string());
    std::vector<cplx> samples;
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        float i = 0.f, q = 0.f;
        if (std::sscanf(line.c_str(), "%g,%g", &i, &q) != 2)
            throw std::runtime_error("malformed csv row at line " + std::to_string(lineno));
        samples.emplace_back(static_cast<double>(i), static_cast<double>(q));
    }
    write_all(out, serialize_iq(samples));
}

} // namespace sbfd
