#include "sbfd/allocation.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sbfd {

const char* to_string(NodeId id) {
    switch (id) {
        case NodeId::Node1: return "node1";
        case NodeId::Node2: return "node2";
        case NodeId::Node3: return "node3";
    }
    throw std::invalid_argument("unknown node id");
}

int node_index(NodeId id) {
    const int i = static_cast<int>(id) - 1;
    if (i < 0 || i > 2) throw std::invalid_argument("unknown node id");
    return i;
}

namespace {

std::vector<std::uint32_t> iota_range(std::uint32_t first, std::uint32_t last) {
    std::vector<std::uint32_t> v;
    v.reserve(last - first + 1);
    for (std::uint32_t i = first; i <= last; ++i) v.push_back(i);
    return v;
}

SubbandAllocation finish_allocation(NodeId node_id, const OfdmNumerology& num,
                                    std::uint32_t first, std::uint32_t last,
                                    std::uint32_t pilot_spacing) {
    const auto n = static_cast<std::uint32_t>(num.fft_size);
    SubbandAllocation a;
    a.node_id = node_id;
    a.payload_kind = node_id == NodeId::Node3 ? PayloadKind::CommQpsk : PayloadKind::SensingZC;
    a.fft_size = num.fft_size;
    a.active = iota_range(first, last);

    if (pilot_spacing < 2) throw std::invalid_argument("pilot_spacing must be >= 2");
    if (pilot_spacing >= a.active.size())
        throw std::invalid_argument("pilot_spacing exceeds subband width");

    for (std::size_t off = 0; off < a.active.size(); ++off) {
        if (off % pilot_spacing == 0)
            a.pilots.push_back(a.active[off]);
        else
            a.data.push_back(a.active[off]);
    }
    for (std::uint32_t i = 1; i <= n; ++i)
        if (i < first || i > last) a.guard.push_back(i);
    a.validate();
    return a;
}

} // namespace

SubbandAllocation build_allocation(NodeId node_id, const OfdmNumerology& num,
                                   std::uint32_t pilot_spacing) {
    num.validate();
    const auto n = static_cast<std::uint64_t>(num.fft_size);
    // Fractional layout of the 2048-bin reference: 64-bin edge guards,
    // 63-bin inter-subband guards, three equal active subbands.
    const auto edge = static_cast<std::uint32_t>(n * 64 / 2048);
    const auto gap = static_cast<std::uint32_t>(n * 63 / 2048);
    const std::uint64_t width = (n - 2ULL * edge - 2ULL * gap) / 3ULL;
    if (width < 2) throw std::invalid_argument("fft_size too small for three subbands");

    const int idx = node_index(node_id);
    const auto first =
        static_cast<std::uint32_t>(edge + 1 + static_cast<std::uint64_t>(idx) * (width + gap));
    const auto last = static_cast<std::uint32_t>(first + width - 1);
    return finish_allocation(node_id, num, first, last, pilot_spacing);
}

SubbandAllocation build_fullband_allocation(NodeId node_id, const OfdmNumerology& num,
                                            std::uint32_t pilot_spacing) {
    num.validate();
    const auto n = static_cast<std::uint64_t>(num.fft_size);
    const auto edge = static_cast<std::uint32_t>(n * 64 / 2048);
    if (n <= 2ULL * edge + 1) throw std::invalid_argument("fft_size too small");
    auto a = finish_allocation(node_id, num, edge + 1, static_cast<std::uint32_t>(n - edge),
                               pilot_spacing);
    a.payload_kind = PayloadKind::SensingZC; // all nodes sense in multiband/same-band modes
    return a;
}

void SubbandAllocation::validate() const {
    auto sorted_unique = [](const std::vector<std::uint32_t>& v) {
        return std::is_sorted(v.begin(), v.end()) &&
               std::adjacent_find(v.begin(), v.end()) == v.end();
    };
    if (!sorted_unique(active) || !sorted_unique(guard) || !sorted_unique(pilots) ||
        !sorted_unique(data))
        throw std::runtime_error("allocation: index sets must be ascending and unique");
    if (active.size() + guard.size() != fft_size)
        throw std::runtime_error("allocation: active+guard must cover all bins");
    if (pilots.size() + data.size() != active.size())
        throw std::runtime_error("allocation: pilots+data must cover active");

    std::vector<std::uint32_t> merged;
    std::merge(active.begin(), active.end(), guard.begin(), guard.end(),
               std::back_inserter(merged));
    for (std::size_t i = 0; i < merged.size(); ++i)
        if (merged[i] != i + 1)
            throw std::runtime_error("allocation: active/guard not a partition of {1..N}");

    std::vector<std::uint32_t> pd;
    std::merge(pilots.begin(), pilots.end(), data.begin(), data.end(), std::back_inserter(pd));
    if (pd != active) throw std::runtime_error("allocation: pilots/data not a partition of active");
}

std::string format_allocation_audit(const std::vector<SubbandAllocation>& allocs) {
    auto ranges = [](const std::vector<std::uint32_t>& v) {
        std::ostringstream os;
        std::size_t i = 0;
        bool firstout = true;
        while (i < v.size()) {
            std::size_t j = i;
            while (j + 1 < v.size() && v[j + 1] == v[j] + 1) ++j;
            if (!firstout) os << " ";
            if (j == i)
                os << v[i];
            else
                os << v[i] << "-" << v[j];
            firstout = false;
            i = j + 1;
        }
        return os.str();
    };
    std::ostringstream os;
    os << "# subcarrier allocation audit (1-based FFT bins)\n";
    for (const auto& a : allocs) {
        os << "[" << to_string(a.node_id) << "] payload="
           << (a.payload_kind == PayloadKind::SensingZC ? "sensing-zc" : "comm-qpsk")
           << " fft_size=" << a.fft_size << "\n";
        os << "  active (" << a.active.size() << "): " << ranges(a.active) << "\n";
        os << "  pilots (" << a.pilots.size() << "): " << ranges(a.pilots) << "\n";
        os << "  data   (" << a.data.size() << "): " << ranges(a.data) << "\n";
        os << "  guard  (" << a.guard.size() << "): " << ranges(a.guard) << "\n";
    }
    return os.str();
}

} // namespace sbfd
