#ifndef SBFD_ALLOCATION_HPP
#define SBFD_ALLOCATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sbfd/numerology.hpp"

namespace sbfd {

enum class NodeId : int { Node1 = 1, Node2 = 2, Node3 = 3 };

enum class PayloadKind { SensingZC, CommQpsk };

const char* to_string(NodeId id);
int node_index(NodeId id); // 0-based

/// Per-node subcarrier allocation. All indices are 1-based FFT bins,
/// stored ascending. active and guard partition {1..fft_size}; pilots
/// and data partition active.
struct SubbandAllocation {
    NodeId node_id = NodeId::Node1;
    PayloadKind payload_kind = PayloadKind::SensingZC;
    std::size_t fft_size = 0;
    std::vector<std::uint32_t> active;
    std::vector<std::uint32_t> guard;
    std::vector<std::uint32_t> pilots;
    std::vector<std::uint32_t> data;

    void validate() const; // throws std::runtime_error on any broken invariant
};

/// Subband allocation for one node: three 598-wide subbands with guard
/// bands, pilots anchored at the first active index and repeated every
/// pilot_spacing bins. Node1/Node2 carry ZC sensing payloads, Node3 QPSK.
/// For the default 2048-bin numerology the index sets are
///   Node1 {65..662}, Node2 {726..1323}, Node3 {1387..1984};
/// other FFT sizes use the same fractional layout.
SubbandAllocation build_allocation(NodeId node_id, const OfdmNumerology& num,
                                   std::uint32_t pilot_spacing);

/// Full-band sensing allocation used by the multiband and same-band modes:
/// active spans everything but the edge guards ({65..1984} at 2048 bins),
/// pilots every pilot_spacing from the first active index.
SubbandAllocation build_fullband_allocation(NodeId node_id, const OfdmNumerology& num,
                                            std::uint32_t pilot_spacing);

/// Human-readable audit dump of one or more allocations.
std::string format_allocation_audit(const std::vector<SubbandAllocation>& allocs);

} // namespace sbfd

#endif // SBFD_ALLOCATION_HPP
