#ifndef SBFD_METRICS_HPP
#define SBFD_METRICS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sbfd/allocation.hpp"
#include "sbfd/numerology.hpp"
#include "sbfd/scenario.hpp"
#include "sbfd/track.hpp"

namespace sbfd {

struct RmseSeries {
    std::vector<double> t_s;
    std::vector<double> rmse_mps;
    NodeId node = NodeId::Node1;
    Mode mode = Mode::Sbfd;
    std::uint32_t runs_averaged = 0;
};

/// rmse(t) = sqrt(mean over runs of (est(t) - truth(t))^2). All runs must
/// share the same timestamps (estimates and truth resampled beforehand).
/// use_absolute compares |est| with |truth| instead.
RmseSeries rmse_per_step(std::span<const VelocitySeries> estimate_runs,
                         std::span<const VelocitySeries> truth_runs, NodeId node, Mode mode,
                         bool use_absolute = false);

/// c / (2 fc window T_sym): radial velocity change spanning one Doppler bin.
double velocity_resolution(const OfdmNumerology& num, std::uint32_t window);

struct ModeStats {
    Mode mode = Mode::Sbfd;
    NodeId node = NodeId::Node1;
    double min = 0.0;
    double median = 0.0;
    double max = 0.0;
};

struct ModeSummary {
    std::vector<ModeStats> stats; // per input series, aggregated over time
    std::string ordering_note;
};

/// Min/median/max RMSE over time per mode plus an ordering report comparing
/// SBFD, multiband and same-band medians where present.
ModeSummary mode_summary(std::span<const RmseSeries> series);

std::string format_mode_summary(const ModeSummary& summary);

} // namespace sbfd

#endif // SBFD_METRICS_HPP
