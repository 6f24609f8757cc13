#include "sbfd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sbfd {

RmseSeries rmse_per_step(std::span<const VelocitySeries> estimate_runs,
                         std::span<const VelocitySeries> truth_runs, NodeId node, Mode mode,
                         bool use_absolute) {
    if (estimate_runs.empty() || estimate_runs.size() != truth_runs.size())
        throw std::invalid_argument("rmse_per_step: need matching, non-empty run lists");
    const auto& t0 = estimate_runs[0].t_s;
    if (t0.empty()) throw std::invalid_argument("rmse_per_step: empty series");
    for (std::size_t r = 0; r < estimate_runs.size(); ++r) {
        if (estimate_runs[r].t_s != t0 || truth_runs[r].t_s != t0)
            throw std::invalid_argument("rmse_per_step: timestamp mismatch across runs");
        if (estimate_runs[r].v_mps.size() != t0.size() || truth_runs[r].v_mps.size() != t0.size())
            throw std::invalid_argument("rmse_per_step: series length mismatch");
    }

    RmseSeries out;
    out.t_s = t0;
    out.rmse_mps.resize(t0.size());
    out.node = node;
    out.mode = mode;
    out.runs_averaged = static_cast<std::uint32_t>(estimate_runs.size());
    for (std::size_t i = 0; i < t0.size(); ++i) {
        double acc = 0.0;
        for (std::size_t r = 0; r < estimate_runs.size(); ++r) {
            double e = estimate_runs[r].v_mps[i];
            double g = truth_runs[r].v_mps[i];
            if (use_absolute) {
                e = std::abs(e);
                g = std::abs(g);
            }
            acc += (e - g) * (e - g);
        }
        out.rmse_mps[i] = std::sqrt(acc / static_cast<double>(estimate_runs.size()));
    }
    return out;
}

double velocity_resolution(const OfdmNumerology& num, std::uint32_t window) {
    if (window < 2) throw std::invalid_argument("velocity_resolution: window must be >= 2");
    num.validate();
    return kSpeedOfLight / (2.0 * num.center_frequency_hz * static_cast<double>(window) *
                            num.symbol_duration_s());
}

namespace {

double median_of(std::vector<double> v) {
    auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

} // namespace

ModeSummary mode_summary(std::span<const RmseSeries> series) {
    if (series.empty()) throw std::invalid_argument("mode_summary: no input series");
    ModeSummary out;
    std::map<Mode, std::vector<double>> pooled;
    for (const auto& s : series) {
        if (s.rmse_mps.empty()) throw std::invalid_argument("mode_summary: empty RMSE series");
        ModeStats st;
        st.mode = s.mode;
        st.node = s.node;
        st.min = *std::min_element(s.rmse_mps.begin(), s.rmse_mps.end());
        st.max = *std::max_element(s.rmse_mps.begin(), s.rmse_mps.end());
        st.median = median_of(s.rmse_mps);
        out.stats.push_back(st);
        auto& pool = pooled[s.mode];
        pool.insert(pool.end(), s.rmse_mps.begin(), s.rmse_mps.end());
    }

    std::map<Mode, double> med;
    for (auto& [mode, pool] : pooled) med[mode] = median_of(pool);

    std::ostringstream note;
    if (med.count(Mode::Sbfd) && med.count(Mode::Multiband)) {
        const double a = med[Mode::Sbfd], b = med[Mode::Multiband];
        note << "sbfd/multiband median ratio " << (b > 0 ? a / b : 0.0)
             << (a <= 1.5 * b ? " (comparable)" : " (sbfd degraded)") << "; ";
    }
    if (med.count(Mode::Sbfd) && med.count(Mode::SameBand)) {
        const double a = med[Mode::Sbfd], b = med[Mode::SameBand];
        note << "same_band/sbfd median ratio " << (a > 0 ? b / a : 0.0)
             << (b >= 5.0 * a ? " (same-band degraded)" : " (same-band not degraded)") << "; ";
    }
    out.ordering_note = note.str();
    return out;
}

std::string format_mode_summary(const ModeSummary& summary) {
    std::ostringstream os;
    os << "# velocity RMSE summary (m/s)\n";
    os << "mode        node   min      median   max\n";
    for (const auto& st : summary.stats) {
        char line[128];
        std::snprintf(line, sizeof(line), "%-11s %-6s %-8.4f %-8.4f %-8.4f\n", to_string(st.mode),
                      to_string(st.node), st.min, st.median, st.max);
        os << line;
    }
    if (!summary.ordering_note.empty()) os << "# " << summary.ordering_note << "\n";
    return os.str();
}

} // namespace sbfd
