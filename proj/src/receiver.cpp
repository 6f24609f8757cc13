#include "sbfd/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sbfd/qpsk.hpp"

namespace sbfd {

SubbandGrid extract_subband(const SymbolGrid& grid, const SubbandAllocation& alloc) {
    if (grid.numerology.fft_size != alloc.fft_size)
        throw std::invalid_argument("extract_subband: allocation/grid fft_size mismatch");
    SubbandGrid out;
    out.alloc = alloc;
    out.numerology = grid.numerology;
    out.m = CMat(alloc.active.size(), grid.m.cols);
    for (std::size_t s = 0; s < grid.m.cols; ++s) {
        const cplx* src = grid.m.col(s);
        cplx* dst = out.m.col(s);
        for (std::size_t i = 0; i < alloc.active.size(); ++i) dst[i] = src[alloc.active[i] - 1];
    }
    return out;
}

namespace {

constexpr double kDivisionFloor = 1e-12;

// Row positions of the pilot bins inside the active set.
std::vector<std::size_t> pilot_rows(const SubbandAllocation& alloc) {
    std::vector<std::size_t> rows;
    rows.reserve(alloc.pilots.size());
    std::size_t j = 0;
    for (std::size_t i = 0; i < alloc.active.size(); ++i) {
        if (j < alloc.pilots.size() && alloc.active[i] == alloc.pilots[j]) {
            rows.push_back(i);
            ++j;
        }
    }
    return rows;
}

// Linear interpolation from values at `rows` onto all rows, nearest-value
// hold beyond the first/last anchor.
void interp_rows(const std::vector<std::size_t>& rows, const std::vector<cplx>& anchor,
                 cplx* out, std::size_t n) {
    std::size_t seg = 0;
    for (std::size_t r = 0; r < n; ++r) {
        if (r <= rows.front()) {
            out[r] = anchor.front();
        } else if (r >= rows.back()) {
            out[r] = anchor.back();
        } else {
            while (rows[seg + 1] < r) ++seg;
            const double a = static_cast<double>(r - rows[seg]) /
                             static_cast<double>(rows[seg + 1] - rows[seg]);
            out[r] = (1.0 - a) * anchor[seg] + a * anchor[seg + 1];
        }
    }
}

} // namespace

ChannelEstimate estimate_channel(const SubbandGrid& rx, const SubbandGrid& tx_known,
                                 bool interpolate) {
    if (rx.m.rows != tx_known.m.rows || rx.m.cols != tx_known.m.cols)
        throw std::invalid_argument("estimate_channel: grid shape mismatch");
    if (rx.alloc.active != tx_known.alloc.active)
        throw std::invalid_argument("estimate_channel: allocation mismatch");

    ChannelEstimate est;
    est.response = CMat(rx.m.rows, rx.m.cols);

    if (!interpolate) {
        for (std::size_t s = 0; s < rx.m.cols; ++s) {
            const cplx* y = rx.m.col(s);
            const cplx* x = tx_known.m.col(s);
            cplx* h = est.response.col(s);
            for (std::size_t r = 0; r < rx.m.rows; ++r) {
                if (std::abs(x[r]) < kDivisionFloor)
                    throw std::runtime_error("estimate_channel: zero transmit symbol on a bin");
                h[r] = y[r] / x[r];
            }
        }
        return est;
    }

    const auto rows = pilot_rows(rx.alloc);
    if (rows.empty()) throw std::runtime_error("estimate_channel: allocation has no pilots");
    std::vector<cplx> anchor(rows.size());
    for (std::size_t s = 0; s < rx.m.cols; ++s) {
        const cplx* y = rx.m.col(s);
        const cplx* x = tx_known.m.col(s);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (std::abs(x[rows[i]]) < kDivisionFloor)
                throw std::runtime_error("estimate_channel: zero pilot symbol");
            anchor[i] = y[rows[i]] / x[rows[i]];
        }
        interp_rows(rows, anchor, est.response.col(s), rx.m.rows);
    }
    return est;
}

CommResult comm_process(const SubbandGrid& rx, std::span<const std::uint8_t> tx_bits,
                        const CommConfig& cfg) {
    if (rx.alloc.payload_kind != PayloadKind::CommQpsk)
        throw std::invalid_argument("comm_process: allocation is not a comm subband");
    if (cfg.pilot_avg_symbols < 1)
        throw std::invalid_argument("comm_process: pilot_avg_symbols must be >= 1");
    const std::size_t nsym = rx.m.cols;
    const std::size_t ndata = rx.alloc.data.size();
    if (tx_bits.size() != 2 * ndata * nsym)
        throw std::invalid_argument("comm_process: tx bit count mismatch");

    const auto prow = pilot_rows(rx.alloc);
    if (prow.empty()) throw std::runtime_error("comm_process: allocation has no pilots");

    // raw per-symbol pilot estimates (pilot value is 1 by construction)
    CMat praw(prow.size(), nsym);
    for (std::size_t s = 0; s < nsym; ++s)
        for (std::size_t i = 0; i < prow.size(); ++i) praw.at(i, s) = rx.m.at(prow[i], s);

    // centered slow-time moving average (window shrinks at the edges)
    CMat psm(prow.size(), nsym);
    const std::size_t half = (cfg.pilot_avg_symbols - 1) / 2;
    for (std::size_t s = 0; s < nsym; ++s) {
        const std::size_t lo = s >= half ? s - half : 0;
        const std::size_t hi = std::min(s + half, nsym - 1);
        const double inv = 1.0 / static_cast<double>(hi - lo + 1);
        for (std::size_t i = 0; i < prow.size(); ++i) {
            cplx acc = 0.0;
            for (std::size_t t = lo; t <= hi; ++t) acc += praw.at(i, t);
            psm.at(i, s) = acc * inv;
        }
    }

    // data row positions within the active set
    std::vector<std::size_t> drow;
    drow.reserve(ndata);
    {
        std::size_t j = 0;
        for (std::size_t i = 0; i < rx.alloc.active.size(); ++i) {
            if (j < rx.alloc.data.size() && rx.alloc.active[i] == rx.alloc.data[j]) {
                drow.push_back(i);
                ++j;
            }
        }
    }

    CommResult res;
    res.bits.resize(tx_bits.size(), 0);
    res.equalized.reserve(ndata * nsym);

    std::vector<cplx> anchor(prow.size()), h(rx.m.rows);
    for (std::size_t s = 0; s < nsym; ++s) {
        for (std::size_t i = 0; i < prow.size(); ++i) anchor[i] = psm.at(i, s);
        interp_rows(prow, anchor, h.data(), rx.m.rows);
        const cplx* y = rx.m.col(s);
        for (std::size_t d = 0; d < ndata; ++d) {
            const std::size_t bit0 = 2 * (s * ndata + d);
            const cplx hd = h[drow[d]];
            if (std::abs(hd) < cfg.h_floor) {
                ++res.erasures;
                res.equalized.push_back(0.0);
                continue;
            }
            const cplx z = y[drow[d]] / hd;
            res.equalized.push_back(z);
            std::uint8_t b0, b1;
            demap_qpsk(z, b0, b1);
            res.bits[bit0] = b0;
            res.bits[bit0 + 1] = b1;
            res.bits_compared += 2;
            res.bit_errors += (b0 != tx_bits[bit0]) + (b1 != tx_bits[bit0 + 1]);
        }
    }
    res.ber = res.bits_compared > 0
                  ? static_cast<double>(res.bit_errors) / static_cast<double>(res.bits_compared)
                  : 0.0;
    return res;
}

std::size_t cp_timing_search(const IqBuffer& buffer, std::size_t max_symbols) {
    const auto& num = buffer.numerology;
    const std::size_t sps = num.samples_per_symbol();
    const std::size_t cp = num.cp_samples;
    if (cp == 0) throw std::invalid_argument("cp_timing_search: numerology has no CP");
    if (buffer.samples.size() < 2 * sps)
        throw std::invalid_argument("cp_timing_search: need at least two symbols");
    const std::size_t nsym = std::min(buffer.samples.size() / sps - 1, max_symbols);

    std::size_t best = 0;
    double best_metric = -1.0;
    for (std::size_t k = 0; k < sps; ++k) {
        cplx acc = 0.0;
        double e1 = 0.0, e2 = 0.0;
        for (std::size_t s = 0; s < nsym; ++s) {
            const cplx* base = buffer.samples.data() + s * sps + k;
            for (std::size_t j = 0; j < cp; ++j) {
                acc += base[j] * std::conj(base[j + num.fft_size]);
                e1 += std::norm(base[j]);
                e2 += std::norm(base[j + num.fft_size]);
            }
        }
        // normalized correlation coefficient; the unnormalized sum is biased
        // by per-symbol energy variation
        const double metric = e1 > 0.0 && e2 > 0.0 ? std::abs(acc) / std::sqrt(e1 * e2) : 0.0;
        if (metric > best_metric) {
            best_metric = metric;
            best = k;
        }
    }
    return best;
}

} // namespace sbfd
