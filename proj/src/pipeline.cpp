#include "sbfd/pipeline.hpp"

#include <omp.h>
#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sbfd/channel.hpp"
#include "sbfd/fft.hpp"
#include "sbfd/iq_io.hpp"
#include "sbfd/modulator.hpp"
#include "sbfd/qpsk.hpp"
#include "sbfd/receiver.hpp"
#include "sbfd/rng.hpp"
#include "sbfd/zc.hpp"

namespace sbfd {

namespace {

constexpr std::size_t kChunkSymbols = 256;
constexpr std::size_t kPsdSampleCap = 1u << 21; // PSD uses the leading ~0.1 s
constexpr std::size_t kPsdSegment = 2048;
constexpr std::size_t kConstellationCap = 4096;
constexpr std::size_t kTruthSmoothing = 5;

std::uint64_t comm_bits_seed(const Scenario& s, std::uint32_t run, int node_idx,
                             std::uint64_t symbol) {
    return mix64(mix64(s.seed, kStreamBits, s.payload_salt),
                 mix64(static_cast<std::uint64_t>(run), static_cast<std::uint64_t>(node_idx)),
                 symbol);
}

// Ring buffer of divided (Y/X) subband columns feeding the window processor.
class StreamingSensor {
  public:
    StreamingSensor(std::size_t n_bins, const OfdmNumerology& num, const SensingConfig& cfg)
        : cfg_(cfg), ring_(n_bins, cfg.window), proc_(n_bins, num, cfg), next_start_(0) {}

    void push(std::uint64_t symbol_index, const cplx* d_column) {
        std::copy(d_column, d_column + ring_.rows,
                  ring_.col(static_cast<std::size_t>(symbol_index % cfg_.window)));
        if (symbol_index + 1 >= cfg_.window && symbol_index + 1 - cfg_.window == next_start_) {
            CMat w(ring_.rows, cfg_.window);
            for (std::size_t j = 0; j < cfg_.window; ++j) {
                const std::size_t src = (next_start_ + j) % cfg_.window;
                std::copy(ring_.col(src), ring_.col(src) + ring_.rows, w.col(j));
            }
            windows_.push_back(proc_.process(w, static_cast<std::uint32_t>(next_start_)));
            next_start_ += cfg_.hop;
        }
    }

    std::vector<SensingWindow>& windows() { return windows_; }

  private:
    SensingConfig cfg_;
    CMat ring_;
    WindowProcessor proc_;
    std::uint64_t next_start_;
    std::vector<SensingWindow> windows_;
};

struct CommAccumulator {
    std::uint64_t bits_compared = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t erasures = 0;
    std::vector<cplx> constellation;
};

double vec_power(std::span<const cplx> v) {
    double acc = 0.0;
    for (const auto& s : v) acc += std::norm(s);
    return v.empty() ? 0.0 : acc / static_cast<double>(v.size());
}

} // namespace

std::vector<std::uint8_t> comm_symbol_bits(const Scenario& s, std::uint32_t run_index,
                                           int node_idx, std::uint64_t symbol_index,
                                           std::size_t nbits) {
    Rng rng(comm_bits_seed(s, run_index, node_idx, symbol_index));
    std::vector<std::uint8_t> bits(nbits);
    for (auto& b : bits) b = rng.bit();
    return bits;
}

SingleRunResult execute_run(const Scenario& scenario, Mode mode, std::uint32_t run_index) {
    scenario.validate();
    const auto& num = scenario.numerology;
    const auto fcs = center_frequencies(scenario, mode);
    const auto allocs = scenario_allocations(scenario, mode);

    const double t_sym = num.symbol_duration_s();
    const auto n_symbols = static_cast<std::uint64_t>(std::floor(scenario.duration_s / t_sym));
    if (n_symbols < scenario.sensing.window_symbols)
        throw std::invalid_argument("run: duration too short for one sensing window");

    // trajectory on the testbed clock
    const auto raw_track = make_run_track(scenario, run_index);
    const auto timeline = align_timelines(scenario.testbed_start_s, raw_track);
    const auto track = apply_alignment(raw_track, timeline);
    if (track.end_time_s() + 1e-9 < scenario.duration_s)
        throw std::invalid_argument("run: duration exceeds trajectory span after alignment");

    // transmit payload templates
    const std::size_t n = num.fft_size;
    std::array<std::vector<cplx>, 3> tx_template; // constant column for sensing nodes
    std::array<bool, 3> is_comm{};
    for (int i = 0; i < 3; ++i) {
        const auto& alloc = allocs[static_cast<std::size_t>(i)];
        is_comm[static_cast<std::size_t>(i)] = alloc.payload_kind == PayloadKind::CommQpsk;
        if (!is_comm[static_cast<std::size_t>(i)]) {
            const auto zc = generate_zc(
                {static_cast<std::uint32_t>(alloc.data.size()), zc_root_for(scenario, i)});
            tx_template[static_cast<std::size_t>(i)].resize(n);
            assemble_symbol(alloc, zc, tx_template[static_cast<std::size_t>(i)].data());
        }
    }

    // receivers: sensing processors (own subband), comm accumulators (SBFD)
    SensingConfig scfg = SensingConfig::from(scenario.sensing);
    scfg.keep_maps = false;
    std::array<std::unique_ptr<StreamingSensor>, 3> sensors;
    for (int k = 0; k < 3; ++k) {
        SensingConfig c = scfg;
        c.center_frequency_hz = fcs[static_cast<std::size_t>(k)];
        sensors[static_cast<std::size_t>(k)] = std::make_unique<StreamingSensor>(
            allocs[static_cast<std::size_t>(k)].active.size(), num, c);
    }
    std::array<CommAccumulator, 3> comm_acc;
    const bool has_comm = mode == Mode::Sbfd;
    const int comm_node = 2; // node3 transmits the QPSK subband in SBFD mode
    const auto& comm_alloc = allocs[comm_node];
    const std::size_t comm_ndata = comm_alloc.data.size();

    WelchAccumulator psd_acc(kPsdSegment);
    std::uint64_t psd_pushed = 0;

    const double snr_lin =
        std::isinf(scenario.snr_db) ? INFINITY : std::pow(10.0, scenario.snr_db / 10.0);
    std::array<double, 3> noise_sigma{-1.0, -1.0, -1.0}; // calibrated on chunk 0

    fft_warm(n);
    const std::size_t sps = num.samples_per_symbol();

    // chunk working buffers
    std::array<CMat, 3> tx_cols;   // frequency-domain tx columns for the chunk
    std::array<CMat, 3> rx_cols;   // demodulated rx columns
    std::array<std::vector<cplx>, 3> rx_time;
    for (int i = 0; i < 3; ++i) {
        tx_cols[static_cast<std::size_t>(i)] = CMat(n, kChunkSymbols);
        rx_cols[static_cast<std::size_t>(i)] = CMat(n, kChunkSymbols);
        rx_time[static_cast<std::size_t>(i)].resize(kChunkSymbols * sps);
    }
    CMat d_col_scratch(0, 0);

    for (std::uint64_t chunk_start = 0; chunk_start < n_symbols; chunk_start += kChunkSymbols) {
        const auto chunk_len =
            static_cast<std::size_t>(std::min<std::uint64_t>(kChunkSymbols, n_symbols - chunk_start));

        // (1) transmit grid columns
        const auto cl = static_cast<long long>(chunk_len);
#pragma omp parallel for schedule(static)
        for (long long c = 0; c < cl; ++c) {
            const auto sc = static_cast<std::size_t>(c);
            const std::uint64_t m = chunk_start + static_cast<std::uint64_t>(c);
            for (int i = 0; i < 3; ++i) {
                const auto si = static_cast<std::size_t>(i);
                cplx* dst = tx_cols[si].col(sc);
                if (!is_comm[si]) {
                    std::copy(tx_template[si].begin(), tx_template[si].end(), dst);
                } else {
                    const auto bits =
                        comm_symbol_bits(scenario, run_index, i, m, 2 * comm_ndata);
                    const auto payload = map_qpsk(bits);
                    assemble_symbol(allocs[si], payload, dst);
                }
            }
        }

        // (2) propagate per receiver: taps in frequency, back to time
        for (int k = 0; k < 3; ++k) {
            const auto sk = static_cast<std::size_t>(k);
#pragma omp parallel
            {
                std::vector<cplx> accum(n), scratch(n);
#pragma omp for schedule(static)
                for (long long c = 0; c < cl; ++c) {
                    const auto sc = static_cast<std::size_t>(c);
                    const std::uint64_t m = chunk_start + static_cast<std::uint64_t>(c);
                    const double t = static_cast<double>(m) * t_sym;
                    std::fill(accum.begin(), accum.end(), cplx(0.0));
                    for (int i = 0; i < 3; ++i) {
                        const auto si = static_cast<std::size_t>(i);
                        if (fcs[si] != fcs[sk]) continue; // out-of-band transmitter
                        const auto taps = compute_paths(scenario, track, t, node_from_index(i),
                                                        node_from_index(k), mode);
                        apply_taps_to_column(num, fcs[si], taps, tx_cols[si].col(sc),
                                             accum.data());
                    }
                    modulate_symbol(num, accum.data(), rx_time[sk].data() + sc * sps,
                                    scratch.data());
                }
            }

            if (noise_sigma[sk] < 0.0) {
                const double p =
                    vec_power(std::span<const cplx>(rx_time[sk].data(), chunk_len * sps));
                if (p <= 0.0) throw std::runtime_error("run: receiver sees zero signal power");
                noise_sigma[sk] = std::isinf(snr_lin) ? 0.0 : std::sqrt(p / snr_lin);
            }
            if (noise_sigma[sk] > 0.0)
                add_noise_blocks(std::span<cplx>(rx_time[sk].data(), chunk_len * sps), sps,
                                 mix64(scenario.seed, kStreamNoise, run_index,
                                       static_cast<std::uint64_t>(k)),
                                 noise_sigma[sk], chunk_start);

#pragma omp parallel
            {
                std::vector<cplx> scratch(n);
#pragma omp for schedule(static)
                for (long long c = 0; c < cl; ++c) {
                    const auto sc = static_cast<std::size_t>(c);
                    demodulate_symbol(num, rx_time[sk].data() + sc * sps, rx_cols[sk].col(sc),
                                      scratch.data());
                }
            }
        }

        // (3) received composite PSD at node 2
        if (psd_pushed < kPsdSampleCap) {
            const std::size_t take =
                std::min<std::size_t>(chunk_len * sps, kPsdSampleCap - psd_pushed);
            psd_acc.push(std::span<const cplx>(rx_time[1].data(), take));
            psd_pushed += take;
        }

        // (4) monostatic sensing: divide own subband by the known payload
        for (int k = 0; k < 3; ++k) {
            const auto sk = static_cast<std::size_t>(k);
            const auto& alloc = allocs[sk];
            const std::size_t nb = alloc.active.size();
            if (d_col_scratch.rows != nb) d_col_scratch = CMat(nb, 1);
            for (std::size_t c = 0; c < chunk_len; ++c) {
                const cplx* y = rx_cols[sk].col(c);
                const cplx* x = tx_cols[sk].col(c);
                cplx* d = d_col_scratch.col(0);
                for (std::size_t j = 0; j < nb; ++j) {
                    const std::size_t row = alloc.active[j] - 1;
                    d[j] = y[row] / x[row];
                }
                sensors[sk]->push(chunk_start + c, d);
            }
        }

        // (5) communication subband at every receiver (SBFD only)
        if (has_comm) {
            const std::size_t nb = comm_alloc.active.size();
            std::vector<std::uint8_t> tx_bits(2 * comm_ndata * chunk_len);
            for (std::size_t c = 0; c < chunk_len; ++c) {
                const auto bits = comm_symbol_bits(scenario, run_index, comm_node,
                                                   chunk_start + c, 2 * comm_ndata);
                std::copy(bits.begin(), bits.end(), tx_bits.begin() + 2 * comm_ndata * c);
            }
            for (int k = 0; k < 3; ++k) {
                const auto sk = static_cast<std::size_t>(k);
                SubbandGrid sub;
                sub.alloc = comm_alloc;
                sub.numerology = num;
                sub.m = CMat(nb, chunk_len);
                for (std::size_t c = 0; c < chunk_len; ++c) {
                    const cplx* y = rx_cols[sk].col(c);
                    cplx* dst = sub.m.col(c);
                    for (std::size_t j = 0; j < nb; ++j) dst[j] = y[comm_alloc.active[j] - 1];
                }
                CommConfig ccfg;
                ccfg.pilot_avg_symbols = scenario.comm_pilot_avg_symbols;
                const auto res = comm_process(sub, tx_bits, ccfg);
                auto& acc = comm_acc[sk];
                acc.bits_compared += res.bits_compared;
                acc.bit_errors += res.bit_errors;
                acc.erasures += res.erasures;
                if (k == comm_node && acc.constellation.size() < kConstellationCap) {
                    const std::size_t room = kConstellationCap - acc.constellation.size();
                    const std::size_t take = std::min(room, res.equalized.size());
                    acc.constellation.insert(acc.constellation.end(), res.equalized.begin(),
                                             res.equalized.begin() + static_cast<std::ptrdiff_t>(take));
                }
            }
        }
    }

    // assemble results
    SingleRunResult out;
    out.aligned_track = track;
    for (int k = 0; k < 3; ++k) {
        const auto sk = static_cast<std::size_t>(k);
        auto& nodeout = out.sensing[sk];
        nodeout.node = node_from_index(k);
        nodeout.estimates = velocity_track(sensors[sk]->windows(), 0.0);

        const auto truth_series = derive_radial_velocity(
            track, scenario.nodes[sk].position, kTruthSmoothing);
        std::vector<double> t_est;
        t_est.reserve(nodeout.estimates.size());
        for (const auto& e : nodeout.estimates) t_est.push_back(e.timestamp_s);
        nodeout.truth.t_s = t_est;
        nodeout.truth.v_mps = resample_to(truth_series, t_est);
    }
    if (has_comm) {
        for (int k = 0; k < 3; ++k) {
            const auto& acc = comm_acc[static_cast<std::size_t>(k)];
            CommRunOutput c;
            c.rx_node = node_from_index(k);
            c.bits_compared = acc.bits_compared;
            c.bit_errors = acc.bit_errors;
            c.erasures = acc.erasures;
            c.ber = acc.bits_compared > 0 ? static_cast<double>(acc.bit_errors) /
                                                static_cast<double>(acc.bits_compared)
                                          : 0.0;
            c.constellation = acc.constellation;
            out.comm.push_back(std::move(c));
        }
    }
    out.rx_psd = psd_acc.finalize(num.sample_rate_hz);
    return out;
}

// ---------------------------------------------------------------------------
// batch runner and artifact writing
// ---------------------------------------------------------------------------

namespace {

namespace fs = std::filesystem;

class ArtifactWriter {
  public:
    explicit ArtifactWriter(fs::path root) : root_(std::move(root)) {
        fs::create_directories(root_);
    }

    void write_text(const std::string& relpath, const std::string& content) {
        const fs::path full = root_ / relpath;
        fs::create_directories(full.parent_path());
        std::ofstream f(full, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + full.string());
        f << content;
        f.close();
        ArtifactEntry e;
        e.relpath = relpath;
        e.bytes = content.size();
        e.crc32 = static_cast<std::uint32_t>(
            ::crc32(0, reinterpret_cast<const Bytef*>(content.data()),
                    static_cast<uInt>(content.size())));
        entries_.push_back(std::move(e));
    }

    std::vector<ArtifactEntry>& entries() { return entries_; }
    const fs::path& root() const { return root_; }

  private:
    fs::path root_;
    std::vector<ArtifactEntry> entries_;
};

std::string fmt_double(double v, const char* spec = "%.10g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string velocity_csv(const NodeRunOutput& node, int subband) {
    std::string s = "timestamp_s,velocity_mps,peak_snr_db,node,subband\n";
    for (const auto& e : node.estimates) {
        s += fmt_double(e.timestamp_s) + "," + fmt_double(e.velocity_mps) + "," +
             fmt_double(e.peak_snr_db, "%.4f") + "," + to_string(node.node) + "," +
             std::to_string(subband) + "\n";
    }
    return s;
}

std::string truth_csv(const NodeRunOutput& node) {
    std::string s = "timestamp_s,velocity_mps,node\n";
    for (std::size_t i = 0; i < node.truth.t_s.size(); ++i)
        s += fmt_double(node.truth.t_s[i]) + "," + fmt_double(node.truth.v_mps[i]) + "," +
             to_string(node.node) + "\n";
    return s;
}

std::string psd_csv(const PsdSeries& psd) {
    std::string s = "freq_offset_hz,power_db\n";
    for (std::size_t i = 0; i < psd.freq_offset_hz.size(); ++i)
        s += fmt_double(psd.freq_offset_hz[i]) + "," + fmt_double(psd.power_db[i], "%.4f") + "\n";
    return s;
}

std::string track_csv(const GroundTruthTrack& track) {
    std::string s = "t_s,x_m,y_m,z_m\n";
    for (std::size_t i = 0; i < track.size(); ++i)
        s += fmt_double(track.time_at(i)) + "," + fmt_double(track.positions[i][0]) + "," +
             fmt_double(track.positions[i][1]) + "," + fmt_double(track.positions[i][2]) + "\n";
    return s;
}

std::string rmse_csv(std::span<const RmseSeries> series) {
    std::string s = "t_s,rmse_mps,node,mode,runs\n";
    for (const auto& r : series)
        for (std::size_t i = 0; i < r.t_s.size(); ++i)
            s += fmt_double(r.t_s[i]) + "," + fmt_double(r.rmse_mps[i]) + "," +
                 to_string(r.node) + "," + to_string(r.mode) + "," +
                 std::to_string(r.runs_averaged) + "\n";
    return s;
}

std::string run_dir_name(std::uint32_t run) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "run_%03u", run);
    return buf;
}

} // namespace

RunManifest run_simulation(const Scenario& scenario_in, const std::string& scenario_label,
                           const RunOptions& opt) {
    if (opt.runs == 0) throw std::invalid_argument("run_simulation: runs must be >= 1");
    if (opt.out_dir.empty()) throw std::invalid_argument("run_simulation: output dir required");
    if (opt.threads > 0) omp_set_num_threads(opt.threads);

    Scenario scenario = scenario_in;
    if (opt.seed_override) scenario.seed = *opt.seed_override;
    if (opt.identical_payload_override)
        scenario.identical_payload = *opt.identical_payload_override;
    const Mode mode = opt.mode_override.value_or(scenario.mode);
    scenario.validate();
    center_frequencies(scenario, mode); // fail fast on mode/frequency inconsistency

    ArtifactWriter w(opt.out_dir);

    // per-run artifacts and in-memory series for aggregation
    std::array<std::vector<VelocitySeries>, 3> est_runs, truth_runs;
    std::array<std::array<std::uint64_t, 3>, 3> ber_tallies{}; // [node][bits,errors,erasures]
    std::array<std::vector<cplx>, 1> constellation;            // node3 rx, first run

    for (std::uint32_t run = 0; run < opt.runs; ++run) {
        const auto res = execute_run(scenario, mode, run);
        const std::string dir = run_dir_name(run);
        for (int k = 0; k < 3; ++k) {
            const auto sk = static_cast<std::size_t>(k);
            const int subband = mode == Mode::Sbfd ? k + 1 : 0; // 0 = full band
            w.write_text(dir + "/velocity_" + to_string(node_from_index(k)) + ".csv",
                         velocity_csv(res.sensing[sk], subband));
            w.write_text(dir + "/truth_velocity_" + to_string(node_from_index(k)) + ".csv",
                         truth_csv(res.sensing[sk]));

            VelocitySeries est;
            for (const auto& e : res.sensing[sk].estimates) {
                est.t_s.push_back(e.timestamp_s);
                est.v_mps.push_back(e.velocity_mps);
            }
            est_runs[sk].push_back(std::move(est));
            truth_runs[sk].push_back(res.sensing[sk].truth);
        }
        w.write_text(dir + "/psd_rx_node2.csv", psd_csv(res.rx_psd));
        w.write_text(dir + "/groundtruth.csv", track_csv(res.aligned_track));

        for (const auto& c : res.comm) {
            const auto sk = static_cast<std::size_t>(node_index(c.rx_node));
            ber_tallies[sk][0] += c.bits_compared;
            ber_tallies[sk][1] += c.bit_errors;
            ber_tallies[sk][2] += c.erasures;
            if (run == 0 && c.rx_node == NodeId::Node3) constellation[0] = c.constellation;
        }
    }

    // aggregate RMSE per node
    std::vector<RmseSeries> rmse;
    for (int k = 0; k < 3; ++k) {
        const auto sk = static_cast<std::size_t>(k);
        rmse.push_back(
            rmse_per_step(est_runs[sk], truth_runs[sk], node_from_index(k), mode, false));
    }
    w.write_text(std::string("rmse_") + to_string(mode) + ".csv", rmse_csv(rmse));
    w.write_text("mode_summary.txt", format_mode_summary(mode_summary(rmse)));

    if (mode == Mode::Sbfd) {
        std::string ber = "node,snr_db,bits,errors,erasures,ber\n";
        for (int k = 0; k < 3; ++k) {
            const auto sk = static_cast<std::size_t>(k);
            const double b = ber_tallies[sk][0] > 0
                                 ? static_cast<double>(ber_tallies[sk][1]) /
                                       static_cast<double>(ber_tallies[sk][0])
                                 : 0.0;
            ber += std::string(to_string(node_from_index(k))) + "," +
                   fmt_double(scenario.snr_db, "%.2f") + "," +
                   std::to_string(ber_tallies[sk][0]) + "," + std::to_string(ber_tallies[sk][1]) +
                   "," + std::to_string(ber_tallies[sk][2]) + "," + fmt_double(b, "%.6g") + "\n";
        }
        w.write_text("ber_report.csv", ber);

        std::string cons = "i,q,kind\n";
        for (int p = 0; p < 4; ++p)
            cons += fmt_double(kQpskIdeal[p].real(), "%.6f") + "," +
                    fmt_double(kQpskIdeal[p].imag(), "%.6f") + ",ideal\n";
        for (const auto& z : constellation[0])
            cons += fmt_double(z.real(), "%.6f") + "," + fmt_double(z.imag(), "%.6f") + ",rx\n";
        w.write_text("constellation_node3.csv", cons);
    }

    // transmit-side artifacts
    {
        const auto allocs = scenario_allocations(scenario, mode);
        w.write_text("allocation_audit.txt",
                     format_allocation_audit({allocs.begin(), allocs.end()}));
        Scenario sc = scenario;
        // composite PSD of the co-channel transmit waveforms (64 symbols)
        const auto fcs = center_frequencies(scenario, mode);
        SymbolGrid composite(scenario.numerology, 64);
        for (int i = 0; i < 3; ++i) {
            const auto si = static_cast<std::size_t>(i);
            if (fcs[si] != fcs[1]) continue;
            const auto& alloc = allocs[si];
            std::vector<cplx> payload;
            if (alloc.payload_kind == PayloadKind::SensingZC) {
                payload = generate_zc(
                    {static_cast<std::uint32_t>(alloc.data.size()), zc_root_for(sc, i)});
            } else {
                const auto bits = comm_symbol_bits(sc, 0, i, 0, 2 * alloc.data.size());
                payload = map_qpsk(bits);
            }
            std::vector<cplx> col(scenario.numerology.fft_size);
            assemble_symbol(alloc, payload, col.data());
            for (std::size_t s = 0; s < composite.m.cols; ++s)
                for (std::size_t r = 0; r < composite.m.rows; ++r)
                    composite.m.at(r, s) += col[r];
        }
        const auto tx = modulate(composite);
        w.write_text("psd_tx_composite.csv", psd_csv(psd(tx, kPsdSegment)));
    }

    RunManifest manifest;
    manifest.scenario_file = scenario_label;
    manifest.scenario_name = scenario.name;
    manifest.mode = mode;
    manifest.runs = opt.runs;
    manifest.seed = scenario.seed;
    manifest.artifacts = w.entries();
    std::sort(manifest.artifacts.begin(), manifest.artifacts.end(),
              [](const ArtifactEntry& a, const ArtifactEntry& b) { return a.relpath < b.relpath; });

    nlohmann::ordered_json j;
    j["scenario_file"] = manifest.scenario_file;
    j["scenario_name"] = manifest.scenario_name;
    j["mode"] = to_string(manifest.mode);
    j["runs"] = manifest.runs;
    j["seed"] = manifest.seed;
    j["artifacts"] = nlohmann::ordered_json::array();
    for (const auto& a : manifest.artifacts) {
        nlohmann::ordered_json e;
        e["path"] = a.relpath;
        e["bytes"] = a.bytes;
        e["crc32"] = a.crc32;
        j["artifacts"].push_back(e);
    }
    std::ofstream f(opt.out_dir / "manifest.json", std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write manifest");
    f << j.dump(2) << "\n";
    return manifest;
}

RunManifest run_simulation(const std::filesystem::path& scenario_file, const RunOptions& opt) {
    return run_simulation(load_scenario(scenario_file), scenario_file.string(), opt);
}

void inspect_waveform(const Scenario& scenario, std::optional<NodeId> node,
                      const std::filesystem::path& out_dir) {
    scenario.validate();
    const Mode mode = scenario.mode;
    const auto allocs = scenario_allocations(scenario, mode);
    const auto fcs = center_frequencies(scenario, mode);
    ArtifactWriter w(out_dir);

    w.write_text("allocation_audit.txt", format_allocation_audit({allocs.begin(), allocs.end()}));

    constexpr std::size_t kSymbols = 64;
    auto node_buffer = [&](int i) {
        const auto si = static_cast<std::size_t>(i);
        const auto& alloc = allocs[si];
        std::vector<cplx> payload;
        SymbolGrid g(scenario.numerology, kSymbols);
        if (alloc.payload_kind == PayloadKind::SensingZC) {
            payload = generate_zc(
                {static_cast<std::uint32_t>(alloc.data.size()), zc_root_for(scenario, i)});
            g = assemble_grid(alloc, scenario.numerology, payload, kSymbols);
        } else {
            CMat cols(alloc.data.size(), kSymbols);
            for (std::size_t s = 0; s < kSymbols; ++s) {
                const auto bits = comm_symbol_bits(scenario, 0, i, s, 2 * alloc.data.size());
                const auto pl = map_qpsk(bits);
                std::copy(pl.begin(), pl.end(), cols.col(s));
            }
            g = assemble_grid(alloc, scenario.numerology, cols);
        }
        return modulate(g);
    };

    std::string papr_txt = "# PAPR (dB)\n";
    if (node) {
        const int i = node_index(*node);
        const auto buf = node_buffer(i);
        w.write_text(std::string("psd_tx_") + to_string(*node) + ".csv",
                     psd_csv(psd(buf, kPsdSegment)));
        const auto per_sym = papr_per_symbol_db(buf);
        papr_txt += std::string(to_string(*node)) + ": buffer " +
                    fmt_double(papr_db(buf.samples), "%.3f") + ", first symbol " +
                    fmt_double(per_sym.front(), "%.3f") + "\n";
    } else {
        IqBuffer composite;
        for (int i = 0; i < 3; ++i) {
            const auto si = static_cast<std::size_t>(i);
            const auto buf = node_buffer(i);
            const auto per_sym = papr_per_symbol_db(buf);
            papr_txt += std::string(to_string(node_from_index(i))) + ": buffer " +
                        fmt_double(papr_db(buf.samples), "%.3f") + ", first symbol " +
                        fmt_double(per_sym.front(), "%.3f") + "\n";
            if (fcs[si] != fcs[1]) continue; // out-of-band in multiband mode
            if (composite.samples.empty()) {
                composite = buf;
            } else {
                for (std::size_t j = 0; j < composite.samples.size(); ++j)
                    composite.samples[j] += buf.samples[j];
            }
        }
        w.write_text("psd_tx_composite.csv", psd_csv(psd(composite, kPsdSegment)));
    }
    w.write_text("papr.txt", papr_txt);
}

void convert_iq_file(const std::filesystem::path& in, const std::filesystem::path& out) {
    const auto ei = in.extension().string();
    const auto eo = out.extension().string();
    if (ei == ".cf32" && eo == ".csv")
        cf32_to_csv(in, out);
    else if (ei == ".csv" && eo == ".cf32")
        csv_to_cf32(in, out);
    else
        throw std::invalid_argument("convert: need .cf32 -> .csv or .csv -> .cf32");
}

} // namespace sbfd
