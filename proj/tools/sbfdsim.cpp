#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "sbfd/pipeline.hpp"
#include "sbfd/track.hpp"

namespace {

std::string default_out_dir() {
    const char* env = std::getenv("SBFDSIM_OUT");
    return env ? env : "out";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SBFD ISAC simulation toolkit"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "execute a scenario end to end");
    std::string scenario_path;
    std::string mode_str;
    std::string out_dir = default_out_dir();
    std::uint32_t runs = 6;
    std::int64_t seed = -1;
    int threads = 0;
    bool identical_payload = false;
    run->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--mode", mode_str, "override mode: sbfd|multiband|same_band");
    run->add_option("--runs", runs, "number of measurement runs");
    run->add_option("--seed", seed, "override the scenario seed");
    run->add_option("--out", out_dir, "output directory (env SBFDSIM_OUT)");
    run->add_option("--threads", threads, "bound OpenMP parallelism");
    run->add_flag("--identical-payload", identical_payload,
                  "same ZC root on all sensing nodes (same-band worst case)");

    // inspect
    auto* inspect = app.add_subcommand("inspect", "PSD/PAPR/allocation dumps for the waveforms");
    std::string ins_scenario;
    std::string ins_out = default_out_dir();
    int ins_node = 0;
    inspect->add_option("--scenario", ins_scenario, "scenario JSON file")->required();
    inspect->add_option("--node", ins_node, "restrict to one node (1..3)");
    inspect->add_option("--out", ins_out, "output directory");

    // convert
    auto* convert = app.add_subcommand("convert", "lossless cf32 <-> csv conversion");
    std::string conv_in, conv_out;
    convert->add_option("--in", conv_in, "input file (.cf32 or .csv)")->required();
    convert->add_option("--out", conv_out, "output file (.csv or .cf32)")->required();

    // gt-synth
    auto* gt = app.add_subcommand("gt-synth", "synthesize a ground-truth trajectory CSV");
    std::string gt_kind = "linear", gt_out;
    double gt_duration = 6.0, gt_rate = 100.0;
    std::vector<double> gt_start{0, 3, 1}, gt_vel{1, 0, 0}, gt_center{0, 0, 1};
    double gt_radius = 2.0, gt_period = 8.0, gt_phase = 0.0;
    gt->add_option("--kind", gt_kind, "linear|circular");
    gt->add_option("--duration", gt_duration, "seconds");
    gt->add_option("--rate", gt_rate, "samples per second");
    gt->add_option("--start", gt_start, "linear: start x y z")->expected(3);
    gt->add_option("--velocity", gt_vel, "linear: velocity x y z (m/s)")->expected(3);
    gt->add_option("--center", gt_center, "circular: center x y z")->expected(3);
    gt->add_option("--radius", gt_radius, "circular: radius (m)");
    gt->add_option("--period", gt_period, "circular: period (s)");
    gt->add_option("--phase", gt_phase, "circular: phase (rad)");
    gt->add_option("--out", gt_out, "output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            sbfd::RunOptions opt;
            if (!mode_str.empty()) opt.mode_override = sbfd::mode_from_string(mode_str);
            opt.runs = runs;
            if (seed >= 0) opt.seed_override = static_cast<std::uint64_t>(seed);
            opt.out_dir = out_dir;
            opt.threads = threads;
            if (identical_payload) opt.identical_payload_override = true;
            const auto manifest = sbfd::run_simulation(std::filesystem::path(scenario_path), opt);
            std::printf("wrote %zu artifacts to %s (mode %s, %u runs, seed %llu)\n",
                        manifest.artifacts.size(), out_dir.c_str(),
                        sbfd::to_string(manifest.mode), manifest.runs,
                        static_cast<unsigned long long>(manifest.seed));
        } else if (*inspect) {
            const auto scenario = sbfd::load_scenario(ins_scenario);
            std::optional<sbfd::NodeId> node;
            if (ins_node != 0) node = sbfd::node_from_index(ins_node - 1);
            sbfd::inspect_waveform(scenario, node, ins_out);
            std::printf("wrote waveform dumps to %s\n", ins_out.c_str());
        } else if (*convert) {
            sbfd::convert_iq_file(conv_in, conv_out);
            std::printf("converted %s -> %s\n", conv_in.c_str(), conv_out.c_str());
        } else if (*gt) {
            sbfd::TrackParams p;
            p.start = {gt_start[0], gt_start[1], gt_start[2]};
            p.velocity_mps = {gt_vel[0], gt_vel[1], gt_vel[2]};
            p.center = {gt_center[0], gt_center[1], gt_center[2]};
            p.radius_m = gt_radius;
            p.period_s = gt_period;
            p.phase_rad = gt_phase;
            sbfd::TrackKind kind;
            if (gt_kind == "linear")
                kind = sbfd::TrackKind::Linear;
            else if (gt_kind == "circular")
                kind = sbfd::TrackKind::Circular;
            else
                throw std::invalid_argument("gt-synth: kind must be linear or circular");
            const auto track = sbfd::synthesize_track(kind, p, gt_duration, gt_rate);
            sbfd::save_track(gt_out, track);
            std::printf("wrote %zu samples to %s\n", track.size(), gt_out.c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
