#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>

#include "nucrobust/color/embedding.hpp"
#include "nucrobust/color/kde.hpp"
#include "nucrobust/color/references.hpp"
#include "nucrobust/core/errors.hpp"
#include "nucrobust/core/validate.hpp"
#include "nucrobust/harness/baseline.hpp"
#include "nucrobust/harness/bundle_io.hpp"
#include "nucrobust/harness/experiment.hpp"
#include "nucrobust/harness/report.hpp"
#include "nucrobust/harness/synthetic.hpp"
#include "nucrobust/metrics/panoptic.hpp"
#include "nucrobust/perturb/colorshift.hpp"
#include "nucrobust/perturb/compression.hpp"

namespace {

using namespace nucrobust;

void write_or_print(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + out_path + "'");
    out << text;
}

int cmd_validate(const std::string& bundle_dir) {
    const Bundle bundle = harness::load_bundle(bundle_dir); // throws on invalid patches
    std::cout << "bundle '" << bundle.name << "': " << bundle.patches.size() << " patches, ok\n";
    return 0;
}

int cmd_eval(const std::string& gt_dir, const std::string& pred_dir, double grid_step,
             const std::string& out_path) {
    const Bundle gt = harness::load_bundle(gt_dir);
    const Bundle pred = harness::load_bundle(pred_dir);
    const auto grid = metrics::ThresholdGrid::with_step(grid_step);
    const metrics::EvalReport report = metrics::mpq_plus_auc(gt, pred, grid);
    write_or_print(metrics::eval_report_csv(report), out_path);
    return 0;
}

int cmd_perturb_compress(const std::string& bundle_dir, const std::string& codec_name,
                         std::vector<int> qualities, const std::string& out_dir) {
    const Bundle bundle = harness::load_bundle(bundle_dir);
    perturb::CompressionSpec spec;
    spec.codec = perturb::codec_from_string(codec_name);
    if (qualities.empty()) {
        const auto [jpeg, webp] = perturb::default_compression_specs();
        spec.qualities = spec.codec == perturb::Codec::jpeg ? jpeg.qualities : webp.qualities;
    } else {
        std::sort(qualities.begin(), qualities.end());
        spec.qualities = qualities;
    }
    const auto variants = perturb::compress_sweep(bundle, spec);
    for (const auto& v : variants) {
        const auto dir = std::filesystem::path(out_dir) / v.bundle.name;
        harness::save_bundle(v.bundle, dir);
        std::cout << v.bundle.name << ": mean psnr " << v.mean_psnr << " dB -> " << dir.string() << "\n";
    }
    return 0;
}

int cmd_perturb_stain(const std::string& bundle_dir, const std::string& method_name,
                      const std::string& refs_path, const std::string& ref_bundle_dir,
                      const std::string& space_name, double lambda, std::uint64_t seed,
                      const std::string& out_dir) {
    const Bundle bundle = harness::load_bundle(bundle_dir);
    const Bundle ref_bundle =
        ref_bundle_dir.empty() ? bundle : harness::load_bundle(ref_bundle_dir);

    std::ifstream in(refs_path);
    if (!in) throw IoError("cannot open reference set '" + refs_path + "'");
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    const auto plane = color::PlaneSpec::defaults(color::space_from_string(space_name));

    perturb::ColorShiftSpec spec;
    spec.method = perturb::shift_method_from_string(method_name);
    spec.refs = color::reference_set_from_json(text, plane);
    spec.ref_source = &ref_bundle;
    spec.vahadane.lambda = lambda;
    spec.vahadane.seed = seed;

    const auto variants = perturb::color_shift(bundle, spec);
    for (const auto& v : variants) {
        if (v.aborted) {
            std::cout << "ref " << v.reference_id << ": aborted (" << v.manifest.excluded.size()
                      << " failures)\n";
            continue;
        }
        const auto dir = std::filesystem::path(out_dir) / v.bundle.name;
        harness::save_bundle(v.bundle, dir);
        std::cout << v.bundle.name << ": " << v.manifest.excluded.size() << " excluded -> "
                  << dir.string() << "\n";
    }
    return 0;
}

int cmd_color_stats(const std::string& bundle_dir, const std::string& space_name) {
    const Bundle bundle = harness::load_bundle(bundle_dir);
    const auto space = color::space_from_string(space_name);
    const auto stats = color::dataset_color_stats(bundle, space);
    std::cout << "patch_id,u,v,w\n";
    for (const auto& [id, p] : stats.points)
        std::cout << id << "," << p.u << "," << p.v << "," << p.w << "\n";
    std::cout << "mean_w," << stats.mean_w << "\n";
    return 0;
}

int cmd_color_kde(const std::string& bundle_dir, const std::string& space_name, int bins,
                  double bandwidth, const std::string& out_path) {
    const Bundle bundle = harness::load_bundle(bundle_dir);
    const auto space = color::space_from_string(space_name);
    const auto stats = color::dataset_color_stats(bundle, space);
    std::vector<color::ColorPoint> pts;
    for (const auto& [id, p] : stats.points) pts.push_back(p);
    std::optional<double> bw;
    if (bandwidth > 0.0) bw = bandwidth;
    const auto grid = color::kde_grid(pts, color::PlaneSpec::defaults(space), bins, bw);
    write_or_print(color::density_grid_csv(grid), out_path);
    return 0;
}

int cmd_color_sample_refs(const std::string& bundle_dir, const std::string& space_name, int steps,
                          std::vector<double> ranges, const std::string& out_path) {
    const Bundle bundle = harness::load_bundle(bundle_dir);
    const auto space = color::space_from_string(space_name);
    const auto stats = color::dataset_color_stats(bundle, space);
    color::PlaneSpec plane = color::PlaneSpec::defaults(space);
    plane.steps = steps;
    if (!ranges.empty()) {
        if (ranges.size() != 4) throw ValidationError("--ranges needs u_lo u_hi v_lo v_hi");
        plane.u_lo = ranges[0];
        plane.u_hi = ranges[1];
        plane.v_lo = ranges[2];
        plane.v_hi = ranges[3];
    }
    const auto refs = color::sample_references(stats.points, plane, stats.mean_w);
    write_or_print(color::reference_set_json(refs), out_path);
    std::cerr << refs.refs.size() << " references retained\n";
    return 0;
}

int cmd_segment(const std::string& bundle_dir, const std::string& out_dir, double h_threshold,
                int min_area) {
    const Bundle bundle = harness::load_bundle(bundle_dir);
    harness::BaselineParams params;
    params.h_threshold = h_threshold;
    params.min_area = min_area;
    const Bundle pred = harness::baseline_predict(bundle, params);
    harness::save_bundle(pred, out_dir);
    std::cout << "baseline predictions -> " << out_dir << "\n";
    return 0;
}

int cmd_synth(const std::string& out_dir, int patches, int size, std::uint64_t seed, bool no_teal) {
    harness::SyntheticOptions options;
    options.patches = patches;
    options.width = size;
    options.height = size;
    options.seed = seed;
    options.include_teal = !no_teal;
    harness::save_bundle(harness::make_fixture_bundle(options), out_dir);
    std::cout << "synthetic fixture bundle -> " << out_dir << "\n";
    return 0;
}

int cmd_run(const std::string& config_path) {
    const auto config = harness::ExperimentConfig::from_json_file(config_path);
    const harness::RunOutput output = harness::run_experiment(config);
    harness::emit_report(output, config.output_dir);
    std::cout << output.records.size() << " records -> " << config.output_dir.string() << "\n";
    return 0;
}

int cmd_report(const std::string& records_dir) {
    const auto path = std::filesystem::path(records_dir) / "report.json";
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    harness::emit_report(harness::run_output_from_json(text), records_dir);
    std::cout << "report files regenerated in " << records_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"robustness evaluation toolkit for nuclear instance segmentation"};
    app.require_subcommand(1);

    std::string bundle_dir, gt_dir, pred_dir, out_path, out_dir, codec_name, method_name;
    std::string refs_path, ref_bundle_dir, space_name = "hsv", config_path, records_dir;
    std::vector<int> qualities;
    std::vector<double> ranges;
    double grid_step = 0.05, lambda = 0.1, bandwidth = 0.0, h_threshold = 0.35;
    int bins = 64, steps = 16, patches = 20, size = 256, min_area = 30;
    std::uint64_t seed = 1;
    bool no_teal = false;

    auto* validate = app.add_subcommand("validate", "check a bundle directory");
    validate->add_option("bundle", bundle_dir)->required();

    auto* eval = app.add_subcommand("eval", "evaluate predictions against ground truth");
    eval->add_option("--gt", gt_dir)->required();
    eval->add_option("--pred", pred_dir)->required();
    eval->add_option("--grid-step", grid_step);
    eval->add_option("--out", out_path);

    auto* perturb_cmd = app.add_subcommand("perturb", "generate perturbed bundle variants");
    perturb_cmd->require_subcommand(1);
    auto* compress = perturb_cmd->add_subcommand("compress", "lossy-compression sweep");
    compress->add_option("--bundle", bundle_dir)->required();
    compress->add_option("--codec", codec_name)->required();
    compress->add_option("--qualities", qualities);
    compress->add_option("--out", out_dir)->required();
    auto* stain_cmd = perturb_cmd->add_subcommand("stain", "reference-driven color shifts");
    stain_cmd->add_option("--bundle", bundle_dir)->required();
    stain_cmd->add_option("--method", method_name)->required();
    stain_cmd->add_option("--refs", refs_path)->required();
    stain_cmd->add_option("--ref-bundle", ref_bundle_dir);
    stain_cmd->add_option("--space", space_name);
    stain_cmd->add_option("--lambda", lambda);
    stain_cmd->add_option("--seed", seed);
    stain_cmd->add_option("--out", out_dir)->required();

    auto* color_cmd = app.add_subcommand("color", "color-space analyses");
    color_cmd->require_subcommand(1);
    auto* stats_cmd = color_cmd->add_subcommand("stats", "per-patch mean colors");
    stats_cmd->add_option("--bundle", bundle_dir)->required();
    stats_cmd->add_option("--space", space_name);
    auto* kde_cmd = color_cmd->add_subcommand("kde", "density grid of patch colors");
    kde_cmd->add_option("--bundle", bundle_dir)->required();
    kde_cmd->add_option("--space", space_name);
    kde_cmd->add_option("--bins", bins);
    kde_cmd->add_option("--bandwidth", bandwidth);
    kde_cmd->add_option("--out", out_path);
    auto* refs_cmd = color_cmd->add_subcommand("sample-refs", "quantized reference sampling");
    refs_cmd->add_option("--bundle", bundle_dir)->required();
    refs_cmd->add_option("--space", space_name);
    refs_cmd->add_option("--steps", steps);
    refs_cmd->add_option("--ranges", ranges)->expected(4);
    refs_cmd->add_option("--out", out_path);

    auto* segment = app.add_subcommand("segment", "baseline demo segmenter");
    segment->add_option("--bundle", bundle_dir)->required();
    segment->add_option("--out", out_dir)->required();
    segment->add_option("--h-threshold", h_threshold);
    segment->add_option("--min-area", min_area);

    auto* synth = app.add_subcommand("synth", "generate the synthetic fixture bundle");
    synth->add_option("--out", out_dir)->required();
    synth->add_option("--patches", patches);
    synth->add_option("--size", size);
    synth->add_option("--seed", seed);
    synth->add_flag("--no-teal", no_teal);

    auto* run = app.add_subcommand("run", "full experiment from a config file");
    run->add_option("--config", config_path)->required();

    auto* report = app.add_subcommand("report", "regenerate report files from records");
    report->add_option("--records", records_dir)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(validate)) return cmd_validate(bundle_dir);
        if (app.got_subcommand(eval)) return cmd_eval(gt_dir, pred_dir, grid_step, out_path);
        if (app.got_subcommand(perturb_cmd)) {
            if (perturb_cmd->got_subcommand(compress))
                return cmd_perturb_compress(bundle_dir, codec_name, qualities, out_dir);
            return cmd_perturb_stain(bundle_dir, method_name, refs_path, ref_bundle_dir, space_name,
                                     lambda, seed, out_dir);
        }
        if (app.got_subcommand(color_cmd)) {
            if (color_cmd->got_subcommand(stats_cmd)) return cmd_color_stats(bundle_dir, space_name);
            if (color_cmd->got_subcommand(kde_cmd))
                return cmd_color_kde(bundle_dir, space_name, bins, bandwidth, out_path);
            return cmd_color_sample_refs(bundle_dir, space_name, steps, ranges, out_path);
        }
        if (app.got_subcommand(segment)) return cmd_segment(bundle_dir, out_dir, h_threshold, min_area);
        if (app.got_subcommand(synth)) return cmd_synth(out_dir, patches, size, seed, no_teal);
        if (app.got_subcommand(run)) return cmd_run(config_path);
        if (app.got_subcommand(report)) return cmd_report(records_dir);
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
