#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nucrobust/color/kde.hpp"
#include "nucrobust/color/references.hpp"
#include "nucrobust/harness/baseline.hpp"
#include "nucrobust/metrics/panoptic.hpp"
#include "nucrobust/perturb/colorshift.hpp"
#include "nucrobust/perturb/compression.hpp"

namespace nucrobust::harness {

struct ShiftExperiment {
    perturb::ShiftMethod method = perturb::ShiftMethod::ruifrok;
    color::Space space = color::Space::hsv;
    int steps = 16;
    double lambda = 0.1;
};

struct ExperimentConfig {
    std::filesystem::path gt_path;
    std::filesystem::path pred_path; // static predictions; mutually exclusive with predictor
    std::string predictor;           // "baseline": re-segment every variant's images
    std::filesystem::path output_dir;
    double grid_step = 0.05;
    std::uint64_t seed = 1;
    BaselineParams baseline;
    std::vector<perturb::CompressionSpec> compressions;
    std::vector<ShiftExperiment> shifts;
    std::vector<color::Space> kde_spaces;
    int kde_bins = 64;

    static ExperimentConfig from_json_file(const std::filesystem::path& path);
    void validate() const;
};

struct RunRecord {
    std::string descriptor; // "control", "jpeg_q75", "vahadane_hsv_ref_patch_003", ...
    std::string kind;       // "control" | "compress" | "colorshift"
    std::string codec;
    int quality = -1;
    std::string method;
    std::string space;
    std::string reference_id;
    double grid_u = 0.0, grid_v = 0.0;
    bool aborted = false;
    bool evaluated = false;
    metrics::EvalReport report;
    double auc = 0.0;
    double delta_auc = 0.0;
    double mean_psnr = 0.0; // compression records only
    std::vector<Exclusion> exclusions;
    double duration_s = 0.0; // wall clock; never serialized, reports stay byte-stable
};

struct SpaceStats {
    color::Space space = color::Space::hsv;
    double mean_w = 0.0;
    std::vector<std::pair<std::string, color::ColorPoint>> points;
    color::DensityGrid kde;
};

struct RefsetRecord {
    std::string method;
    color::Space space = color::Space::hsv;
    color::ReferenceSet set;
};

struct RunOutput {
    std::vector<RunRecord> records;
    std::vector<SpaceStats> stats;
    std::vector<RefsetRecord> refsets;
};

// Evaluates the prediction source on the control bundle and every generated
// variant; color-shift variants honor their manifest exclusions on both the
// gt and prediction side.
RunOutput run_experiment(const ExperimentConfig& config);

std::string run_output_json(const RunOutput& output);
RunOutput run_output_from_json(const std::string& text);

} // namespace nucrobust::harness
