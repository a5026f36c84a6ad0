#include "nucrobust/harness/experiment.hpp"

#include <chrono>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "nucrobust/core/errors.hpp"
#include "nucrobust/harness/bundle_io.hpp"

namespace nucrobust::harness {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

ExperimentConfig ExperimentConfig::from_json_file(const fs::path& path) {
    json cfg;
    try {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open config '" + path.string() + "'");
        cfg = json::parse(in);
    } catch (const json::exception& e) {
        throw IoError("malformed config '" + path.string() + "': " + e.what());
    }

    ExperimentConfig out;
    out.gt_path = cfg.at("gt").get<std::string>();
    if (cfg.contains("pred")) out.pred_path = cfg["pred"].get<std::string>();
    if (cfg.contains("predictor")) out.predictor = cfg["predictor"].get<std::string>();
    out.output_dir = cfg.at("output_dir").get<std::string>();
    out.grid_step = cfg.value("grid_step", 0.05);
    out.seed = cfg.value("seed", std::uint64_t{1});
    if (cfg.contains("baseline")) {
        out.baseline.h_threshold = cfg["baseline"].value("h_threshold", out.baseline.h_threshold);
        out.baseline.min_area = cfg["baseline"].value("min_area", out.baseline.min_area);
    }
    if (cfg.contains("compression")) {
        for (const auto& c : cfg["compression"]) {
            perturb::CompressionSpec spec;
            spec.codec = perturb::codec_from_string(c.at("codec").get<std::string>());
            if (c.contains("qualities")) {
                for (const auto& q : c["qualities"]) spec.qualities.push_back(q.get<int>());
            } else {
                const auto [jpeg, webp] = perturb::default_compression_specs();
                spec.qualities = spec.codec == perturb::Codec::jpeg ? jpeg.qualities : webp.qualities;
            }
            out.compressions.push_back(std::move(spec));
        }
    }
    if (cfg.contains("colorshift")) {
        for (const auto& s : cfg["colorshift"]) {
            ShiftExperiment shift;
            shift.method = perturb::shift_method_from_string(s.at("method").get<std::string>());
            shift.space = color::space_from_string(s.at("space").get<std::string>());
            shift.steps = s.value("steps", 16);
            shift.lambda = s.value("lambda", 0.1);
            out.shifts.push_back(shift);
        }
    }
    if (cfg.contains("kde")) {
        for (const auto& s : cfg["kde"].value("spaces", std::vector<std::string>{}))
            out.kde_spaces.push_back(color::space_from_string(s));
        out.kde_bins = cfg["kde"].value("bins", 64);
    }
    out.validate();
    return out;
}

void ExperimentConfig::validate() const {
    if (gt_path.empty()) throw ValidationError("experiment config: gt path required");
    if (output_dir.empty()) throw ValidationError("experiment config: output_dir required");
    if (pred_path.empty() == predictor.empty())
        throw ValidationError("experiment config: exactly one of 'pred' or 'predictor' required");
    if (!predictor.empty() && predictor != "baseline")
        throw ValidationError("experiment config: unknown predictor '" + predictor + "'");
    if (!pred_path.empty() && gt_path.lexically_normal() == pred_path.lexically_normal())
        throw ValidationError("experiment config: gt and pred paths must differ");
}

namespace {

metrics::ThresholdGrid grid_for(const ExperimentConfig& config) {
    return metrics::ThresholdGrid::with_step(config.grid_step);
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

} // namespace

RunOutput run_experiment(const ExperimentConfig& config) {
    const Bundle gt = load_bundle(config.gt_path);
    const metrics::ThresholdGrid grid = grid_for(config);

    const bool use_predictor = !config.predictor.empty();
    Bundle static_pred;
    if (!use_predictor) static_pred = load_bundle(config.pred_path);

    Bundle scratch;
    auto predict = [&](const Bundle& inputs) -> const Bundle& {
        if (!use_predictor) return static_pred;
        scratch = baseline_predict(inputs, config.baseline);
        return scratch;
    };

    RunOutput out;

    { // control
        Timer timer;
        RunRecord control;
        control.descriptor = "control";
        control.kind = "control";
        control.report = metrics::mpq_plus_auc(gt, predict(gt), grid);
        control.auc = control.report.auc;
        control.delta_auc = 0.0;
        control.evaluated = true;
        control.duration_s = timer.seconds();
        out.records.push_back(std::move(control));
    }
    const double control_auc = out.records.front().auc;

    // Color statistics and density maps of the control bundle.
    std::set<color::Space> spaces(config.kde_spaces.begin(), config.kde_spaces.end());
    for (const auto& shift : config.shifts) spaces.insert(shift.space);
    for (color::Space space : spaces) {
        SpaceStats stats;
        stats.space = space;
        const color::DatasetColorStats cs = color::dataset_color_stats(gt, space);
        stats.mean_w = cs.mean_w;
        stats.points = cs.points;
        std::vector<color::ColorPoint> pts;
        pts.reserve(cs.points.size());
        for (const auto& [id, p] : cs.points) pts.push_back(p);
        stats.kde = color::kde_grid(pts, color::PlaneSpec::defaults(space), config.kde_bins);
        out.stats.push_back(std::move(stats));
    }

    for (const auto& spec : config.compressions) {
        const auto variants = perturb::compress_sweep(gt, spec);
        for (const auto& variant : variants) {
            Timer timer;
            RunRecord rec;
            rec.kind = "compress";
            rec.codec = perturb::to_string(spec.codec);
            rec.quality = variant.quality;
            rec.descriptor = rec.codec + "_q" + std::to_string(variant.quality);
            rec.mean_psnr = variant.mean_psnr;
            rec.report = metrics::mpq_plus_auc(gt, predict(variant.bundle), grid);
            rec.auc = rec.report.auc;
            rec.delta_auc = rec.auc - control_auc;
            rec.evaluated = true;
            rec.duration_s = timer.seconds();
            out.records.push_back(std::move(rec));
        }
    }

    for (const auto& shift : config.shifts) {
        const SpaceStats* stats = nullptr;
        for (const auto& s : out.stats)
            if (s.space == shift.space) stats = &s;

        color::PlaneSpec plane = color::PlaneSpec::defaults(shift.space);
        plane.steps = shift.steps;
        RefsetRecord refset;
        refset.method = perturb::to_string(shift.method);
        refset.space = shift.space;
        refset.set = color::sample_references(stats->points, plane, stats->mean_w);
        out.refsets.push_back(refset);

        perturb::ColorShiftSpec spec;
        spec.method = shift.method;
        spec.refs = refset.set;
        spec.ref_source = &gt;
        spec.vahadane.lambda = shift.lambda;
        spec.vahadane.seed = config.seed;
        const auto variants = perturb::color_shift(gt, spec);

        for (const auto& variant : variants) {
            Timer timer;
            RunRecord rec;
            rec.kind = "colorshift";
            rec.method = perturb::to_string(shift.method);
            rec.space = color::to_string(shift.space);
            rec.reference_id = variant.reference_id;
            rec.grid_u = variant.grid_u;
            rec.grid_v = variant.grid_v;
            rec.descriptor = rec.method + "_" + rec.space + "_ref_" + variant.reference_id;
            rec.aborted = variant.aborted;
            rec.exclusions = variant.manifest.excluded;
            if (!variant.aborted) {
                std::set<std::string> excluded;
                for (const auto& x : variant.manifest.excluded) excluded.insert(x.patch_id);
                if (excluded.size() < gt.patches.size()) {
                    rec.report = metrics::mpq_plus_auc(gt, predict(variant.bundle), grid, excluded);
                    rec.auc = rec.report.auc;
                    rec.delta_auc = rec.auc - control_auc;
                    rec.evaluated = true;
                }
            }
            rec.duration_s = timer.seconds();
            out.records.push_back(std::move(rec));
        }
    }
    return out;
}

namespace {

json point_to_json(const std::pair<std::string, color::ColorPoint>& p) {
    return {{"patch_id", p.first}, {"u", p.second.u}, {"v", p.second.v}, {"w", p.second.w}};
}

json plane_to_json(const color::PlaneSpec& spec) {
    return {{"space", color::to_string(spec.space)}, {"u_lo", spec.u_lo}, {"u_hi", spec.u_hi},
            {"v_lo", spec.v_lo}, {"v_hi", spec.v_hi}, {"steps", spec.steps}};
}

color::PlaneSpec plane_from_json(const json& j) {
    color::PlaneSpec spec;
    spec.space = color::space_from_string(j.at("space").get<std::string>());
    spec.u_lo = j.at("u_lo").get<double>();
    spec.u_hi = j.at("u_hi").get<double>();
    spec.v_lo = j.at("v_lo").get<double>();
    spec.v_hi = j.at("v_hi").get<double>();
    spec.steps = j.at("steps").get<int>();
    return spec;
}

} // namespace

std::string run_output_json(const RunOutput& output) {
    json root;
    json records = json::array();
    for (const auto& r : output.records) {
        json rec;
        rec["descriptor"] = r.descriptor;
        rec["kind"] = r.kind;
        if (!r.codec.empty()) rec["codec"] = r.codec;
        if (r.quality >= 0) rec["quality"] = r.quality;
        if (!r.method.empty()) rec["method"] = r.method;
        if (!r.space.empty()) rec["space"] = r.space;
        if (!r.reference_id.empty()) {
            rec["reference_id"] = r.reference_id;
            rec["grid_u"] = r.grid_u;
            rec["grid_v"] = r.grid_v;
        }
        rec["aborted"] = r.aborted;
        rec["evaluated"] = r.evaluated;
        if (r.evaluated) {
            rec["auc"] = r.auc;
            rec["delta_auc"] = r.delta_auc;
            json mpq = json::array();
            for (std::size_t i = 0; i < r.report.thresholds.size(); ++i)
                mpq.push_back({{"threshold", r.report.thresholds[i]}, {"mpq_plus", r.report.mpq_plus[i]}});
            rec["mpq_plus"] = mpq;
            rec["excluded_classes"] = r.report.excluded_classes;
        }
        if (r.kind == "compress") rec["mean_psnr"] = r.mean_psnr;
        json exclusions = json::array();
        for (const auto& x : r.exclusions)
            exclusions.push_back({{"patch_id", x.patch_id}, {"reason", x.reason}});
        rec["exclusions"] = exclusions;
        records.push_back(std::move(rec));
    }
    root["records"] = records;

    json stats = json::array();
    for (const auto& s : output.stats) {
        json st;
        st["space"] = color::to_string(s.space);
        st["mean_w"] = s.mean_w;
        json pts = json::array();
        for (const auto& p : s.points) pts.push_back(point_to_json(p));
        st["points"] = pts;
        st["kde"] = {{"spec", plane_to_json(s.kde.spec)},
                     {"bins", s.kde.bins},
                     {"bandwidth_u", s.kde.bandwidth_u},
                     {"bandwidth_v", s.kde.bandwidth_v}};
        json density = json::array();
        for (int i = 0; i < s.kde.bins; ++i)
            for (int j = 0; j < s.kde.bins; ++j) density.push_back(s.kde.density(i, j));
        st["kde"]["density"] = density;
        stats.push_back(std::move(st));
    }
    root["color_stats"] = stats;

    json refsets = json::array();
    for (const auto& rs : output.refsets) {
        json r;
        r["method"] = rs.method;
        r["space"] = color::to_string(rs.space);
        r["spec"] = plane_to_json(rs.set.spec);
        r["w_fixed"] = rs.set.w_fixed;
        json refs = json::array();
        for (const auto& ref : rs.set.refs) {
            refs.push_back({{"grid_index", ref.grid_index},
                            {"grid_u", ref.grid_u},
                            {"grid_v", ref.grid_v},
                            {"patch_id", ref.patch_id},
                            {"distance", ref.distance}});
        }
        r["references"] = refs;
        refsets.push_back(std::move(r));
    }
    root["refsets"] = refsets;
    return root.dump(2) + "\n";
}

RunOutput run_output_from_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed run records: ") + e.what());
    }
    RunOutput out;
    for (const auto& rec : root.at("records")) {
        RunRecord r;
        r.descriptor = rec.at("descriptor").get<std::string>();
        r.kind = rec.at("kind").get<std::string>();
        r.codec = rec.value("codec", "");
        r.quality = rec.value("quality", -1);
        r.method = rec.value("method", "");
        r.space = rec.value("space", "");
        r.reference_id = rec.value("reference_id", "");
        r.grid_u = rec.value("grid_u", 0.0);
        r.grid_v = rec.value("grid_v", 0.0);
        r.aborted = rec.value("aborted", false);
        r.evaluated = rec.value("evaluated", false);
        if (r.evaluated) {
            r.auc = rec.at("auc").get<double>();
            r.delta_auc = rec.at("delta_auc").get<double>();
            for (const auto& m : rec.value("mpq_plus", json::array())) {
                r.report.thresholds.push_back(m.at("threshold").get<double>());
                r.report.mpq_plus.push_back(m.at("mpq_plus").get<double>());
            }
            r.report.auc = r.auc;
        }
        r.mean_psnr = rec.value("mean_psnr", 0.0);
        for (const auto& x : rec.value("exclusions", json::array()))
            r.exclusions.push_back({x.at("patch_id").get<std::string>(), x.at("reason").get<std::string>()});
        out.records.push_back(std::move(r));
    }
    for (const auto& st : root.value("color_stats", json::array())) {
        SpaceStats s;
        s.space = color::space_from_string(st.at("space").get<std::string>());
        s.mean_w = st.at("mean_w").get<double>();
        for (const auto& p : st.at("points")) {
            color::ColorPoint point;
            point.space = s.space;
            point.u = p.at("u").get<double>();
            point.v = p.at("v").get<double>();
            point.w = p.at("w").get<double>();
            s.points.emplace_back(p.at("patch_id").get<std::string>(), point);
        }
        const json& kde = st.at("kde");
        s.kde.spec = plane_from_json(kde.at("spec"));
        s.kde.bins = kde.at("bins").get<int>();
        s.kde.bandwidth_u = kde.at("bandwidth_u").get<double>();
        s.kde.bandwidth_v = kde.at("bandwidth_v").get<double>();
        s.kde.density = Eigen::ArrayXXd::Zero(s.kde.bins, s.kde.bins);
        const auto& density = kde.at("density");
        for (int i = 0; i < s.kde.bins; ++i)
            for (int j = 0; j < s.kde.bins; ++j)
                s.kde.density(i, j) = density.at(i * s.kde.bins + j).get<double>();
        out.stats.push_back(std::move(s));
    }
    for (const auto& rs : root.value("refsets", json::array())) {
        RefsetRecord r;
        r.method = rs.at("method").get<std::string>();
        r.space = color::space_from_string(rs.at("space").get<std::string>());
        r.set.spec = plane_from_json(rs.at("spec"));
        r.set.w_fixed = rs.at("w_fixed").get<double>();
        for (const auto& ref : rs.at("references")) {
            r.set.refs.push_back({ref.at("grid_index").get<int>(), ref.at("grid_u").get<double>(),
                                  ref.at("grid_v").get<double>(), ref.at("patch_id").get<std::string>(),
                                  ref.at("distance").get<double>()});
        }
        out.refsets.push_back(std::move(r));
    }
    return out;
}

} // namespace nucrobust::harness
