// Acceptance suite: runs every criterion end to end and prints one
// [PASS]/[FAIL] line per criterion. Exit code is the number of failures.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nucrobust/color/convert.hpp"
#include "nucrobust/color/kde.hpp"
#include "nucrobust/color/references.hpp"
#include "nucrobust/core/validate.hpp"
#include "nucrobust/harness/baseline.hpp"
#include "nucrobust/harness/bundle_io.hpp"
#include "nucrobust/harness/experiment.hpp"
#include "nucrobust/harness/report.hpp"
#include "nucrobust/harness/synthetic.hpp"
#include "nucrobust/metrics/panoptic.hpp"
#include "nucrobust/perturb/compression.hpp"
#include "nucrobust/stain/vahadane.hpp"

using namespace nucrobust;
namespace fs = std::filesystem;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& note) {
        if (!cond && ok) {
            ok = false;
            detail = note;
        }
    }
};

double now_s() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return "<missing:" + p.string() + ">";
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

double mean_abs_diff(const RGBImage& a, const RGBImage& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i)
        s += std::abs(static_cast<int>(a.pixels[i]) - static_cast<int>(b.pixels[i]));
    return s / static_cast<double>(a.pixels.size());
}

metrics::PairIoUTable random_arbitrary_table(std::mt19937_64& rng) {
    // Free-form weights below 0.5 plus at most one strong diagonal pair, so
    // the one-partner-above-0.5 property of real pixel partitions holds.
    std::uniform_real_distribution<double> uni(0.01, 0.5);
    std::uniform_real_distribution<double> strong(0.5001, 1.0);
    metrics::PairIoUTable t;
    const std::uint32_t ng = 1 + rng() % 6, np = 1 + rng() % 6;
    for (std::uint32_t g = 1; g <= ng; ++g) t.gt_sizes[g] = 1;
    for (std::uint32_t p = 1; p <= np; ++p) t.pred_sizes[p] = 1;
    const bool add_strong = rng() % 3 == 0;
    const std::uint32_t strong_g = 1 + rng() % ng, strong_p = 1 + rng() % np;
    for (std::uint32_t g = 1; g <= ng; ++g) {
        for (std::uint32_t p = 1; p <= np; ++p) {
            const bool is_strong = add_strong && g == strong_g && p == strong_p;
            if (!is_strong && rng() % 100 >= 55) continue;
            metrics::PairEntry e;
            e.gt = g;
            e.pred = p;
            e.iou = is_strong ? strong(rng) : uni(rng);
            t.entries.push_back(e);
        }
    }
    return t;
}

metrics::PairIoUTable random_realizable_table(std::mt19937_64& rng) {
    auto random_map = [&](int k) {
        InstanceMap m(14, 14);
        for (int label = 1; label <= k; ++label) {
            const int x0 = static_cast<int>(rng() % 14), y0 = static_cast<int>(rng() % 14);
            const int x1 = std::min<int>(14, x0 + 1 + rng() % 5);
            const int y1 = std::min<int>(14, y0 + 1 + rng() % 5);
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x) m.at(x, y) = label;
        }
        return m;
    };
    return metrics::iou_table(random_map(1 + rng() % 6), random_map(1 + rng() % 6));
}

// --- criteria -------------------------------------------------------------

Check criterion_oracle_equivalence() {
    Check c;
    const double t0 = now_s();
    std::mt19937_64 rng(20240501);
    int tables = 0;
    for (int trial = 0; trial < 1200 && c.ok; ++trial) {
        const metrics::PairIoUTable t =
            trial % 3 == 0 ? random_realizable_table(rng) : random_arbitrary_table(rng);
        if (t.gt_sizes.size() > 6 || t.pred_sizes.size() > 6) continue;
        ++tables;
        for (int i = 0; i <= 10; ++i) {
            const double a = i * 0.05;
            const double fast = metrics::match_instances(t, a).total_iou();
            const double slow = metrics::match_bruteforce(t, a).total_iou();
            if (fast != slow) {
                std::ostringstream os;
                os << "total IoU mismatch " << fast << " vs " << slow << " at a=" << a;
                c.require(false, os.str());
                break;
            }
        }
    }
    const double dt = now_s() - t0;
    c.require(tables >= 1000, "only " + std::to_string(tables) + " tables generated");
    c.require(dt < 60.0, "runtime " + std::to_string(dt) + "s exceeds 60s");
    c.detail = std::to_string(tables) + " tables, " + std::to_string(dt).substr(0, 5) + "s";
    return c;
}

Check criterion_fixed_points() {
    Check c;
    InstanceMap m(8, 8);
    ClassMap cm(8, 8);
    for (int i = 0; i < 3; ++i) {
        m.at(i * 2, 1) = i + 1;
        m.at(i * 2, 2) = i + 1;
        cm.at(i * 2, 1) = static_cast<std::uint8_t>(i + 1);
        cm.at(i * 2, 2) = static_cast<std::uint8_t>(i + 1);
    }
    Bundle gt;
    gt.name = "gt";
    gt.patches.push_back({"p0", std::nullopt, m, cm});
    Bundle same = gt;
    same.name = "pred";

    const auto grid = metrics::ThresholdGrid::default_grid();
    const metrics::EvalReport perfect = metrics::mpq_plus_auc(gt, same, grid);
    for (double v : perfect.mpq_plus) c.require(std::abs(v - 1.0) <= 1e-12, "mPQ+ != 1 for gt==pred");
    c.require(std::abs(perfect.auc - 0.5) <= 1e-12, "AUC != 0.5 for gt==pred");

    Bundle empty;
    empty.name = "empty";
    empty.patches.push_back({"p0", std::nullopt, InstanceMap(8, 8), ClassMap(8, 8)});
    const metrics::EvalReport none = metrics::mpq_plus_auc(gt, empty, grid);
    c.require(none.auc == 0.0, "AUC != 0 for empty predictions");

    std::vector<double> x;
    for (int i = 0; i <= 10; ++i) x.push_back(i * 0.05);
    const std::vector<double> step{1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0};
    c.require(metrics::trapezoid(x, step) == 0.275, "step profile trapezoid != 0.275 exactly");
    return c;
}

Check criterion_eq1_hand_case() {
    Check c;
    InstanceMap gt(4, 2), pred(4, 2);
    for (int y = 0; y < 2; ++y) {
        gt.at(0, y) = 1;
        gt.at(1, y) = 1;
        pred.at(1, y) = 1;
        pred.at(2, y) = 1;
    }
    const metrics::PairIoUTable t = metrics::iou_table(gt, pred);
    c.require(t.entries.size() == 1, "expected one overlapping pair");
    c.require(std::abs(t.entries[0].iou - 1.0 / 3.0) <= 1e-12, "IoU != 1/3");

    auto pq_at = [&](double a) {
        const metrics::Matching match = metrics::match_instances(t, a);
        metrics::ClassMatchStats s;
        s.cls = 1;
        s.tp = static_cast<long long>(match.pairs.size());
        s.fn = static_cast<long long>(match.unmatched_gt.size());
        s.fp = static_cast<long long>(match.unmatched_pred.size());
        s.iou_sum = match.total_iou();
        return metrics::pq_from_stats(s).pq;
    };
    c.require(std::abs(pq_at(0.25) - 1.0 / 3.0) <= 1e-12, "PQ(0.25) != 1/3");
    c.require(std::abs(pq_at(0.5) - 0.0) <= 1e-12, "PQ(0.5) != 0");
    return c;
}

Check criterion_color_round_trips() {
    Check c;
    for (int ri = 0; ri < 32 && c.ok; ++ri) {
        for (int gi = 0; gi < 32 && c.ok; ++gi) {
            for (int bi = 0; bi < 32; ++bi) {
                const auto r = static_cast<std::uint8_t>(ri * 255 / 31);
                const auto g = static_cast<std::uint8_t>(gi * 255 / 31);
                const auto b = static_cast<std::uint8_t>(bi * 255 / 31);
                const auto h = color::hsv_to_rgb(color::rgb_to_hsv(r, g, b));
                const auto l = color::lab_to_rgb(color::rgb_to_lab(r, g, b));
                if (std::abs(h[0] - r) > 1 || std::abs(h[1] - g) > 1 || std::abs(h[2] - b) > 1) {
                    c.require(false, "HSV round trip off by >1 step");
                    break;
                }
                if (std::abs(l[0] - r) > 1 || std::abs(l[1] - g) > 1 || std::abs(l[2] - b) > 1) {
                    c.require(false, "Lab round trip off by >1 step");
                    break;
                }
            }
        }
    }
    const color::Lab white = color::rgb_to_lab(255, 255, 255);
    c.require(std::abs(white.l - 100.0) < 1e-6 && std::abs(white.a) < 1e-6 && std::abs(white.b) < 1e-6,
              "white is not (100, 0, 0)");
    for (int v = 0; v < 256; ++v) {
        const auto u8 = static_cast<std::uint8_t>(v);
        const color::Lab lab = color::rgb_to_lab(u8, u8, u8);
        if (color::rgb_to_hsv(u8, u8, u8).s != 0.0 || std::abs(lab.a) > 1e-6 || std::abs(lab.b) > 1e-6) {
            c.require(false, "achromatic input has chroma");
            break;
        }
    }
    // Frozen from an independent reference implementation (scikit-image).
    const color::Lab green = color::rgb_to_lab(0, 255, 0);
    c.require(std::abs(green.l - 87.735099) < 0.01 && std::abs(green.a + 86.183030) < 0.01 &&
                  std::abs(green.b - 83.179703) < 0.01,
              "green Lab deviates from the reference by >= 0.01");
    return c;
}

Check criterion_reference_sampling() {
    Check c;
    const color::PlaneSpec spec{color::Space::hsv, 240.0, 360.0, 0.0, 1.0, 16};
    std::vector<std::pair<std::string, color::ColorPoint>> exact;
    for (int iu = 0; iu < 16; ++iu)
        for (int iv = 0; iv < 16; ++iv)
            exact.emplace_back("p" + std::to_string(iu * 16 + iv),
                               color::ColorPoint{color::Space::hsv, 240.0 + iu * 8.0, iv / 15.0, 0.8});
    const color::ReferenceSet cover = color::sample_references(exact, spec, 0.8);
    c.require(cover.refs.size() == 256, "exact cover returned " + std::to_string(cover.refs.size()));
    for (const auto& r : cover.refs)
        c.require(std::abs(r.distance) <= 1e-12, "exact cover distance nonzero");

    std::vector<std::pair<std::string, color::ColorPoint>> single{
        {"only", color::ColorPoint{color::Space::hsv, 300.0, 0.5, 0.8}}};
    c.require(color::sample_references(single, spec, 0.8).refs.size() == 1,
              "single-patch dataset must collapse to one reference");

    // minimal-distance property: every retained pair beats every other grid
    // point's distance to the same patch
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<std::pair<std::string, color::ColorPoint>> dataset;
    for (int k = 0; k < 23; ++k)
        dataset.emplace_back("p" + std::to_string(k),
                             color::ColorPoint{color::Space::hsv, 240.0 + 120.0 * uni(rng), uni(rng), 0.8});
    const color::ReferenceSet refs = color::sample_references(dataset, spec, 0.8);
    for (const auto& r : refs.refs) {
        const color::ColorPoint* p = nullptr;
        for (const auto& [id, point] : dataset)
            if (id == r.patch_id) p = &point;
        for (int iu = 0; iu < 16 && c.ok; ++iu) {
            for (int iv = 0; iv < 16; ++iv) {
                const double gu = 240.0 + iu * 8.0, gv = iv / 15.0;
                // this grid point claims the patch only if the patch is its nearest
                bool claims = true;
                for (const auto& [id, q] : dataset) {
                    const double dq = std::hypot((q.u - gu) / 120.0, q.v - gv);
                    const double dp = std::hypot((p->u - gu) / 120.0, p->v - gv);
                    if (dq < dp) {
                        claims = false;
                        break;
                    }
                }
                if (claims) {
                    const double d = std::hypot((p->u - gu) / 120.0, p->v - gv);
                    if (d < r.distance - 1e-12) {
                        c.require(false, "retained pair is not minimal for " + r.patch_id);
                        break;
                    }
                }
            }
        }
    }
    return c;
}

Check criterion_kde() {
    Check c;
    const color::PlaneSpec spec{color::Space::hsv, 0.0, 1.0, 0.0, 1.0, 16};
    std::vector<color::ColorPoint> pts;
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> uni(0.4, 0.6);
    for (int k = 0; k < 40; ++k) pts.push_back({color::Space::hsv, uni(rng), uni(rng), 0.5});
    const color::DensityGrid grid = color::kde_grid(pts, spec, 128, 0.03);
    c.require((grid.density >= 0.0).all(), "negative density");
    c.require(std::abs(grid.mass() - 1.0) <= 1e-6,
              "mass " + std::to_string(grid.mass()) + " deviates from 1 by > 1e-6");

    auto doubled = pts;
    doubled.insert(doubled.end(), pts.begin(), pts.end());
    const color::DensityGrid grid2 = color::kde_grid(doubled, spec, 64, 0.03);
    const color::DensityGrid grid1 = color::kde_grid(pts, spec, 64, 0.03);
    c.require(((grid1.density - grid2.density).abs() < 1e-12).all(),
              "duplicating points changed the normalized grid");
    return c;
}

Check criterion_stain(const Bundle& fixture) {
    Check c;
    const RGBImage& he = *fixture.patches[0].image;

    const stain::NormalizeResult self_r = stain::ruifrok_normalize(he, stain::fit_ruifrok(he));
    c.require(mean_abs_diff(he, self_r.image) <= 2.0,
              "ruifrok self-reference diff " + std::to_string(mean_abs_diff(he, self_r.image)) + " > 2/255");

    stain::VahadaneParams params;
    params.seed = 17;
    const stain::VahadaneResult self_v = stain::vahadane_normalize(he, he, params);
    c.require(mean_abs_diff(he, self_v.image) <= 3.0,
              "vahadane self-reference diff " + std::to_string(mean_abs_diff(he, self_v.image)) + " > 3/255");

    // planted-factor recovery
    stain::StainMatrix planted;
    planted.col(0) = Eigen::Vector3d(0.55, 0.72, 0.42).normalized();
    planted.col(1) = Eigen::Vector3d(0.17, 0.95, 0.15).normalized();
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Eigen::Matrix2Xd conc(2, 4096);
    for (int i = 0; i < 4096; ++i) {
        const double roll = uni(rng);
        conc(0, i) = roll < 0.4 ? 0.5 + 0.8 * uni(rng) : 0.02 * uni(rng);
        conc(1, i) = roll >= 0.4 && roll < 0.8 ? 0.4 + 0.6 * uni(rng) : (roll >= 0.8 ? 0.4 : 0.01);
    }
    stain::ODImage od;
    od.width = 64;
    od.height = 64;
    od.od = planted * conc;
    const RGBImage planted_img = stain::od_to_rgb(od);
    const stain::VahadaneFit fit = stain::vahadane_fit(planted_img, params);
    auto angle = [](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
        return std::acos(std::clamp(a.dot(b), -1.0, 1.0)) * 180.0 / 3.14159265358979323846;
    };
    const double direct = std::max(angle(fit.model.W.col(0), planted.col(0)),
                                   angle(fit.model.W.col(1), planted.col(1)));
    const double swapped = std::max(angle(fit.model.W.col(0), planted.col(1)),
                                    angle(fit.model.W.col(1), planted.col(0)));
    c.require(std::min(direct, swapped) < 5.0,
              "planted stain vectors off by " + std::to_string(std::min(direct, swapped)) + " deg");

    // objective monotone over >= 20 random fits
    std::mt19937_64 seed_rng(200);
    int fits = 0;
    for (int k = 0; k < 20; ++k) {
        const RGBImage img = *fixture.patches[k % (fixture.patches.size() - 1)].image;
        stain::VahadaneParams p2;
        p2.seed = seed_rng();
        p2.max_pixels = 8000;
        const stain::VahadaneFit f = stain::vahadane_fit(img, p2);
        ++fits;
        for (std::size_t i = 1; i < f.objective.size(); ++i) {
            if (f.objective[i] > f.objective[i - 1] + 1e-9) {
                c.require(false, "objective rose at iteration " + std::to_string(i));
                break;
            }
        }
        if (!c.ok) break;
    }
    c.require(fits >= 20, "fewer than 20 fits exercised");
    return c;
}

Check criterion_compression(const Bundle& fixture) {
    Check c;
    const auto [jpeg_default, webp_default] = perturb::default_compression_specs();
    c.require(std::find(jpeg_default.qualities.begin(), jpeg_default.qualities.end(), 75) !=
                  jpeg_default.qualities.end(),
              "jpeg default sweep lacks q=75");
    c.require(std::find(webp_default.qualities.begin(), webp_default.qualities.end(), 80) !=
                  webp_default.qualities.end(),
              "webp default sweep lacks q=80");

    const perturb::CompressionSpec spec{perturb::Codec::jpeg, {30, 90, 100}};
    const auto variants = perturb::compress_sweep(fixture, spec);
    for (const auto& v : variants) {
        for (std::size_t i = 0; i < fixture.patches.size(); ++i) {
            if (!(v.bundle.patches[i].instances == fixture.patches[i].instances) ||
                !(v.bundle.patches[i].classes == fixture.patches[i].classes)) {
                c.require(false, "labels changed under compression");
                break;
            }
        }
    }
    c.require(variants[2].mean_psnr >= 40.0,
              "jpeg q=100 mean PSNR " + std::to_string(variants[2].mean_psnr) + " < 40 dB");
    c.require(variants[1].mean_psnr >= variants[0].mean_psnr, "PSNR(q=90) < PSNR(q=30)");
    return c;
}

Check criterion_experiment_shape(const fs::path& scratch, const Bundle& fixture, double& runtime_s) {
    Check c;
    const double t0 = now_s();
    const fs::path gt_dir = scratch / "gt";
    harness::save_bundle(fixture, gt_dir);

    harness::ExperimentConfig cfg;
    cfg.gt_path = gt_dir;
    cfg.predictor = "baseline";
    cfg.seed = 4242;
    cfg.kde_spaces = {color::Space::hsv, color::Space::lab};
    cfg.kde_bins = 32;
    const auto [jpeg_spec, webp_spec] = perturb::default_compression_specs();
    cfg.compressions = {jpeg_spec, webp_spec};
    cfg.shifts.push_back({perturb::ShiftMethod::vahadane, color::Space::hsv, 16, 0.1});
    cfg.shifts.push_back({perturb::ShiftMethod::ruifrok, color::Space::hsv, 16, 0.1});

    cfg.output_dir = scratch / "out1";
    const harness::RunOutput out1 = harness::run_experiment(cfg);
    harness::emit_report(out1, cfg.output_dir);
    cfg.output_dir = scratch / "out2";
    const harness::RunOutput out2 = harness::run_experiment(cfg);
    harness::emit_report(out2, cfg.output_dir);

    // (a) per-codec curve files with one point per swept quality
    for (const auto& spec : cfg.compressions) {
        const std::string codec = perturb::to_string(spec.codec);
        const std::string svg = slurp(scratch / "out1" / ("quality_curve_" + codec + ".svg"));
        std::size_t circles = 0, at = 0;
        while ((at = svg.find("<circle", at)) != std::string::npos) {
            ++circles;
            at += 7;
        }
        c.require(circles == spec.qualities.size(),
                  codec + " curve has " + std::to_string(circles) + " points, wanted " +
                      std::to_string(spec.qualities.size()));
    }

    // (b) vahadane grid with at least one excluded teal tile
    const std::string grid = slurp(scratch / "out1" / "reference_grid_vahadane_hsv.svg");
    c.require(grid.find("url(#hatch)") != std::string::npos, "no hatched tile in the vahadane grid");
    bool teal_exclusion = false;
    for (const auto& r : out1.records) {
        if (r.kind != "colorshift" || r.method != "vahadane") continue;
        for (const auto& x : r.exclusions)
            teal_exclusion = teal_exclusion || x.reason.find("teal") != std::string::npos;
    }
    c.require(teal_exclusion, "no teal exclusion among the vahadane variants");

    // (c) byte-identical outputs across the two runs
    for (const std::string name :
         {"summary.csv", "report.json", "quality_curve_jpeg.svg", "quality_curve_webp.svg",
          "kde_hsv.svg", "kde_lab.svg", "reference_grid_vahadane_hsv.svg",
          "reference_grid_ruifrok_hsv.svg"}) {
        if (slurp(scratch / "out1" / name) != slurp(scratch / "out2" / name)) {
            c.require(false, name + " differs between identical runs");
            break;
        }
    }

    runtime_s = now_s() - t0;
    c.require(runtime_s < 600.0, "runtime " + std::to_string(runtime_s) + "s exceeds 10 minutes");
    if (c.ok) c.detail = std::to_string(runtime_s).substr(0, 6) + "s";
    return c;
}

Check criterion_determinism(const fs::path& scratch) {
    Check c;
    harness::SyntheticOptions options;
    options.patches = 5;
    options.width = 96;
    options.height = 96;
    options.seed = 77;
    const Bundle fixture = harness::make_fixture_bundle(options);
    const fs::path gt_dir = scratch / "det_gt";
    harness::save_bundle(fixture, gt_dir);

    // perturbed bundles written twice must match byte for byte
    const auto variants = perturb::compress_sweep(fixture, {perturb::Codec::webp, {40}});
    harness::save_bundle(variants[0].bundle, scratch / "det_v1");
    harness::save_bundle(variants[0].bundle, scratch / "det_v2");
    for (const auto& entry : fs::directory_iterator(scratch / "det_v1")) {
        const auto rel = entry.path().filename();
        if (slurp(entry.path()) != slurp(scratch / "det_v2" / rel)) {
            c.require(false, "variant bundle file " + rel.string() + " not reproducible");
            break;
        }
    }

    harness::ExperimentConfig cfg;
    cfg.gt_path = gt_dir;
    cfg.predictor = "baseline";
    cfg.seed = 9;
    cfg.compressions = {{perturb::Codec::webp, {20, 60}}};
    cfg.shifts.push_back({perturb::ShiftMethod::ruifrok, color::Space::lab, 6, 0.1});
    cfg.kde_spaces = {color::Space::lab};
    cfg.kde_bins = 16;

    cfg.output_dir = scratch / "det_out1";
    harness::emit_report(harness::run_experiment(cfg), cfg.output_dir);
    cfg.output_dir = scratch / "det_out2";
    harness::emit_report(harness::run_experiment(cfg), cfg.output_dir);
    c.require(slurp(scratch / "det_out1" / "summary.csv") == slurp(scratch / "det_out2" / "summary.csv"),
              "summary.csv not reproducible");
    c.require(slurp(scratch / "det_out1" / "report.json") == slurp(scratch / "det_out2" / "report.json"),
              "report.json not reproducible");
    return c;
}

} // namespace

int main() {
    const fs::path scratch =
        fs::temp_directory_path() / ("nucrobust_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(scratch);
    fs::create_directories(scratch);

    // Shared 20-patch fixture set (19 H&E-like + 1 teal adversarial).
    const Bundle fixture = harness::make_fixture_bundle({});

    int failures = 0;
    double runtime9 = 0.0;
    struct Entry {
        const char* name;
        Check result;
    };
    std::vector<Entry> entries;
    entries.push_back({"1. matching oracle equivalence", criterion_oracle_equivalence()});
    entries.push_back({"2. metric fixed points", criterion_fixed_points()});
    entries.push_back({"3. Eq-1 hand case (IoU 1/3)", criterion_eq1_hand_case()});
    entries.push_back({"4. color round trips and anchors", criterion_color_round_trips()});
    entries.push_back({"5. reference sampling", criterion_reference_sampling()});
    entries.push_back({"6. KDE mass and invariances", criterion_kde()});
    entries.push_back({"7. stain identity and recovery", criterion_stain(fixture)});
    entries.push_back({"8. compression pipeline", criterion_compression(fixture)});
    entries.push_back({"9. desk-scale experiment shape", criterion_experiment_shape(scratch, fixture, runtime9)});
    entries.push_back({"10. end-to-end determinism", criterion_determinism(scratch)});

    for (const auto& e : entries) {
        if (e.result.ok) {
            std::printf("[PASS] %s%s%s\n", e.name, e.result.detail.empty() ? "" : " - ",
                        e.result.detail.c_str());
        } else {
            ++failures;
            std::printf("[FAIL] %s - %s\n", e.name, e.result.detail.c_str());
        }
    }
    fs::remove_all(scratch);
    return failures;
}
