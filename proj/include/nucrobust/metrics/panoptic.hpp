#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

#include "nucrobust/core/image.hpp"
#include "nucrobust/metrics/matching.hpp"

namespace nucrobust::metrics {

// Pooled match counts for one nucleus class at one threshold.
struct ClassMatchStats {
    int cls = 0;
    long long tp = 0;
    long long fp = 0;
    long long fn = 0;
    double iou_sum = 0.0;

    bool defined() const { return tp + fp + fn > 0; }
};

struct PQResult {
    double dq = 0.0;
    double sq = 0.0;
    double pq = 0.0;
    bool defined = false;
};

// DQ = tp / (tp + fp/2 + fn/2), SQ = iou_sum / tp, PQ = DQ * SQ.
// tp = 0 with detections/misses present collapses to PQ = 0; all-zero stats
// are undefined rather than scored.
PQResult pq_from_stats(const ClassMatchStats& s);

struct ThresholdGrid {
    std::vector<double> thresholds;

    static ThresholdGrid default_grid();          // 0.00, 0.05, ..., 0.50
    static ThresholdGrid with_step(double step);  // 0 .. 0.5 inclusive
    void validate_for_auc() const;                // ascending, spans [0, 0.5]
};

// Per-class matching pooled across every aligned patch pair of the two
// bundles. Patches listed in `excluded` are dropped from both sides.
std::array<ClassMatchStats, kNumClasses> accumulate_class_stats(
    const Bundle& gt, const Bundle& pred, double threshold,
    const std::set<std::string>& excluded = {});

struct MpqPlus {
    double value = 0.0;
    std::vector<int> excluded_classes; // classes with no instances on either side
};

// Mean PQ over the defined classes. Throws when every class is undefined.
MpqPlus mpq_plus(const std::array<ClassMatchStats, kNumClasses>& stats);

struct PQCell {
    int cls = 0;
    double threshold = 0.0;
    long long tp = 0, fp = 0, fn = 0;
    double dq = 0.0, sq = 0.0, pq = 0.0;
    bool defined = false;
};

struct EvalReport {
    std::vector<double> thresholds;
    std::vector<PQCell> cells;        // class-major, threshold-minor
    std::vector<double> mpq_plus;     // one per threshold
    double auc = 0.0;
    std::vector<int> excluded_classes;
};

// Trapezoidal integral of (x, f(x)) samples.
double trapezoid(const std::vector<double>& x, const std::vector<double>& f);

// Full multi-class evaluation: per-class PQ at each grid threshold, pooled
// across the dataset, integrated to the threshold-averaged score.
EvalReport mpq_plus_auc(const Bundle& gt, const Bundle& pred, const ThresholdGrid& grid,
                        const std::set<std::string>& excluded = {});

// CSV mirror of an EvalReport: per-(class, threshold) rows followed by the
// per-threshold summary block and a final auc row.
std::string eval_report_csv(const EvalReport& report);

// 10*log10(255^2 / MSE) over all channels; +inf for identical images.
double psnr(const RGBImage& a, const RGBImage& b);

} // namespace nucrobust::metrics
