#include "nucrobust/metrics/panoptic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "nucrobust/core/errors.hpp"
#include "nucrobust/core/validate.hpp"

namespace nucrobust::metrics {

namespace {

// Instance map restricted to the labels of one class.
InstanceMap class_slice(const InstanceMap& inst, const ClassMap& cls, int t) {
    InstanceMap out(inst.width, inst.height);
    for (std::size_t i = 0; i < inst.labels.size(); ++i)
        if (inst.labels[i] != 0 && cls.classes[i] == t) out.labels[i] = inst.labels[i];
    return out;
}

struct AlignedTables {
    // tables[t-1] holds one PairIoUTable per retained patch, in gt order.
    std::array<std::vector<PairIoUTable>, kNumClasses> tables;
};

AlignedTables build_tables(const Bundle& gt, const Bundle& pred, const std::set<std::string>& excluded) {
    std::map<std::string, const LabelledPatch*> pred_by_id;
    for (const auto& p : pred.patches) pred_by_id[p.id] = &p;

    AlignedTables out;
    for (const auto& g : gt.patches) {
        if (excluded.count(g.id)) continue;
        auto it = pred_by_id.find(g.id);
        if (it == pred_by_id.end())
            throw ValidationError("bundles misaligned: prediction bundle has no patch '" + g.id + "'");
        const LabelledPatch& p = *it->second;
        for (int t = 1; t <= kNumClasses; ++t) {
            out.tables[t - 1].push_back(
                iou_table(class_slice(g.instances, g.classes, t), class_slice(p.instances, p.classes, t)));
        }
    }
    std::size_t retained = 0;
    for (const auto& g : gt.patches)
        if (!excluded.count(g.id)) ++retained;
    std::size_t pred_retained = 0;
    for (const auto& p : pred.patches)
        if (!excluded.count(p.id)) ++pred_retained;
    if (pred_retained != retained)
        throw ValidationError("bundles misaligned: prediction bundle carries patches absent from gt");
    return out;
}

std::array<ClassMatchStats, kNumClasses> pool_at(const AlignedTables& tables, double threshold) {
    std::array<ClassMatchStats, kNumClasses> stats;
    for (int t = 1; t <= kNumClasses; ++t) {
        ClassMatchStats& s = stats[t - 1];
        s.cls = t;
        for (const auto& table : tables.tables[t - 1]) {
            const Matching m = match_instances(table, threshold);
            s.tp += static_cast<long long>(m.pairs.size());
            s.fn += static_cast<long long>(m.unmatched_gt.size());
            s.fp += static_cast<long long>(m.unmatched_pred.size());
            s.iou_sum += m.total_iou();
        }
    }
    return stats;
}

} // namespace

PQResult pq_from_stats(const ClassMatchStats& s) {
    PQResult r;
    if (!s.defined()) return r; // undefined stays all-zero with defined=false
    r.defined = true;
    if (s.tp == 0) return r;    // detections or misses but no matches: PQ = 0
    r.dq = static_cast<double>(s.tp) /
           (static_cast<double>(s.tp) + 0.5 * static_cast<double>(s.fp) + 0.5 * static_cast<double>(s.fn));
    r.sq = s.iou_sum / static_cast<double>(s.tp);
    r.pq = r.dq * r.sq;
    return r;
}

ThresholdGrid ThresholdGrid::default_grid() {
    ThresholdGrid g;
    for (int i = 0; i <= 10; ++i) g.thresholds.push_back(i * 0.05);
    return g;
}

ThresholdGrid ThresholdGrid::with_step(double step) {
    if (!(step > 0.0) || step > 0.5)
        throw NumericalError("threshold grid: step must lie in (0, 0.5]");
    ThresholdGrid g;
    const int n = static_cast<int>(std::round(0.5 / step));
    if (std::abs(n * step - 0.5) > 1e-9)
        throw NumericalError("threshold grid: step must divide 0.5");
    for (int i = 0; i <= n; ++i) g.thresholds.push_back(i * step);
    g.thresholds.back() = 0.5;
    return g;
}

void ThresholdGrid::validate_for_auc() const {
    if (thresholds.size() < 2) throw NumericalError("threshold grid: needs at least 2 points");
    if (thresholds.front() != 0.0 || thresholds.back() != 0.5)
        throw NumericalError("threshold grid: must span [0, 0.5]");
    for (std::size_t i = 1; i < thresholds.size(); ++i)
        if (thresholds[i] <= thresholds[i - 1]) throw NumericalError("threshold grid: not ascending");
}

std::array<ClassMatchStats, kNumClasses> accumulate_class_stats(const Bundle& gt, const Bundle& pred,
                                                                double threshold,
                                                                const std::set<std::string>& excluded) {
    return pool_at(build_tables(gt, pred, excluded), threshold);
}

MpqPlus mpq_plus(const std::array<ClassMatchStats, kNumClasses>& stats) {
    MpqPlus out;
    double sum = 0.0;
    int defined = 0;
    for (const auto& s : stats) {
        const PQResult r = pq_from_stats(s);
        if (r.defined) {
            sum += r.pq;
            ++defined;
        } else {
            out.excluded_classes.push_back(s.cls);
        }
    }
    if (defined == 0) throw NumericalError("mPQ+: every class is undefined (no instances on either side)");
    out.value = sum / defined;
    return out;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& f) {
    if (x.size() != f.size() || x.size() < 2)
        throw NumericalError("trapezoid: need matching sample arrays with >= 2 points");
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        area += (x[i + 1] - x[i]) * (f[i] + f[i + 1]) / 2.0;
    return area;
}

EvalReport mpq_plus_auc(const Bundle& gt, const Bundle& pred, const ThresholdGrid& grid,
                        const std::set<std::string>& excluded) {
    grid.validate_for_auc();
    const AlignedTables tables = build_tables(gt, pred, excluded);

    EvalReport report;
    report.thresholds = grid.thresholds;
    std::array<std::vector<PQCell>, kNumClasses> per_class;
    for (double a : grid.thresholds) {
        const auto stats = pool_at(tables, a);
        const MpqPlus m = mpq_plus(stats);
        report.mpq_plus.push_back(m.value);
        // Undefined-ness is threshold independent: tp+fp+fn counts every
        // instance of the class on either side, regardless of a.
        report.excluded_classes = m.excluded_classes;
        for (int t = 1; t <= kNumClasses; ++t) {
            const ClassMatchStats& s = stats[t - 1];
            const PQResult r = pq_from_stats(s);
            per_class[t - 1].push_back({t, a, s.tp, s.fp, s.fn, r.dq, r.sq, r.pq, r.defined});
        }
    }
    for (const auto& rows : per_class)
        report.cells.insert(report.cells.end(), rows.begin(), rows.end());
    report.auc = trapezoid(report.thresholds, report.mpq_plus);
    return report;
}

namespace {

std::string fixed6(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

} // namespace

std::string eval_report_csv(const EvalReport& report) {
    std::string csv = "class,threshold,tp,fp,fn,dq,sq,pq\n";
    for (const auto& c : report.cells) {
        csv += std::to_string(c.cls) + "," + fixed6(c.threshold) + "," + std::to_string(c.tp) + "," +
               std::to_string(c.fp) + "," + std::to_string(c.fn) + ",";
        if (c.defined)
            csv += fixed6(c.dq) + "," + fixed6(c.sq) + "," + fixed6(c.pq) + "\n";
        else
            csv += "nan,nan,nan\n";
    }
    csv += "threshold,mpq_plus\n";
    for (std::size_t i = 0; i < report.thresholds.size(); ++i)
        csv += fixed6(report.thresholds[i]) + "," + fixed6(report.mpq_plus[i]) + "\n";
    csv += "auc," + fixed6(report.auc) + "\n";
    return csv;
}

double psnr(const RGBImage& a, const RGBImage& b) {
    if (a.width != b.width || a.height != b.height)
        throw ValidationError("psnr: dimension mismatch");
    double sq = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const double d = static_cast<double>(a.pixels[i]) - static_cast<double>(b.pixels[i]);
        sq += d * d;
    }
    if (sq == 0.0) return std::numeric_limits<double>::infinity();
    const double mse = sq / static_cast<double>(a.pixels.size());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

} // namespace nucrobust::metrics
