#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "nucrobust/core/image.hpp"

namespace nucrobust::metrics {

struct PairEntry {
    std::uint32_t gt = 0;
    std::uint32_t pred = 0;
    std::int64_t intersection = 0;
    std::int64_t union_px = 0;
    double iou = 0.0; // intersection / union, in (0,1]
};

// Sparse table of overlapping (gt, pred) instance pairs. Only pairs with
// nonzero intersection appear; entries are sorted by (gt, pred).
struct PairIoUTable {
    std::vector<PairEntry> entries;
    std::map<std::uint32_t, std::int64_t> gt_sizes;
    std::map<std::uint32_t, std::int64_t> pred_sizes;
};

PairIoUTable iou_table(const InstanceMap& gt, const InstanceMap& pred);

struct MatchedPair {
    std::uint32_t gt = 0;
    std::uint32_t pred = 0;
    double iou = 0.0;
};

struct Matching {
    double threshold = 0.0;
    std::vector<MatchedPair> pairs;          // sorted by gt id
    std::vector<std::uint32_t> unmatched_gt;   // FN, sorted
    std::vector<std::uint32_t> unmatched_pred; // FP, sorted

    // Canonical summation order (gt ascending) so equal pair sets give
    // bit-identical totals.
    double total_iou() const {
        double s = 0.0;
        for (const auto& p : pairs) s += p.iou;
        return s;
    }
};

// Matches gt and predicted instances at IoU threshold a in [0, 0.5].
// At a >= 0.5 pairs are exactly the entries with IoU > a (uniqueness is
// guaranteed). Below 0.5 the admissible edges (IoU > a) are solved as a
// maximum-total-IoU assignment; ties are broken toward the lexicographically
// smallest (gt, pred) pair set.
Matching match_instances(const PairIoUTable& table, double threshold);

// Exhaustive-enumeration oracle for match_instances, capped at 8x8 instances.
// Kept free of the assignment-solver code path on purpose.
Matching match_bruteforce(const PairIoUTable& table, double threshold);

} // namespace nucrobust::metrics
