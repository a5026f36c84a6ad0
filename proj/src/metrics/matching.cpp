#include "nucrobust/metrics/matching.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_map>

#include "nucrobust/core/errors.hpp"

namespace nucrobust::metrics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative slack under which two assignment totals count as tied.
constexpr double kTieEps = 1e-12;

struct Edge {
    int gi = 0; // dense gt index within a component
    int pi = 0; // dense pred index within a component
    std::uint32_t gt = 0;
    std::uint32_t pred = 0;
    double iou = 0.0;
};

double canonical_sum(std::vector<MatchedPair>& pairs) {
    std::sort(pairs.begin(), pairs.end(), [](const MatchedPair& a, const MatchedPair& b) {
        return a.gt < b.gt;
    });
    double s = 0.0;
    for (const auto& p : pairs) s += p.iou;
    return s;
}

// Shortest-augmenting-path assignment on an n x m cost matrix (n <= m),
// minimizing total cost over a perfect matching of the rows.
std::vector<int> assign_min_cost(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    const int m = static_cast<int>(cost.cols());
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> p(m + 1, 0), way(m + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(m + 1, kInf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= m; ++j)
        if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

// Max-total-IoU partial matching over the given edges, restricted to rows and
// columns not masked out. Unmatched instances are modelled as zero-cost dummy
// columns, so dropping them is always allowed.
std::vector<MatchedPair> solve_component(const std::vector<Edge>& edges, int n_gt, int n_pred,
                                         const std::vector<char>& gt_blocked,
                                         const std::vector<char>& pred_blocked) {
    std::vector<int> rows; // dense gt indices still in play
    rows.reserve(n_gt);
    for (int g = 0; g < n_gt; ++g)
        if (!gt_blocked[g]) rows.push_back(g);
    if (rows.empty()) return {};
    std::vector<int> row_of(n_gt, -1);
    for (std::size_t r = 0; r < rows.size(); ++r) row_of[rows[r]] = static_cast<int>(r);

    const int nr = static_cast<int>(rows.size());
    const int nc = n_pred + nr; // real preds + one dummy per row
    // Cells without an admissible edge (and blocked pred columns) stay at
    // zero cost: assigning through them is the same as leaving the gt
    // unmatched, so a perfect row matching always exists.
    Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(nr, nc);
    for (const auto& e : edges) {
        if (gt_blocked[e.gi] || pred_blocked[e.pi]) continue;
        cost(row_of[e.gi], e.pi) = -e.iou;
    }
    const std::vector<int> row_to_col = assign_min_cost(cost);

    std::unordered_map<std::int64_t, const Edge*> edge_at;
    edge_at.reserve(edges.size());
    for (const auto& e : edges)
        edge_at[static_cast<std::int64_t>(e.gi) * n_pred + e.pi] = &e;

    std::vector<MatchedPair> pairs;
    for (int r = 0; r < nr; ++r) {
        const int col = row_to_col[r];
        if (col < 0 || col >= n_pred || pred_blocked[col]) continue;
        auto it = edge_at.find(static_cast<std::int64_t>(rows[r]) * n_pred + col);
        if (it != edge_at.end()) pairs.push_back({it->second->gt, it->second->pred, it->second->iou});
    }
    return pairs;
}

// Lexicographically smallest pair set among assignments whose total IoU is
// within kTieEps of the component optimum.
std::vector<MatchedPair> match_component(const std::vector<Edge>& edges, int n_gt, int n_pred) {
    std::vector<char> gt_blocked(n_gt, 0), pred_blocked(n_pred, 0);
    std::vector<MatchedPair> opt = solve_component(edges, n_gt, n_pred, gt_blocked, pred_blocked);
    const double best = canonical_sum(opt);
    const double eps = kTieEps * std::max(1.0, best);

    std::vector<Edge> ordered = edges;
    std::sort(ordered.begin(), ordered.end(), [](const Edge& a, const Edge& b) {
        return a.gt != b.gt ? a.gt < b.gt : a.pred < b.pred;
    });

    std::vector<MatchedPair> forced;
    for (const auto& e : ordered) {
        if (gt_blocked[e.gi] || pred_blocked[e.pi]) continue;
        gt_blocked[e.gi] = 1;
        pred_blocked[e.pi] = 1;
        std::vector<MatchedPair> rest = solve_component(edges, n_gt, n_pred, gt_blocked, pred_blocked);
        std::vector<MatchedPair> candidate = forced;
        candidate.push_back({e.gt, e.pred, e.iou});
        candidate.insert(candidate.end(), rest.begin(), rest.end());
        if (canonical_sum(candidate) >= best - eps) {
            forced.push_back({e.gt, e.pred, e.iou});
        } else {
            gt_blocked[e.gi] = 0;
            pred_blocked[e.pi] = 0;
        }
    }
    return forced;
}

Matching finalize(const PairIoUTable& table, double threshold, std::vector<MatchedPair> pairs) {
    Matching m;
    m.threshold = threshold;
    std::sort(pairs.begin(), pairs.end(), [](const MatchedPair& a, const MatchedPair& b) {
        return a.gt < b.gt;
    });
    m.pairs = std::move(pairs);
    std::set<std::uint32_t> matched_gt, matched_pred;
    for (const auto& p : m.pairs) {
        matched_gt.insert(p.gt);
        matched_pred.insert(p.pred);
    }
    for (const auto& [id, sz] : table.gt_sizes)
        if (!matched_gt.count(id)) m.unmatched_gt.push_back(id);
    for (const auto& [id, sz] : table.pred_sizes)
        if (!matched_pred.count(id)) m.unmatched_pred.push_back(id);
    return m;
}

} // namespace

PairIoUTable iou_table(const InstanceMap& gt, const InstanceMap& pred) {
    if (gt.width != pred.width || gt.height != pred.height) {
        throw ValidationError("iou_table: dimension mismatch " + std::to_string(gt.width) + "x" +
                              std::to_string(gt.height) + " vs " + std::to_string(pred.width) + "x" +
                              std::to_string(pred.height));
    }
    PairIoUTable table;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::int64_t> inter;
    for (std::size_t i = 0; i < gt.labels.size(); ++i) {
        const std::uint32_t g = gt.labels[i];
        const std::uint32_t p = pred.labels[i];
        if (g != 0) ++table.gt_sizes[g];
        if (p != 0) ++table.pred_sizes[p];
        if (g != 0 && p != 0) ++inter[{g, p}];
    }
    table.entries.reserve(inter.size());
    for (const auto& [key, count] : inter) {
        PairEntry e;
        e.gt = key.first;
        e.pred = key.second;
        e.intersection = count;
        e.union_px = table.gt_sizes[e.gt] + table.pred_sizes[e.pred] - count;
        e.iou = static_cast<double>(e.intersection) / static_cast<double>(e.union_px);
        table.entries.push_back(e);
    }
    return table;
}

Matching match_instances(const PairIoUTable& table, double threshold) {
    if (threshold < 0.0 || threshold > 0.5)
        throw NumericalError("match_instances: threshold " + std::to_string(threshold) + " outside [0, 0.5]");

    if (threshold >= 0.5) {
        std::vector<MatchedPair> pairs;
        std::set<std::uint32_t> seen_gt, seen_pred;
        for (const auto& e : table.entries) {
            if (e.iou <= threshold) continue;
            if (!seen_gt.insert(e.gt).second || !seen_pred.insert(e.pred).second)
                throw NumericalError("match_instances: duplicate pairing above IoU 0.5 for gt " +
                                     std::to_string(e.gt));
            pairs.push_back({e.gt, e.pred, e.iou});
        }
        return finalize(table, threshold, std::move(pairs));
    }

    // Admissible edges, strict IoU > a.
    std::vector<PairEntry> admissible;
    for (const auto& e : table.entries)
        if (e.iou > threshold) admissible.push_back(e);

    // Connected components of the bipartite overlap graph keep the assignment
    // subproblems small.
    std::map<std::uint32_t, int> gt_index, pred_index;
    for (const auto& e : admissible) {
        gt_index.try_emplace(e.gt, static_cast<int>(gt_index.size()));
        pred_index.try_emplace(e.pred, static_cast<int>(pred_index.size()));
    }
    const int n_gt = static_cast<int>(gt_index.size());
    const int n_pred = static_cast<int>(pred_index.size());
    std::vector<int> parent(n_gt + n_pred);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : admissible) {
        const int a = find(gt_index[e.gt]);
        const int b = find(n_gt + pred_index[e.pred]);
        if (a != b) parent[a] = b;
    }

    std::map<int, std::vector<const PairEntry*>> comps;
    for (const auto& e : admissible) comps[find(gt_index[e.gt])].push_back(&e);

    std::vector<MatchedPair> pairs;
    for (auto& [root, comp_edges] : comps) {
        std::map<std::uint32_t, int> gl, pl; // component-local dense ids
        for (const auto* e : comp_edges) {
            gl.try_emplace(e->gt, static_cast<int>(gl.size()));
            pl.try_emplace(e->pred, static_cast<int>(pl.size()));
        }
        std::vector<Edge> edges;
        edges.reserve(comp_edges.size());
        for (const auto* e : comp_edges)
            edges.push_back({gl[e->gt], pl[e->pred], e->gt, e->pred, e->iou});
        auto comp_pairs = match_component(edges, static_cast<int>(gl.size()), static_cast<int>(pl.size()));
        pairs.insert(pairs.end(), comp_pairs.begin(), comp_pairs.end());
    }
    return finalize(table, threshold, std::move(pairs));
}

Matching match_bruteforce(const PairIoUTable& table, double threshold) {
    if (threshold < 0.0 || threshold > 0.5)
        throw NumericalError("match_bruteforce: threshold outside [0, 0.5]");
    if (table.gt_sizes.size() > 8 || table.pred_sizes.size() > 8)
        throw NumericalError("match_bruteforce: instance count above 8x8 cap");

    std::vector<PairEntry> admissible;
    for (const auto& e : table.entries)
        if (e.iou > threshold) admissible.push_back(e);

    std::vector<std::uint32_t> gts;
    std::map<std::uint32_t, int> pred_bit;
    for (const auto& e : admissible) {
        if (gts.empty() || gts.back() != e.gt) {
            if (std::find(gts.begin(), gts.end(), e.gt) == gts.end()) gts.push_back(e.gt);
        }
        pred_bit.try_emplace(e.pred, static_cast<int>(pred_bit.size()));
    }
    std::sort(gts.begin(), gts.end());

    // Pass 1: maximum total IoU over all admissible partial matchings.
    double best_total = 0.0;
    auto enumerate = [&](auto&& visit) {
        std::vector<MatchedPair> current;
        auto rec = [&](auto&& self, std::size_t gi, unsigned used) -> void {
            if (gi == gts.size()) {
                visit(current);
                return;
            }
            self(self, gi + 1, used); // leave this gt unmatched
            for (const auto& e : admissible) {
                if (e.gt != gts[gi]) continue;
                const int bit = pred_bit[e.pred];
                if (used & (1u << bit)) continue;
                current.push_back({e.gt, e.pred, e.iou});
                self(self, gi + 1, used | (1u << bit));
                current.pop_back();
            }
        };
        rec(rec, 0, 0u);
    };

    enumerate([&](const std::vector<MatchedPair>& m) {
        double s = 0.0;
        for (const auto& p : m) s += p.iou; // already in gt-ascending order
        if (s > best_total) best_total = s;
    });
    const double eps = kTieEps * std::max(1.0, best_total);

    // Pass 2: lexicographically smallest pair set among near-optimal totals.
    std::vector<MatchedPair> best_pairs;
    bool have = false;
    auto lex_less = [](const std::vector<MatchedPair>& a, const std::vector<MatchedPair>& b) {
        const std::size_t n = std::min(a.size(), b.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (a[i].gt != b[i].gt) return a[i].gt < b[i].gt;
            if (a[i].pred != b[i].pred) return a[i].pred < b[i].pred;
        }
        return a.size() < b.size();
    };
    enumerate([&](const std::vector<MatchedPair>& m) {
        double s = 0.0;
        for (const auto& p : m) s += p.iou;
        if (s < best_total - eps) return;
        std::vector<MatchedPair> sorted = m;
        std::sort(sorted.begin(), sorted.end(), [](const MatchedPair& a, const MatchedPair& b) {
            return a.gt != b.gt ? a.gt < b.gt : a.pred < b.pred;
        });
        if (!have || lex_less(sorted, best_pairs)) {
            best_pairs = std::move(sorted);
            have = true;
        }
    });
    return finalize(table, threshold, std::move(best_pairs));
}

} // namespace nucrobust::metrics
