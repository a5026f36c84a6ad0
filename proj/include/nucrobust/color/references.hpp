#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nucrobust/color/embedding.hpp"

namespace nucrobust::color {

struct Reference {
    int grid_index = 0; // row-major over (u step, v step)
    double grid_u = 0.0;
    double grid_v = 0.0;
    std::string patch_id;
    double distance = 0.0; // normalized plane distance, grid point to patch
};

struct ReferenceSet {
    PlaneSpec spec;
    double w_fixed = 0.0;
    std::vector<Reference> refs; // unique patch ids, sorted by grid index
};

// Quantizes the spec window into steps x steps grid points (axis endpoints
// inclusive) and keeps, per grid point, the nearest dataset patch under
// per-axis min-max normalized Euclidean distance on (u, v). A patch claimed
// by several grid points is retained once, at its smallest distance.
ReferenceSet sample_references(const std::vector<std::pair<std::string, ColorPoint>>& dataset,
                               const PlaneSpec& spec, double w_fixed);

// JSON array of {grid_u, grid_v, w, patch_id, distance}.
std::string reference_set_json(const ReferenceSet& set);
ReferenceSet reference_set_from_json(const std::string& json_text, const PlaneSpec& spec);

} // namespace nucrobust::color
