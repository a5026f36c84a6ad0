#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "nucrobust/color/embedding.hpp"

namespace nucrobust::color {

struct DensityGrid {
    PlaneSpec spec;
    int bins = 0;
    // density(i, j) is the KDE value at the center of cell (u bin i, v bin j).
    Eigen::ArrayXXd density;
    double bandwidth_u = 0.0;
    double bandwidth_v = 0.0;

    double cell_area() const {
        return (spec.u_hi - spec.u_lo) / bins * (spec.v_hi - spec.v_lo) / bins;
    }
    double mass() const { return density.sum() * cell_area(); }
};

// Gaussian product-kernel density of the points, evaluated at bin centers
// over the spec window. Points outside the window still contribute mass.
// Auto bandwidth is Scott's rule per axis, n^(-1/6) * sigma, with a fallback
// of 5% of the axis range when the sample is degenerate along an axis.
DensityGrid kde_grid(const std::vector<ColorPoint>& points, const PlaneSpec& spec, int bins,
                     std::optional<double> bandwidth = std::nullopt);

// CSV rows u,v,density at every bin center.
std::string density_grid_csv(const DensityGrid& grid);

} // namespace nucrobust::color
