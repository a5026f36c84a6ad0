#include "nucrobust/color/kde.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "nucrobust/core/errors.hpp"

namespace nucrobust::color {

namespace {

double scott_bandwidth(const std::vector<double>& xs, double axis_range) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= (n - 1.0);
    const double sigma = std::sqrt(var);
    const double bw = sigma * std::pow(n, -1.0 / 6.0);
    return bw > 0.0 ? bw : 0.05 * axis_range;
}

} // namespace

DensityGrid kde_grid(const std::vector<ColorPoint>& points, const PlaneSpec& spec, int bins,
                     std::optional<double> bandwidth) {
    spec.validate();
    if (points.size() < 2) throw NumericalError("kde_grid: needs at least 2 points");
    if (bins < 1) throw NumericalError("kde_grid: needs at least 1 bin per axis");
    if (bandwidth && !(*bandwidth > 0.0)) throw NumericalError("kde_grid: non-positive bandwidth");

    std::vector<double> us, vs;
    us.reserve(points.size());
    vs.reserve(points.size());
    for (const auto& p : points) {
        us.push_back(p.u);
        vs.push_back(p.v);
    }

    DensityGrid grid;
    grid.spec = spec;
    grid.bins = bins;
    grid.bandwidth_u = bandwidth ? *bandwidth : scott_bandwidth(us, spec.u_hi - spec.u_lo);
    grid.bandwidth_v = bandwidth ? *bandwidth : scott_bandwidth(vs, spec.v_hi - spec.v_lo);
    grid.density = Eigen::ArrayXXd::Zero(bins, bins);

    const double du = (spec.u_hi - spec.u_lo) / bins;
    const double dv = (spec.v_hi - spec.v_lo) / bins;
    const double norm =
        1.0 / (2.0 * std::numbers::pi * grid.bandwidth_u * grid.bandwidth_v * points.size());
    for (int i = 0; i < bins; ++i) {
        const double cu = spec.u_lo + (i + 0.5) * du;
        for (int j = 0; j < bins; ++j) {
            const double cv = spec.v_lo + (j + 0.5) * dv;
            double acc = 0.0;
            for (std::size_t k = 0; k < us.size(); ++k) {
                const double zu = (cu - us[k]) / grid.bandwidth_u;
                const double zv = (cv - vs[k]) / grid.bandwidth_v;
                acc += std::exp(-0.5 * (zu * zu + zv * zv));
            }
            grid.density(i, j) = norm * acc;
        }
    }
    return grid;
}

std::string density_grid_csv(const DensityGrid& grid) {
    std::string csv = "u,v,density\n";
    const double du = (grid.spec.u_hi - grid.spec.u_lo) / grid.bins;
    const double dv = (grid.spec.v_hi - grid.spec.v_lo) / grid.bins;
    char buf[128];
    for (int i = 0; i < grid.bins; ++i) {
        for (int j = 0; j < grid.bins; ++j) {
            std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.9f\n", grid.spec.u_lo + (i + 0.5) * du,
                          grid.spec.v_lo + (j + 0.5) * dv, grid.density(i, j));
            csv += buf;
        }
    }
    return csv;
}

} // namespace nucrobust::color
