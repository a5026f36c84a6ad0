#include "nucrobust/color/embedding.hpp"

#include <cmath>
#include <numbers>

#include "nucrobust/core/errors.hpp"

namespace nucrobust::color {

PlaneSpec PlaneSpec::defaults(Space s) {
    if (s == Space::hsv) return {Space::hsv, 240.0, 360.0, 0.0, 1.0, 16};
    return {Space::lab, 0.0, 50.0, -40.0, 10.0, 16};
}

void PlaneSpec::validate() const {
    if (!(u_hi > u_lo) || !(v_hi > v_lo)) throw NumericalError("plane spec: degenerate axis range");
    if (steps < 2) throw NumericalError("plane spec: needs at least 2 steps per axis");
}

ColorPoint mean_color(const RGBImage& img, Space space) {
    if (img.pixel_count() == 0) throw ValidationError("mean_color: empty image");
    const std::size_t n = img.pixel_count();
    if (space == Space::lab) {
        double l = 0, a = 0, b = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const Lab c = rgb_to_lab(img.pixels[3 * i], img.pixels[3 * i + 1], img.pixels[3 * i + 2]);
            l += c.l;
            a += c.a;
            b += c.b;
        }
        return {Space::lab, a / n, b / n, l / n};
    }
    double sin_sum = 0, cos_sum = 0, s = 0, v = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Hsv c = rgb_to_hsv(img.pixels[3 * i], img.pixels[3 * i + 1], img.pixels[3 * i + 2]);
        const double rad = c.h * std::numbers::pi / 180.0;
        sin_sum += std::sin(rad);
        cos_sum += std::cos(rad);
        s += c.s;
        v += c.v;
    }
    double h = 0.0;
    if (sin_sum != 0.0 || cos_sum != 0.0) {
        h = std::atan2(sin_sum, cos_sum) * 180.0 / std::numbers::pi;
        if (h < 0.0) h += 360.0;
        if (h >= 360.0) h -= 360.0;
    }
    return {Space::hsv, h, s / n, v / n};
}

DatasetColorStats dataset_color_stats(const Bundle& bundle, Space space) {
    DatasetColorStats stats;
    for (const auto& patch : bundle.patches) {
        if (!patch.image) throw ValidationError("dataset_color_stats: patch '" + patch.id + "' has no image");
        stats.points.emplace_back(patch.id, mean_color(*patch.image, space));
    }
    if (stats.points.empty()) throw ValidationError("dataset_color_stats: empty bundle");
    double w = 0.0;
    for (const auto& [id, p] : stats.points) w += p.w;
    stats.mean_w = w / static_cast<double>(stats.points.size());
    return stats;
}

} // namespace nucrobust::color
