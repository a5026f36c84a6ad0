#include "nucrobust/stain/plausibility.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "nucrobust/color/convert.hpp"

namespace nucrobust::stain {

PlausibilityVerdict plausibility_check(const RGBImage& img, const PlausibilityConfig& config) {
    const ODImage od = rgb_to_od(img);
    const Eigen::ArrayXd mag = od_magnitude(od);

    double sin_sum = 0.0, cos_sum = 0.0, sat_sum = 0.0;
    std::int64_t n = 0;
    for (Eigen::Index i = 0; i < mag.size(); ++i) {
        if (mag(i) <= config.tissue_threshold) continue;
        const color::Hsv c =
            color::rgb_to_hsv(img.pixels[3 * i], img.pixels[3 * i + 1], img.pixels[3 * i + 2]);
        const double rad = c.h * std::numbers::pi / 180.0;
        sin_sum += std::sin(rad);
        cos_sum += std::cos(rad);
        sat_sum += c.s;
        ++n;
    }
    PlausibilityVerdict verdict;
    if (n == 0) return verdict; // no stained pixels, nothing to judge

    double mean_h = std::atan2(sin_sum, cos_sum) * 180.0 / std::numbers::pi;
    if (mean_h < 0.0) mean_h += 360.0;
    const double mean_s = sat_sum / static_cast<double>(n);
    if (mean_h >= config.teal_lo_deg && mean_h <= config.teal_hi_deg && mean_s > config.min_saturation) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "teal hue (mean H=%.1f, mean S=%.2f)", mean_h, mean_s);
        verdict.plausible = false;
        verdict.reasons.emplace_back(buf);
    }
    return verdict;
}

} // namespace nucrobust::stain
