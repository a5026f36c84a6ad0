#include "nucrobust/stain/od.hpp"

#include <algorithm>
#include <cmath>

namespace nucrobust::stain {

ODImage rgb_to_od(const RGBImage& img, double i0, double eps) {
    ODImage out;
    out.width = img.width;
    out.height = img.height;
    const Eigen::Index n = static_cast<Eigen::Index>(img.pixel_count());
    out.od.resize(3, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int c = 0; c < 3; ++c) {
            const double intensity = std::max(static_cast<double>(img.pixels[3 * i + c]), eps);
            out.od(c, i) = std::log10(i0 / intensity);
        }
    }
    return out;
}

RGBImage od_to_rgb(const ODImage& od, double i0) {
    RGBImage img(od.width, od.height);
    const Eigen::Index n = od.od.cols();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int c = 0; c < 3; ++c) {
            const double intensity = std::clamp(i0 * std::pow(10.0, -od.od(c, i)), 0.0, 255.0);
            img.pixels[3 * i + c] = static_cast<std::uint8_t>(std::lround(intensity));
        }
    }
    return img;
}

Eigen::ArrayXd od_magnitude(const ODImage& od) {
    return od.od.colwise().norm().transpose().array();
}

} // namespace nucrobust::stain
