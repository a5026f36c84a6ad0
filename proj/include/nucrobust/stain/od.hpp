#pragma once

#include <Eigen/Dense>

#include "nucrobust/core/image.hpp"

namespace nucrobust::stain {

// Optical densities, one column per pixel (Beer-Lambert, base-10).
struct ODImage {
    int width = 0;
    int height = 0;
    Eigen::Matrix3Xd od;
};

inline constexpr double kIncidentLight = 255.0;
inline constexpr double kODEps = 1.0; // intensity floor before the log

// OD = log10(I0 / max(I, eps)) per channel.
ODImage rgb_to_od(const RGBImage& img, double i0 = kIncidentLight, double eps = kODEps);

// I = clamp(I0 * 10^-OD, 0, 255), rounded to nearest.
RGBImage od_to_rgb(const ODImage& od, double i0 = kIncidentLight);

// Euclidean OD magnitude per pixel; the tissue masks key off this.
Eigen::ArrayXd od_magnitude(const ODImage& od);

// Threshold on OD magnitude separating tissue from background/white.
inline constexpr double kTissueODThreshold = 0.15;

} // namespace nucrobust::stain
