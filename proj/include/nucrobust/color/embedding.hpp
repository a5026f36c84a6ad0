#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nucrobust/color/convert.hpp"
#include "nucrobust/core/image.hpp"

namespace nucrobust::color {

// A patch reduced to one point in a 2-D color plane plus the fixed third
// channel: (H, S | V) for HSV, (a*, b* | L) for CIELAB.
struct ColorPoint {
    Space space = Space::hsv;
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;
};

// Evaluation window and quantization of a color plane.
struct PlaneSpec {
    Space space = Space::hsv;
    double u_lo = 0.0, u_hi = 1.0;
    double v_lo = 0.0, v_hi = 1.0;
    int steps = 16;

    static PlaneSpec defaults(Space s);
    void validate() const;
};

// Channel-wise mean over every pixel of the patch; hue is averaged on the
// circle via the resultant vector.
ColorPoint mean_color(const RGBImage& img, Space space);

struct DatasetColorStats {
    double mean_w = 0.0; // mean of the per-patch fixed channel
    std::vector<std::pair<std::string, ColorPoint>> points;
};

DatasetColorStats dataset_color_stats(const Bundle& bundle, Space space);

} // namespace nucrobust::color
