#pragma once

#include <utility>

#include "nucrobust/core/image.hpp"

namespace nucrobust::harness {

struct BaselineParams {
    double h_threshold = 0.35; // haematoxylin concentration cutoff
    int min_area = 30;         // components below this are dropped
};

// Classical demo predictor: haematoxylin concentration thresholding followed
// by 8-connected component labelling and a minimum-area filter. Every
// instance is assigned class 1. Exists so the pipeline runs end to end
// without an external model.
std::pair<InstanceMap, ClassMap> baseline_segment(const RGBImage& img, const BaselineParams& params = {});

// Applies the baseline to every image of the bundle, producing an aligned
// prediction bundle (no images).
Bundle baseline_predict(const Bundle& bundle, const BaselineParams& params = {});

} // namespace nucrobust::harness
