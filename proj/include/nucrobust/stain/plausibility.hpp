#pragma once

#include <string>
#include <vector>

#include "nucrobust/core/image.hpp"
#include "nucrobust/stain/od.hpp"

namespace nucrobust::stain {

struct PlausibilityConfig {
    double teal_lo_deg = 150.0;
    double teal_hi_deg = 210.0;
    double min_saturation = 0.15; // chromatic-evidence guard
    double tissue_threshold = kTissueODThreshold;
};

struct PlausibilityVerdict {
    bool plausible = true;
    std::vector<std::string> reasons;
};

// Flags outputs whose stained pixels average into the teal hue band, the
// cyan-green cast a two-stain recomposition cannot produce from real H&E.
// Near-white images carry no chromatic evidence and pass.
PlausibilityVerdict plausibility_check(const RGBImage& img, const PlausibilityConfig& config = {});

} // namespace nucrobust::stain
