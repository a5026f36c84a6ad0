#pragma once

#include <string>
#include <vector>

#include "nucrobust/color/references.hpp"
#include "nucrobust/core/image.hpp"
#include "nucrobust/stain/vahadane.hpp"

namespace nucrobust::perturb {

enum class ShiftMethod { ruifrok, vahadane };

ShiftMethod shift_method_from_string(const std::string& s);
std::string to_string(ShiftMethod m);

struct ColorShiftSpec {
    ShiftMethod method = ShiftMethod::ruifrok;
    color::ReferenceSet refs;
    const Bundle* ref_source = nullptr; // bundle holding the reference patches
    stain::VahadaneParams vahadane;     // lambda/seed/iters for the fitted method

    void validate() const;
};

struct ShiftVariant {
    std::string reference_id;
    double grid_u = 0.0, grid_v = 0.0;
    Bundle bundle;               // empty when aborted
    LineageEntry manifest;       // descriptor + per-patch exclusions
    bool aborted = false;        // fewer than half of the patches normalized
};

// One variant bundle per reference patch. Implausible outputs are kept in
// the bundle and listed in the manifest exclusion list; per-patch fit
// failures fall back to the original image and are excluded likewise. A
// variant with under 50% surviving patches is marked aborted and left empty.
std::vector<ShiftVariant> color_shift(const Bundle& bundle, const ColorShiftSpec& spec);

} // namespace nucrobust::perturb
