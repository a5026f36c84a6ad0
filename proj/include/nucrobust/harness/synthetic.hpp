#pragma once

#include <cstdint>
#include <string>

#include "nucrobust/core/image.hpp"

namespace nucrobust::harness {

struct SyntheticOptions {
    int width = 256;
    int height = 256;
    int patches = 20;       // total, including the adversarial patch
    bool include_teal = true;
    std::uint64_t seed = 1;
};

// Two-stain composite: pink wash plus dark elliptical nuclei, with smooth and
// white concentration noise for codec-realistic texture. Ground-truth
// instance/class layers match the drawn ellipses.
LabelledPatch make_he_patch(const std::string& id, std::uint64_t seed, int width, int height);

// Adversarial reference: two-tone high-saturation teal texture, no instances.
// Fitting stains to it yields red-heavy absorption vectors, so images
// normalized toward it come out teal.
LabelledPatch make_teal_patch(const std::string& id, std::uint64_t seed, int width, int height);

// Deterministic fixture set used by the demo experiments and the test suite.
Bundle make_fixture_bundle(const SyntheticOptions& options = {});

} // namespace nucrobust::harness
