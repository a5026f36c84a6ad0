#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nucrobust/core/image.hpp"

namespace nucrobust::perturb {

enum class Codec { jpeg, webp };

Codec codec_from_string(const std::string& s);
std::string to_string(Codec c);

struct CompressionSpec {
    Codec codec = Codec::jpeg;
    std::vector<int> qualities; // ascending, unique, in [1, 100]

    void validate() const;
};

// Quality sweeps bracketing the common encoder defaults.
std::pair<CompressionSpec, CompressionSpec> default_compression_specs(); // (jpeg, webp)

// The quality the report layer annotates as the recommended default.
int recommended_quality(Codec c); // jpeg: 75, webp: 80

struct CompressedVariant {
    int quality = 0;
    Bundle bundle;
    double mean_psnr = 0.0; // vs the parent, over patches with finite PSNR
};

// One variant bundle per quality: every image re-encoded lossily, labels
// copied byte for byte, lineage extended with the codec descriptor.
std::vector<CompressedVariant> compress_sweep(const Bundle& bundle, const CompressionSpec& spec);

} // namespace nucrobust::perturb
