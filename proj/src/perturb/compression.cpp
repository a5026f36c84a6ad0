#include "nucrobust/perturb/compression.hpp"

#include <cmath>
#include <limits>

#include "nucrobust/core/errors.hpp"
#include "nucrobust/io/codec.hpp"
#include "nucrobust/metrics/panoptic.hpp"

namespace nucrobust::perturb {

Codec codec_from_string(const std::string& s) {
    if (s == "jpeg" || s == "jpg") return Codec::jpeg;
    if (s == "webp") return Codec::webp;
    throw ValidationError("unknown codec '" + s + "' (expected jpeg or webp)");
}

std::string to_string(Codec c) { return c == Codec::jpeg ? "jpeg" : "webp"; }

void CompressionSpec::validate() const {
    if (qualities.empty()) throw ValidationError("compression spec: empty quality list");
    for (std::size_t i = 0; i < qualities.size(); ++i) {
        if (qualities[i] < 1 || qualities[i] > 100)
            throw ValidationError("compression spec: quality " + std::to_string(qualities[i]) +
                                  " outside [1, 100]");
        if (i > 0 && qualities[i] <= qualities[i - 1])
            throw ValidationError("compression spec: qualities must be ascending and unique");
    }
}

std::pair<CompressionSpec, CompressionSpec> default_compression_specs() {
    // Decade sweep; jpeg additionally samples its recommended default 75
    // (webp's recommended 80 already sits on the decade grid).
    CompressionSpec jpeg{Codec::jpeg, {}};
    CompressionSpec webp{Codec::webp, {}};
    for (int q = 10; q <= 100; q += 10) {
        jpeg.qualities.push_back(q);
        if (q == 70) jpeg.qualities.push_back(75);
        webp.qualities.push_back(q);
    }
    return {jpeg, webp};
}

int recommended_quality(Codec c) { return c == Codec::jpeg ? 75 : 80; }

std::vector<CompressedVariant> compress_sweep(const Bundle& bundle, const CompressionSpec& spec) {
    spec.validate();
    for (const auto& patch : bundle.patches)
        if (!patch.image)
            throw ValidationError("compress_sweep: patch '" + patch.id + "' has no image");

    std::vector<CompressedVariant> variants;
    variants.reserve(spec.qualities.size());
    for (int q : spec.qualities) {
        CompressedVariant variant;
        variant.quality = q;
        variant.bundle.name = bundle.name + "_" + to_string(spec.codec) + "_q" + std::to_string(q);
        variant.bundle.lineage = bundle.lineage;
        LineageEntry entry;
        entry.type = "compress";
        entry.codec = to_string(spec.codec);
        entry.quality = q;
        variant.bundle.lineage.push_back(entry);

        double psnr_sum = 0.0;
        int psnr_n = 0;
        for (const auto& patch : bundle.patches) {
            LabelledPatch out = patch; // labels and id carried over untouched
            try {
                out.image = spec.codec == Codec::jpeg ? io::jpeg_roundtrip(*patch.image, q)
                                                      : io::webp_roundtrip(*patch.image, q);
            } catch (const IoError& e) {
                throw IoError("compress_sweep: patch '" + patch.id + "': " + e.what());
            }
            const double p = metrics::psnr(*patch.image, *out.image);
            if (std::isfinite(p)) {
                psnr_sum += p;
                ++psnr_n;
            }
            variant.bundle.patches.push_back(std::move(out));
        }
        variant.mean_psnr = psnr_n > 0 ? psnr_sum / psnr_n : std::numeric_limits<double>::infinity();
        variants.push_back(std::move(variant));
    }
    return variants;
}

} // namespace nucrobust::perturb
