#include "nucrobust/perturb/colorshift.hpp"

#include <map>
#include <optional>

#include "nucrobust/core/errors.hpp"

namespace nucrobust::perturb {

ShiftMethod shift_method_from_string(const std::string& s) {
    if (s == "ruifrok") return ShiftMethod::ruifrok;
    if (s == "vahadane") return ShiftMethod::vahadane;
    throw ValidationError("unknown color shift method '" + s + "' (expected ruifrok or vahadane)");
}

std::string to_string(ShiftMethod m) { return m == ShiftMethod::ruifrok ? "ruifrok" : "vahadane"; }

void ColorShiftSpec::validate() const {
    if (refs.refs.empty()) throw ValidationError("color shift: empty reference set");
    if (ref_source == nullptr) throw ValidationError("color shift: reference bundle not resolved");
}

namespace {

struct FitCache {
    // Patch id -> model; nullopt caches a failed fit.
    std::map<std::string, std::optional<stain::StainModel>> models;
    std::map<std::string, std::string> errors;

    const std::optional<stain::StainModel>& get(const std::string& id, const RGBImage& img,
                                                ShiftMethod method,
                                                const stain::VahadaneParams& params) {
        auto it = models.find(id);
        if (it != models.end()) return it->second;
        std::optional<stain::StainModel> model;
        try {
            model = method == ShiftMethod::ruifrok ? stain::fit_ruifrok(img)
                                                   : stain::vahadane_fit(img, params).model;
        } catch (const std::exception& e) {
            errors[id] = e.what();
        }
        return models.emplace(id, std::move(model)).first->second;
    }
};

} // namespace

std::vector<ShiftVariant> color_shift(const Bundle& bundle, const ColorShiftSpec& spec) {
    spec.validate();
    for (const auto& patch : bundle.patches)
        if (!patch.image)
            throw ValidationError("color_shift: patch '" + patch.id + "' has no image");

    FitCache cache; // source fits are shared across all references
    std::vector<ShiftVariant> variants;
    variants.reserve(spec.refs.refs.size());

    for (const auto& ref : spec.refs.refs) {
        ShiftVariant variant;
        variant.reference_id = ref.patch_id;
        variant.grid_u = ref.grid_u;
        variant.grid_v = ref.grid_v;
        variant.manifest.type = "colorshift";
        variant.manifest.method = to_string(spec.method);
        variant.manifest.reference_id = ref.patch_id;
        variant.manifest.seed = static_cast<std::int64_t>(spec.vahadane.seed);

        const LabelledPatch* ref_patch = spec.ref_source->find(ref.patch_id);
        if (ref_patch == nullptr || !ref_patch->image)
            throw ValidationError("color_shift: reference patch '" + ref.patch_id +
                                  "' not resolvable in bundle '" + spec.ref_source->name + "'");

        // Self-referential shifts reuse the source-side fits.
        const std::string ref_key =
            spec.ref_source == &bundle ? ref.patch_id : "ref:" + ref.patch_id;
        const auto& ref_model = cache.get(ref_key, *ref_patch->image, spec.method, spec.vahadane);

        Bundle out;
        out.name = bundle.name + "_" + to_string(spec.method) + "_ref_" + ref.patch_id;
        out.lineage = bundle.lineage;

        std::size_t survived = 0;
        for (const auto& patch : bundle.patches) {
            LabelledPatch shifted = patch;
            bool excluded = false;
            std::string reason;
            if (!ref_model) {
                reason = "stain fit failed on reference: " + cache.errors[ref_key];
                excluded = true;
            } else {
                const auto& src_model =
                    cache.get(patch.id, *patch.image, spec.method, spec.vahadane);
                if (!src_model) {
                    reason = "stain fit failed: " + cache.errors[patch.id];
                    excluded = true;
                } else if (spec.method == ShiftMethod::vahadane &&
                           (stain::stain_model_degenerate(*src_model) ||
                            stain::stain_model_degenerate(*ref_model))) {
                    reason = "degenerate stain matrix";
                    excluded = true;
                } else {
                    shifted.image = stain::stain_transfer(*patch.image, *src_model, *ref_model).image;
                    const stain::PlausibilityVerdict verdict = stain::plausibility_check(*shifted.image);
                    if (!verdict.plausible) {
                        reason = verdict.reasons.front();
                        excluded = true;
                    }
                }
            }
            if (excluded)
                variant.manifest.excluded.push_back({patch.id, reason});
            else
                ++survived;
            out.patches.push_back(std::move(shifted)); // written either way, flagged via manifest
        }

        if (survived * 2 < bundle.patches.size()) {
            variant.aborted = true;
            variant.bundle = Bundle{};
        } else {
            out.lineage.push_back(variant.manifest);
            variant.bundle = std::move(out);
        }
        variants.push_back(std::move(variant));
    }
    return variants;
}

} // namespace nucrobust::perturb
