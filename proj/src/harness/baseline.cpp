#include "nucrobust/harness/baseline.hpp"

#include <vector>

#include "nucrobust/core/errors.hpp"
#include "nucrobust/stain/model.hpp"

namespace nucrobust::harness {

std::pair<InstanceMap, ClassMap> baseline_segment(const RGBImage& img, const BaselineParams& params) {
    const stain::ODImage od = stain::rgb_to_od(img);
    const Eigen::Matrix2Xd conc = stain::ruifrok_deconvolve(od, stain::ruifrok_he_matrix());

    const int w = img.width, h = img.height;
    std::vector<char> fg(static_cast<std::size_t>(w) * h, 0);
    for (Eigen::Index i = 0; i < conc.cols(); ++i) fg[i] = conc(0, i) > params.h_threshold;

    InstanceMap inst(w, h);
    ClassMap cls(w, h);
    std::vector<std::size_t> stack;
    std::uint32_t next_label = 1;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t start = static_cast<std::size_t>(y) * w + x;
            if (!fg[start] || inst.labels[start] != 0) continue;

            // Flood fill one 8-connected component.
            std::vector<std::size_t> component;
            stack.assign(1, start);
            inst.labels[start] = next_label;
            while (!stack.empty()) {
                const std::size_t i = stack.back();
                stack.pop_back();
                component.push_back(i);
                const int cx = static_cast<int>(i % w);
                const int cy = static_cast<int>(i / w);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const int nx = cx + dx, ny = cy + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
                        if (fg[ni] && inst.labels[ni] == 0) {
                            inst.labels[ni] = next_label;
                            stack.push_back(ni);
                        }
                    }
                }
            }
            if (static_cast<int>(component.size()) < params.min_area) {
                for (std::size_t i : component) inst.labels[i] = 0;
            } else {
                for (std::size_t i : component) cls.classes[i] = 1;
                ++next_label;
            }
        }
    }
    return {std::move(inst), std::move(cls)};
}

Bundle baseline_predict(const Bundle& bundle, const BaselineParams& params) {
    Bundle pred;
    pred.name = bundle.name + "_baseline";
    pred.lineage = bundle.lineage;
    LineageEntry entry;
    entry.type = "baseline_segment";
    pred.lineage.push_back(entry);
    for (const auto& patch : bundle.patches) {
        if (!patch.image)
            throw ValidationError("baseline_predict: patch '" + patch.id + "' has no image");
        LabelledPatch out;
        out.id = patch.id;
        auto [inst, cls] = baseline_segment(*patch.image, params);
        out.instances = std::move(inst);
        out.classes = std::move(cls);
        pred.patches.push_back(std::move(out));
    }
    return pred;
}

} // namespace nucrobust::harness
