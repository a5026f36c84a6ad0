#include "nucrobust/harness/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <vector>

#include "nucrobust/color/convert.hpp"
#include "nucrobust/stain/model.hpp"

namespace nucrobust::harness {

namespace {

// Bilinear value noise over a coarse seeded lattice, in [0, 1].
class ValueNoise {
public:
    ValueNoise(std::mt19937_64& rng, int cells) : cells_(cells), lattice_((cells + 1) * (cells + 1)) {
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (auto& v : lattice_) v = uni(rng);
    }

    double at(double fx, double fy) const { // fx, fy in [0, 1]
        const double gx = fx * cells_, gy = fy * cells_;
        const int x0 = std::min(static_cast<int>(gx), cells_ - 1);
        const int y0 = std::min(static_cast<int>(gy), cells_ - 1);
        const double tx = gx - x0, ty = gy - y0;
        auto v = [&](int x, int y) { return lattice_[y * (cells_ + 1) + x]; };
        return v(x0, y0) * (1 - tx) * (1 - ty) + v(x0 + 1, y0) * tx * (1 - ty) +
               v(x0, y0 + 1) * (1 - tx) * ty + v(x0 + 1, y0 + 1) * tx * ty;
    }

private:
    int cells_;
    std::vector<double> lattice_;
};

std::uint8_t beer_lambert(double od) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(255.0 * std::pow(10.0, -od)), 0L, 255L));
}

} // namespace

LabelledPatch make_he_patch(const std::string& id, std::uint64_t seed, int width, int height) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const ValueNoise wash(rng, 6);
    const ValueNoise haze(rng, 9);

    LabelledPatch patch;
    patch.id = id;
    patch.instances = InstanceMap(width, height);
    patch.classes = ClassMap(width, height);

    // Eosin wash plus a faint haematoxylin haze everywhere. Texture comes
    // from the smooth lattice noise; the white-noise floor stays small so the
    // patches compress like natural images rather than like static.
    std::vector<double> c_h(static_cast<std::size_t>(width) * height);
    std::vector<double> c_e(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * width + x;
            const double fx = static_cast<double>(x) / (width - 1);
            const double fy = static_cast<double>(y) / (height - 1);
            c_e[i] = 0.15 + 0.45 * wash.at(fx, fy) + 0.015 * uni(rng);
            c_h[i] = 0.02 + 0.08 * haze.at(fx, fy) + 0.008 * uni(rng);
        }
    }

    // Elliptical nuclei; overlaps resolve to the later label so each pixel
    // belongs to exactly one instance.
    const int n_nuclei = 8 + static_cast<int>(rng() % 7);
    std::uniform_int_distribution<int> cls_dist(1, kNumClasses);
    std::uint32_t label = 0;
    for (int k = 0; k < n_nuclei; ++k) {
        ++label;
        const int cls = cls_dist(rng);
        const double cx = 12.0 + uni(rng) * (width - 24);
        const double cy = 12.0 + uni(rng) * (height - 24);
        const double ra = 5.0 + uni(rng) * 8.0;
        const double rb = 5.0 + uni(rng) * 8.0;
        const double theta = uni(rng) * std::numbers::pi;
        const double ct = std::cos(theta), st = std::sin(theta);
        const int x0 = std::max(0, static_cast<int>(cx - ra - rb)), x1 = std::min(width - 1, static_cast<int>(cx + ra + rb));
        const int y0 = std::max(0, static_cast<int>(cy - ra - rb)), y1 = std::min(height - 1, static_cast<int>(cy + ra + rb));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double dx = x - cx, dy = y - cy;
                const double ex = (dx * ct + dy * st) / ra;
                const double ey = (-dx * st + dy * ct) / rb;
                const double rho = std::sqrt(ex * ex + ey * ey);
                // approximate pixel distance to the boundary, positive inside
                const double dist = (1.0 - rho) * std::min(ra, rb);
                if (dist < -1.0) continue;
                const std::size_t i = static_cast<std::size_t>(y) * width + x;
                // optically soft rim (the labels stay crisp at rho <= 1)
                const double cover = std::clamp((dist + 1.0) / 2.0, 0.0, 1.0);
                if (rho <= 1.0) {
                    patch.instances.labels[i] = label;
                    patch.classes.classes[i] = static_cast<std::uint8_t>(cls);
                }
                const double shade = haze.at(static_cast<double>(x) / (width - 1),
                                             static_cast<double>(y) / (height - 1));
                const double h_nucleus = 0.85 + 0.2 * shade + 0.04 * uni(rng);
                const double e_nucleus = 0.10 + 0.08 * shade + 0.02 * uni(rng);
                c_h[i] = c_h[i] + (h_nucleus - c_h[i]) * cover;
                c_e[i] = c_e[i] + (e_nucleus - c_e[i]) * cover;
            }
        }
    }

    const stain::StainMatrix W = stain::ruifrok_he_matrix();
    RGBImage img(width, height);
    for (std::size_t i = 0; i < c_h.size(); ++i) {
        const Eigen::Vector3d od = W.col(0) * c_h[i] + W.col(1) * c_e[i];
        img.pixels[3 * i + 0] = beer_lambert(od(0));
        img.pixels[3 * i + 1] = beer_lambert(od(1));
        img.pixels[3 * i + 2] = beer_lambert(od(2));
    }
    patch.image = std::move(img);
    return patch;
}

LabelledPatch make_teal_patch(const std::string& id, std::uint64_t seed, int width, int height) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const ValueNoise tone(rng, 5);
    const ValueNoise shade(rng, 8);

    LabelledPatch patch;
    patch.id = id;
    patch.instances = InstanceMap(width, height);
    patch.classes = ClassMap(width, height);

    RGBImage img(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * width + x;
            const double fx = static_cast<double>(x) / (width - 1);
            const double fy = static_cast<double>(y) / (height - 1);
            // Two interleaved teal tones keep the stain fit two-dimensional.
            const bool band = tone.at(fx, fy) > 0.5;
            color::Hsv hsv;
            hsv.h = (band ? 183.0 : 206.0) + 6.0 * (uni(rng) - 0.5);
            hsv.s = 0.78 + 0.15 * shade.at(fx, fy) + 0.04 * uni(rng);
            hsv.v = 0.52 + 0.30 * shade.at(fy, fx) + 0.05 * uni(rng);
            const auto rgb = color::hsv_to_rgb(hsv);
            img.pixels[3 * i + 0] = rgb[0];
            img.pixels[3 * i + 1] = rgb[1];
            img.pixels[3 * i + 2] = rgb[2];
        }
    }
    patch.image = std::move(img);
    return patch;
}

Bundle make_fixture_bundle(const SyntheticOptions& options) {
    Bundle bundle;
    bundle.name = "synthetic_fixture";
    const int he_count = options.patches - (options.include_teal ? 1 : 0);
    for (int k = 0; k < he_count; ++k) {
        char id[16];
        std::snprintf(id, sizeof(id), "patch_%03d", k);
        bundle.patches.push_back(make_he_patch(id, options.seed * 1000 + k, options.width, options.height));
    }
    if (options.include_teal) {
        char id[16];
        std::snprintf(id, sizeof(id), "patch_%03d", he_count);
        bundle.patches.push_back(make_teal_patch(id, options.seed * 1000 + he_count, options.width, options.height));
    }
    return bundle;
}

} // namespace nucrobust::harness
