#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nucrobust {

// Interleaved 8-bit RGB, row-major.
struct RGBImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels; // size = width*height*3

    RGBImage() = default;
    RGBImage(int w, int h, std::uint8_t fill = 255)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, fill) {}

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    std::uint8_t& at(int x, int y, int c) {
        return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
    std::uint8_t at(int x, int y, int c) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }

    bool operator==(const RGBImage&) const = default;
};

// Per-pixel instance identifiers, 0 = background. Labels are not required to
// be spatially connected; a label value identifies one instance.
struct InstanceMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint32_t> labels;

    InstanceMap() = default;
    InstanceMap(int w, int h) : width(w), height(h), labels(static_cast<std::size_t>(w) * h, 0) {}

    std::uint32_t& at(int x, int y) { return labels[static_cast<std::size_t>(y) * width + x]; }
    std::uint32_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }

    bool operator==(const InstanceMap&) const = default;
};

// Per-pixel nucleus category, 0 = background, 1..6 = nucleus class.
struct ClassMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> classes;

    ClassMap() = default;
    ClassMap(int w, int h) : width(w), height(h), classes(static_cast<std::size_t>(w) * h, 0) {}

    std::uint8_t& at(int x, int y) { return classes[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return classes[static_cast<std::size_t>(y) * width + x]; }

    bool operator==(const ClassMap&) const = default;
};

inline constexpr int kNumClasses = 6;

// One evaluation unit: image plus aligned label layers. Prediction-only
// patches carry no image.
struct LabelledPatch {
    std::string id;
    std::optional<RGBImage> image;
    InstanceMap instances;
    ClassMap classes;
};

struct Exclusion {
    std::string patch_id;
    std::string reason;
};

// One generation step in a bundle's provenance chain.
struct LineageEntry {
    std::string type; // "compress" | "colorshift" | ...
    std::string codec;
    int quality = -1;
    std::string method;
    std::string reference_id;
    std::int64_t seed = -1;
    std::vector<Exclusion> excluded;
};

struct Bundle {
    std::string name;
    std::vector<LineageEntry> lineage;
    std::vector<LabelledPatch> patches;

    const LabelledPatch* find(const std::string& id) const {
        for (const auto& p : patches)
            if (p.id == id) return &p;
        return nullptr;
    }
};

} // namespace nucrobust
