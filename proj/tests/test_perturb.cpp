#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "nucrobust/color/embedding.hpp"
#include "nucrobust/color/references.hpp"
#include "nucrobust/core/errors.hpp"
#include "nucrobust/harness/synthetic.hpp"
#include "nucrobust/perturb/colorshift.hpp"
#include "nucrobust/perturb/compression.hpp"

using namespace nucrobust;
using namespace nucrobust::perturb;

namespace {

Bundle small_fixture(int patches = 4, int size = 96) {
    harness::SyntheticOptions options;
    options.patches = patches;
    options.width = size;
    options.height = size;
    options.include_teal = false;
    options.seed = 7;
    return harness::make_fixture_bundle(options);
}

double mean_abs_diff(const RGBImage& a, const RGBImage& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i)
        s += std::abs(static_cast<int>(a.pixels[i]) - static_cast<int>(b.pixels[i]));
    return s / static_cast<double>(a.pixels.size());
}

} // namespace

TEST_CASE("default sweeps contain the recommended defaults") {
    const auto [jpeg, webp] = default_compression_specs();
    CHECK(std::find(jpeg.qualities.begin(), jpeg.qualities.end(), 75) != jpeg.qualities.end());
    CHECK(std::find(webp.qualities.begin(), webp.qualities.end(), 80) != webp.qualities.end());
    CHECK(recommended_quality(Codec::jpeg) == 75);
    CHECK(recommended_quality(Codec::webp) == 80);
    CHECK_NOTHROW(jpeg.validate());
    CHECK_NOTHROW(webp.validate());
}

TEST_CASE("compression spec validation") {
    CHECK_THROWS_AS((CompressionSpec{Codec::jpeg, {}}.validate()), ValidationError);
    CHECK_THROWS_AS((CompressionSpec{Codec::jpeg, {0, 50}}.validate()), ValidationError);
    CHECK_THROWS_AS((CompressionSpec{Codec::jpeg, {50, 50}}.validate()), ValidationError);
    CHECK_THROWS_AS((CompressionSpec{Codec::jpeg, {80, 20}}.validate()), ValidationError);
    CHECK_THROWS_AS(codec_from_string("avif"), ValidationError);
}

TEST_CASE("compress_sweep keeps labels and dimensions, degrades with quality") {
    const Bundle bundle = small_fixture(3, 192); // psnr bounds hold at natural patch sizes
    for (Codec codec : {Codec::jpeg, Codec::webp}) {
        const CompressionSpec spec{codec, {30, 90, 100}};
        const auto variants = compress_sweep(bundle, spec);
        REQUIRE(variants.size() == 3);
        for (const auto& v : variants) {
            REQUIRE(v.bundle.patches.size() == bundle.patches.size());
            for (std::size_t i = 0; i < bundle.patches.size(); ++i) {
                CHECK(v.bundle.patches[i].instances == bundle.patches[i].instances);
                CHECK(v.bundle.patches[i].classes == bundle.patches[i].classes);
                CHECK(v.bundle.patches[i].image->width == bundle.patches[i].image->width);
                CHECK(v.bundle.patches[i].image->height == bundle.patches[i].image->height);
            }
            REQUIRE(!v.bundle.lineage.empty());
            CHECK(v.bundle.lineage.back().type == "compress");
            CHECK(v.bundle.lineage.back().quality == v.quality);
        }
        CHECK(variants[0].quality == 30);
        CHECK(variants[1].quality == 90);
        CHECK(variants[1].mean_psnr >= variants[0].mean_psnr);
        if (codec == Codec::jpeg) CHECK(variants[2].mean_psnr >= 40.0);
    }
}

TEST_CASE("compress_sweep needs images") {
    Bundle bundle = small_fixture(2, 32);
    bundle.patches[1].image.reset();
    CHECK_THROWS_AS(compress_sweep(bundle, CompressionSpec{Codec::jpeg, {50}}), ValidationError);
}

TEST_CASE("color_shift toward a self-reference is near identity for ruifrok") {
    const Bundle bundle = small_fixture(3, 64);
    const auto stats = color::dataset_color_stats(bundle, color::Space::hsv);

    ColorShiftSpec spec;
    spec.method = ShiftMethod::ruifrok;
    spec.ref_source = &bundle;
    color::Reference ref;
    ref.grid_index = 0;
    ref.patch_id = bundle.patches[0].id;
    spec.refs.spec = color::PlaneSpec::defaults(color::Space::hsv);
    spec.refs.w_fixed = stats.mean_w;
    spec.refs.refs.push_back(ref);

    const auto variants = color_shift(bundle, spec);
    REQUIRE(variants.size() == 1);
    CHECK(!variants[0].aborted);
    const Bundle& shifted = variants[0].bundle;
    // the reference patch itself barely moves
    CHECK(mean_abs_diff(*bundle.patches[0].image, *shifted.patches[0].image) <= 2.0);
    // geometry is never touched
    for (std::size_t i = 0; i < bundle.patches.size(); ++i) {
        CHECK(shifted.patches[i].instances == bundle.patches[i].instances);
        CHECK(shifted.patches[i].classes == bundle.patches[i].classes);
    }
}

TEST_CASE("color_shift flags teal outputs under vahadane") {
    harness::SyntheticOptions options;
    options.patches = 4;
    options.width = 96;
    options.height = 96;
    options.include_teal = true;
    options.seed = 3;
    const Bundle bundle = harness::make_fixture_bundle(options);
    const std::string teal_id = bundle.patches.back().id;

    ColorShiftSpec spec;
    spec.method = ShiftMethod::vahadane;
    spec.ref_source = &bundle;
    spec.vahadane.seed = 2;
    spec.refs.spec = color::PlaneSpec::defaults(color::Space::hsv);
    color::Reference ref;
    ref.grid_index = 0;
    ref.patch_id = teal_id;
    spec.refs.refs.push_back(ref);

    const auto variants = color_shift(bundle, spec);
    REQUIRE(variants.size() == 1);
    bool teal_reason = false;
    for (const auto& x : variants[0].manifest.excluded)
        teal_reason = teal_reason || x.reason.find("teal") != std::string::npos;
    CHECK(!variants[0].manifest.excluded.empty());
    CHECK(teal_reason);
}

TEST_CASE("color_shift is deterministic") {
    const Bundle bundle = small_fixture(3, 64);
    ColorShiftSpec spec;
    spec.method = ShiftMethod::vahadane;
    spec.ref_source = &bundle;
    spec.vahadane.seed = 9;
    spec.refs.spec = color::PlaneSpec::defaults(color::Space::hsv);
    color::Reference ref;
    ref.patch_id = bundle.patches[1].id;
    spec.refs.refs.push_back(ref);

    const auto a = color_shift(bundle, spec);
    const auto b = color_shift(bundle, spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].bundle.patches.size() == b[i].bundle.patches.size());
        for (std::size_t k = 0; k < a[i].bundle.patches.size(); ++k)
            CHECK(a[i].bundle.patches[k].image->pixels == b[i].bundle.patches[k].image->pixels);
    }
}

TEST_CASE("color_shift validates its spec") {
    const Bundle bundle = small_fixture(2, 32);
    ColorShiftSpec spec;
    spec.method = ShiftMethod::ruifrok;
    CHECK_THROWS_AS(color_shift(bundle, spec), ValidationError); // no refs, no source
    spec.ref_source = &bundle;
    CHECK_THROWS_AS(color_shift(bundle, spec), ValidationError); // still no refs
    color::Reference ref;
    ref.patch_id = "missing";
    spec.refs.refs.push_back(ref);
    CHECK_THROWS_AS(color_shift(bundle, spec), ValidationError); // unresolvable id
}
