#pragma once

#include <filesystem>

#include "nucrobust/core/image.hpp"

namespace nucrobust::harness {

// On-disk bundle layout: a directory holding manifest.json plus, per patch,
// img_{id}.png (8-bit RGB, optional), inst_{id}.png (16-bit single channel)
// and cls_{id}.png (8-bit single channel).

// Byte-deterministic for identical bundles: fixed PNG settings, patches
// emitted in manifest order, stable JSON key order.
void save_bundle(const Bundle& bundle, const std::filesystem::path& dir);

// Validates every patch on the way in and fails fast naming the patch.
Bundle load_bundle(const std::filesystem::path& dir);

} // namespace nucrobust::harness
