#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nucrobust/core/image.hpp"

namespace nucrobust::io {

// Fixed-setting PNG encoders; identical inputs give identical bytes for a
// given codec build.
std::vector<std::uint8_t> png_encode_rgb(const RGBImage& img);
std::vector<std::uint8_t> png_encode_gray16(const InstanceMap& map); // labels must fit 16 bits
std::vector<std::uint8_t> png_encode_gray8(const ClassMap& map);

RGBImage png_decode_rgb(const std::vector<std::uint8_t>& bytes);
InstanceMap png_decode_gray16(const std::vector<std::uint8_t>& bytes);
ClassMap png_decode_gray8(const std::vector<std::uint8_t>& bytes);

// Lossy encode followed by decode. JPEG is baseline DCT with 4:2:0 chroma
// subsampling; WEBP runs in lossy mode at default effort.
RGBImage jpeg_roundtrip(const RGBImage& img, int quality);
RGBImage webp_roundtrip(const RGBImage& img, int quality);

// Identity of the backing codec build, recorded in variant manifests.
std::string codec_identity();

} // namespace nucrobust::io
