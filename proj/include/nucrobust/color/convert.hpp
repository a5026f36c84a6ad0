#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace nucrobust::color {

enum class Space { hsv, lab };

Space space_from_string(const std::string& s); // "hsv" | "lab"
std::string to_string(Space s);

struct Hsv {
    double h = 0.0; // degrees, [0, 360)
    double s = 0.0; // [0, 1]
    double v = 0.0; // [0, 1]
};

struct Lab {
    double l = 0.0; // [0, 100]
    double a = 0.0;
    double b = 0.0;
};

// Hexcone HSV of an 8-bit sRGB triple. Achromatic inputs report hue 0.
Hsv rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b);
std::array<std::uint8_t, 3> hsv_to_rgb(const Hsv& c);

// CIELAB via sRGB decoding (IEC 61966-2-1) and the D65 / 2 degree observer.
// The white point is taken as the exact image of RGB white under the forward
// matrix, so achromatic inputs land on a* = b* = 0 to machine precision.
Lab rgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b);
std::array<std::uint8_t, 3> lab_to_rgb(const Lab& c);

} // namespace nucrobust::color
