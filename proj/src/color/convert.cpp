#include "nucrobust/color/convert.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "nucrobust/core/errors.hpp"

namespace nucrobust::color {

Space space_from_string(const std::string& s) {
    if (s == "hsv") return Space::hsv;
    if (s == "lab") return Space::lab;
    throw ValidationError("unknown color space '" + s + "' (expected hsv or lab)");
}

std::string to_string(Space s) { return s == Space::hsv ? "hsv" : "lab"; }

Hsv rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    const double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double delta = mx - mn;
    Hsv out;
    out.v = mx;
    out.s = mx > 0.0 ? delta / mx : 0.0;
    if (delta > 0.0) {
        double h;
        if (mx == r)
            h = 60.0 * std::fmod((g - b) / delta, 6.0);
        else if (mx == g)
            h = 60.0 * ((b - r) / delta + 2.0);
        else
            h = 60.0 * ((r - g) / delta + 4.0);
        if (h < 0.0) h += 360.0;
        if (h >= 360.0) h -= 360.0;
        out.h = h;
    }
    return out;
}

std::array<std::uint8_t, 3> hsv_to_rgb(const Hsv& c) {
    const double h = std::fmod(std::fmod(c.h, 360.0) + 360.0, 360.0);
    const double s = std::clamp(c.s, 0.0, 1.0);
    const double v = std::clamp(c.v, 0.0, 1.0);
    const double chroma = v * s;
    const double hp = h / 60.0;
    const double x = chroma * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hp)) {
        case 0: r = chroma; g = x; break;
        case 1: r = x; g = chroma; break;
        case 2: g = chroma; b = x; break;
        case 3: g = x; b = chroma; break;
        case 4: r = x; b = chroma; break;
        default: r = chroma; b = x; break;
    }
    const double m = v - chroma;
    auto to8 = [](double t) {
        return static_cast<std::uint8_t>(std::clamp(std::lround(t * 255.0), 0L, 255L));
    };
    return {to8(r + m), to8(g + m), to8(b + m)};
}

namespace {

const Eigen::Matrix3d kRgbToXyz = [] {
    Eigen::Matrix3d m;
    m << 0.4124564, 0.3575761, 0.1804375,
         0.2126729, 0.7151522, 0.0721750,
         0.0193339, 0.1191920, 0.9503041;
    return m;
}();

// Row sums of the forward matrix: the XYZ of RGB white.
const Eigen::Vector3d kWhite = kRgbToXyz * Eigen::Vector3d::Ones();

const Eigen::Matrix3d kXyzToRgb = kRgbToXyz.inverse();

double srgb_decode(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double srgb_encode(double c) {
    return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

constexpr double kLabDelta = 6.0 / 29.0;

double lab_f(double t) {
    return t > kLabDelta * kLabDelta * kLabDelta ? std::cbrt(t)
                                                 : t / (3.0 * kLabDelta * kLabDelta) + 4.0 / 29.0;
}

double lab_f_inv(double t) {
    return t > kLabDelta ? t * t * t : 3.0 * kLabDelta * kLabDelta * (t - 4.0 / 29.0);
}

} // namespace

Lab rgb_to_lab(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    const Eigen::Vector3d lin(srgb_decode(r8 / 255.0), srgb_decode(g8 / 255.0), srgb_decode(b8 / 255.0));
    const Eigen::Vector3d xyz = kRgbToXyz * lin;
    const double fx = lab_f(xyz.x() / kWhite.x());
    const double fy = lab_f(xyz.y() / kWhite.y());
    const double fz = lab_f(xyz.z() / kWhite.z());
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

std::array<std::uint8_t, 3> lab_to_rgb(const Lab& c) {
    const double fy = (c.l + 16.0) / 116.0;
    const double fx = fy + c.a / 500.0;
    const double fz = fy - c.b / 200.0;
    const Eigen::Vector3d xyz(lab_f_inv(fx) * kWhite.x(), lab_f_inv(fy) * kWhite.y(),
                              lab_f_inv(fz) * kWhite.z());
    const Eigen::Vector3d lin = kXyzToRgb * xyz;
    auto to8 = [](double t) {
        return static_cast<std::uint8_t>(
            std::clamp(std::lround(srgb_encode(std::clamp(t, 0.0, 1.0)) * 255.0), 0L, 255L));
    };
    return {to8(lin.x()), to8(lin.y()), to8(lin.z())};
}

} // namespace nucrobust::color
