#include "nucrobust/io/codec.hpp"

#include <opencv2/core.hpp>
#include <opencv2/core/version.hpp>
#include <opencv2/imgcodecs.hpp>

#include "nucrobust/core/errors.hpp"

namespace nucrobust::io {

namespace {

cv::Mat to_bgr(const RGBImage& img) {
    cv::Mat bgr(img.height, img.width, CV_8UC3);
    for (int y = 0; y < img.height; ++y) {
        auto* row = bgr.ptr<std::uint8_t>(y);
        for (int x = 0; x < img.width; ++x) {
            row[3 * x + 0] = img.at(x, y, 2);
            row[3 * x + 1] = img.at(x, y, 1);
            row[3 * x + 2] = img.at(x, y, 0);
        }
    }
    return bgr;
}

RGBImage from_bgr(const cv::Mat& bgr) {
    RGBImage img(bgr.cols, bgr.rows);
    for (int y = 0; y < bgr.rows; ++y) {
        const auto* row = bgr.ptr<std::uint8_t>(y);
        for (int x = 0; x < bgr.cols; ++x) {
            img.at(x, y, 0) = row[3 * x + 2];
            img.at(x, y, 1) = row[3 * x + 1];
            img.at(x, y, 2) = row[3 * x + 0];
        }
    }
    return img;
}

const std::vector<int> kPngParams = {cv::IMWRITE_PNG_COMPRESSION, 6, cv::IMWRITE_PNG_STRATEGY,
                                     cv::IMWRITE_PNG_STRATEGY_DEFAULT};

std::vector<std::uint8_t> encode(const std::string& ext, const cv::Mat& mat,
                                 const std::vector<int>& params) {
    std::vector<std::uint8_t> bytes;
    if (!cv::imencode(ext, mat, bytes, params))
        throw IoError("codec: failed to encode " + ext + " image");
    return bytes;
}

cv::Mat decode(const std::vector<std::uint8_t>& bytes, int flags, const std::string& what) {
    const cv::Mat mat = cv::imdecode(bytes, flags);
    if (mat.empty()) throw IoError("codec: failed to decode " + what);
    return mat;
}

} // namespace

std::vector<std::uint8_t> png_encode_rgb(const RGBImage& img) {
    return encode(".png", to_bgr(img), kPngParams);
}

std::vector<std::uint8_t> png_encode_gray16(const InstanceMap& map) {
    cv::Mat m(map.height, map.width, CV_16UC1);
    for (int y = 0; y < map.height; ++y) {
        auto* row = m.ptr<std::uint16_t>(y);
        for (int x = 0; x < map.width; ++x) {
            const std::uint32_t label = map.at(x, y);
            if (label > 0xFFFF)
                throw IoError("codec: instance label " + std::to_string(label) + " exceeds 16 bits");
            row[x] = static_cast<std::uint16_t>(label);
        }
    }
    return encode(".png", m, kPngParams);
}

std::vector<std::uint8_t> png_encode_gray8(const ClassMap& map) {
    cv::Mat m(map.height, map.width, CV_8UC1);
    for (int y = 0; y < map.height; ++y) {
        auto* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < map.width; ++x) row[x] = map.at(x, y);
    }
    return encode(".png", m, kPngParams);
}

RGBImage png_decode_rgb(const std::vector<std::uint8_t>& bytes) {
    const cv::Mat mat = decode(bytes, cv::IMREAD_COLOR, "RGB png");
    if (mat.type() != CV_8UC3) throw IoError("codec: expected 8-bit RGB png");
    return from_bgr(mat);
}

InstanceMap png_decode_gray16(const std::vector<std::uint8_t>& bytes) {
    const cv::Mat mat = decode(bytes, cv::IMREAD_UNCHANGED, "16-bit png");
    InstanceMap map(mat.cols, mat.rows);
    if (mat.type() == CV_16UC1) {
        for (int y = 0; y < mat.rows; ++y) {
            const auto* row = mat.ptr<std::uint16_t>(y);
            for (int x = 0; x < mat.cols; ++x) map.at(x, y) = row[x];
        }
    } else if (mat.type() == CV_8UC1) {
        // Tolerate 8-bit instance files written by other tools.
        for (int y = 0; y < mat.rows; ++y) {
            const auto* row = mat.ptr<std::uint8_t>(y);
            for (int x = 0; x < mat.cols; ++x) map.at(x, y) = row[x];
        }
    } else {
        throw IoError("codec: expected single-channel instance png");
    }
    return map;
}

ClassMap png_decode_gray8(const std::vector<std::uint8_t>& bytes) {
    const cv::Mat mat = decode(bytes, cv::IMREAD_UNCHANGED, "8-bit png");
    if (mat.type() != CV_8UC1) throw IoError("codec: expected single-channel 8-bit class png");
    ClassMap map(mat.cols, mat.rows);
    for (int y = 0; y < mat.rows; ++y) {
        const auto* row = mat.ptr<std::uint8_t>(y);
        for (int x = 0; x < mat.cols; ++x) map.at(x, y) = row[x];
    }
    return map;
}

RGBImage jpeg_roundtrip(const RGBImage& img, int quality) {
    if (quality < 1 || quality > 100) throw IoError("jpeg: quality outside [1, 100]");
    // libjpeg defaults: baseline DCT, 4:2:0 chroma subsampling.
    const std::vector<int> params = {cv::IMWRITE_JPEG_QUALITY, quality};
    return from_bgr(decode(encode(".jpg", to_bgr(img), params), cv::IMREAD_COLOR, "jpeg"));
}

RGBImage webp_roundtrip(const RGBImage& img, int quality) {
    if (quality < 1 || quality > 100) throw IoError("webp: quality outside [1, 100]");
    const std::vector<int> params = {cv::IMWRITE_WEBP_QUALITY, quality};
    return from_bgr(decode(encode(".webp", to_bgr(img), params), cv::IMREAD_COLOR, "webp"));
}

std::string codec_identity() {
    return std::string("opencv-imgcodecs ") + CV_VERSION + " (jpeg: baseline 4:2:0, webp: lossy)";
}

} // namespace nucrobust::io
