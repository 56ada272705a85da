/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/core/image.hpp
 *
 * Copyright 2026 The faceaug Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#ifndef FACEAUG_CORE_IMAGE_HPP
#define FACEAUG_CORE_IMAGE_HPP

#include "faceaug/core/error.hpp"
#include "faceaug/core/types.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

namespace faceaug {

/**
 * A linear-RGB raster, row-major, origin at the top-left pixel. Pixel (x, y) covers the unit
 * square centred on the integer coordinate (x, y).
 */
struct RgbImage
{
    int width = 0;
    int height = 0;
    std::vector<Rgb> pixels;

    RgbImage() = default;
    RgbImage(int width, int height, const Rgb& fill = Rgb::Zero())
        : width(width), height(height), pixels(static_cast<std::size_t>(width) * height, fill)
    {
    }

    bool empty() const noexcept { return width <= 0 || height <= 0; }
    bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width && y < height; }

    Rgb& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    const Rgb& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }

    bool operator==(const RgbImage& other) const
    {
        return width == other.width && height == other.height && pixels == other.pixels;
    }
};

/// Single-channel float raster, used for depth buffers.
struct ScalarImage
{
    int width = 0;
    int height = 0;
    std::vector<double> values;

    ScalarImage() = default;
    ScalarImage(int width, int height, double fill)
        : width(width), height(height), values(static_cast<std::size_t>(width) * height, fill)
    {
    }

    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

inline double srgb_to_linear(double c)
{
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

inline double linear_to_srgb(double c)
{
    return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

inline const std::array<double, 256>& srgb8_to_linear_table()
{
    static const std::array<double, 256> table = [] {
        std::array<double, 256> t{};
        for (int i = 0; i < 256; ++i) {
            t[i] = srgb_to_linear(i / 255.0);
        }
        return t;
    }();
    return table;
}

inline std::uint8_t linear_to_srgb8(double c)
{
    c = std::clamp(c, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::lround(linear_to_srgb(c) * 255.0));
}

/// Interleaved 8-bit sRGB buffer (R, G, B per pixel).
inline std::vector<std::uint8_t> to_srgb8(const RgbImage& image)
{
    std::vector<std::uint8_t> out(image.pixels.size() * 3);
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
        for (int c = 0; c < 3; ++c) {
            out[3 * i + c] = linear_to_srgb8(image.pixels[i][c]);
        }
    }
    return out;
}

inline RgbImage from_srgb8(int width, int height, const std::vector<std::uint8_t>& data)
{
    if (data.size() != static_cast<std::size_t>(width) * height * 3) {
        throw InvalidArgument("from_srgb8: buffer size does not match image dimensions");
    }
    const auto& lut = srgb8_to_linear_table();
    RgbImage image(width, height);
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
        image.pixels[i] = Rgb(lut[data[3 * i]], lut[data[3 * i + 1]], lut[data[3 * i + 2]]);
    }
    return image;
}

/// Rounds every pixel through the 8-bit sRGB encoding used at file boundaries.
inline RgbImage quantize_srgb8(const RgbImage& image)
{
    return from_srgb8(image.width, image.height, to_srgb8(image));
}

inline void write_png(const std::filesystem::path& path, const RgbImage& image)
{
    if (image.empty()) {
        throw InvalidArgument("write_png: empty image");
    }
    const auto bytes = to_srgb8(image);
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(image.width);
    png.height = static_cast<png_uint_32>(image.height);
    png.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&png, path.string().c_str(), 0, bytes.data(), 0, nullptr)) {
        throw Error("write_png: " + path.string() + ": " + png.message);
    }
}

inline RgbImage read_png(const std::filesystem::path& path)
{
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&png, path.string().c_str())) {
        throw Error("read_png: " + path.string() + ": " + png.message);
    }
    png.format = PNG_FORMAT_RGB;
    std::vector<std::uint8_t> bytes(PNG_IMAGE_SIZE(png));
    if (!png_image_finish_read(&png, nullptr, bytes.data(), 0, nullptr)) {
        png_image_free(&png);
        throw Error("read_png: " + path.string() + ": " + png.message);
    }
    return from_srgb8(static_cast<int>(png.width), static_cast<int>(png.height), bytes);
}

inline void write_ppm(const std::filesystem::path& path, const RgbImage& image)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("write_ppm: cannot open " + path.string());
    }
    out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
    const auto bytes = to_srgb8(image);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

inline RgbImage read_ppm(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("read_ppm: cannot open " + path.string());
    }
    const auto skip_comments = [&in] {
        in >> std::ws;
        while (in.peek() == '#') {
            std::string line;
            std::getline(in, line);
            in >> std::ws;
        }
    };
    std::string magic;
    in >> magic;
    if (magic != "P6") {
        throw ParseError("read_ppm: only binary P6 is supported: " + path.string());
    }
    int width = 0, height = 0, maxval = 0;
    skip_comments();
    in >> width;
    skip_comments();
    in >> height;
    skip_comments();
    in >> maxval;
    if (!in || width <= 0 || height <= 0 || maxval != 255) {
        throw ParseError("read_ppm: bad header in " + path.string());
    }
    in.get();
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(width) * height * 3);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
        throw ParseError("read_ppm: truncated pixel data in " + path.string());
    }
    return from_srgb8(width, height, bytes);
}

/// Dispatches on the file extension (.png, .ppm).
inline RgbImage read_image(const std::filesystem::path& path)
{
    const auto ext = path.extension().string();
    if (ext == ".png" || ext == ".PNG") {
        return read_png(path);
    }
    if (ext == ".ppm" || ext == ".PPM") {
        return read_ppm(path);
    }
    throw InvalidArgument("read_image: unsupported extension '" + ext + "'");
}

inline void write_image(const std::filesystem::path& path, const RgbImage& image)
{
    const auto ext = path.extension().string();
    if (ext == ".ppm" || ext == ".PPM") {
        write_ppm(path, image);
    } else {
        write_png(path, image);
    }
}

/// Little-endian grayscale PFM. Rows are written bottom-to-top as the format requires.
inline void write_pfm(const std::filesystem::path& path, const ScalarImage& image)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("write_pfm: cannot open " + path.string());
    }
    out << "Pf\n" << image.width << ' ' << image.height << "\n-1.0\n";
    for (int y = image.height - 1; y >= 0; --y) {
        for (int x = 0; x < image.width; ++x) {
            const float v = static_cast<float>(image.at(x, y));
            out.write(reinterpret_cast<const char*>(&v), sizeof(v));
        }
    }
}

/**
 * Peak signal-to-noise ratio in dB between two images over the pixels where \p mask is true,
 * computed on 8-bit sRGB values (peak 255). Returns +infinity for identical inputs.
 */
inline double psnr_srgb8(const RgbImage& a, const RgbImage& b, const std::vector<bool>& mask)
{
    if (a.width != b.width || a.height != b.height || mask.size() != a.pixels.size()) {
        throw InvalidArgument("psnr_srgb8: size mismatch");
    }
    double sse = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        if (!mask[i]) {
            continue;
        }
        for (int c = 0; c < 3; ++c) {
            const double d = double(linear_to_srgb8(a.pixels[i][c])) - double(linear_to_srgb8(b.pixels[i][c]));
            sse += d * d;
        }
        n += 3;
    }
    if (n == 0) {
        throw InvalidArgument("psnr_srgb8: empty mask");
    }
    if (sse == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(255.0 * 255.0 / (sse / double(n)));
}

/// Bilinear sample with edge clamping; coordinates are pixel-centre based.
inline Rgb sample_bilinear(const RgbImage& image, double x, double y)
{
    const double fx = std::clamp(x, 0.0, double(image.width - 1));
    const double fy = std::clamp(y, 0.0, double(image.height - 1));
    const int x0 = static_cast<int>(std::floor(fx));
    const int y0 = static_cast<int>(std::floor(fy));
    const int x1 = std::min(x0 + 1, image.width - 1);
    const int y1 = std::min(y0 + 1, image.height - 1);
    const double ax = fx - x0;
    const double ay = fy - y0;
    const Rgb top = (1.0 - ax) * image.at(x0, y0) + ax * image.at(x1, y0);
    const Rgb bottom = (1.0 - ax) * image.at(x0, y1) + ax * image.at(x1, y1);
    return (1.0 - ay) * top + ay * bottom;
}

} // namespace faceaug

#endif // FACEAUG_CORE_IMAGE_HPP
