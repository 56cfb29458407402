#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <png.h>

#include "srdf/errors.hpp"
#include "srdf/grid.hpp"

namespace srdf {

inline void write_png_rgb(const std::string& path, const Image& image)
{
    png_image img{};
    img.version = PNG_IMAGE_VERSION;
    img.width = static_cast<png_uint_32>(image.width());
    img.height = static_cast<png_uint_32>(image.height());
    img.format = PNG_FORMAT_RGB;

    std::vector<std::uint8_t> buffer(image.size() * 3);
    for (std::size_t i = 0; i < image.size(); ++i)
        for (int c = 0; c < 3; ++c)
            buffer[3 * i + c] = static_cast<std::uint8_t>(
                std::lround(std::clamp(image[i][c], 0.0, 1.0) * 255.0));
    if (!png_image_write_to_file(&img, path.c_str(), 0, buffer.data(), 0,
                                 nullptr))
        throw IoError("png: write failed: " + path + " (" + img.message + ")");
}

inline Image read_png_rgb(const std::string& path)
{
    png_image img{};
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&img, path.c_str()))
        throw IoError("png: cannot open: " + path + " (" + img.message + ")");
    img.format = PNG_FORMAT_RGB;
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(img));
    if (!png_image_finish_read(&img, nullptr, buffer.data(), 0, nullptr))
        throw IoError("png: read failed: " + path + " (" + img.message + ")");

    Image out(static_cast<int>(img.width), static_cast<int>(img.height));
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = Eigen::Vector3d(buffer[3 * i + 0], buffer[3 * i + 1],
                                 buffer[3 * i + 2]) / 255.0;
    return out;
}

/* Masks: 0 = background, anything else foreground (written as 255). */
inline void write_png_mask(const std::string& path, const Mask& mask)
{
    png_image img{};
    img.version = PNG_IMAGE_VERSION;
    img.width = static_cast<png_uint_32>(mask.width());
    img.height = static_cast<png_uint_32>(mask.height());
    img.format = PNG_FORMAT_GRAY;

    std::vector<std::uint8_t> buffer(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i)
        buffer[i] = mask[i] ? 255 : 0;
    if (!png_image_write_to_file(&img, path.c_str(), 0, buffer.data(), 0,
                                 nullptr))
        throw IoError("png: write failed: " + path + " (" + img.message + ")");
}

inline Mask read_png_mask(const std::string& path)
{
    png_image img{};
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&img, path.c_str()))
        throw IoError("png: cannot open: " + path + " (" + img.message + ")");
    img.format = PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(img));
    if (!png_image_finish_read(&img, nullptr, buffer.data(), 0, nullptr))
        throw IoError("png: read failed: " + path + " (" + img.message + ")");

    Mask out(static_cast<int>(img.width), static_cast<int>(img.height));
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = buffer[i] >= 128 ? 255 : 0;
    return out;
}

} // namespace srdf
