#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "srdf/errors.hpp"
#include "srdf/grid.hpp"

namespace srdf {

/* Raw float32 grid: 8-byte magic, uint32 width/height, then row-major
 * little-endian floats. Debug-friendly alternative to PFM. */
constexpr char kRawGridMagic[8] = {'S', 'R', 'D', 'F', 'G', 'R', 'D', '1'};

inline void write_raw_grid(const std::string& path, const Grid2<float>& grid)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("raw: cannot open for writing: " + path);
    out.write(kRawGridMagic, 8);
    const std::uint32_t w = static_cast<std::uint32_t>(grid.width());
    const std::uint32_t h = static_cast<std::uint32_t>(grid.height());
    out.write(reinterpret_cast<const char*>(&w), 4);
    out.write(reinterpret_cast<const char*>(&h), 4);
    out.write(reinterpret_cast<const char*>(grid.data()),
              static_cast<std::streamsize>(grid.size() * sizeof(float)));
    if (!out)
        throw IoError("raw: write failed: " + path);
}

inline Grid2<float> read_raw_grid(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("raw: cannot open: " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kRawGridMagic, 8) != 0)
        throw IoError("raw: bad magic: " + path);
    std::uint32_t w = 0, h = 0;
    in.read(reinterpret_cast<char*>(&w), 4);
    in.read(reinterpret_cast<char*>(&h), 4);
    if (!in || w == 0 || h == 0 || w > (1u << 20) || h > (1u << 20))
        throw IoError("raw: bad dimensions: " + path);
    Grid2<float> grid(static_cast<int>(w), static_cast<int>(h));
    in.read(reinterpret_cast<char*>(grid.data()),
            static_cast<std::streamsize>(grid.size() * sizeof(float)));
    if (!in)
        throw IoError("raw: truncated file: " + path);
    return grid;
}

} // namespace srdf
