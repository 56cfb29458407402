#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "srdf/errors.hpp"
#include "srdf/grid.hpp"

namespace srdf {

/* Grayscale PFM ("Pf"), scale -1.0 (little endian), rows stored bottom
 * to top as the format prescribes. */
inline void write_pfm(const std::string& path, const Grid2<float>& grid)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("pfm: cannot open for writing: " + path);
    out << "Pf\n" << grid.width() << " " << grid.height() << "\n-1.0\n";
    for (int y = grid.height() - 1; y >= 0; --y)
        out.write(reinterpret_cast<const char*>(&grid(0, y)),
                  static_cast<std::streamsize>(grid.width() * sizeof(float)));
    if (!out)
        throw IoError("pfm: write failed: " + path);
}

inline Grid2<float> read_pfm(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("pfm: cannot open: " + path);
    std::string magic;
    int w = 0, h = 0;
    double scale = 0.0;
    in >> magic >> w >> h >> scale;
    if (magic == "PF")
        throw IoError("pfm: color PFM not supported for depth maps: " + path);
    if (magic != "Pf" || w <= 0 || h <= 0 || scale == 0.0)
        throw IoError("pfm: malformed header: " + path);
    in.get();   // single whitespace after the scale
    Grid2<float> grid(w, h);
    std::vector<float> row(w);
    for (int y = h - 1; y >= 0; --y) {
        in.read(reinterpret_cast<char*>(row.data()),
                static_cast<std::streamsize>(w * sizeof(float)));
        if (!in)
            throw IoError("pfm: truncated file: " + path);
        if (scale > 0.0) {
            // big-endian payload; swap to host order
            for (float& f : row) {
                std::uint32_t bits;
                std::memcpy(&bits, &f, 4);
                bits = __builtin_bswap32(bits);
                std::memcpy(&f, &bits, 4);
            }
        }
        std::memcpy(&grid(0, y), row.data(), w * sizeof(float));
    }
    return grid;
}

} // namespace srdf
