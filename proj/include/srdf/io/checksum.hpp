#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "srdf/errors.hpp"

namespace srdf {

/* FNV-1a 64-bit; good enough to detect artifact drift between runs. */
inline std::uint64_t fnv1a64(const void* data, std::size_t size,
                             std::uint64_t hash = 0xcbf29ce484222325ull)
{
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= bytes[i];
        hash *= 0x100000001b3ull;
    }
    return hash;
}

struct FileChecksum {
    std::uint64_t hash = 0;
    std::uint64_t bytes = 0;
};

inline FileChecksum checksum_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("checksum: cannot open: " + path);
    FileChecksum out;
    out.hash = 0xcbf29ce484222325ull;
    char buffer[1 << 16];
    while (in) {
        in.read(buffer, sizeof(buffer));
        const std::streamsize got = in.gcount();
        if (got > 0) {
            out.hash = fnv1a64(buffer, static_cast<std::size_t>(got), out.hash);
            out.bytes += static_cast<std::uint64_t>(got);
        }
    }
    return out;
}

} // namespace srdf
