// SPDX-License-Identifier: Apache-2.0
#include "kanlab/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace kanlab {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return std::string(buf);
}

void write_file_atomic(const std::string& path, std::string_view bytes) {
    const std::filesystem::path target(path);
    if (target.has_parent_path()) {
        std::filesystem::create_directories(target.parent_path());
    }
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open for writing: " + tmp.string());
        }
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            throw std::runtime_error("write failed: " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, target);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open for reading: " + path);
    }
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string ppm_bytes(const BasinLabelGrid& grid) {
    std::string out;
    out.reserve(32 + static_cast<size_t>(grid.nx) * static_cast<size_t>(grid.ny) * 3);
    char header[64];
    std::snprintf(header, sizeof(header), "P6\n%d %d\n255\n", grid.nx, grid.ny);
    out += header;
    for (int iy = grid.ny - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < grid.nx; ++ix) {
            switch (grid.at(ix, iy)) {
                case BasinLabel::Attractor0:
                    out += '\0';
                    out += '\0';
                    out += static_cast<char>(255);
                    break;
                case BasinLabel::Attractor1:
                    out += static_cast<char>(255);
                    out += '\0';
                    out += '\0';
                    break;
                case BasinLabel::Undecided:
                    out += '\0';
                    out += '\0';
                    out += '\0';
                    break;
            }
        }
    }
    return out;
}

std::string intermingle_csv(const BasinLabelGrid& grid) {
    std::string out = "scale_j,mixed_fraction,mixed_count,total_boxes\n";
    for (int j : admissible_scales(grid)) {
        const auto c = mixed_box_count(grid, j);
        char line[128];
        std::snprintf(line, sizeof(line), "%d,%.6f,%lld,%lld\n", j,
                      static_cast<double>(c.mixed) / static_cast<double>(c.total), c.mixed,
                      c.total);
        out += line;
    }
    return out;
}

std::string format_double(double v, const char* fmt) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return std::string(buf);
}

}  // namespace kanlab
