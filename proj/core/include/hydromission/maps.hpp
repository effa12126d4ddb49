#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hydromission {

struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row-major, 8-bit intensity

    std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

// Binary (P5) portable graymap, 8-bit maxval.
GrayImage load_pgm(const std::string& path);
void save_pgm(const GrayImage& image, const std::string& path);

// Synthetic map generators. The archipelago generator also returns the
// land mask it drew from, so the clustered grid can be checked against
// the known ground truth.
struct SyntheticMap {
    GrayImage image;
    std::vector<std::uint8_t> land_mask;  // 1 = island interior
    double land_fraction = 0.0;
};

GrayImage make_open_water_map(int width, int height);
SyntheticMap make_archipelago_map(int width, int height, int island_count, std::uint64_t seed);

}  // namespace hydromission
