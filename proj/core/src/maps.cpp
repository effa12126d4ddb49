#include "hydromission/maps.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "hydromission/rng.hpp"

namespace hydromission {

GrayImage load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open map file: " + path);
    }
    std::string magic;
    in >> magic;
    if (magic != "P5") {
        throw std::runtime_error("unsupported map format (expected binary PGM P5): " + path);
    }
    auto next_token = [&in, &path]() {
        // skip whitespace and '#' comment lines
        int c = in.peek();
        while (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '#') {
            if (c == '#') {
                std::string line;
                std::getline(in, line);
            } else {
                in.get();
            }
            c = in.peek();
        }
        long value = 0;
        if (!(in >> value)) {
            throw std::runtime_error("truncated PGM header: " + path);
        }
        return value;
    };
    GrayImage img;
    img.width = static_cast<int>(next_token());
    img.height = static_cast<int>(next_token());
    const long maxval = next_token();
    if (img.width <= 0 || img.height <= 0 || maxval <= 0 || maxval > 255) {
        throw std::runtime_error("invalid PGM header in " + path);
    }
    in.get();  // single whitespace after maxval
    img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
        throw std::runtime_error("truncated PGM pixel data in " + path);
    }
    return img;
}

void save_pgm(const GrayImage& image, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write map file: " + path);
    }
    out << "P5\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()),
              static_cast<std::streamsize>(image.pixels.size()));
}

GrayImage make_open_water_map(int width, int height) {
    GrayImage img;
    img.width = width;
    img.height = height;
    img.pixels.assign(static_cast<std::size_t>(width) * height, 235);
    return img;
}

SyntheticMap make_archipelago_map(int width, int height, int island_count, std::uint64_t seed) {
    SyntheticMap map;
    map.image.width = width;
    map.image.height = height;
    map.image.pixels.assign(static_cast<std::size_t>(width) * height, 0);
    map.land_mask.assign(map.image.pixels.size(), 0);

    Rng rng(seed);
    struct Island {
        double cx, cy, r;
    };
    std::vector<Island> islands;
    islands.reserve(static_cast<std::size_t>(island_count));
    const double min_r = 0.02 * width;
    const double max_r = 0.05 * width;
    for (int i = 0; i < island_count; ++i) {
        islands.push_back({rng.uniform(0.1 * width, 0.9 * width),
                           rng.uniform(0.1 * height, 0.9 * height),
                           rng.uniform(min_r, max_r)});
    }

    const double fringe = 0.3;  // uncertain band width relative to island radius
    std::size_t land = 0;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double best = 1e30;  // signed distance to nearest island rim, in radii
            for (const Island& is : islands) {
                const double dx = x - is.cx;
                const double dy = y - is.cy;
                const double d = std::sqrt(dx * dx + dy * dy) / is.r - 1.0;
                if (d < best) {
                    best = d;
                }
            }
            std::uint8_t value;
            if (best <= 0.0) {
                value = static_cast<std::uint8_t>(20 + rng.uniform(0.0, 20.0));
                map.land_mask[static_cast<std::size_t>(y) * width + x] = 1;
                ++land;
            } else if (best <= fringe) {
                value = static_cast<std::uint8_t>(110 + rng.uniform(0.0, 30.0));
            } else {
                value = static_cast<std::uint8_t>(220 + rng.uniform(0.0, 30.0));
            }
            map.image.at(x, y) = value;
        }
    }
    map.land_fraction = static_cast<double>(land) / static_cast<double>(map.land_mask.size());
    return map;
}

}  // namespace hydromission
