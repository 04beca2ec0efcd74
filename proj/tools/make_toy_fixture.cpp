// Writes the two-class toy fixture used by the integration tests and the README walkthrough:
//   classes.txt, captures/<class>/{high,low}/<n>.png, backgrounds/*.png, layouts/*.json,
//   config.json
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <nlohmann/json.hpp>

#include "chromaforge/datasetgen.hpp"
#include "chromaforge/png_io.hpp"

namespace fs = std::filesystem;
using namespace chromaforge;

namespace {

constexpr int kFrames = 3;
constexpr int kCaptureSize = 64;

ImageBuffer green_field(int w, int h, std::mt19937_64& rng) {
    ImageBuffer img(w, h, ColorSpace::Rgb);
    std::uniform_int_distribution<int> noise(-3, 3);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::uint8_t* p = img.pixel(x, y);
            p[0] = static_cast<std::uint8_t>(40 + noise(rng));
            p[1] = static_cast<std::uint8_t>(180 + y / 8 + noise(rng));
            p[2] = static_cast<std::uint8_t>(50 + noise(rng));
        }
    }
    return img;
}

// Class 0: pink ellipse with a darker stripe. Class 1: blue box with an orange label.
// Every object channel differs from the backdrop so per-channel equalization keeps it green.
ImageBuffer capture(int cls, int camera, int frame, std::mt19937_64& rng) {
    ImageBuffer img = green_field(kCaptureSize, kCaptureSize, rng);
    const double cx = 32 + (frame - 1) * 2;
    const double cy = camera == 0 ? 30 : 34;
    for (int y = 0; y < kCaptureSize; ++y) {
        for (int x = 0; x < kCaptureSize; ++x) {
            std::uint8_t* p = img.pixel(x, y);
            if (cls == 0) {
                const double rx = 14 + frame, ry = camera == 0 ? 18 : 16;
                const double dx = (x - cx) / rx, dy = (y - cy) / ry;
                if (dx * dx + dy * dy <= 1.0) {
                    const bool stripe = std::abs(y - cy) < 3;
                    p[0] = stripe ? 170 : 220;
                    p[1] = stripe ? 30 : 60;
                    p[2] = stripe ? 110 : 140;
                }
            } else {
                const int hw = 12 + frame, hh = camera == 0 ? 16 : 14;
                if (std::abs(x - cx) <= hw && std::abs(y - cy) <= hh) {
                    const bool label = std::abs(y - cy) < 5 && std::abs(x - cx) < hw - 3;
                    p[0] = label ? 240 : 100;
                    p[1] = label ? 150 : 80;
                    p[2] = label ? 90 : 210;
                }
            }
        }
    }
    return img;
}

ImageBuffer background(int variant) {
    ImageBuffer img(640, 480, ColorSpace::Rgb);
    for (int y = 0; y < 480; ++y) {
        for (int x = 0; x < 640; ++x) {
            std::uint8_t* p = img.pixel(x, y);
            if (variant == 0) {  // wooden table
                const double grain = 12.0 * std::sin(x * 0.05 + std::sin(y * 0.02) * 3.0);
                p[0] = static_cast<std::uint8_t>(150 + grain + y / 16);
                p[1] = static_cast<std::uint8_t>(105 + grain * 0.7 + y / 20);
                p[2] = static_cast<std::uint8_t>(70 + grain * 0.4);
            } else {  // grey shelf with boards every 120 rows
                const bool board = (y % 120) < 10;
                const int base = board ? 90 : 185 - (x / 40);
                p[0] = static_cast<std::uint8_t>(base);
                p[1] = static_cast<std::uint8_t>(base + 4);
                p[2] = static_cast<std::uint8_t>(base + 10);
            }
        }
    }
    return img;
}

AnchorLayout grid_layout(const std::string& id, int cols, int rows, int max_w, int max_h) {
    AnchorLayout l{id, {}};
    const int sx = 640 / cols, sy = 480 / rows;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) l.anchors.push_back({sx / 2 + c * sx, sy / 2 + r * sy, max_w, max_h});
    }
    return l;
}

void write_text(const fs::path& p, const std::string& s) {
    std::ofstream out(p, std::ios::trunc);
    out << s;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_toy_fixture <output-dir>\n";
        return 2;
    }
    const fs::path root = argv[1];
    fs::create_directories(root);
    std::mt19937_64 rng(20180901);
    const char* classes[] = {"mug", "box"};
    write_text(root / "classes.txt", "0\tmug\n1\tbox\n");
    for (int cls = 0; cls < 2; ++cls) {
        for (int cam = 0; cam < 2; ++cam) {
            const fs::path dir = root / "captures" / classes[cls] / (cam == 0 ? "high" : "low");
            fs::create_directories(dir);
            for (int f = 0; f < kFrames; ++f) {
                write_png(capture(cls, cam, f, rng), dir / (std::to_string(f) + ".png"));
            }
        }
    }
    fs::create_directories(root / "backgrounds");
    fs::create_directories(root / "layouts");
    write_png(background(0), root / "backgrounds" / "table.png");
    write_png(background(1), root / "backgrounds" / "shelf.png");
    // 20 and 24 anchors; caps keep neighbouring windows disjoint.
    write_text(root / "layouts" / "table.json", to_json(grid_layout("table", 5, 4, 100, 100)).dump(2) + "\n");
    write_text(root / "layouts" / "shelf.json", to_json(grid_layout("shelf", 6, 4, 90, 100)).dump(2) + "\n");

    const nlohmann::json config = {
        {"captures", "captures"},
        {"class_manifest", "classes.txt"},
        {"backgrounds", "backgrounds"},
        {"layouts", "layouts"},
        {"output", "out"},
        {"seed", 7},
        {"expected_views_per_camera", kFrames},
        {"fast_png", true},
        {"ace", {{"slope", 10.0}, {"samples", 500}, {"degenerate_value", 128}}},
        {"key", {{"hue_min", 64}, {"hue_max", 106}, {"sat_min", 77}, {"val_min", 38},
                 {"open_radius", 1}, {"close_radius", 2}, {"despill", true}}},
        {"generation", {{"rounds", 4}, {"scale_jitter", {1.0, 1.0}}, {"fill_policy", "all_anchors"},
                        {"class_balance", "uniform_by_class"}, {"max_occlusion", nullptr}}}};
    write_text(root / "config.json", config.dump(2) + "\n");
    std::cout << "fixture written to " << root << '\n';
    return 0;
}
