#include "riq/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "riq/errors.hpp"
#include "riq/mlnn.hpp"
#include "riq/rng.hpp"

namespace riq {

namespace {

struct Recipe {
    double h_lo, h_hi;  // per-image base hue range, degrees
    double s_lo, s_hi;  // per-image base saturation range
    int v_lo, v_hi;     // per-image constant V byte range
};

// category order matches kCategories: Sky, Building, Sand/Rock, Grass, Water
const Recipe kRecipes[5] = {
    {205, 230, 0.30, 0.50, 210, 245},  // Sky: bright, lightly saturated blue
    {0, 40, 0.03, 0.14, 110, 200},     // Building: near-gray, rectilinear blocks
    {30, 50, 0.35, 0.60, 140, 200},    // Sand/Rock: yellow-brown, mid texture
    {95, 130, 0.55, 0.85, 90, 150},    // Grass: green, fine noise
    {175, 200, 0.55, 0.80, 130, 180},  // Water: blue-cyan, wave pattern
};

std::string slug(const std::string& category) {
    std::string s;
    for (char ch : category) s.push_back(ch == '/' ? '_' : static_cast<char>(std::tolower(ch)));
    return s;
}

}  // namespace

RasterImage synth_image(int category, int size, std::uint64_t seed) {
    if (category < 1 || category > 5) throw Error("category index must be 1..5");
    const Recipe& rec = kRecipes[category - 1];
    Rng rng(seed);

    const double base_h = rng.next_double(rec.h_lo, rec.h_hi);
    const double base_s = rng.next_double(rec.s_lo, rec.s_hi);
    // V is a single byte value per image so the post-equalization V channel
    // stays constant instead of being smeared over the whole range.
    const int v_byte = rec.v_lo + static_cast<int>(rng.next_index(static_cast<std::size_t>(rec.v_hi - rec.v_lo + 1)));
    const double v = v_byte / 255.0;
    const double phase = rng.next_double(0.0, 2.0 * std::numbers::pi);

    HsvImage hsv;
    hsv.width = size;
    hsv.height = size;
    hsv.data.resize(static_cast<std::size_t>(size) * size * 3);

    // blocky noise shared by Sand/Rock (8 px cells)
    std::vector<double> cells;
    if (category == 3) {
        const int ncells = (size / 8 + 1) * (size / 8 + 1);
        cells.resize(static_cast<std::size_t>(ncells));
        for (double& c : cells) c = rng.next_double(-1.0, 1.0);
    }

    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) {
            double h = base_h, s = base_s;
            switch (category) {
                case 1:  // Sky: gentle horizontal saturation ramp
                    s += 0.03 * (static_cast<double>(c) / size - 0.5);
                    break;
                case 2: {  // Building: 32 px block grid with brighter joints
                    const bool joint = (r % 32 < 2) || (c % 32 < 2);
                    const bool odd = ((r / 32) + (c / 32)) % 2 == 1;
                    s += joint ? 0.06 : (odd ? 0.03 : -0.02);
                    break;
                }
                case 3: {  // Sand/Rock: 8 px cell noise
                    const int cell = (r / 8) * (size / 8 + 1) + (c / 8);
                    s += 0.03 * cells[static_cast<std::size_t>(cell)];
                    h += 3.0 * cells[static_cast<std::size_t>(cell)];
                    break;
                }
                case 4:  // Grass: per-pixel noise
                    s += rng.next_double(-0.03, 0.03);
                    h += rng.next_double(-4.0, 4.0);
                    break;
                case 5:  // Water: diagonal waves, 48 px period
                    s += 0.04 * std::sin(2.0 * std::numbers::pi * (c + 0.5 * r) / 48.0 + phase);
                    break;
            }
            h = std::fmod(h + 360.0, 360.0);
            s = std::clamp(s, 0.01, 1.0);
            const std::size_t i = (static_cast<std::size_t>(r) * size + c) * 3;
            hsv.data[i] = h;
            hsv.data[i + 1] = s;
            hsv.data[i + 2] = v;
        }

    return hsv_to_rgb(hsv);
}

SynthResult generate_dataset(const SynthConfig& cfg) {
    namespace fs = std::filesystem;
    const fs::path root(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(root / "images", ec);
    if (ec) throw IoError("cannot create " + (root / "images").string() + ": " + ec.message());

    Rng rng(cfg.seed);
    SynthResult result;
    result.train_manifest = (root / "train.manifest").string();
    result.test_manifest = (root / "test.manifest").string();

    const auto emit = [&](const std::string& split, int count, const std::string& manifest_path) {
        std::ofstream manifest(manifest_path, std::ios::binary);
        if (!manifest) throw IoError("cannot open for writing: " + manifest_path);
        for (int i = 0; i < count; ++i) {
            const int category = i % 5 + 1;  // round-robin keeps the split balanced
            const std::string& name = kCategories[static_cast<std::size_t>(category - 1)];
            const std::string file =
                "images/" + slug(name) + "_" + split + "_" + std::to_string(i / 5) + ".ppm";
            const RasterImage img = synth_image(category, cfg.image_size, rng.next_u64());
            save_ppm(img, (root / file).string());
            manifest << file << '\t' << 0 << '\t' << name << '\n';
            ++result.images_written;
        }
        if (!manifest) throw IoError("short write: " + manifest_path);
    };

    emit("train", cfg.train_count, result.train_manifest);
    emit("test", cfg.test_count, result.test_manifest);
    return result;
}

}  // namespace riq
