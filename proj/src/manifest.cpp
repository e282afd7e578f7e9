#include "riq/manifest.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>

#include "riq/errors.hpp"

namespace riq {

std::vector<ManifestEntry> load_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open manifest: " + path);

    std::vector<ManifestEntry> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto tab1 = line.find('\t');
        const auto tab2 = line.find('\t', tab1 == std::string::npos ? tab1 : tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos)
            throw BadManifest("expected <image>\\t<region index>\\t<category>", line_no);

        ManifestEntry e;
        e.image = line.substr(0, tab1);
        e.line = line_no;
        try {
            e.region_index = std::stoi(line.substr(tab1 + 1, tab2 - tab1 - 1));
        } catch (const std::exception&) {
            throw BadManifest("region index is not an integer", line_no);
        }
        if (e.region_index < 0) throw BadManifest("region index is negative", line_no);
        e.category = line.substr(tab2 + 1);
        const auto it = std::find(kCategories.begin(), kCategories.end(), e.category);
        if (it == kCategories.end()) throw BadManifest("unknown category: " + e.category, line_no);
        e.category_index = static_cast<int>(it - kCategories.begin()) + 1;
        entries.push_back(std::move(e));
    }
    return entries;
}

ManifestFeatures extract_manifest_features(const std::vector<ManifestEntry>& entries,
                                           const std::string& base_dir, const SegmentationParams& seg_params,
                                           const PreprocessParams& pre_params) {
    namespace fs = std::filesystem;

    // group entry positions by image so each image is segmented once
    std::map<std::string, std::vector<std::size_t>> by_image;
    for (std::size_t i = 0; i < entries.size(); ++i) by_image[entries[i].image].push_back(i);

    ManifestFeatures out;
    out.features.resize(entries.size());
    out.categories.resize(entries.size());

    for (const auto& [image, positions] : by_image) {
        const fs::path full = fs::path(base_dir) / image;
        const RasterImage raw = load_image(full.string());
        const RasterImage pre = preprocess(raw, pre_params);
        const HsvImage hsv = rgb_to_hsv(pre);
        const auto regions = segment(pre, seg_params);
        for (const std::size_t pos : positions) {
            const ManifestEntry& e = entries[pos];
            if (static_cast<std::size_t>(e.region_index) >= regions.size())
                throw BadManifest("region index " + std::to_string(e.region_index) + " out of range (image " +
                                      image + " has " + std::to_string(regions.size()) + " regions)",
                                  e.line);
            out.features[pos] = extract_region_features(hsv, regions[static_cast<std::size_t>(e.region_index)]);
            out.categories[pos] = e.category_index;
        }
    }
    return out;
}

TrainResult train_from_manifest(const std::string& manifest_path, const SegmentationParams& seg_params,
                                const PreprocessParams& pre_params, const MlafParams& mlaf_params,
                                const TrainConfig& cfg, std::size_t hidden_dim) {
    const auto entries = load_manifest(manifest_path);
    const std::string base_dir = std::filesystem::path(manifest_path).parent_path().string();
    const auto extracted = extract_manifest_features(entries, base_dir, seg_params, pre_params);

    const Normalizer nz = fit_normalizer(extracted.features, NormMode::unit);
    std::vector<LabeledRegion> data(extracted.features.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        data[i].features = apply_normalizer(nz, extracted.features[i]);
        data[i].category = extracted.categories[i];
    }
    TrainResult result = train(data, cfg, mlaf_params, kFeatureLength, hidden_dim);
    result.model.normalizer = nz;
    return result;
}

Evaluation evaluate_manifest(const std::string& manifest_path, const MlnnModel& model,
                             const SegmentationParams& seg_params, const PreprocessParams& pre_params) {
    const auto entries = load_manifest(manifest_path);
    const std::string base_dir = std::filesystem::path(manifest_path).parent_path().string();
    const auto extracted = extract_manifest_features(entries, base_dir, seg_params, pre_params);

    std::vector<LabeledRegion> test(extracted.features.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
        test[i].features = apply_normalizer(model.normalizer, extracted.features[i]);
        test[i].category = extracted.categories[i];
    }
    return evaluate(model, test);
}

}  // namespace riq
