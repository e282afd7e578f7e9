#ifndef RIQ_MANIFEST_HPP
#define RIQ_MANIFEST_HPP

#include <string>
#include <vector>

#include "riq/features.hpp"
#include "riq/image.hpp"
#include "riq/mlnn.hpp"
#include "riq/segmentation.hpp"

namespace riq {

// One line of a labeled-region manifest:
//   <image path>\t<region index>\t<category name>
// Region indices refer to the deterministic sorted region list produced by
// segment(). Image paths are resolved relative to the manifest's directory.
struct ManifestEntry {
    std::string image;
    int region_index = 0;
    std::string category;
    int category_index = 0;  // 1..5
    int line = 0;
};

std::vector<ManifestEntry> load_manifest(const std::string& path);

// Runs the image pipeline over every image a manifest references and pulls
// out the raw (un-normalized) feature vector for each referenced region.
// Images are processed once each regardless of how many entries they have.
struct ManifestFeatures {
    std::vector<FeatureVector> features;  // parallel to entries
    std::vector<int> categories;          // 1..5, parallel to entries
};

ManifestFeatures extract_manifest_features(const std::vector<ManifestEntry>& entries,
                                           const std::string& base_dir, const SegmentationParams& seg_params,
                                           const PreprocessParams& pre_params = {});

// Whole training pipeline: manifest -> features -> unit normalizer ->
// gradient descent. The returned model carries the fitted normalizer.
TrainResult train_from_manifest(const std::string& manifest_path, const SegmentationParams& seg_params,
                                const PreprocessParams& pre_params, const MlafParams& mlaf_params,
                                const TrainConfig& cfg, std::size_t hidden_dim = 32);

// Evaluation counterpart: features are normalized with the model's own
// normalizer before prediction.
Evaluation evaluate_manifest(const std::string& manifest_path, const MlnnModel& model,
                             const SegmentationParams& seg_params, const PreprocessParams& pre_params = {});

}  // namespace riq

#endif
