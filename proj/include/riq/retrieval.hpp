#ifndef RIQ_RETRIEVAL_HPP
#define RIQ_RETRIEVAL_HPP

#include <set>
#include <string>
#include <vector>

#include "riq/mlnn.hpp"
#include "riq/segmentation.hpp"

namespace riq {

struct ImageRecord {
    std::string id;                  // relative path
    std::set<std::string> keywords;  // subset of the category names
    std::size_t region_count = 0;
};

struct IndexFailure {
    std::string id;
    std::string error;
};

struct ImageIndex {
    std::string fingerprint;  // 64 hex digits over (model bytes, segmentation params)
    std::vector<ImageRecord> records;
};

std::string index_fingerprint(const std::string& model_text, const SegmentationParams& p);

// Per-region classification of one image: preprocess, segment, extract and
// normalize features, predict. Regions come back in the deterministic
// sorted order that manifests refer to by index.
struct RegionPrediction {
    Region region;
    int category = 1;      // lambda
    double output = 0.0;   // MLAF output the decode was based on
};

std::vector<RegionPrediction> classify_image(const RasterImage& img, const MlnnModel& model,
                                             const SegmentationParams& seg_params,
                                             const PreprocessParams& pre_params = {});

// Index one image file. Decoding or preprocessing failures throw; callers
// building a directory index turn them into IndexFailure records.
ImageRecord index_image(const std::string& path, const std::string& id, const MlnnModel& model,
                        const SegmentationParams& seg_params, const PreprocessParams& pre_params = {});

// Conjunctive keyword query (disjunctive when any_of). Results sorted by id.
std::vector<std::string> query(const ImageIndex& index, const std::set<std::string>& keywords,
                               bool any_of = false);

void save_index(const ImageIndex& index, const std::string& path);
ImageIndex load_index(const std::string& path);

}  // namespace riq

#endif
