#ifndef RIQ_SYNTH_HPP
#define RIQ_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "riq/image.hpp"

namespace riq {

// Stand-in corpus for the kind of photo collection the pipeline targets.
// Each image is a full-frame texture of one category, with seeded per-image
// color statistics. Recipes keep hue/saturation ranges disjoint enough for
// the color moments and put their texture at scales the wavelet
// approximation can see.
struct SynthConfig {
    std::string out_dir;
    std::uint64_t seed = 0;
    int train_count = 200;  // region instances, balanced over the 5 categories
    int test_count = 500;
    int image_size = 256;
};

struct SynthResult {
    std::string train_manifest;  // out_dir/train.manifest
    std::string test_manifest;   // out_dir/test.manifest
    int images_written = 0;
};

// One synthetic image of the given category (index 1..5), deterministic in
// (seed). Exposed separately so tests can probe recipe statistics.
RasterImage synth_image(int category, int size, std::uint64_t seed);

SynthResult generate_dataset(const SynthConfig& cfg);

}  // namespace riq

#endif
