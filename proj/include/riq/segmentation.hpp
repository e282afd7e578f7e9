#ifndef RIQ_SEGMENTATION_HPP
#define RIQ_SEGMENTATION_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "riq/image.hpp"

namespace riq {

struct SegmentationParams {
    double radius = 0.10;            // search window radius in cone units
    int min_color_count = 50;        // pixels required for a significant color
    double min_region_fraction = 0.05;  // t: minimum region area as image fraction
    int n_windows = 64;              // random mean-shift starts
    int max_iters = 100;
    double conv_eps = 1e-4;
    std::uint64_t rng_seed = 0;
    std::size_t max_samples = 4096;  // subsample cap for the mode-seeking iterations

    void validate() const;
};

// Cartesian cone embedding of an HSV pixel:
//   x = s*v*cos(h), y = s*v*sin(h), z = v.
// Achromatic pixels coincide on the axis regardless of hue, and Euclidean
// distance stays meaningful across the hue wraparound.
struct FeaturePoint {
    double x = 0, y = 0, z = 0;
};

FeaturePoint cone_embed(double h_degrees, double s, double v);
std::vector<FeaturePoint> cone_embed_image(const HsvImage& img);

double distance(const FeaturePoint& a, const FeaturePoint& b);

struct Palette {
    std::vector<FeaturePoint> modes;
    std::vector<std::size_t> counts;  // pixels supporting each mode
};

struct BBox {
    int top = 0, left = 0, bottom = 0, right = 0;  // inclusive
};

struct Region {
    int label = 0;                            // palette index
    std::vector<std::pair<int, int>> mask;    // (row, col), 4-connected
    std::size_t area = 0;
    BBox bbox;
};

// Flat-kernel mean shift over the cone-embedded points. Starts n_windows
// seeded-random windows, iterates each to convergence, merges modes closer
// than radius/2, and drops modes supported by fewer than min_color_count
// points. Falls back to the single global mean if everything is dropped.
Palette mean_shift_modes(const std::vector<FeaturePoint>& points, const SegmentationParams& p);

// Single-window iterate trace (start included); the last element is the
// converged mode. Exposed so the density-ascent property can be checked.
std::vector<FeaturePoint> mean_shift_iterates(FeaturePoint start, const std::vector<FeaturePoint>& points,
                                              const SegmentationParams& p);

// Epanechnikov density at x (the shadow density that flat-kernel mean shift
// ascends); exposed so tests can assert monotone ascent.
double kernel_density(const FeaturePoint& x, const std::vector<FeaturePoint>& points, double radius);

// Nearest-mode label per point, ties to the lowest index.
std::vector<int> assign_to_palette(const std::vector<FeaturePoint>& points, const Palette& pal);

// 4-connected components of the label grid; components smaller than
// min_region_fraction of the grid are discarded. Sorted by descending area,
// ties by (top, left) of the bounding box.
std::vector<Region> extract_regions(const std::vector<int>& labels, int width, int height,
                                    const SegmentationParams& p);

// Full pipeline on a preprocessed image: HSV, cone embedding, mean shift,
// palette assignment, component extraction. Deterministic given rng_seed.
std::vector<Region> segment(const RasterImage& img, const SegmentationParams& p);

// Label map for debug output: pixels of region i get value i, others 255.
std::vector<std::uint8_t> label_map(const std::vector<Region>& regions, int width, int height);

}  // namespace riq

#endif
