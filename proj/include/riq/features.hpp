#ifndef RIQ_FEATURES_HPP
#define RIQ_FEATURES_HPP

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "riq/image.hpp"
#include "riq/segmentation.hpp"

namespace riq {

// A square coefficient grid, row-major.
struct Grid {
    int side = 0;
    std::vector<double> values;

    Grid() = default;
    Grid(int s, double fill = 0.0) : side(s), values(static_cast<std::size_t>(s) * s, fill) {}
    double& at(int r, int c) { return values[static_cast<std::size_t>(r) * side + c]; }
    double at(int r, int c) const { return values[static_cast<std::size_t>(r) * side + c]; }
};

// One HSV pixel with H rescaled to [0,1].
struct HsvPixel {
    double h = 0, s = 0, v = 0;
};

// Mean, population standard deviation, and signed-cube-root skewness per
// channel, laid out (mu_H, sigma_H, skew_H, mu_S, ..., skew_V).
struct ColorMoments {
    std::array<double, 9> values{};
};

ColorMoments color_moments(const std::vector<HsvPixel>& pixels);

struct DwtBands {
    Grid approx, detail_h, detail_v, detail_d;
};

// One level of separable orthonormal Haar analysis: low (a+b)/sqrt(2),
// high (a-b)/sqrt(2) along rows then columns, downsampled by 2.
DwtBands haar_dwt2(const Grid& patch);

// Exact inverse of haar_dwt2.
Grid haar_idwt2(const DwtBands& bands);

struct WaveletPyramid {
    int levels = 0;
    Grid approx;                  // A_L
    std::vector<DwtBands> bands;  // bands[l] holds the level-(l+1) details (approx unused)
};

WaveletPyramid dwt_multilevel(const Grid& patch, int levels);

constexpr int kPatchSide = 64;
constexpr int kDwtLevels = 3;
constexpr std::size_t kFeatureLength = 9 + 3 * (kPatchSide >> kDwtLevels) * (kPatchSide >> kDwtLevels);

using FeatureVector = std::vector<double>;

// Crop the region's bbox, fill pixels outside the mask with the region's
// per-channel mean, resize to side x side; returns H (scaled to [0,1]), S, V.
std::array<Grid, 3> region_to_patch(const HsvImage& img, const Region& r, int side = kPatchSide);

// Masked pixels of a region, H scaled to [0,1].
std::vector<HsvPixel> region_pixels(const HsvImage& img, const Region& r);

// [9 color moments || A_3 of the H, S, V 64x64 patches, row-major] = 201 dims.
FeatureVector extract_region_features(const HsvImage& img, const Region& r);

enum class NormMode { zscore, unit };

struct Normalizer {
    std::vector<double> mean;
    std::vector<double> stddev;
    NormMode mode = NormMode::unit;
};

Normalizer fit_normalizer(const std::vector<FeatureVector>& training, NormMode mode);

// zscore: (x-mu)/sigma; unit: ((x-mu)/(3 sigma) + 1)/2.
// sigma = 0 dimensions map to 0 and 0.5 respectively.
FeatureVector apply_normalizer(const Normalizer& nz, const FeatureVector& v);

std::string norm_mode_name(NormMode m);
NormMode norm_mode_from_name(const std::string& name);

}  // namespace riq

#endif
