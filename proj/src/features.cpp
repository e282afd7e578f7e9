#include "riq/features.hpp"

#include <algorithm>
#include <cmath>

#include "riq/errors.hpp"

namespace riq {

ColorMoments color_moments(const std::vector<HsvPixel>& pixels) {
    if (pixels.empty()) throw EmptyRegion("color_moments called with no pixels");
    const double n = static_cast<double>(pixels.size());
    ColorMoments m;
    for (int ch = 0; ch < 3; ++ch) {
        const auto get = [ch](const HsvPixel& p) { return ch == 0 ? p.h : (ch == 1 ? p.s : p.v); };
        double mu = 0.0;
        for (const auto& p : pixels) mu += get(p);
        mu /= n;
        double m2 = 0.0, m3 = 0.0;
        for (const auto& p : pixels) {
            const double d = get(p) - mu;
            m2 += d * d;
            m3 += d * d * d;
        }
        m.values[ch * 3 + 0] = mu;
        m.values[ch * 3 + 1] = std::sqrt(m2 / n);
        m.values[ch * 3 + 2] = std::cbrt(m3 / n);
    }
    return m;
}

DwtBands haar_dwt2(const Grid& patch) {
    if (patch.side % 2 != 0 || patch.side == 0) throw OddSide("haar_dwt2 needs an even side");
    const int half = patch.side / 2;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    // rows
    std::vector<double> lo(static_cast<std::size_t>(half) * patch.side), hi(lo.size());
    const auto row_at = [&](std::vector<double>& buf, int r, int c) -> double& {
        return buf[static_cast<std::size_t>(r) * half + c];
    };
    for (int r = 0; r < patch.side; ++r)
        for (int c = 0; c < half; ++c) {
            const double a = patch.at(r, 2 * c), b = patch.at(r, 2 * c + 1);
            row_at(lo, r, c) = (a + b) * inv_sqrt2;
            row_at(hi, r, c) = (a - b) * inv_sqrt2;
        }

    // columns
    DwtBands out{Grid(half), Grid(half), Grid(half), Grid(half)};
    for (int r = 0; r < half; ++r)
        for (int c = 0; c < half; ++c) {
            const double ll_a = row_at(lo, 2 * r, c), ll_b = row_at(lo, 2 * r + 1, c);
            const double hh_a = row_at(hi, 2 * r, c), hh_b = row_at(hi, 2 * r + 1, c);
            out.approx.at(r, c) = (ll_a + ll_b) * inv_sqrt2;
            out.detail_h.at(r, c) = (ll_a - ll_b) * inv_sqrt2;  // horizontal edge content
            out.detail_v.at(r, c) = (hh_a + hh_b) * inv_sqrt2;  // vertical edge content
            out.detail_d.at(r, c) = (hh_a - hh_b) * inv_sqrt2;
        }
    return out;
}

Grid haar_idwt2(const DwtBands& bands) {
    const int half = bands.approx.side;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    // undo the column pass
    std::vector<double> lo(static_cast<std::size_t>(2 * half) * half), hi(lo.size());
    const auto row_at = [&](std::vector<double>& buf, int r, int c) -> double& {
        return buf[static_cast<std::size_t>(r) * half + c];
    };
    for (int r = 0; r < half; ++r)
        for (int c = 0; c < half; ++c) {
            row_at(lo, 2 * r, c) = (bands.approx.at(r, c) + bands.detail_h.at(r, c)) * inv_sqrt2;
            row_at(lo, 2 * r + 1, c) = (bands.approx.at(r, c) - bands.detail_h.at(r, c)) * inv_sqrt2;
            row_at(hi, 2 * r, c) = (bands.detail_v.at(r, c) + bands.detail_d.at(r, c)) * inv_sqrt2;
            row_at(hi, 2 * r + 1, c) = (bands.detail_v.at(r, c) - bands.detail_d.at(r, c)) * inv_sqrt2;
        }

    // undo the row pass
    Grid out(2 * half);
    for (int r = 0; r < 2 * half; ++r)
        for (int c = 0; c < half; ++c) {
            out.at(r, 2 * c) = (row_at(lo, r, c) + row_at(hi, r, c)) * inv_sqrt2;
            out.at(r, 2 * c + 1) = (row_at(lo, r, c) - row_at(hi, r, c)) * inv_sqrt2;
        }
    return out;
}

WaveletPyramid dwt_multilevel(const Grid& patch, int levels) {
    if (levels < 0) throw IncompatibleSize("negative level count");
    if (levels > 0 && (patch.side % (1 << levels)) != 0)
        throw IncompatibleSize("patch side not divisible by 2^levels");
    WaveletPyramid pyr;
    pyr.levels = levels;
    pyr.approx = patch;
    for (int l = 0; l < levels; ++l) {
        DwtBands bands = haar_dwt2(pyr.approx);
        pyr.approx = bands.approx;
        pyr.bands.push_back(std::move(bands));
    }
    return pyr;
}

namespace {

// bbox crop, but rectangular; used as intermediate before the square resize
struct RectGrid {
    int rows = 0, cols = 0;
    std::vector<double> values;
    double& at(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
};

Grid resize_rect_bilinear(const RectGrid& g, int out_side) {
    Grid out(out_side);
    const double sy = static_cast<double>(g.rows) / out_side;
    const double sx = static_cast<double>(g.cols) / out_side;
    for (int r = 0; r < out_side; ++r) {
        double fy = std::clamp((r + 0.5) * sy - 0.5, 0.0, static_cast<double>(g.rows - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, g.rows - 1);
        const double wy = fy - y0;
        for (int c = 0; c < out_side; ++c) {
            double fx = std::clamp((c + 0.5) * sx - 0.5, 0.0, static_cast<double>(g.cols - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, g.cols - 1);
            const double wx = fx - x0;
            const double top = g.at(y0, x0) * (1 - wx) + g.at(y0, x1) * wx;
            const double bot = g.at(y1, x0) * (1 - wx) + g.at(y1, x1) * wx;
            out.at(r, c) = top * (1 - wy) + bot * wy;
        }
    }
    return out;
}

}  // namespace

std::vector<HsvPixel> region_pixels(const HsvImage& img, const Region& r) {
    std::vector<HsvPixel> px;
    px.reserve(r.mask.size());
    for (const auto& [row, col] : r.mask)
        px.push_back({img.at(row, col, 0) / 360.0, img.at(row, col, 1), img.at(row, col, 2)});
    return px;
}

std::array<Grid, 3> region_to_patch(const HsvImage& img, const Region& r, int side) {
    if (r.mask.empty()) throw EmptyRegion("region_to_patch called with an empty region");

    const int rows = r.bbox.bottom - r.bbox.top + 1;
    const int cols = r.bbox.right - r.bbox.left + 1;

    // per-channel region mean (H already rescaled) for the mask fill
    double mean[3] = {0, 0, 0};
    for (const auto& [row, col] : r.mask) {
        mean[0] += img.at(row, col, 0) / 360.0;
        mean[1] += img.at(row, col, 1);
        mean[2] += img.at(row, col, 2);
    }
    for (double& m : mean) m /= static_cast<double>(r.mask.size());

    std::array<RectGrid, 3> crop;
    for (int ch = 0; ch < 3; ++ch) {
        crop[ch].rows = rows;
        crop[ch].cols = cols;
        crop[ch].values.assign(static_cast<std::size_t>(rows) * cols, mean[ch]);
    }
    for (const auto& [row, col] : r.mask) {
        const int rr = row - r.bbox.top, cc = col - r.bbox.left;
        crop[0].at(rr, cc) = img.at(row, col, 0) / 360.0;
        crop[1].at(rr, cc) = img.at(row, col, 1);
        crop[2].at(rr, cc) = img.at(row, col, 2);
    }
    return {resize_rect_bilinear(crop[0], side), resize_rect_bilinear(crop[1], side),
            resize_rect_bilinear(crop[2], side)};
}

FeatureVector extract_region_features(const HsvImage& img, const Region& r) {
    const auto moments = color_moments(region_pixels(img, r));
    const auto patches = region_to_patch(img, r, kPatchSide);

    FeatureVector v;
    v.reserve(kFeatureLength);
    v.insert(v.end(), moments.values.begin(), moments.values.end());
    for (const Grid& patch : patches) {
        const WaveletPyramid pyr = dwt_multilevel(patch, kDwtLevels);
        v.insert(v.end(), pyr.approx.values.begin(), pyr.approx.values.end());
    }
    return v;
}

Normalizer fit_normalizer(const std::vector<FeatureVector>& training, NormMode mode) {
    if (training.empty()) throw EmptyTrainingSet("fit_normalizer needs at least one vector");
    const std::size_t dims = training.front().size();
    for (const auto& v : training)
        if (v.size() != dims) throw DimensionMismatch("inconsistent feature lengths in training set");

    Normalizer nz;
    nz.mode = mode;
    nz.mean.assign(dims, 0.0);
    nz.stddev.assign(dims, 0.0);
    const double n = static_cast<double>(training.size());
    for (const auto& v : training)
        for (std::size_t d = 0; d < dims; ++d) nz.mean[d] += v[d];
    for (double& m : nz.mean) m /= n;
    for (const auto& v : training)
        for (std::size_t d = 0; d < dims; ++d) {
            const double diff = v[d] - nz.mean[d];
            nz.stddev[d] += diff * diff;
        }
    for (double& s : nz.stddev) s = std::sqrt(s / n);
    return nz;
}

FeatureVector apply_normalizer(const Normalizer& nz, const FeatureVector& v) {
    if (v.size() != nz.mean.size()) throw DimensionMismatch("feature vector does not match normalizer");
    FeatureVector out(v.size());
    for (std::size_t d = 0; d < v.size(); ++d) {
        if (nz.stddev[d] == 0.0) {
            out[d] = nz.mode == NormMode::zscore ? 0.0 : 0.5;
        } else if (nz.mode == NormMode::zscore) {
            out[d] = (v[d] - nz.mean[d]) / nz.stddev[d];
        } else {
            out[d] = ((v[d] - nz.mean[d]) / (3.0 * nz.stddev[d]) + 1.0) / 2.0;
        }
    }
    return out;
}

std::string norm_mode_name(NormMode m) { return m == NormMode::zscore ? "zscore" : "unit"; }

NormMode norm_mode_from_name(const std::string& name) {
    if (name == "zscore") return NormMode::zscore;
    if (name == "unit") return NormMode::unit;
    throw FormatError("unknown normalizer mode: " + name);
}

}  // namespace riq
