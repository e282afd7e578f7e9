#include "riq/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "riq/errors.hpp"
#include "riq/rng.hpp"

namespace riq {

void SegmentationParams::validate() const {
    if (radius <= 0) throw Error("radius must be > 0");
    if (min_region_fraction <= 0 || min_region_fraction >= 1) throw Error("min_region_fraction must be in (0,1)");
    if (n_windows < 1) throw Error("n_windows must be >= 1");
    if (max_iters < 1) throw Error("max_iters must be >= 1");
    if (conv_eps <= 0) throw Error("conv_eps must be > 0");
    if (max_samples < 1) throw Error("max_samples must be >= 1");
}

FeaturePoint cone_embed(double h_degrees, double s, double v) {
    const double h = h_degrees * std::numbers::pi / 180.0;
    return {s * v * std::cos(h), s * v * std::sin(h), v};
}

std::vector<FeaturePoint> cone_embed_image(const HsvImage& img) {
    std::vector<FeaturePoint> pts;
    pts.reserve(img.data.size() / 3);
    for (std::size_t i = 0; i < img.data.size(); i += 3)
        pts.push_back(cone_embed(img.data[i], img.data[i + 1], img.data[i + 2]));
    return pts;
}

double distance(const FeaturePoint& a, const FeaturePoint& b) {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double kernel_density(const FeaturePoint& x, const std::vector<FeaturePoint>& points, double radius) {
    const double r2 = radius * radius;
    double acc = 0.0;
    for (const auto& p : points) {
        const double dx = x.x - p.x, dy = x.y - p.y, dz = x.z - p.z;
        const double d2 = dx * dx + dy * dy + dz * dz;
        if (d2 < r2) acc += 1.0 - d2 / r2;
    }
    return acc;
}

namespace {

std::size_t support_count(const FeaturePoint& mode, const std::vector<FeaturePoint>& points, double radius) {
    const double r2 = radius * radius;
    std::size_t n = 0;
    for (const auto& p : points) {
        const double dx = mode.x - p.x, dy = mode.y - p.y, dz = mode.z - p.z;
        if (dx * dx + dy * dy + dz * dz <= r2) ++n;
    }
    return n;
}

FeaturePoint global_mean(const std::vector<FeaturePoint>& points) {
    FeaturePoint m;
    for (const auto& p : points) {
        m.x += p.x;
        m.y += p.y;
        m.z += p.z;
    }
    const double inv = 1.0 / static_cast<double>(points.size());
    return {m.x * inv, m.y * inv, m.z * inv};
}

}  // namespace

std::vector<FeaturePoint> mean_shift_iterates(FeaturePoint start, const std::vector<FeaturePoint>& points,
                                              const SegmentationParams& p) {
    std::vector<FeaturePoint> trace{start};
    FeaturePoint x = start;
    const double r2 = p.radius * p.radius;
    for (int it = 0; it < p.max_iters; ++it) {
        double sx = 0, sy = 0, sz = 0;
        std::size_t n = 0;
        for (const auto& q : points) {
            const double dx = x.x - q.x, dy = x.y - q.y, dz = x.z - q.z;
            if (dx * dx + dy * dy + dz * dz <= r2) {
                sx += q.x;
                sy += q.y;
                sz += q.z;
                ++n;
            }
        }
        if (n == 0) break;  // window fell outside the sample
        const double inv = 1.0 / static_cast<double>(n);
        FeaturePoint next{sx * inv, sy * inv, sz * inv};
        const double shift = distance(next, x);
        x = next;
        trace.push_back(x);
        if (shift < p.conv_eps) break;
    }
    return trace;
}

Palette mean_shift_modes(const std::vector<FeaturePoint>& points, const SegmentationParams& p) {
    p.validate();
    if (points.empty()) throw EmptyInput("mean_shift_modes called with no points");

    Rng rng(p.rng_seed);

    // Mode seeking runs on a capped subsample so megapixel inputs stay cheap;
    // support counts and the final assignment always use the full point set.
    const std::vector<FeaturePoint>* iter_points = &points;
    std::vector<FeaturePoint> sample;
    if (points.size() > p.max_samples) {
        sample.reserve(p.max_samples);
        for (std::size_t i = 0; i < p.max_samples; ++i) sample.push_back(points[rng.next_index(points.size())]);
        iter_points = &sample;
    }

    std::vector<FeaturePoint> modes;
    std::vector<std::size_t> weights;  // iteration-sample support, used only for merge weighting
    for (int w = 0; w < p.n_windows; ++w) {
        const FeaturePoint start = points[rng.next_index(points.size())];
        const auto trace = mean_shift_iterates(start, *iter_points, p);
        const FeaturePoint mode = trace.back();
        modes.push_back(mode);
        weights.push_back(std::max<std::size_t>(1, support_count(mode, *iter_points, p.radius)));
    }

    // Merge modes closer than radius/2, weighted, in window order, until stable.
    const double merge_dist = p.radius / 2.0;
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::size_t i = 0; i < modes.size() && !merged; ++i)
            for (std::size_t j = i + 1; j < modes.size() && !merged; ++j)
                if (distance(modes[i], modes[j]) < merge_dist) {
                    const double wi = static_cast<double>(weights[i]);
                    const double wj = static_cast<double>(weights[j]);
                    const double inv = 1.0 / (wi + wj);
                    modes[i] = {(modes[i].x * wi + modes[j].x * wj) * inv,
                                (modes[i].y * wi + modes[j].y * wj) * inv,
                                (modes[i].z * wi + modes[j].z * wj) * inv};
                    weights[i] += weights[j];
                    modes.erase(modes.begin() + static_cast<std::ptrdiff_t>(j));
                    weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(j));
                    merged = true;
                }
    }

    Palette pal;
    for (const auto& mode : modes) {
        const std::size_t count = support_count(mode, points, p.radius);
        if (count >= static_cast<std::size_t>(p.min_color_count)) {
            pal.modes.push_back(mode);
            pal.counts.push_back(count);
        }
    }
    if (pal.modes.empty()) {
        pal.modes.push_back(global_mean(points));
        pal.counts.push_back(points.size());
    }
    return pal;
}

std::vector<int> assign_to_palette(const std::vector<FeaturePoint>& points, const Palette& pal) {
    if (pal.modes.empty()) throw EmptyInput("palette has no modes");
    std::vector<int> labels(points.size(), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        double best = distance(points[i], pal.modes[0]);
        int best_idx = 0;
        for (std::size_t m = 1; m < pal.modes.size(); ++m) {
            const double d = distance(points[i], pal.modes[m]);
            if (d < best) {  // strict: ties keep the lowest index
                best = d;
                best_idx = static_cast<int>(m);
            }
        }
        labels[i] = best_idx;
    }
    return labels;
}

std::vector<Region> extract_regions(const std::vector<int>& labels, int width, int height,
                                    const SegmentationParams& p) {
    if (labels.size() != static_cast<std::size_t>(width) * height)
        throw IncompatibleSize("label grid does not match dimensions");
    const std::size_t min_area =
        static_cast<std::size_t>(p.min_region_fraction * static_cast<double>(width) * height);

    std::vector<bool> visited(labels.size(), false);
    std::vector<Region> regions;
    std::vector<std::size_t> stack;
    for (std::size_t seed = 0; seed < labels.size(); ++seed) {
        if (visited[seed]) continue;
        const int lab = labels[seed];
        Region reg;
        reg.label = lab;
        reg.bbox = {height, width, -1, -1};
        stack.assign(1, seed);
        visited[seed] = true;
        while (!stack.empty()) {
            const std::size_t idx = stack.back();
            stack.pop_back();
            const int r = static_cast<int>(idx) / width;
            const int c = static_cast<int>(idx) % width;
            reg.mask.emplace_back(r, c);
            reg.bbox.top = std::min(reg.bbox.top, r);
            reg.bbox.left = std::min(reg.bbox.left, c);
            reg.bbox.bottom = std::max(reg.bbox.bottom, r);
            reg.bbox.right = std::max(reg.bbox.right, c);
            const int dr[4] = {-1, 1, 0, 0};
            const int dc[4] = {0, 0, -1, 1};
            for (int k = 0; k < 4; ++k) {
                const int nr = r + dr[k], nc = c + dc[k];
                if (nr < 0 || nr >= height || nc < 0 || nc >= width) continue;
                const std::size_t nidx = static_cast<std::size_t>(nr) * width + nc;
                if (!visited[nidx] && labels[nidx] == lab) {
                    visited[nidx] = true;
                    stack.push_back(nidx);
                }
            }
        }
        reg.area = reg.mask.size();
        if (reg.area >= min_area) regions.push_back(std::move(reg));
    }

    std::sort(regions.begin(), regions.end(), [](const Region& a, const Region& b) {
        if (a.area != b.area) return a.area > b.area;
        if (a.bbox.top != b.bbox.top) return a.bbox.top < b.bbox.top;
        return a.bbox.left < b.bbox.left;
    });
    return regions;
}

std::vector<Region> segment(const RasterImage& img, const SegmentationParams& p) {
    const HsvImage hsv = rgb_to_hsv(img);
    const auto points = cone_embed_image(hsv);
    const Palette pal = mean_shift_modes(points, p);
    const auto labels = assign_to_palette(points, pal);
    return extract_regions(labels, img.width, img.height, p);
}

std::vector<std::uint8_t> label_map(const std::vector<Region>& regions, int width, int height) {
    std::vector<std::uint8_t> map(static_cast<std::size_t>(width) * height, 255);
    for (std::size_t i = 0; i < regions.size(); ++i)
        for (const auto& [r, c] : regions[i].mask)
            map[static_cast<std::size_t>(r) * width + c] = static_cast<std::uint8_t>(std::min<std::size_t>(i, 254));
    return map;
}

}  // namespace riq
