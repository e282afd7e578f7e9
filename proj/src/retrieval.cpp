#include "riq/retrieval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <openssl/sha.h>

#include "riq/errors.hpp"
#include "riq/features.hpp"

namespace riq {

std::string index_fingerprint(const std::string& model_text, const SegmentationParams& p) {
    std::ostringstream material;
    material << model_text << '\n'
             << "radius=" << p.radius << " min_color_count=" << p.min_color_count
             << " t=" << p.min_region_fraction << " n_windows=" << p.n_windows << " max_iters=" << p.max_iters
             << " conv_eps=" << p.conv_eps << " seed=" << p.rng_seed;
    const std::string bytes = material.str();

    unsigned char digest[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), digest);
    std::string hex(SHA256_DIGEST_LENGTH * 2, '0');
    static const char* k = "0123456789abcdef";
    for (int i = 0; i < SHA256_DIGEST_LENGTH; ++i) {
        hex[2 * i] = k[digest[i] >> 4];
        hex[2 * i + 1] = k[digest[i] & 0xF];
    }
    return hex;
}

std::vector<RegionPrediction> classify_image(const RasterImage& img, const MlnnModel& model,
                                             const SegmentationParams& seg_params,
                                             const PreprocessParams& pre_params) {
    const RasterImage pre = preprocess(img, pre_params);
    const HsvImage hsv = rgb_to_hsv(pre);
    const auto regions = segment(pre, seg_params);

    std::vector<RegionPrediction> out;
    out.reserve(regions.size());
    for (const auto& region : regions) {
        const FeatureVector features = extract_region_features(hsv, region);
        const FeatureVector normalized = apply_normalizer(model.normalizer, features);
        RegionPrediction rp;
        rp.region = region;
        rp.output = forward(model, normalized).output;
        rp.category = predict_category(model, normalized);
        out.push_back(std::move(rp));
    }
    return out;
}

ImageRecord index_image(const std::string& path, const std::string& id, const MlnnModel& model,
                        const SegmentationParams& seg_params, const PreprocessParams& pre_params) {
    if (id.find('\t') != std::string::npos || id.find('\n') != std::string::npos)
        throw Error("image id may not contain tab or newline: " + id);
    const RasterImage img = load_image(path);
    const auto predictions = classify_image(img, model, seg_params, pre_params);

    ImageRecord rec;
    rec.id = id;
    rec.region_count = predictions.size();
    for (const auto& rp : predictions)
        rec.keywords.insert(model.categories.at(static_cast<std::size_t>(rp.category - 1)));
    return rec;
}

std::vector<std::string> query(const ImageIndex& index, const std::set<std::string>& keywords, bool any_of) {
    if (keywords.empty()) throw EmptyInput("query needs at least one keyword");
    for (const auto& kw : keywords)
        if (std::find(kCategories.begin(), kCategories.end(), kw) == kCategories.end())
            throw UnknownKeyword(kw);

    std::vector<std::string> ids;
    for (const auto& rec : index.records) {
        bool match;
        if (any_of) {
            match = std::any_of(keywords.begin(), keywords.end(),
                                [&](const std::string& kw) { return rec.keywords.count(kw) > 0; });
        } else {
            match = std::all_of(keywords.begin(), keywords.end(),
                                [&](const std::string& kw) { return rec.keywords.count(kw) > 0; });
        }
        if (match) ids.push_back(rec.id);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

void save_index(const ImageIndex& index, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "RIQIDX 1\n";
    out << "fingerprint " << index.fingerprint << '\n';
    for (const auto& rec : index.records) {
        out << rec.id << '\t';
        if (rec.keywords.empty()) {
            out << '-';
        } else {
            bool first = true;
            for (const auto& kw : rec.keywords) {
                if (!first) out << ',';
                out << kw;
                first = false;
            }
        }
        out << '\t' << rec.region_count << '\n';
    }
    if (!out) throw IoError("short write: " + path);
}

ImageIndex load_index(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open index file: " + path);

    std::string line;
    if (!std::getline(in, line) || line != "RIQIDX 1") throw FormatError("bad index magic");
    if (!std::getline(in, line) || line.rfind("fingerprint ", 0) != 0) throw FormatError("missing fingerprint line");

    ImageIndex index;
    index.fingerprint = line.substr(12);
    if (index.fingerprint.size() != 64) throw FormatError("fingerprint must be 64 hex digits");

    std::set<std::string> seen;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto tab1 = line.find('\t');
        const auto tab2 = line.find('\t', tab1 == std::string::npos ? tab1 : tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos)
            throw FormatError("bad index record: " + line);
        ImageRecord rec;
        rec.id = line.substr(0, tab1);
        if (!seen.insert(rec.id).second) throw FormatError("duplicate image id: " + rec.id);
        const std::string kws = line.substr(tab1 + 1, tab2 - tab1 - 1);
        if (kws != "-") {
            std::istringstream ks(kws);
            std::string kw;
            while (std::getline(ks, kw, ',')) rec.keywords.insert(kw);
        }
        try {
            rec.region_count = std::stoul(line.substr(tab2 + 1));
        } catch (const std::exception&) {
            throw FormatError("bad region count in record: " + line);
        }
        index.records.push_back(std::move(rec));
    }
    return index;
}

}  // namespace riq
