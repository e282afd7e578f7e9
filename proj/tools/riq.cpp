#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "riq/errors.hpp"
#include "riq/image.hpp"
#include "riq/manifest.hpp"
#include "riq/mlnn.hpp"
#include "riq/retrieval.hpp"
#include "riq/segmentation.hpp"
#include "riq/synth.hpp"

namespace fs = std::filesystem;
using namespace riq;

namespace {

struct CommonOpts {
    SegmentationParams seg;
    PreprocessParams pre;
    MlafParams mlaf;
    TrainConfig train_cfg;
    std::size_t hidden = 32;
    std::uint64_t seed = 0;
};

void add_seed_flag(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--seed", o.seed, "RNG seed (env RIQ_SEED)")->envname("RIQ_SEED");
}

void add_seg_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--radius", o.seg.radius, "mean-shift window radius in cone units");
    cmd->add_option("--min-region", o.seg.min_region_fraction, "minimum region area as image fraction (t)");
    cmd->add_option("--min-color-count", o.seg.min_color_count, "pixels required for a significant color");
    cmd->add_option("--windows", o.seg.n_windows, "number of random mean-shift windows");
    cmd->add_option("--max-iters", o.seg.max_iters, "max mean-shift iterations per window");
    cmd->add_option("--conv-eps", o.seg.conv_eps, "mean-shift convergence threshold");
    cmd->add_option("--target-size", o.pre.target_size, "preprocessing resize side");
    cmd->add_flag("!--no-equalize", o.pre.equalize, "skip V-channel histogram equalization");
}

void add_mlaf_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--beta", o.mlaf.beta, "sigmoid steepness");
    cmd->add_option("--c", o.mlaf.c, "MLAF window width on the pre-activation axis");
}

std::string category_of(const MlnnModel& m, int lambda) {
    return m.categories.at(static_cast<std::size_t>(lambda - 1));
}

int cmd_segment(const std::string& image_path, const CommonOpts& opts, const std::string& labels_out) {
    SegmentationParams seg = opts.seg;
    seg.rng_seed = opts.seed;
    const RasterImage img = load_image(image_path);
    const RasterImage pre = preprocess(img, opts.pre);
    const auto regions = segment(pre, seg);
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const auto& r = regions[i];
        std::printf("%zu\t%d\t%zu\t%d,%d,%d,%d\n", i, r.label, r.area, r.bbox.top, r.bbox.left, r.bbox.bottom,
                    r.bbox.right);
    }
    if (!labels_out.empty()) save_pgm(label_map(regions, pre.width, pre.height), pre.width, pre.height, labels_out);
    return 0;
}

int cmd_train(const std::string& manifest_path, const std::string& out_path, const CommonOpts& opts) {
    SegmentationParams seg = opts.seg;
    seg.rng_seed = opts.seed;
    TrainConfig cfg = opts.train_cfg;
    cfg.rng_seed = opts.seed;

    TrainResult result = train_from_manifest(manifest_path, seg, opts.pre, opts.mlaf, cfg, opts.hidden);
    save_model(result.model, out_path);

    std::printf("final loss %.6g\n", result.loss_trace.back());
    std::printf("training accuracy %.1f%%\n", 100.0 * result.training_accuracy);
    std::printf("model written to %s\n", out_path.c_str());
    return 0;
}

int cmd_classify(const std::string& image_path, const std::string& model_path, const CommonOpts& opts) {
    SegmentationParams seg = opts.seg;
    seg.rng_seed = opts.seed;
    const MlnnModel model = load_model(model_path);
    const RasterImage img = load_image(image_path);
    const auto predictions = classify_image(img, model, seg, opts.pre);
    for (std::size_t i = 0; i < predictions.size(); ++i)
        std::printf("%zu\t%s\t%.6f\n", i, category_of(model, predictions[i].category).c_str(),
                    predictions[i].output);
    return 0;
}

int cmd_index(const std::string& dir, const std::string& model_path, const std::string& out_path,
              const CommonOpts& opts) {
    SegmentationParams seg = opts.seg;
    seg.rng_seed = opts.seed;
    const MlnnModel model = load_model(model_path);

    std::vector<std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        for (char& ch : ext) ch = static_cast<char>(std::tolower(ch));
        if (ext == ".ppm" || ext == ".png" || ext == ".jpg" || ext == ".jpeg")
            files.push_back(fs::relative(entry.path(), dir).generic_string());
    }
    std::sort(files.begin(), files.end());

    std::ifstream model_in(model_path, std::ios::binary);
    const std::string model_text((std::istreambuf_iterator<char>(model_in)), std::istreambuf_iterator<char>());

    ImageIndex index;
    index.fingerprint = index_fingerprint(model_text, seg);
    std::size_t failures = 0;
    for (const auto& id : files) {
        try {
            index.records.push_back(index_image((fs::path(dir) / id).string(), id, model, seg, opts.pre));
        } catch (const Error& e) {
            std::fprintf(stderr, "skipping %s: %s\n", id.c_str(), e.what());
            ++failures;
        }
    }
    save_index(index, out_path);
    std::printf("indexed %zu images (%zu failed) -> %s\n", index.records.size(), failures, out_path.c_str());
    return 0;
}

int cmd_query(const std::string& index_path, const std::vector<std::string>& keywords, bool any_of,
              const std::string& model_path, const CommonOpts& opts) {
    const ImageIndex index = load_index(index_path);
    if (!model_path.empty()) {
        SegmentationParams seg = opts.seg;
        seg.rng_seed = opts.seed;
        std::ifstream model_in(model_path, std::ios::binary);
        if (!model_in) throw IoError("cannot open model file: " + model_path);
        const std::string model_text((std::istreambuf_iterator<char>(model_in)), std::istreambuf_iterator<char>());
        if (index_fingerprint(model_text, seg) != index.fingerprint)
            std::fprintf(stderr, "warning: index fingerprint does not match this model/parameters\n");
    }
    const auto ids = query(index, std::set<std::string>(keywords.begin(), keywords.end()), any_of);
    for (const auto& id : ids) std::printf("%s\n", id.c_str());
    return 0;
}

int cmd_evaluate(const std::string& manifest_path, const std::string& model_path, const CommonOpts& opts) {
    SegmentationParams seg = opts.seg;
    seg.rng_seed = opts.seed;
    const MlnnModel model = load_model(model_path);
    const Evaluation ev = evaluate_manifest(manifest_path, model, seg, opts.pre);
    for (std::size_t k = 0; k < model.categories.size(); ++k) {
        if (ev.predicted[k] > 0)
            std::printf("%-10s precision %5.1f%% (%zu/%zu)\n", model.categories[k].c_str(),
                        100.0 * ev.precision[k], ev.correct[k], ev.predicted[k]);
        else
            std::printf("%-10s precision   n/a (never predicted)\n", model.categories[k].c_str());
    }
    std::printf("average    precision %5.1f%%\n", 100.0 * ev.average_precision);
    std::printf("accuracy   %5.1f%%\n", 100.0 * ev.accuracy);
    std::printf("confusion rows=true cols=predicted\n");
    for (const auto& row : ev.confusion) {
        for (std::size_t c = 0; c < row.size(); ++c) std::printf("%s%4zu", c ? " " : "", row[c]);
        std::printf("\n");
    }
    return 0;
}

int cmd_synth(const std::string& out_dir, const CommonOpts& opts, int train_count, int test_count, int size) {
    SynthConfig cfg;
    cfg.out_dir = out_dir;
    cfg.seed = opts.seed;
    cfg.train_count = train_count;
    cfg.test_count = test_count;
    cfg.image_size = size;
    const SynthResult res = generate_dataset(cfg);
    std::printf("wrote %d images\n", res.images_written);
    std::printf("train manifest: %s\n", res.train_manifest.c_str());
    std::printf("test manifest:  %s\n", res.test_manifest.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Region-based image classification and keyword retrieval"};
    app.require_subcommand(1);

    CommonOpts opts;

    std::string image_path, model_path, manifest_path, index_path, out_path, dir_path, labels_out;
    std::vector<std::string> keywords;
    bool any_of = false;
    int train_count = 200, test_count = 500, synth_size = 256;

    auto* seg_cmd = app.add_subcommand("segment", "Segment one image and list its significant regions");
    seg_cmd->add_option("image", image_path, "input image (ppm/png/jpeg)")->required();
    seg_cmd->add_option("--labels-out", labels_out, "write the region label map as an 8-bit PGM");
    add_seg_flags(seg_cmd, opts);
    add_seed_flag(seg_cmd, opts);

    auto* train_cmd = app.add_subcommand("train", "Train the region classifier from a labeled-region manifest");
    train_cmd->add_option("manifest", manifest_path, "lines: <image>\\t<region index>\\t<category>")->required();
    train_cmd->add_option("-o,--out", out_path, "output model file")->required();
    train_cmd->add_option("--hidden", opts.hidden, "hidden layer width");
    train_cmd->add_option("--lr", opts.train_cfg.learning_rate, "learning rate");
    train_cmd->add_option("--epochs", opts.train_cfg.epochs, "training epochs");
    add_mlaf_flags(train_cmd, opts);
    add_seg_flags(train_cmd, opts);
    add_seed_flag(train_cmd, opts);

    auto* classify_cmd = app.add_subcommand("classify", "Classify every significant region of one image");
    classify_cmd->add_option("image", image_path, "input image")->required();
    classify_cmd->add_option("model", model_path, "trained model file")->required();
    add_seg_flags(classify_cmd, opts);
    add_seed_flag(classify_cmd, opts);

    auto* index_cmd = app.add_subcommand("index", "Index every image in a directory by predicted keywords");
    index_cmd->add_option("dir", dir_path, "image directory")->required();
    index_cmd->add_option("model", model_path, "trained model file")->required();
    index_cmd->add_option("-o,--out", out_path, "output index file")->required();
    add_seg_flags(index_cmd, opts);
    add_seed_flag(index_cmd, opts);

    auto* query_cmd = app.add_subcommand("query", "Retrieve image ids whose keyword set contains the query");
    query_cmd->add_option("index", index_path, "index file")->required();
    query_cmd->add_option("keywords", keywords, "category keywords")->required();
    query_cmd->add_flag("--or", any_of, "match any keyword instead of all");
    query_cmd->add_option("--model", model_path, "model file to verify the index fingerprint against");
    add_seg_flags(query_cmd, opts);
    add_seed_flag(query_cmd, opts);

    auto* eval_cmd = app.add_subcommand("evaluate", "Per-category precision of a model over a labeled manifest");
    eval_cmd->add_option("manifest", manifest_path, "labeled-region manifest")->required();
    eval_cmd->add_option("model", model_path, "trained model file")->required();
    add_seg_flags(eval_cmd, opts);
    add_seed_flag(eval_cmd, opts);

    auto* synth_cmd = app.add_subcommand("synth", "Generate the seeded synthetic dataset with manifests");
    synth_cmd->add_option("out_dir", dir_path, "output directory")->required();
    synth_cmd->add_option("--train-count", train_count, "training region instances");
    synth_cmd->add_option("--test-count", test_count, "test region instances");
    synth_cmd->add_option("--size", synth_size, "generated image side in pixels");
    add_seed_flag(synth_cmd, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // usage error
    }

    try {
        if (seg_cmd->parsed()) return cmd_segment(image_path, opts, labels_out);
        if (train_cmd->parsed()) return cmd_train(manifest_path, out_path, opts);
        if (classify_cmd->parsed()) return cmd_classify(image_path, model_path, opts);
        if (index_cmd->parsed()) return cmd_index(dir_path, model_path, out_path, opts);
        if (query_cmd->parsed()) return cmd_query(index_path, keywords, any_of, model_path, opts);
        if (eval_cmd->parsed()) return cmd_evaluate(manifest_path, model_path, opts);
        if (synth_cmd->parsed()) return cmd_synth(dir_path, opts, train_count, test_count, synth_size);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
