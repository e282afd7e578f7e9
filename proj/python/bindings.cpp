#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "riq/errors.hpp"
#include "riq/features.hpp"
#include "riq/image.hpp"
#include "riq/manifest.hpp"
#include "riq/mlnn.hpp"
#include "riq/retrieval.hpp"
#include "riq/segmentation.hpp"
#include "riq/synth.hpp"

namespace py = pybind11;
using namespace riq;

PYBIND11_MODULE(_riq, m) {
    m.doc() = "Region-based image classification and keyword retrieval";

    py::register_exception<Error>(m, "RiqError");

    py::class_<RasterImage>(m, "RasterImage")
        .def_readonly("width", &RasterImage::width)
        .def_readonly("height", &RasterImage::height)
        .def_readonly("data", &RasterImage::data)
        .def_static("constant", &RasterImage::constant);

    py::class_<PreprocessParams>(m, "PreprocessParams")
        .def(py::init<>())
        .def_readwrite("target_size", &PreprocessParams::target_size)
        .def_readwrite("gaussian_sigma", &PreprocessParams::gaussian_sigma)
        .def_readwrite("gaussian_kernel", &PreprocessParams::gaussian_kernel)
        .def_readwrite("equalize", &PreprocessParams::equalize);

    py::class_<SegmentationParams>(m, "SegmentationParams")
        .def(py::init<>())
        .def_readwrite("radius", &SegmentationParams::radius)
        .def_readwrite("min_color_count", &SegmentationParams::min_color_count)
        .def_readwrite("min_region_fraction", &SegmentationParams::min_region_fraction)
        .def_readwrite("n_windows", &SegmentationParams::n_windows)
        .def_readwrite("max_iters", &SegmentationParams::max_iters)
        .def_readwrite("conv_eps", &SegmentationParams::conv_eps)
        .def_readwrite("rng_seed", &SegmentationParams::rng_seed);

    py::class_<BBox>(m, "BBox")
        .def_readonly("top", &BBox::top)
        .def_readonly("left", &BBox::left)
        .def_readonly("bottom", &BBox::bottom)
        .def_readonly("right", &BBox::right);

    py::class_<Region>(m, "Region")
        .def_readonly("label", &Region::label)
        .def_readonly("area", &Region::area)
        .def_readonly("bbox", &Region::bbox);

    py::class_<MlafParams>(m, "MlafParams")
        .def(py::init<>())
        .def_readwrite("beta", &MlafParams::beta)
        .def_readwrite("c", &MlafParams::c)
        .def_readwrite("n", &MlafParams::n);

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("learning_rate", &TrainConfig::learning_rate)
        .def_readwrite("epochs", &TrainConfig::epochs)
        .def_readwrite("rng_seed", &TrainConfig::rng_seed);

    py::class_<MlnnModel>(m, "MlnnModel")
        .def_readonly("input_dim", &MlnnModel::input_dim)
        .def_readonly("hidden_dim", &MlnnModel::hidden_dim)
        .def_readonly("categories", &MlnnModel::categories)
        .def_property_readonly("mlaf_params", [](const MlnnModel& mm) { return mm.mlaf_params; });

    py::class_<Evaluation>(m, "Evaluation")
        .def_readonly("precision", &Evaluation::precision)
        .def_readonly("confusion", &Evaluation::confusion)
        .def_readonly("average_precision", &Evaluation::average_precision)
        .def_readonly("accuracy", &Evaluation::accuracy);

    m.def("load_image", &load_image, py::arg("path"));
    m.def("save_ppm", &save_ppm, py::arg("image"), py::arg("path"));
    m.def("preprocess", &preprocess, py::arg("image"), py::arg("params") = PreprocessParams{});
    m.def("segment", &segment, py::arg("image"), py::arg("params") = SegmentationParams{},
          "Segment a preprocessed image into significant regions");

    m.def("sigmoid", &sigmoid, py::arg("x"), py::arg("beta"));
    m.def("mlaf", &mlaf, py::arg("x"), py::arg("params"));
    m.def("mlaf_grad", &mlaf_grad, py::arg("x"), py::arg("params"));
    m.def("level_center", &level_center, py::arg("category"), py::arg("params"));

    m.def(
        "extract_features",
        [](const RasterImage& img, const Region& r) { return extract_region_features(rgb_to_hsv(img), r); },
        py::arg("image"), py::arg("region"),
        "201-dim feature vector (color moments + level-3 Haar approximation) of one region");

    m.def("save_model", &save_model, py::arg("model"), py::arg("path"));
    m.def("load_model", &load_model, py::arg("path"));

    m.def(
        "train_from_manifest",
        [](const std::string& manifest, const SegmentationParams& seg, const PreprocessParams& pre,
           const MlafParams& mlaf_params, const TrainConfig& cfg, std::size_t hidden) {
            TrainResult res = train_from_manifest(manifest, seg, pre, mlaf_params, cfg, hidden);
            return py::make_tuple(res.model, res.loss_trace, res.training_accuracy);
        },
        py::arg("manifest"), py::arg("seg_params") = SegmentationParams{},
        py::arg("pre_params") = PreprocessParams{}, py::arg("mlaf_params") = MlafParams{},
        py::arg("train_config") = TrainConfig{}, py::arg("hidden") = 32,
        "Returns (model, loss_trace, training_accuracy)");

    m.def("evaluate_manifest", &evaluate_manifest, py::arg("manifest"), py::arg("model"),
          py::arg("seg_params") = SegmentationParams{}, py::arg("pre_params") = PreprocessParams{});

    m.def(
        "classify_image",
        [](const std::string& path, const MlnnModel& model, const SegmentationParams& seg,
           const PreprocessParams& pre) {
            std::vector<py::tuple> out;
            const auto preds = classify_image(load_image(path), model, seg, pre);
            out.reserve(preds.size());
            for (std::size_t i = 0; i < preds.size(); ++i)
                out.push_back(py::make_tuple(i, model.categories.at(static_cast<std::size_t>(preds[i].category - 1)),
                                             preds[i].output));
            return out;
        },
        py::arg("path"), py::arg("model"), py::arg("seg_params") = SegmentationParams{},
        py::arg("pre_params") = PreprocessParams{},
        "Per-region (index, category, output) for one image file");

    m.def(
        "index_image",
        [](const std::string& path, const std::string& id, const MlnnModel& model,
           const SegmentationParams& seg, const PreprocessParams& pre) {
            const ImageRecord rec = index_image(path, id, model, seg, pre);
            return py::make_tuple(rec.id, rec.keywords, rec.region_count);
        },
        py::arg("path"), py::arg("id"), py::arg("model"), py::arg("seg_params") = SegmentationParams{},
        py::arg("pre_params") = PreprocessParams{});

    m.def(
        "query_index",
        [](const std::string& index_path, const std::set<std::string>& keywords, bool any_of) {
            return query(load_index(index_path), keywords, any_of);
        },
        py::arg("index_path"), py::arg("keywords"), py::arg("any_of") = false);

    m.def(
        "synth_dataset",
        [](const std::string& out_dir, std::uint64_t seed, int train_count, int test_count, int size) {
            SynthConfig cfg;
            cfg.out_dir = out_dir;
            cfg.seed = seed;
            cfg.train_count = train_count;
            cfg.test_count = test_count;
            cfg.image_size = size;
            const SynthResult res = generate_dataset(cfg);
            return py::make_tuple(res.train_manifest, res.test_manifest, res.images_written);
        },
        py::arg("out_dir"), py::arg("seed") = 0, py::arg("train_count") = 200, py::arg("test_count") = 500,
        py::arg("size") = 256, "Returns (train_manifest, test_manifest, images_written)");

    m.attr("CATEGORIES") = kCategories;
    m.attr("FEATURE_LENGTH") = kFeatureLength;
}
