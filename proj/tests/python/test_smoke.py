"""Smoke tests for the python bindings."""

import math
import shutil

import pytest

import riq


def test_constants():
    assert riq.CATEGORIES == ["Sky", "Building", "Sand/Rock", "Grass", "Water"]
    assert riq.FEATURE_LENGTH == 201


def test_activation_values():
    assert riq.sigmoid(0.0, 1.0) == 0.5
    p = riq.MlafParams()
    p.beta = 1.0
    p.c = 4.0
    p.n = 2
    assert riq.mlaf(6.0, p) == pytest.approx(1.9795411668812738, abs=1e-9)
    assert riq.mlaf_grad(0.0, p) == pytest.approx(0.25)
    # level centers are increasing and decode anchors for each category
    centers = [riq.level_center(k, p) for k in (1, 2)]
    assert centers[0] < centers[1]


def test_segment_constant_image(tmp_path):
    img = riq.RasterImage.constant(64, 64, 0.1, 0.4, 0.9)
    pre_params = riq.PreprocessParams()
    pre_params.target_size = 64
    pre = riq.preprocess(img, pre_params)
    regions = riq.segment(pre)
    assert len(regions) == 1
    assert regions[0].area == 64 * 64
    assert (regions[0].bbox.top, regions[0].bbox.left) == (0, 0)

    features = riq.extract_features(pre, regions[0])
    assert len(features) == riq.FEATURE_LENGTH


def test_errors_are_typed(tmp_path):
    with pytest.raises(riq.RiqError):
        riq.load_image(str(tmp_path / "missing.ppm"))


def test_tiny_train_classify_roundtrip(tmp_path):
    out = tmp_path / "ds"
    train_manifest, test_manifest, written = riq.synth_dataset(
        str(out), seed=4, train_count=10, test_count=5, size=64
    )
    assert written == 15

    seg = riq.SegmentationParams()
    seg.rng_seed = 1
    pre = riq.PreprocessParams()
    pre.target_size = 64
    cfg = riq.TrainConfig()
    cfg.epochs = 200
    cfg.rng_seed = 1

    model, loss_trace, accuracy = riq.train_from_manifest(
        train_manifest, seg_params=seg, pre_params=pre, train_config=cfg
    )
    assert len(loss_trace) == 200
    assert all(math.isfinite(x) for x in loss_trace)
    assert 0.0 <= accuracy <= 1.0
    assert model.input_dim == riq.FEATURE_LENGTH

    model_path = tmp_path / "model.txt"
    riq.save_model(model, str(model_path))
    back = riq.load_model(str(model_path))
    assert back.categories == model.categories

    image = str(out / "images" / "sky_train_0.ppm")
    predictions = riq.classify_image(image, back, seg_params=seg, pre_params=pre)
    assert predictions
    idx, category, output = predictions[0]
    assert idx == 0
    assert category in riq.CATEGORIES
    assert math.isfinite(output)

    rec_id, keywords, region_count = riq.index_image(image, "sky0", back, seg_params=seg, pre_params=pre)
    assert rec_id == "sky0"
    assert region_count == len(predictions)
    assert set(keywords) <= set(riq.CATEGORIES)

    ev = riq.evaluate_manifest(test_manifest, back, seg_params=seg, pre_params=pre)
    assert 0.0 <= ev.accuracy <= 1.0
    assert len(ev.precision) == 5

    shutil.rmtree(out, ignore_errors=True)
