"""Region-based image classification and keyword retrieval."""

from ._riq import (  # noqa: F401
    CATEGORIES,
    FEATURE_LENGTH,
    BBox,
    Evaluation,
    MlafParams,
    MlnnModel,
    PreprocessParams,
    RasterImage,
    Region,
    RiqError,
    SegmentationParams,
    TrainConfig,
    classify_image,
    evaluate_manifest,
    extract_features,
    index_image,
    level_center,
    load_image,
    load_model,
    mlaf,
    mlaf_grad,
    preprocess,
    query_index,
    save_model,
    save_ppm,
    segment,
    sigmoid,
    synth_dataset,
    train_from_manifest,
)
