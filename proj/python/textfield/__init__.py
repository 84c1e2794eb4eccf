"""Direction-field text detection core.

Images are numpy arrays of shape (height, width); a direction field is a
pair of float32 arrays (vx, vy) in the x-right, y-down frame.
"""

from ._textfield import (
    EvalReport,
    InferenceConfig,
    InputError,
    NoiseModel,
    RootRule,
    ShapeFamily,
    SynthSpec,
    __version__,
    bin_direction,
    compute_weights,
    detect,
    feature_transform,
    generate_field,
    generate_scene,
    magnitude,
    mask_iou,
    match_and_score,
    per_pixel_loss,
    perturb_field,
    rasterize,
    run_inference,
    select_hard_negatives,
    threshold_candidates,
    total_loss,
)

__all__ = [
    "EvalReport",
    "InferenceConfig",
    "InputError",
    "NoiseModel",
    "RootRule",
    "ShapeFamily",
    "SynthSpec",
    "__version__",
    "bin_direction",
    "compute_weights",
    "detect",
    "feature_transform",
    "generate_field",
    "generate_scene",
    "magnitude",
    "mask_iou",
    "match_and_score",
    "per_pixel_loss",
    "perturb_field",
    "rasterize",
    "run_inference",
    "select_hard_negatives",
    "threshold_candidates",
    "total_loss",
]
