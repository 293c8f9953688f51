"""linaug: local linear-transform image augmentation and Lambertian
band-ratio analysis on planar unit-interval numpy images.

The augmentation side provides convex channel mixing (``mrle`` and its
grayscale / channel-selection special cases), repeated bounded linear
scaling of random rectangles (``rrle``), classic random erasing, and a
deterministic batch pipeline.  The analysis side renders synthetic
Lambertian scenes across spectral bands and measures how constant
cross-band ratios stay within one material.
"""

__version__ = "0.1.0"

from .core import (
    BetaShape,
    ParameterError,
    RectRegion,
    ShapeError,
    ValidationReport,
    beta_sample,
    from_uint8,
    make_rng,
    require_image,
    sample_rect,
    to_uint8,
    validate_image,
)
from .moderate import (
    GRAYSCALE_WEIGHTS,
    ONE_HOT_WEIGHTS,
    MixWeights,
    broadcast_mono,
    grayscale,
    moderate_transform,
    mrle,
    random_channel,
    sample_mix_weights,
)
from .radical import (
    ErasingParams,
    RrleParams,
    RrleTrace,
    apply_linear_region,
    max_feasible_factor,
    new_memory,
    random_erasing,
    rrle,
)
from .spectral import (
    Band,
    DiscrepancyStats,
    RatioMap,
    RatioStats,
    SceneSpec,
    SpectralCurve,
    band_ratio_map,
    band_rows,
    banded_linear_transform,
    max_band_factors,
    pixel_discrepancy,
    ratio_constancy_stats,
    render_all_bands,
    render_band,
    scene_normalization,
)
from .scene_io import (
    demo_scene,
    demo_scene_path,
    export_ratio_map,
    false_color,
    fill_polygon,
    load_scene,
    scene_from_dict,
)
from .pipeline import (
    AugmentPolicy,
    BenchReport,
    IngestItem,
    ManifestRecord,
    ModerateStage,
    PolicyError,
    PolicyTrace,
    RunError,
    RunReport,
    apply_policy,
    bench,
    default_policy,
    derive_seed,
    ingest,
    load_image,
    load_policy,
    loads_policy,
    policy_from_dict,
    policy_to_dict,
    read_manifest,
    run_batch,
    save_image,
    save_policy,
    scan_directory,
    stage_rng,
)

__all__ = [
    "__version__",
    # core
    "BetaShape", "ParameterError", "RectRegion", "ShapeError", "ValidationReport",
    "beta_sample", "from_uint8", "make_rng", "require_image", "sample_rect",
    "to_uint8", "validate_image",
    # moderate
    "GRAYSCALE_WEIGHTS", "ONE_HOT_WEIGHTS", "MixWeights", "broadcast_mono",
    "grayscale", "moderate_transform", "mrle", "random_channel", "sample_mix_weights",
    # radical
    "ErasingParams", "RrleParams", "RrleTrace", "apply_linear_region",
    "max_feasible_factor", "new_memory", "random_erasing", "rrle",
    # spectral
    "Band", "DiscrepancyStats", "RatioMap", "RatioStats", "SceneSpec", "SpectralCurve",
    "band_ratio_map", "band_rows", "banded_linear_transform", "max_band_factors",
    "pixel_discrepancy", "ratio_constancy_stats", "render_all_bands", "render_band",
    "scene_normalization",
    # scene io
    "demo_scene", "demo_scene_path", "export_ratio_map", "false_color",
    "fill_polygon", "load_scene", "scene_from_dict",
    # pipeline
    "AugmentPolicy", "BenchReport", "IngestItem", "ManifestRecord", "ModerateStage",
    "PolicyError", "PolicyTrace", "RunError", "RunReport", "apply_policy", "bench",
    "default_policy", "derive_seed", "ingest", "load_image", "load_policy",
    "loads_policy", "policy_from_dict", "policy_to_dict", "read_manifest",
    "run_batch", "save_image", "save_policy", "scan_directory", "stage_rng",
]
