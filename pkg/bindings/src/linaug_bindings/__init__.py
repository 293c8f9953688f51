"""In-process float32 array interface to the linaug augmentation ops.

Designed for training data loaders: callers hand in a contiguous
row-major ``float32`` array of shape ``(C, H, W)`` with values in [0, 1]
and get back a freshly allocated ``float32`` array of the same layout.
The input buffer is never retained or modified, every call builds its own
generator from the given seed (re-entrant, thread-safe), and at 32-bit
precision results are bit-for-bit identical to the core implementation on
the same data and seed.
"""

from pathlib import Path

import numpy as np

from linaug import (
    AugmentPolicy,
    BetaShape,
    ErasingParams,
    ParameterError,
    RrleParams,
    ShapeError,
    apply_policy,
    load_policy,
    loads_policy,
    make_rng,
    mrle,
    random_erasing,
    rrle,
    validate_image,
)

__all__ = [
    "__version__",
    "bind_mrle",
    "bind_rrle",
    "bind_random_erasing",
    "bind_apply_policy",
]

__version__ = "0.1.0"


def _check_view(view: np.ndarray, channels: int | None = None) -> np.ndarray:
    """Validate the array contract and return a float64 working copy."""
    if not isinstance(view, np.ndarray):
        raise ShapeError(f"expected a numpy array, got {type(view).__name__}")
    if view.dtype != np.float32:
        raise ShapeError(
            f"element type must be float32, got {view.dtype} "
            "(wider or narrower types are not accepted)"
        )
    if not view.flags["C_CONTIGUOUS"]:
        raise ShapeError("array must be C-contiguous row-major")
    if view.ndim != 3:
        raise ShapeError(f"expected shape (C, H, W), got {view.shape}")
    if channels is not None and view.shape[0] != channels:
        raise ShapeError(f"expected {channels}-channel input, got {view.shape[0]}")
    report = validate_image(view)
    if not report.ok:
        raise ParameterError(report.message)
    # float64 copy: the caller's buffer is never aliased or touched
    return view.astype(np.float64)


def _own(result: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(result, dtype=np.float32)


def _coerce_rrle_params(params) -> RrleParams:
    if params is None:
        return RrleParams()
    if isinstance(params, RrleParams):
        return params
    if isinstance(params, dict):
        return RrleParams(**params)
    raise ParameterError(f"params must be RrleParams, a dict, or None, got {type(params).__name__}")


def _coerce_erasing_params(params) -> ErasingParams:
    if params is None:
        return ErasingParams()
    if isinstance(params, ErasingParams):
        return params
    if isinstance(params, dict):
        return ErasingParams(**params)
    raise ParameterError(f"params must be ErasingParams, a dict, or None, got {type(params).__name__}")


def _coerce_policy(policy) -> AugmentPolicy:
    if isinstance(policy, AugmentPolicy):
        return policy
    if isinstance(policy, Path):
        return load_policy(policy)
    if isinstance(policy, str):
        if policy.lstrip().startswith("{"):
            return loads_policy(policy, source="<inline policy>")
        return load_policy(policy)
    raise ParameterError(
        f"policy must be an AugmentPolicy, a file path, or inline JSON text, "
        f"got {type(policy).__name__}"
    )


def bind_mrle(view: np.ndarray, beta_m: float = 0.3, seed: int = 0) -> np.ndarray:
    """Random convex channel mix of a (3, H, W) array; returns (1, H, W)."""
    data = _check_view(view, channels=3)
    return _own(mrle(data, BetaShape(float(beta_m)), make_rng(seed)))


def bind_rrle(view: np.ndarray, params=None, seed: int = 0) -> np.ndarray:
    """Bounded random linear scaling of rectangles; same shape out.

    ``params`` may be an ``RrleParams``, a dict of its fields
    (p, s_min, s_max, r_min, r_max, beta_r, t_min, max_iters), or None for
    the defaults.
    """
    data = _check_view(view)
    return _own(rrle(data, _coerce_rrle_params(params), make_rng(seed)))


def bind_random_erasing(view: np.ndarray, params=None, seed: int = 0) -> np.ndarray:
    """Zero one random rectangle with probability ``params.p``."""
    data = _check_view(view)
    return _own(random_erasing(data, _coerce_erasing_params(params), make_rng(seed)))


def bind_apply_policy(view: np.ndarray, modality: str, policy, seed: int = 0) -> np.ndarray:
    """Full moderate -> radical -> erasing pipeline on one array.

    ``policy`` is a policy file path, inline JSON text, or an
    ``AugmentPolicy``; parse and validation errors carry field names.
    """
    data = _check_view(view)
    return _own(apply_policy(data, modality, _coerce_policy(policy), seed))
