"""Local linear scaling of random rectangles, with a per-pixel memory of the
accumulated change driving termination.

Each round picks a rectangle, and per channel multiplies it by
``alpha = alpha_max * f_g`` where ``alpha_max`` is the largest factor that
keeps the region within the unit bound and ``f_g`` is a U-shaped Beta draw.
A memory matrix records the product of every factor applied to every cell;
the loop stops once its minimum falls to ``t_min`` or after ``max_iters``
attempts.  Zero factors reproduce plain random erasing.
"""

from dataclasses import dataclass, field

import numpy as np

from .core import (
    BetaShape,
    ParameterError,
    RectRegion,
    ShapeError,
    beta_sample,
    require_image,
    sample_rect,
)

__all__ = [
    "RrleParams",
    "ErasingParams",
    "RrleTrace",
    "new_memory",
    "max_feasible_factor",
    "apply_linear_region",
    "rrle",
    "random_erasing",
]

DEFAULT_S_RANGE = (0.02, 0.4)
DEFAULT_R_RANGE = (0.3, 1.0 / 0.3)


@dataclass(frozen=True)
class RrleParams:
    """Knobs for the repeated-region loop.

    ``p`` gates whether anything happens at all; ``s_*``/``r_*`` bound the
    area fraction and aspect of each rectangle; ``beta_r`` shapes the factor
    distribution; ``t_min`` is the memory-minimum termination threshold and
    ``max_iters`` the hard cap on attempts (fit misses included).
    """

    p: float = 0.5
    s_min: float = DEFAULT_S_RANGE[0]
    s_max: float = DEFAULT_S_RANGE[1]
    r_min: float = DEFAULT_R_RANGE[0]
    r_max: float = DEFAULT_R_RANGE[1]
    beta_r: BetaShape = field(default_factory=lambda: BetaShape(0.4))
    t_min: float = 0.1
    max_iters: int = 64

    def __post_init__(self):
        if not (0.0 <= self.p <= 1.0):
            raise ParameterError(f"p must lie in [0, 1], got {self.p}")
        if not (0 < self.s_min <= self.s_max <= 1):
            raise ParameterError(f"need 0 < s_min <= s_max <= 1, got [{self.s_min}, {self.s_max}]")
        if not (0 < self.r_min <= self.r_max):
            raise ParameterError(f"need 0 < r_min <= r_max, got [{self.r_min}, {self.r_max}]")
        if not (0.0 < self.t_min < 1.0):
            raise ParameterError(f"t_min must lie in (0, 1), got {self.t_min}")
        if self.max_iters < 1:
            raise ParameterError(f"max_iters must be >= 1, got {self.max_iters}")
        if not isinstance(self.beta_r, BetaShape):
            object.__setattr__(self, "beta_r", BetaShape(float(self.beta_r)))


@dataclass(frozen=True)
class ErasingParams:
    """Bounds for single-rectangle zero-fill erasing."""

    p: float = 0.5
    s_min: float = DEFAULT_S_RANGE[0]
    s_max: float = DEFAULT_S_RANGE[1]
    r_min: float = DEFAULT_R_RANGE[0]
    r_max: float = DEFAULT_R_RANGE[1]
    max_attempts: int = 100

    def __post_init__(self):
        if not (0.0 <= self.p <= 1.0):
            raise ParameterError(f"p must lie in [0, 1], got {self.p}")
        if not (0 < self.s_min <= self.s_max <= 1):
            raise ParameterError(f"need 0 < s_min <= s_max <= 1, got [{self.s_min}, {self.s_max}]")
        if not (0 < self.r_min <= self.r_max):
            raise ParameterError(f"need 0 < r_min <= r_max, got [{self.r_min}, {self.r_max}]")
        if self.max_attempts < 1:
            raise ParameterError(f"max_attempts must be >= 1, got {self.max_attempts}")


@dataclass(frozen=True)
class RrleTrace:
    """Instrumentation from one ``rrle`` call.

    ``memory`` is ``None`` when the probability gate skipped the transform.
    """

    applied: bool
    attempts: int
    regions: tuple[RectRegion, ...]
    memory: np.ndarray | None


def new_memory(img: np.ndarray) -> np.ndarray:
    """Fresh all-ones memory matrix matching the image shape."""
    return np.ones_like(np.asarray(img, dtype=np.float64))


def _check_bound(img: np.ndarray, region: RectRegion):
    c, h, w = img.shape
    if not region.fits(w, h):
        raise ShapeError(f"region {region} does not fit a {w}x{h} image")


def _feasible_bound(img: np.ndarray, region: RectRegion, channel: int) -> float:
    rows, cols = region.slices()
    peak = float(img[channel, rows, cols].max())
    if peak == 0.0:
        return 1.0
    return 1.0 / peak


def max_feasible_factor(img: np.ndarray, region: RectRegion, channel: int) -> float:
    """Largest factor that keeps the region's channel within the unit bound.

    Returns ``1 / max`` of the channel values inside the region, or the
    sentinel 1.0 for an all-zero region (multiplication cannot change zeros).
    """
    img = require_image(img)
    _check_bound(img, region)
    if not (0 <= channel < img.shape[0]):
        raise ShapeError(f"channel {channel} out of range for {img.shape[0]}-channel image")
    return _feasible_bound(img, region, channel)


def _scale_region(img: np.ndarray, memory: np.ndarray, region: RectRegion, factors):
    """Unchecked in-place region multiply on image and memory."""
    rows, cols = region.slices()
    for c, f in enumerate(factors):
        block = img[c, rows, cols]
        block *= f
        np.minimum(block, 1.0, out=block)  # <=1-ulp reciprocal dust
        img[c, rows, cols] = block
        memory[c, rows, cols] *= f


def apply_linear_region(
    img: np.ndarray,
    memory: np.ndarray,
    region: RectRegion,
    factors,
    copy: bool = True,
) -> tuple[np.ndarray, np.ndarray]:
    """Multiply the region by per-channel factors in both image and memory.

    Each factor must be non-negative and at most the feasible bound for its
    channel.  With ``copy=False`` the arrays are updated in place.
    """
    img = np.asarray(img, dtype=np.float64)
    memory = np.asarray(memory, dtype=np.float64)
    if memory.shape != img.shape:
        raise ShapeError(f"memory shape {memory.shape} != image shape {img.shape}")
    _check_bound(img, region)
    factors = [float(f) for f in factors]
    if len(factors) != img.shape[0]:
        raise ShapeError(f"need {img.shape[0]} factors, got {len(factors)}")
    for c, f in enumerate(factors):
        if f < 0:
            raise ParameterError(f"factor for channel {c} must be >= 0, got {f}")
        bound = _feasible_bound(img, region, c)
        if f > bound:
            raise ParameterError(
                f"factor {f} for channel {c} exceeds the feasible bound {bound}"
            )
    if copy:
        img = img.copy()
        memory = memory.copy()
    _scale_region(img, memory, region, factors)
    return img, memory


def rrle(
    img: np.ndarray,
    params: RrleParams,
    rng: np.random.Generator,
    trace: bool = False,
):
    """Radical random linear enhancement.

    With probability ``1 - p`` the input is returned unchanged.  Otherwise
    rectangles are sampled repeatedly and scaled channel-wise by
    ``alpha_max * f_g`` with ``f_g ~ Beta(beta_r, beta_r)``, until the memory
    minimum reaches ``t_min`` or ``max_iters`` attempts (hits and fit misses
    alike) are spent.  Output values stay in [0, 1] because every factor is
    bounded by the region's feasible maximum.

    With ``trace=True`` returns ``(image, RrleTrace)`` for instrumented runs.
    """
    img = require_image(img)
    if not isinstance(params, RrleParams):
        raise ParameterError(f"params must be RrleParams, got {type(params).__name__}")

    if rng.random() >= params.p:
        # gate miss: hand back the input untouched (no copy)
        result = RrleTrace(applied=False, attempts=0, regions=(), memory=None)
        return (img, result) if trace else img

    channels, height, width = img.shape
    out = img.copy()
    memory = new_memory(out)
    regions: list[RectRegion] = []
    attempts = 0
    for _ in range(params.max_iters):
        attempts += 1
        region = sample_rect(
            width, height, params.s_min, params.s_max, params.r_min, params.r_max,
            rng, max_attempts=1,
        )
        if region is None:
            continue
        factors = []
        for c in range(channels):
            f_g = beta_sample(params.beta_r, rng)
            factors.append(_feasible_bound(out, region, c) * f_g)
        _scale_region(out, memory, region, factors)
        regions.append(region)
        if memory.min() <= params.t_min:
            break

    if trace:
        return out, RrleTrace(applied=True, attempts=attempts, regions=tuple(regions), memory=memory)
    return out


def random_erasing(
    img: np.ndarray,
    params: ErasingParams,
    rng: np.random.Generator,
    trace: bool = False,
):
    """Zero one sampled rectangle across all channels, with probability ``p``.

    This is the factor-0 special case of the radical transform, kept as its
    own op for baseline comparisons and for mixed policies.  With
    ``trace=True`` returns ``(image, region-or-None)``.
    """
    img = require_image(img)
    if not isinstance(params, ErasingParams):
        raise ParameterError(f"params must be ErasingParams, got {type(params).__name__}")

    if rng.random() >= params.p:
        return (img, None) if trace else img
    _, height, width = img.shape
    region = sample_rect(
        width, height, params.s_min, params.s_max, params.r_min, params.r_max,
        rng, max_attempts=params.max_attempts,
    )
    if region is None:
        return (img, None) if trace else img
    out = img.copy()
    rows, cols = region.slices()
    out[:, rows, cols] = 0.0
    return (out, region) if trace else out
