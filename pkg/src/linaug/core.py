"""Foundational image model, rectangle sampling, and seeded randomness.

Images are planar ``float64`` arrays of shape ``(C, H, W)`` with ``C`` in
``{1, 3}`` and every value in the closed unit interval.  All stochastic
operations take an explicit :class:`numpy.random.Generator` so that equal
seeds reproduce equal outputs bit for bit.
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ShapeError",
    "ParameterError",
    "RectRegion",
    "BetaShape",
    "ValidationReport",
    "make_rng",
    "beta_sample",
    "sample_rect",
    "validate_image",
    "require_image",
    "from_uint8",
    "to_uint8",
]

VALID_CHANNEL_COUNTS = (1, 3)


class ShapeError(ValueError):
    """An array has the wrong rank, channel count, or dimensions."""


class ParameterError(ValueError):
    """A numeric parameter violates its documented range."""


@dataclass(frozen=True)
class RectRegion:
    """Integer rectangle ``[x, x+w) x [y, y+h)`` addressing part of an image."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.x < 0 or self.y < 0:
            raise ParameterError(f"rect corner must be non-negative, got ({self.x}, {self.y})")
        if self.w < 1 or self.h < 1:
            raise ParameterError(f"rect sides must be >= 1, got {self.w}x{self.h}")

    @property
    def area(self) -> int:
        return self.w * self.h

    def fits(self, width: int, height: int) -> bool:
        return self.x + self.w <= width and self.y + self.h <= height

    def slices(self) -> tuple[slice, slice]:
        """Row and column slices for indexing the last two image axes."""
        return slice(self.y, self.y + self.h), slice(self.x, self.x + self.w)


@dataclass(frozen=True)
class BetaShape:
    """Shape parameter of a symmetric Beta(beta, beta) distribution.

    Values below 1 give a U-shaped density that concentrates mass near 0
    and 1, which is what the boundary-seeking samplers here rely on.
    """

    beta: float

    def __post_init__(self):
        if not (self.beta > 0) or not math.isfinite(self.beta):
            raise ParameterError(f"beta shape must be a positive finite real, got {self.beta}")

    @property
    def u_shaped(self) -> bool:
        return self.beta < 1.0


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate_image`; ``ok`` or the first offense found."""

    ok: bool
    message: str = ""
    index: tuple[int, int, int] | None = None
    value: float | None = None


def make_rng(seed: int) -> np.random.Generator:
    """Deterministic generator for a 64-bit seed (PCG64 stream)."""
    return np.random.Generator(np.random.PCG64(seed))


def beta_sample(shape: BetaShape, rng: np.random.Generator) -> float:
    """One draw from the symmetric Beta(shape.beta, shape.beta) distribution."""
    if not isinstance(shape, BetaShape):
        shape = BetaShape(float(shape))
    return float(rng.beta(shape.beta, shape.beta))


def sample_rect(
    width: int,
    height: int,
    s_min: float,
    s_max: float,
    r_min: float,
    r_max: float,
    rng: np.random.Generator,
    max_attempts: int = 100,
) -> RectRegion | None:
    """Sample a rectangle with area fraction in [s_min, s_max] and aspect in [r_min, r_max].

    Each attempt draws a target area ``S = u*W*H`` with ``u`` uniform in
    ``[s_min, s_max]`` and an aspect ratio ``r`` uniform in ``[r_min, r_max]``,
    then takes side lengths ``h = floor(sqrt(S*r))`` and ``w = floor(sqrt(S/r))``.
    Attempts whose sides are zero or do not fit inside the image are discarded;
    the first fitting rectangle is placed at a uniformly random valid corner.
    Returns ``None`` once ``max_attempts`` attempts have failed (a soft miss,
    not an error).
    """
    if width < 1 or height < 1:
        raise ParameterError(f"image must be at least 1x1, got {width}x{height}")
    if not (0 < s_min <= s_max <= 1):
        raise ParameterError(f"area fractions must satisfy 0 < s_min <= s_max <= 1, got [{s_min}, {s_max}]")
    if not (0 < r_min <= r_max):
        raise ParameterError(f"aspect bounds must satisfy 0 < r_min <= r_max, got [{r_min}, {r_max}]")
    if max_attempts < 1:
        raise ParameterError(f"max_attempts must be >= 1, got {max_attempts}")

    for _ in range(max_attempts):
        target_area = rng.uniform(s_min, s_max) * width * height
        aspect = rng.uniform(r_min, r_max)
        h = int(math.sqrt(target_area * aspect))
        w = int(math.sqrt(target_area / aspect))
        if w < 1 or h < 1 or w > width or h > height:
            continue
        x = int(rng.integers(0, width - w + 1))
        y = int(rng.integers(0, height - h + 1))
        return RectRegion(x=x, y=y, w=w, h=h)
    return None


def validate_image(img: np.ndarray) -> ValidationReport:
    """Check the planar image invariants; report the first violation found.

    A valid image is a ``(C, H, W)`` float array with ``C`` in ``{1, 3}``,
    ``H, W >= 1`` and every value in ``[0, 1]``.
    """
    arr = np.asarray(img)
    if arr.ndim != 3:
        return ValidationReport(ok=False, message=f"expected 3 axes (C, H, W), got {arr.ndim}")
    c, h, w = arr.shape
    if c not in VALID_CHANNEL_COUNTS:
        return ValidationReport(ok=False, message=f"channel count must be 1 or 3, got {c}")
    if h < 1 or w < 1:
        return ValidationReport(ok=False, message=f"image must be at least 1x1, got {h}x{w}")
    # NaN poisons min/max, so the comparisons below reject it as well.
    if arr.min() >= 0.0 and arr.max() <= 1.0:
        return ValidationReport(ok=True)
    bad = ~((arr >= 0.0) & (arr <= 1.0))
    flat = int(np.argmax(bad))
    index = np.unravel_index(flat, arr.shape)
    value = float(arr[index])
    return ValidationReport(
        ok=False,
        message=f"value {value!r} at index {tuple(int(i) for i in index)} is outside [0, 1]",
        index=tuple(int(i) for i in index),
        value=value,
    )


def require_image(img: np.ndarray, channels: int | None = None) -> np.ndarray:
    """Assert the image invariants, raising instead of reporting.

    Raises :class:`ShapeError` for layout problems and :class:`ParameterError`
    for out-of-range values.  Returns the array unchanged on success.
    """
    arr = np.asarray(img, dtype=np.float64)
    report = validate_image(arr)
    if not report.ok:
        if report.index is None:
            raise ShapeError(report.message)
        raise ParameterError(report.message)
    if channels is not None and arr.shape[0] != channels:
        raise ShapeError(f"expected {channels}-channel image, got {arr.shape[0]}")
    return arr


def from_uint8(raw: np.ndarray) -> np.ndarray:
    """Convert an 8-bit ``(C, H, W)`` array to unit-interval float64 (v/255)."""
    return np.asarray(raw, dtype=np.float64) / 255.0


def to_uint8(img: np.ndarray) -> np.ndarray:
    """Quantize a unit-interval image to 8 bits: clamp(round(v*255))."""
    return np.clip(np.rint(np.asarray(img) * 255.0), 0, 255).astype(np.uint8)
