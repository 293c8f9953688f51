"""Convex channel mixing: transformations that keep a visible image's
original linear channel correlations.

The unified form is a per-pixel convex combination of the red, green, and
blue planes.  Fixed weight choices reproduce the grayscale and
single-channel-selection augmentations; drawing the weights from a
U-shaped symmetric Beta distribution and renormalizing them onto the
simplex gives the randomized mix (``mrle``).
"""

from dataclasses import dataclass

import numpy as np

from .core import BetaShape, ParameterError, ShapeError, beta_sample, require_image

__all__ = [
    "MixWeights",
    "GRAYSCALE_WEIGHTS",
    "ONE_HOT_WEIGHTS",
    "moderate_transform",
    "sample_mix_weights",
    "mrle",
    "grayscale",
    "random_channel",
    "broadcast_mono",
]

SIMPLEX_TOL = 1e-9

# Sum of three i.i.d. draws below this is treated as degenerate and resampled.
_RESAMPLE_EPS = 1e-12


@dataclass(frozen=True)
class MixWeights:
    """Channel mixing coefficients constrained to the unit simplex."""

    w_r: float
    w_g: float
    w_b: float

    def __post_init__(self):
        for name, value in (("w_r", self.w_r), ("w_g", self.w_g), ("w_b", self.w_b)):
            if not (0.0 <= value <= 1.0):
                raise ParameterError(f"{name} must lie in [0, 1], got {value}")
        total = self.w_r + self.w_g + self.w_b
        if abs(total - 1.0) > SIMPLEX_TOL:
            raise ParameterError(f"weights must sum to 1 within {SIMPLEX_TOL}, got {total!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.w_r, self.w_g, self.w_b], dtype=np.float64)


GRAYSCALE_WEIGHTS = MixWeights(0.299, 0.587, 0.114)

ONE_HOT_WEIGHTS = (
    MixWeights(1.0, 0.0, 0.0),
    MixWeights(0.0, 1.0, 0.0),
    MixWeights(0.0, 0.0, 1.0),
)


def moderate_transform(img: np.ndarray, weights: MixWeights) -> np.ndarray:
    """Convex mix of the three channel planes into a single plane.

    Output pixel is ``w_r*R + w_g*G + w_b*B``.  Convexity keeps the result in
    [0, 1]; a final ``minimum(out, 1.0)`` absorbs the <=1-ulp float residue
    that normalized weights can leave on white pixels.
    """
    img = require_image(img, channels=3)
    if not isinstance(weights, MixWeights):
        raise ParameterError(f"weights must be MixWeights, got {type(weights).__name__}")
    out = weights.w_r * img[0]
    out += weights.w_g * img[1]
    out += weights.w_b * img[2]
    np.minimum(out, 1.0, out=out)
    return out[np.newaxis, :, :]


def sample_mix_weights(beta_m: BetaShape, rng: np.random.Generator) -> MixWeights:
    """Draw three i.i.d. Beta(beta_m, beta_m) values and project onto the simplex.

    The draws are divided by their sum; a sum below 1e-12 triggers a full
    redraw.  Draws that already sum to 1 within the simplex tolerance are
    passed through unchanged so exact inputs stay exact.
    """
    while True:
        draws = [beta_sample(beta_m, rng) for _ in range(3)]
        total = draws[0] + draws[1] + draws[2]
        if total >= _RESAMPLE_EPS:
            break
    if abs(total - 1.0) > SIMPLEX_TOL:
        draws = [d / total for d in draws]
    return MixWeights(*draws)


def mrle(img: np.ndarray, beta_m: BetaShape, rng: np.random.Generator) -> np.ndarray:
    """Moderate random linear enhancement: random simplex mix of the channels."""
    weights = sample_mix_weights(beta_m, rng)
    return moderate_transform(img, weights)


def grayscale(img: np.ndarray) -> np.ndarray:
    """Fixed-weight mix with the standard [0.299, 0.587, 0.114] coefficients."""
    return moderate_transform(img, GRAYSCALE_WEIGHTS)


def random_channel(img: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Replace the image with one of its channels, chosen uniformly."""
    index = int(rng.integers(0, 3))
    return moderate_transform(img, ONE_HOT_WEIGHTS[index])


def broadcast_mono(img: np.ndarray) -> np.ndarray:
    """Replicate a single plane into three identical planes."""
    img = require_image(img)
    if img.shape[0] != 1:
        raise ShapeError(f"expected 1-channel image, got {img.shape[0]}")
    return np.repeat(img, 3, axis=0)
