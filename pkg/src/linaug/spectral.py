"""Synthetic Lambertian scenes and cross-band ratio analysis.

A scene is a material index map plus tabulated spectral curves: per-material
reflectance, and per-band illuminant power distribution and sensor
sensitivity, all sampled on one uniform wavelength grid.  The sensor
response of a pixel is

    shading(x, y) * incident_ratio * intensity_j * sum_l F_j(l) S_m(l) Q_j(l) dl

evaluated with a rectangle rule over the grid.  Rendered bands are rescaled
by one scene-wide normalization constant (the reciprocal of the largest raw
response across all bands) so values stay in the unit interval; because the
constant is shared, it cancels out of every band ratio.

The ratio of two bands depends only on the material under the pixel, never
on shading or illumination intensity of the pixel, which is what the
banded-transform experiment below probes from the augmentation side.
"""

from dataclasses import dataclass

import numpy as np

from .core import ParameterError, ShapeError, require_image

__all__ = [
    "SpectralCurve",
    "Band",
    "SceneSpec",
    "RatioMap",
    "RatioStats",
    "DiscrepancyStats",
    "scene_normalization",
    "render_band",
    "render_all_bands",
    "band_ratio_map",
    "ratio_constancy_stats",
    "band_rows",
    "max_band_factors",
    "banded_linear_transform",
    "pixel_discrepancy",
]

DEFAULT_EPS = 1.0 / 255.0


@dataclass(frozen=True)
class SpectralCurve:
    """Non-negative samples on a uniform wavelength grid (nanometres)."""

    wavelengths: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        wl = np.asarray(self.wavelengths, dtype=np.float64)
        vals = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "wavelengths", wl)
        object.__setattr__(self, "values", vals)
        if wl.ndim != 1 or wl.size < 2:
            raise ShapeError(f"wavelength grid needs >= 2 points, got shape {wl.shape}")
        if vals.shape != wl.shape:
            raise ShapeError(f"curve has {vals.shape} values for {wl.shape} grid points")
        steps = np.diff(wl)
        if not np.all(steps > 0) or not np.allclose(steps, steps[0], rtol=1e-9, atol=1e-9):
            raise ParameterError("wavelength grid must be strictly increasing with uniform spacing")
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise ParameterError("curve values must be finite and >= 0")

    @property
    def step(self) -> float:
        return float(self.wavelengths[1] - self.wavelengths[0])

    def same_grid(self, other: "SpectralCurve") -> bool:
        return self.wavelengths.shape == other.wavelengths.shape and bool(
            np.array_equal(self.wavelengths, other.wavelengths)
        )

    @classmethod
    def flat(cls, level: float, start: float = 400.0, stop: float = 1000.0, step: float = 10.0):
        grid = np.arange(start, stop + 0.5 * step, step, dtype=np.float64)
        return cls(grid, np.full_like(grid, float(level)))


@dataclass(frozen=True)
class Band:
    """One sensing channel: illuminant SPD, sensor sensitivity, intensity."""

    name: str
    spd: SpectralCurve
    sensitivity: SpectralCurve
    intensity: float = 1.0

    def __post_init__(self):
        if not (self.intensity > 0):
            raise ParameterError(f"band intensity must be > 0, got {self.intensity}")
        if not self.spd.same_grid(self.sensitivity):
            raise ShapeError(f"band {self.name!r}: SPD and sensitivity grids differ")


@dataclass(frozen=True)
class SceneSpec:
    """Discretized Lambertian scene."""

    width: int
    height: int
    material_map: np.ndarray
    materials: tuple[SpectralCurve, ...]
    bands: tuple[Band, ...]
    shading: np.ndarray
    incident_ratio: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "materials", tuple(self.materials))
        object.__setattr__(self, "bands", tuple(self.bands))
        mmap = np.asarray(self.material_map, dtype=np.intp)
        shade = np.asarray(self.shading, dtype=np.float64)
        object.__setattr__(self, "material_map", mmap)
        object.__setattr__(self, "shading", shade)
        if self.width < 1 or self.height < 1:
            raise ParameterError(f"scene must be at least 1x1, got {self.width}x{self.height}")
        if mmap.shape != (self.height, self.width):
            raise ShapeError(f"material map shape {mmap.shape} != ({self.height}, {self.width})")
        if shade.shape != (self.height, self.width):
            raise ShapeError(f"shading shape {shade.shape} != ({self.height}, {self.width})")
        if not self.materials:
            raise ParameterError("scene needs at least one material")
        if not self.bands:
            raise ParameterError("scene needs at least one band")
        if mmap.min() < 0 or mmap.max() >= len(self.materials):
            raise ParameterError(
                f"material indices must lie in [0, {len(self.materials) - 1}]"
            )
        if not np.all(np.isfinite(shade)) or np.any(shade < 0):
            raise ParameterError("shading must be finite and >= 0")
        if not (self.incident_ratio > 0):
            raise ParameterError(f"incident_ratio must be > 0, got {self.incident_ratio}")
        grid = self.materials[0]
        for curve in self.materials:
            if not grid.same_grid(curve):
                raise ShapeError("all material reflectances must share one wavelength grid")
        for band in self.bands:
            if not grid.same_grid(band.spd):
                raise ShapeError(f"band {band.name!r} grid differs from the material grid")

    def band_index(self, name_or_index) -> int:
        if isinstance(name_or_index, str):
            for i, band in enumerate(self.bands):
                if band.name == name_or_index:
                    return i
            raise ParameterError(f"no band named {name_or_index!r}")
        i = int(name_or_index)
        if not (0 <= i < len(self.bands)):
            raise ParameterError(f"band index {i} out of range")
        return i

    def material_mask(self, material: int) -> np.ndarray:
        """Boolean (H, W) mask of pixels carrying the given material."""
        return self.material_map == int(material)


@dataclass(frozen=True)
class RatioMap:
    """Per-pixel band ratio with a validity mask (denominator >= eps)."""

    values: np.ndarray
    mask: np.ndarray

    def defined_values(self) -> np.ndarray:
        return self.values[self.mask]


@dataclass(frozen=True)
class RatioStats:
    mean: float
    stddev: float
    cv: float


@dataclass(frozen=True)
class DiscrepancyStats:
    mean_abs_diff: float
    histogram_distance: float


def _band_material_integrals(scene: SceneSpec, band: Band) -> np.ndarray:
    """Rectangle-rule integral of F*S*Q per material, scaled by beta*omega."""
    step = scene.materials[0].step
    out = np.empty(len(scene.materials), dtype=np.float64)
    weight = band.spd.values * band.sensitivity.values
    for m, refl in enumerate(scene.materials):
        out[m] = scene.incident_ratio * band.intensity * float(np.sum(weight * refl.values) * step)
    return out


def _render_raw(scene: SceneSpec, band: Band) -> np.ndarray:
    integrals = _band_material_integrals(scene, band)
    return scene.shading * integrals[scene.material_map]


def scene_normalization(scene: SceneSpec) -> float:
    """Reciprocal of the largest raw response over all bands (1.0 if dark).

    One shared constant per scene, so ratios between bands are unaffected.
    """
    peak = 0.0
    for band in scene.bands:
        peak = max(peak, float(_render_raw(scene, band).max()))
    if peak == 0.0:
        return 1.0
    return 1.0 / peak


def render_band(scene: SceneSpec, band, normalization: float | None = None) -> np.ndarray:
    """Render one band to a single-channel unit-interval image.

    ``normalization`` defaults to :func:`scene_normalization`; pass 1.0 for
    raw responses.
    """
    index = scene.band_index(band)
    if normalization is None:
        normalization = scene_normalization(scene)
    raw = _render_raw(scene, scene.bands[index])
    return (raw * normalization)[np.newaxis, :, :]


def render_all_bands(scene: SceneSpec) -> dict[str, np.ndarray]:
    """Render every band with the shared scene normalization."""
    norm = scene_normalization(scene)
    return {band.name: render_band(scene, i, norm) for i, band in enumerate(scene.bands)}


def band_ratio_map(num: np.ndarray, den: np.ndarray, eps: float = DEFAULT_EPS) -> RatioMap:
    """Per-pixel ratio num/den, defined only where the denominator >= eps."""
    num = np.asarray(num, dtype=np.float64)
    den = np.asarray(den, dtype=np.float64)
    if num.ndim == 3:
        if num.shape[0] != 1:
            raise ShapeError(f"ratio inputs must be single-channel, got {num.shape[0]} channels")
        num = num[0]
    if den.ndim == 3:
        if den.shape[0] != 1:
            raise ShapeError(f"ratio inputs must be single-channel, got {den.shape[0]} channels")
        den = den[0]
    if num.shape != den.shape:
        raise ShapeError(f"band shapes differ: {num.shape} vs {den.shape}")
    if not (eps > 0):
        raise ParameterError(f"eps must be > 0, got {eps}")
    mask = den >= eps
    values = np.full(num.shape, np.nan)
    np.divide(num, den, out=values, where=mask)
    return RatioMap(values=values, mask=mask)


def ratio_constancy_stats(ratio: RatioMap, region_mask: np.ndarray) -> RatioStats:
    """Mean, standard deviation, and coefficient of variation of the ratio
    over the defined pixels selected by ``region_mask``."""
    region_mask = np.asarray(region_mask, dtype=bool)
    if region_mask.shape != ratio.values.shape:
        raise ShapeError(f"region mask shape {region_mask.shape} != ratio shape {ratio.values.shape}")
    chosen = ratio.values[region_mask & ratio.mask]
    if chosen.size < 2:
        raise ParameterError(f"region must contain >= 2 defined pixels, got {chosen.size}")
    mean = float(chosen.mean())
    stddev = float(chosen.std())
    if stddev == 0.0:
        cv = 0.0
    elif mean == 0.0:
        cv = float("inf")
    else:
        cv = stddev / mean
    return RatioStats(mean=mean, stddev=stddev, cv=cv)


def band_rows(height: int, n_bands: int, k: int) -> tuple[int, int]:
    """Row range [start, stop) of the k-th of n horizontal bands."""
    return (k * height) // n_bands, ((k + 1) * height) // n_bands


def max_band_factors(img: np.ndarray, n_bands: int) -> np.ndarray:
    """Largest per-band factors that keep the image within the unit bound."""
    img = require_image(img)
    if n_bands < 1:
        raise ParameterError(f"n_bands must be >= 1, got {n_bands}")
    height = img.shape[1]
    out = np.empty(n_bands, dtype=np.float64)
    for k in range(n_bands):
        lo, hi = band_rows(height, n_bands, k)
        peak = float(img[:, lo:hi, :].max()) if hi > lo else 0.0
        out[k] = 1.0 if peak == 0.0 else 1.0 / peak
    return out


def banded_linear_transform(img: np.ndarray, factors, n_bands: int) -> np.ndarray:
    """Multiply each of ``n_bands`` horizontal strips by its own factor.

    Band k covers rows ``floor(k*H/n)`` to ``floor((k+1)*H/n)`` across all
    channels.  Factors must be non-negative and small enough to keep every
    pixel at or below 1.
    """
    img = require_image(img)
    if n_bands < 1:
        raise ParameterError(f"n_bands must be >= 1, got {n_bands}")
    factors = [float(f) for f in factors]
    if len(factors) != n_bands:
        raise ParameterError(f"need {n_bands} factors, got {len(factors)}")
    height = img.shape[1]
    out = img.copy()
    for k, f in enumerate(factors):
        if f < 0:
            raise ParameterError(f"factor for band {k} must be >= 0, got {f}")
        lo, hi = band_rows(height, n_bands, k)
        if hi <= lo:
            continue
        strip = out[:, lo:hi, :]
        peak = float(strip.max())
        if f * peak > 1.0:
            raise ParameterError(
                f"factor {f} for band {k} pushes peak {peak} above 1"
            )
        strip *= f
        np.minimum(strip, 1.0, out=strip)
    return out


def pixel_discrepancy(a: np.ndarray, b: np.ndarray, bins: int = 64) -> DiscrepancyStats:
    """Pixel-space distance between two images of identical shape.

    ``mean_abs_diff`` is the mean absolute per-pixel difference;
    ``histogram_distance`` is the L1 distance between per-channel value
    histograms (``bins`` equal bins over [0, 1], normalized to sum 1),
    averaged over channels.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeError(f"image shapes differ: {a.shape} vs {b.shape}")
    mean_abs = float(np.mean(np.abs(a - b)))
    dist = 0.0
    channels = a.shape[0]
    for c in range(channels):
        ha, _ = np.histogram(a[c], bins=bins, range=(0.0, 1.0))
        hb, _ = np.histogram(b[c], bins=bins, range=(0.0, 1.0))
        n = a[c].size
        dist += float(np.abs(ha / n - hb / n).sum())
    return DiscrepancyStats(mean_abs_diff=mean_abs, histogram_distance=dist / channels)
