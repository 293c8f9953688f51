"""Scene configuration files, the bundled demo scene, and ratio-map export.

Scene files are JSON with the following shape (all wavelengths in nm)::

    {
      "width": 64, "height": 48,
      "grid": {"start_nm": 400, "stop_nm": 1000, "step_nm": 10},
      "incident_ratio": 1.0,
      "background_material": "backdrop",
      "materials": [{"name": "backdrop", "reflectance": <curve>}, ...],
      "regions": [{"material": "foliage", "rect": [x, y, w, h]},
                  {"material": "fabric", "polygon": [[x, y], ...]}],
      "bands": [{"name": "G", "intensity": 1.0,
                 "spd": <curve>, "sensitivity": <curve>}, ...],
      "shading": 1.0
               | {"gradient": {"top": 0.4, "bottom": 1.0}}
               | {"values": [[...], ...]}
    }

A ``<curve>`` is either a list of samples matching the grid, or
``{"wavelengths_nm": [...], "values": [...]}`` resampled onto the grid by
linear interpolation.  Material assignments paint in file order over the
background; polygons are filled by the even-odd rule against pixel centers.
"""

import json
from importlib import resources
from pathlib import Path

import numpy as np
from PIL import Image

from .core import ParameterError
from .spectral import Band, RatioMap, SceneSpec, SpectralCurve

__all__ = [
    "load_scene",
    "scene_from_dict",
    "demo_scene",
    "demo_scene_path",
    "fill_polygon",
    "false_color",
    "export_ratio_map",
]

# Five-anchor viridis-style ramp for false-color export.
_RAMP_POS = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
_RAMP_RGB = np.array(
    [[68, 1, 84], [59, 82, 139], [33, 145, 140], [94, 201, 98], [253, 231, 37]],
    dtype=np.float64,
)


def _fail(source: str, field: str, message: str):
    raise ParameterError(f"{source}: field {field}: {message}")


def _parse_grid(cfg, source) -> np.ndarray:
    grid_cfg = cfg.get("grid", {"start_nm": 400.0, "stop_nm": 1000.0, "step_nm": 10.0})
    if not isinstance(grid_cfg, dict):
        _fail(source, "grid", "must be an object")
    start = float(grid_cfg.get("start_nm", 400.0))
    stop = float(grid_cfg.get("stop_nm", 1000.0))
    step = float(grid_cfg.get("step_nm", 10.0))
    if not (step > 0 and stop > start):
        _fail(source, "grid", f"need stop_nm > start_nm and step_nm > 0, got [{start}, {stop}] @ {step}")
    return np.arange(start, stop + 0.5 * step, step, dtype=np.float64)


def _parse_curve(raw, grid: np.ndarray, source: str, field: str) -> SpectralCurve:
    if isinstance(raw, list):
        values = np.asarray(raw, dtype=np.float64)
        if values.shape != grid.shape:
            _fail(source, field, f"expected {grid.size} samples on the grid, got {values.size}")
    elif isinstance(raw, dict) and {"wavelengths_nm", "values"} <= set(raw):
        wl = np.asarray(raw["wavelengths_nm"], dtype=np.float64)
        vals = np.asarray(raw["values"], dtype=np.float64)
        if wl.ndim != 1 or wl.shape != vals.shape or wl.size < 2:
            _fail(source, field, "wavelengths_nm and values must be 1-D lists of equal length >= 2")
        values = np.interp(grid, wl, vals)
    else:
        _fail(source, field, "curve must be a sample list or {wavelengths_nm, values}")
    try:
        return SpectralCurve(grid, values)
    except ValueError as exc:
        _fail(source, field, str(exc))


def fill_polygon(vertices, width: int, height: int) -> np.ndarray:
    """Even-odd rasterization of a polygon against pixel centers."""
    verts = np.asarray(vertices, dtype=np.float64)
    if verts.ndim != 2 or verts.shape[1] != 2 or verts.shape[0] < 3:
        raise ParameterError(f"polygon needs >= 3 [x, y] vertices, got shape {verts.shape}")
    px = np.arange(width, dtype=np.float64) + 0.5
    py = np.arange(height, dtype=np.float64) + 0.5
    xs, ys = np.meshgrid(px, py)
    inside = np.zeros((height, width), dtype=bool)
    n = verts.shape[0]
    for i in range(n):
        x0, y0 = verts[i]
        x1, y1 = verts[(i + 1) % n]
        if y0 == y1:
            continue
        crosses = (ys >= min(y0, y1)) & (ys < max(y0, y1))
        x_at = x0 + (ys - y0) * (x1 - x0) / (y1 - y0)
        inside ^= crosses & (xs < x_at)
    return inside


def _parse_shading(raw, width: int, height: int, source: str) -> np.ndarray:
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return np.full((height, width), float(raw))
    if isinstance(raw, dict) and "gradient" in raw:
        grad = raw["gradient"]
        top = float(grad.get("top", 1.0))
        bottom = float(grad.get("bottom", 1.0))
        col = np.linspace(top, bottom, height)
        return np.repeat(col[:, np.newaxis], width, axis=1)
    if isinstance(raw, dict) and "values" in raw:
        values = np.asarray(raw["values"], dtype=np.float64)
        if values.shape != (height, width):
            _fail(source, "shading.values", f"expected shape ({height}, {width}), got {values.shape}")
        return values
    _fail(source, "shading", "must be a number, {gradient: {top, bottom}}, or {values: [[...]]}")


def scene_from_dict(cfg: dict, source: str = "<scene>") -> SceneSpec:
    """Build a validated scene from plain data (see module docstring)."""
    if not isinstance(cfg, dict):
        raise ParameterError(f"{source}: scene must be an object")
    for field in ("width", "height", "materials", "bands"):
        if field not in cfg:
            _fail(source, field, "is required")
    width, height = int(cfg["width"]), int(cfg["height"])
    grid = _parse_grid(cfg, source)

    names = []
    materials = []
    for i, mat in enumerate(cfg["materials"]):
        if not isinstance(mat, dict) or "reflectance" not in mat:
            _fail(source, f"materials[{i}]", "must be an object with a reflectance curve")
        names.append(str(mat.get("name", f"material-{i}")))
        materials.append(_parse_curve(mat["reflectance"], grid, source, f"materials[{i}].reflectance"))
    index_of = {name: i for i, name in enumerate(names)}

    def material_index(ref, field):
        if isinstance(ref, str):
            if ref not in index_of:
                _fail(source, field, f"unknown material {ref!r}")
            return index_of[ref]
        i = int(ref)
        if not (0 <= i < len(materials)):
            _fail(source, field, f"material index {i} out of range")
        return i

    background = material_index(cfg.get("background_material", 0), "background_material")
    material_map = np.full((height, width), background, dtype=np.intp)
    for i, region in enumerate(cfg.get("regions", [])):
        if not isinstance(region, dict) or "material" not in region:
            _fail(source, f"regions[{i}]", "must be an object with a material")
        mat = material_index(region["material"], f"regions[{i}].material")
        if "rect" in region:
            x, y, w, h = (int(v) for v in region["rect"])
            if w < 1 or h < 1 or x < 0 or y < 0 or x + w > width or y + h > height:
                _fail(source, f"regions[{i}].rect", f"rect [{x}, {y}, {w}, {h}] does not fit the scene")
            material_map[y : y + h, x : x + w] = mat
        elif "polygon" in region:
            material_map[fill_polygon(region["polygon"], width, height)] = mat
        else:
            _fail(source, f"regions[{i}]", "needs a rect or a polygon")

    bands = []
    for i, band in enumerate(cfg["bands"]):
        if not isinstance(band, dict) or not {"spd", "sensitivity"} <= set(band):
            _fail(source, f"bands[{i}]", "must be an object with spd and sensitivity curves")
        bands.append(
            Band(
                name=str(band.get("name", f"band-{i}")),
                spd=_parse_curve(band["spd"], grid, source, f"bands[{i}].spd"),
                sensitivity=_parse_curve(band["sensitivity"], grid, source, f"bands[{i}].sensitivity"),
                intensity=float(band.get("intensity", 1.0)),
            )
        )

    shading = _parse_shading(cfg.get("shading", 1.0), width, height, source)
    return SceneSpec(
        width=width,
        height=height,
        material_map=material_map,
        materials=tuple(materials),
        bands=tuple(bands),
        shading=shading,
        incident_ratio=float(cfg.get("incident_ratio", 1.0)),
    )


def load_scene(path) -> SceneSpec:
    path = Path(path)
    try:
        cfg = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParameterError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return scene_from_dict(cfg, source=str(path))


def demo_scene_path() -> Path:
    """Filesystem path of the bundled three-material, four-band demo scene."""
    return Path(resources.files("linaug").joinpath("data/demo_scene.json"))


def demo_scene() -> SceneSpec:
    return load_scene(demo_scene_path())


def false_color(values: np.ndarray, mask: np.ndarray | None = None,
                vmin: float | None = None, vmax: float | None = None) -> np.ndarray:
    """Map scalars through the built-in ramp to an (H, W, 3) uint8 image.

    Masked-out pixels render black.  Limits default to the min/max of the
    valid values.
    """
    values = np.asarray(values, dtype=np.float64)
    if mask is None:
        mask = np.isfinite(values)
    else:
        mask = np.asarray(mask, dtype=bool) & np.isfinite(values)
    out = np.zeros(values.shape + (3,), dtype=np.uint8)
    if not mask.any():
        return out
    valid = values[mask]
    lo = float(valid.min()) if vmin is None else float(vmin)
    hi = float(valid.max()) if vmax is None else float(vmax)
    span = hi - lo if hi > lo else 1.0
    t = np.clip((values[mask] - lo) / span, 0.0, 1.0)
    rgb = np.stack([np.interp(t, _RAMP_POS, _RAMP_RGB[:, c]) for c in range(3)], axis=-1)
    out[mask] = np.rint(rgb).astype(np.uint8)
    return out


def export_ratio_map(ratio: RatioMap, prefix,
                     vmin: float | None = None, vmax: float | None = None) -> tuple[Path, Path]:
    """Write ``<prefix>.png`` (false color) and ``<prefix>.npz`` (raw values/mask)."""
    prefix = Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    png_path = prefix.with_suffix(".png")
    npz_path = prefix.with_suffix(".npz")
    Image.fromarray(false_color(ratio.values, ratio.mask, vmin, vmax), mode="RGB").save(
        png_path, format="PNG"
    )
    np.savez(npz_path, values=ratio.values, mask=ratio.mask)
    return png_path, npz_path
