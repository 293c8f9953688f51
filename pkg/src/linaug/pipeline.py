"""Batch augmentation: declarative policies, dataset ingestion, per-image
deterministic seeding, and the runner that ties the stages together.

A policy is three probability-gated stages in a fixed order: moderate
channel mixing (visible images only, result broadcast back to three
planes), radical region scaling, then rectangle erasing.  Every image gets
its own seed derived by hashing the master seed with the image identifier,
and every stage draws from its own substream of that seed, so outputs do
not depend on batch order, worker count, or which other stages are enabled.
"""

import csv
import hashlib
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .core import BetaShape, ParameterError, from_uint8, make_rng, require_image, to_uint8
from .moderate import broadcast_mono, grayscale, mrle, random_channel
from .radical import ErasingParams, RrleParams, random_erasing, rrle

__all__ = [
    "PolicyError",
    "RunError",
    "ModerateStage",
    "AugmentPolicy",
    "ManifestRecord",
    "IngestItem",
    "PolicyTrace",
    "RunReport",
    "BenchReport",
    "MODALITIES",
    "default_policy",
    "policy_from_dict",
    "policy_to_dict",
    "load_policy",
    "loads_policy",
    "save_policy",
    "load_image",
    "save_image",
    "read_manifest",
    "scan_directory",
    "ingest",
    "derive_seed",
    "stage_rng",
    "apply_policy",
    "run_batch",
    "bench",
]

MODALITIES = ("visible", "infrared")
MODERATE_MODES = ("mrle", "grayscale", "random_channel")
IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")
_SEED_MASK = (1 << 64) - 1


class PolicyError(ValueError):
    """Config file is malformed or violates a field constraint."""


class RunError(RuntimeError):
    """Fatal batch-level failure (nothing was processed)."""


@dataclass(frozen=True)
class ModerateStage:
    enabled: bool = True
    probability: float = 0.5
    beta_m: BetaShape = field(default_factory=lambda: BetaShape(0.3))
    mode: str = "mrle"

    def __post_init__(self):
        if not (0.0 <= self.probability <= 1.0):
            raise ParameterError(f"probability must lie in [0, 1], got {self.probability}")
        if self.mode not in MODERATE_MODES:
            raise ParameterError(f"mode must be one of {MODERATE_MODES}, got {self.mode!r}")
        if not isinstance(self.beta_m, BetaShape):
            object.__setattr__(self, "beta_m", BetaShape(float(self.beta_m)))


@dataclass(frozen=True)
class AugmentPolicy:
    """Master seed plus the three stage configurations (fixed order)."""

    master_seed: int = 0
    moderate: ModerateStage = field(default_factory=ModerateStage)
    radical_enabled: bool = True
    radical: RrleParams = field(default_factory=RrleParams)
    erasing_enabled: bool = True
    erasing: ErasingParams = field(default_factory=ErasingParams)

    def __post_init__(self):
        if not (0 <= int(self.master_seed) <= _SEED_MASK):
            raise ParameterError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}")


def default_policy(master_seed: int = 0) -> AugmentPolicy:
    return AugmentPolicy(master_seed=master_seed)


def _require_fields(cfg: dict, allowed, where: str):
    for key in cfg:
        if key not in allowed:
            raise PolicyError(f"unknown field {where}.{key}" if where else f"unknown field {key}")


def _get(cfg: dict, key: str, kind, default, where: str):
    if key not in cfg:
        return default
    value = cfg[key]
    if kind is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if kind is int and isinstance(value, int) and not isinstance(value, bool):
        return int(value)
    if kind is bool and isinstance(value, bool):
        return value
    if kind is str and isinstance(value, str):
        return value
    name = f"{where}.{key}" if where else key
    raise PolicyError(f"field {name} must be {kind.__name__}, got {value!r}")


def policy_from_dict(cfg: dict, source: str = "<policy>") -> AugmentPolicy:
    """Build a validated policy from plain data; unset fields take defaults."""
    if not isinstance(cfg, dict):
        raise PolicyError(f"{source}: policy must be an object, got {type(cfg).__name__}")
    _require_fields(cfg, {"master_seed", "moderate", "radical", "erasing"}, "")
    try:
        seed = _get(cfg, "master_seed", int, 0, "")

        mod_cfg = cfg.get("moderate", {})
        if not isinstance(mod_cfg, dict):
            raise PolicyError("field moderate must be an object")
        _require_fields(mod_cfg, {"enabled", "probability", "beta_m", "mode"}, "moderate")
        try:
            moderate = ModerateStage(
                enabled=_get(mod_cfg, "enabled", bool, True, "moderate"),
                probability=_get(mod_cfg, "probability", float, 0.5, "moderate"),
                beta_m=BetaShape(_get(mod_cfg, "beta_m", float, 0.3, "moderate")),
                mode=_get(mod_cfg, "mode", str, "mrle", "moderate"),
            )
        except ParameterError as exc:
            raise PolicyError(f"moderate: {exc}") from exc

        rad_cfg = cfg.get("radical", {})
        if not isinstance(rad_cfg, dict):
            raise PolicyError("field radical must be an object")
        _require_fields(
            rad_cfg,
            {"enabled", "probability", "s_min", "s_max", "r_min", "r_max", "beta_r", "t_min", "max_iters"},
            "radical",
        )
        rad_defaults = RrleParams()
        try:
            radical = RrleParams(
                p=_get(rad_cfg, "probability", float, rad_defaults.p, "radical"),
                s_min=_get(rad_cfg, "s_min", float, rad_defaults.s_min, "radical"),
                s_max=_get(rad_cfg, "s_max", float, rad_defaults.s_max, "radical"),
                r_min=_get(rad_cfg, "r_min", float, rad_defaults.r_min, "radical"),
                r_max=_get(rad_cfg, "r_max", float, rad_defaults.r_max, "radical"),
                beta_r=BetaShape(_get(rad_cfg, "beta_r", float, rad_defaults.beta_r.beta, "radical")),
                t_min=_get(rad_cfg, "t_min", float, rad_defaults.t_min, "radical"),
                max_iters=_get(rad_cfg, "max_iters", int, rad_defaults.max_iters, "radical"),
            )
        except ParameterError as exc:
            raise PolicyError(f"radical: {exc}") from exc

        er_cfg = cfg.get("erasing", {})
        if not isinstance(er_cfg, dict):
            raise PolicyError("field erasing must be an object")
        _require_fields(
            er_cfg, {"enabled", "probability", "s_min", "s_max", "r_min", "r_max"}, "erasing"
        )
        er_defaults = ErasingParams()
        try:
            erasing = ErasingParams(
                p=_get(er_cfg, "probability", float, er_defaults.p, "erasing"),
                s_min=_get(er_cfg, "s_min", float, er_defaults.s_min, "erasing"),
                s_max=_get(er_cfg, "s_max", float, er_defaults.s_max, "erasing"),
                r_min=_get(er_cfg, "r_min", float, er_defaults.r_min, "erasing"),
                r_max=_get(er_cfg, "r_max", float, er_defaults.r_max, "erasing"),
            )
        except ParameterError as exc:
            raise PolicyError(f"erasing: {exc}") from exc

        return AugmentPolicy(
            master_seed=seed,
            moderate=moderate,
            radical_enabled=_get(rad_cfg, "enabled", bool, True, "radical"),
            radical=radical,
            erasing_enabled=_get(er_cfg, "enabled", bool, True, "erasing"),
            erasing=erasing,
        )
    except ParameterError as exc:
        raise PolicyError(f"{source}: {exc}") from exc


def policy_to_dict(policy: AugmentPolicy) -> dict:
    return {
        "master_seed": policy.master_seed,
        "moderate": {
            "enabled": policy.moderate.enabled,
            "probability": policy.moderate.probability,
            "beta_m": policy.moderate.beta_m.beta,
            "mode": policy.moderate.mode,
        },
        "radical": {
            "enabled": policy.radical_enabled,
            "probability": policy.radical.p,
            "s_min": policy.radical.s_min,
            "s_max": policy.radical.s_max,
            "r_min": policy.radical.r_min,
            "r_max": policy.radical.r_max,
            "beta_r": policy.radical.beta_r.beta,
            "t_min": policy.radical.t_min,
            "max_iters": policy.radical.max_iters,
        },
        "erasing": {
            "enabled": policy.erasing_enabled,
            "probability": policy.erasing.p,
            "s_min": policy.erasing.s_min,
            "s_max": policy.erasing.s_max,
            "r_min": policy.erasing.r_min,
            "r_max": policy.erasing.r_max,
        },
    }


def loads_policy(text: str, source: str = "<policy>") -> AugmentPolicy:
    try:
        cfg = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise PolicyError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return policy_from_dict(cfg, source=source)


def load_policy(path) -> AugmentPolicy:
    """Read a JSON policy file; missing fields take the built-in defaults."""
    path = Path(path)
    return loads_policy(path.read_text(), source=str(path))


def save_policy(policy: AugmentPolicy, path):
    Path(path).write_text(json.dumps(policy_to_dict(policy), indent=2) + "\n")


# --------------------------------------------------------------------------
# Dataset ingestion


@dataclass(frozen=True)
class ManifestRecord:
    path: str
    modality: str           # "visible" | "infrared" | "auto" (inferred on decode)
    identifier: str
    relpath: str            # layout-mirroring output name


@dataclass
class IngestItem:
    record: ManifestRecord
    image: np.ndarray | None = None
    error: str | None = None
    warning: str | None = None


def load_image(path) -> np.ndarray:
    """Decode an 8-bit PNG/JPEG into a planar unit-interval array."""
    with Image.open(path) as im:
        if im.mode in ("I", "I;16", "I;16B", "I;16L", "F"):
            raise ValueError(f"{path}: {im.mode}-mode images are not supported (8-bit only)")
        if im.mode == "L":
            raw = np.asarray(im, dtype=np.uint8)[np.newaxis, :, :]
        else:
            raw = np.asarray(im.convert("RGB"), dtype=np.uint8).transpose(2, 0, 1)
    return from_uint8(raw)


def save_image(img: np.ndarray, path):
    """Quantize to 8 bits and write a PNG (mono or RGB by channel count)."""
    img = require_image(img)
    raw = to_uint8(img)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if raw.shape[0] == 1:
        Image.fromarray(raw[0], mode="L").save(path, format="PNG")
    else:
        Image.fromarray(raw.transpose(1, 2, 0), mode="RGB").save(path, format="PNG")


def _safe_relpath(raw: str) -> str:
    p = Path(raw)
    if p.is_absolute() or ".." in p.parts:
        return p.name
    return p.as_posix()


def read_manifest(path) -> list[ManifestRecord]:
    """Parse a delimited manifest with required header path,modality,identifier."""
    path = Path(path)
    records = []
    seen_paths = set()
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        header = set(reader.fieldnames or ())
        required = {"path", "modality", "identifier"}
        if not required <= header:
            raise ParameterError(
                f"{path}: manifest header must include {sorted(required)}, got {sorted(header)}"
            )
        for lineno, row in enumerate(reader, start=2):
            raw_path = (row["path"] or "").strip()
            if not raw_path:
                raise ParameterError(f"{path}:{lineno}: empty path")
            modality = (row["modality"] or "").strip().lower()
            if modality not in MODALITIES:
                raise ParameterError(
                    f"{path}:{lineno}: modality must be one of {MODALITIES}, got {modality!r}"
                )
            identifier = (row["identifier"] or "").strip() or raw_path
            resolved = raw_path if Path(raw_path).is_absolute() else str(path.parent / raw_path)
            if resolved in seen_paths:
                raise ParameterError(f"{path}:{lineno}: duplicate path {raw_path!r}")
            seen_paths.add(resolved)
            records.append(
                ManifestRecord(
                    path=resolved,
                    modality=modality,
                    identifier=identifier,
                    relpath=str(Path(_safe_relpath(raw_path)).with_suffix(".png")),
                )
            )
    return records


def scan_directory(root) -> list[ManifestRecord]:
    """Deterministic lexicographic scan for PNG/JPEG files under a directory."""
    root = Path(root)
    records = []
    paths = sorted(
        (p for p in root.rglob("*") if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES),
        key=lambda p: p.relative_to(root).as_posix(),
    )
    for p in paths:
        rel = p.relative_to(root).as_posix()
        records.append(
            ManifestRecord(
                path=str(p),
                modality="auto",
                identifier=rel,
                relpath=str(Path(rel).with_suffix(".png")),
            )
        )
    return records


def ingest(source) -> list[IngestItem]:
    """Load a manifest file or directory into decoded records.

    Per-record decode failures become error items and the batch continues;
    an input that yields no records at all is an error.
    """
    source = Path(source)
    if source.is_dir():
        records = scan_directory(source)
    elif source.is_file():
        records = read_manifest(source)
    else:
        raise ParameterError(f"input {source} is neither a directory nor a manifest file")
    if not records:
        raise ParameterError(f"no images found in {source}")

    items = []
    for record in records:
        try:
            image = load_image(record.path)
        except (OSError, UnidentifiedImageError, ValueError) as exc:
            items.append(IngestItem(record=record, error=f"{record.path}: {exc}"))
            continue
        actual = "visible" if image.shape[0] == 3 else "infrared"
        warning = None
        if record.modality not in ("auto", actual):
            warning = (
                f"{record.path}: listed as {record.modality} but decoded "
                f"{image.shape[0]}-channel; processed as {actual}"
            )
        final = ManifestRecord(
            path=record.path, modality=actual, identifier=record.identifier, relpath=record.relpath
        )
        items.append(IngestItem(record=final, image=image, warning=warning))
    return items


# --------------------------------------------------------------------------
# Seeding and policy application


def derive_seed(master_seed: int, identifier: str) -> int:
    """Order-independent 64-bit seed for one work item (SHA-256 based)."""
    digest = hashlib.sha256()
    digest.update((int(master_seed) & _SEED_MASK).to_bytes(8, "little"))
    digest.update(identifier.encode("utf-8"))
    return int.from_bytes(digest.digest()[:8], "little")


def stage_rng(seed: int, stage: str) -> np.random.Generator:
    """Independent generator for one pipeline stage of one image."""
    return make_rng(derive_seed(seed, "stage:" + stage))


@dataclass(frozen=True)
class PolicyTrace:
    moderate: bool = False
    radical: bool = False
    erasing: bool = False


def apply_policy(img: np.ndarray, modality: str, policy: AugmentPolicy, seed: int, trace: bool = False):
    """Run the fixed moderate -> radical -> erasing stage order on one image.

    The moderate stage only touches 3-channel visible images (its mono
    result is broadcast back to three planes); radical and erasing apply to
    both modalities.  Each stage draws from its own substream of ``seed``.
    """
    img = require_image(img)
    if modality not in MODALITIES:
        raise ParameterError(f"modality must be one of {MODALITIES}, got {modality!r}")
    out = img  # every stage op is out-of-place; copy only if nothing ran
    applied_moderate = applied_radical = applied_erasing = False

    if policy.moderate.enabled and modality == "visible" and out.shape[0] == 3:
        rng = stage_rng(seed, "moderate")
        if rng.random() < policy.moderate.probability:
            if policy.moderate.mode == "mrle":
                mono = mrle(out, policy.moderate.beta_m, rng)
            elif policy.moderate.mode == "grayscale":
                mono = grayscale(out)
            else:
                mono = random_channel(out, rng)
            out = broadcast_mono(mono)
            applied_moderate = True

    if policy.radical_enabled:
        out, rtrace = rrle(out, policy.radical, stage_rng(seed, "radical"), trace=True)
        applied_radical = rtrace.applied

    if policy.erasing_enabled:
        out, region = random_erasing(out, policy.erasing, stage_rng(seed, "erasing"), trace=True)
        applied_erasing = region is not None

    if out is img:
        out = img.copy()
    if trace:
        return out, PolicyTrace(applied_moderate, applied_radical, applied_erasing)
    return out


# --------------------------------------------------------------------------
# Batch runner and benchmark


@dataclass
class RunReport:
    total: int = 0
    processed: int = 0
    failed: int = 0
    stage_counts: dict = field(default_factory=lambda: {"moderate": 0, "radical": 0, "erasing": 0})
    errors: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    wall_time_s: float = 0.0
    images_per_second: float = 0.0
    workers: int = 1
    master_seed: int = 0

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"


def _augment_one(item: IngestItem, policy: AugmentPolicy, out_dir: Path):
    seed = derive_seed(policy.master_seed, item.record.identifier)
    image, ptrace = apply_policy(item.image, item.record.modality, policy, seed, trace=True)
    save_image(image, out_dir / item.record.relpath)
    return ptrace


def run_batch(source, policy: AugmentPolicy, out_dir, workers: int = 1) -> RunReport:
    """Augment every ingested image and write PNGs mirroring the input layout.

    Output bytes are fully determined by (inputs, policy, master seed) no
    matter the worker count, because every image derives its own seed from
    its identifier.  The report is also written to ``out_dir/report.json``.
    """
    if workers < 1:
        raise ParameterError(f"workers must be >= 1, got {workers}")
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        probe = out_dir / ".write-probe"
        probe.write_bytes(b"")
        probe.unlink()
    except OSError as exc:
        raise RunError(f"output directory {out_dir} is not writable: {exc}") from exc

    start = time.perf_counter()
    items = ingest(source)
    report = RunReport(total=len(items), workers=workers, master_seed=policy.master_seed)
    report.warnings = [i.warning for i in items if i.warning]
    report.errors = [i.error for i in items if i.error]
    report.failed = len(report.errors)
    good = [i for i in items if i.image is not None]

    def job(item):
        try:
            return item, _augment_one(item, policy, out_dir), None
        except Exception as exc:  # per-record failure, batch continues
            return item, None, f"{item.record.path}: {exc}"

    if workers == 1:
        results = [job(i) for i in good]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, good))

    for item, ptrace, error in results:
        if error is not None:
            report.errors.append(error)
            report.failed += 1
            continue
        report.processed += 1
        for stage in ("moderate", "radical", "erasing"):
            if getattr(ptrace, stage):
                report.stage_counts[stage] += 1

    report.wall_time_s = time.perf_counter() - start
    report.images_per_second = report.processed / report.wall_time_s if report.wall_time_s > 0 else 0.0
    (out_dir / "report.json").write_text(report.to_json())
    return report


@dataclass
class BenchReport:
    count: int
    height: int
    width: int
    workers: int
    wall_time_s: float
    images_per_second: float
    stage_counts: dict

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"


def bench(
    count: int,
    height: int,
    width: int,
    policy: AugmentPolicy | None = None,
    workers: int = 1,
) -> BenchReport:
    """Drive ``count`` synthetic visible images through the full policy.

    Images are generated in memory from per-index seeds, so the measurement
    covers augmentation work rather than disk and codec costs.
    """
    if count < 1 or height < 1 or width < 1:
        raise ParameterError("count, height, and width must all be >= 1")
    if workers < 1:
        raise ParameterError(f"workers must be >= 1, got {workers}")
    policy = policy or default_policy()

    def job(i: int):
        gen = make_rng(derive_seed(policy.master_seed, f"bench-gen:{i}"))
        img = gen.random((3, height, width))
        seed = derive_seed(policy.master_seed, f"bench-img:{i}")
        _, ptrace = apply_policy(img, "visible", policy, seed, trace=True)
        return ptrace

    start = time.perf_counter()
    if workers == 1:
        traces = [job(i) for i in range(count)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            traces = list(pool.map(job, range(count)))
    elapsed = time.perf_counter() - start

    counts = {"moderate": 0, "radical": 0, "erasing": 0}
    for ptrace in traces:
        for stage in counts:
            if getattr(ptrace, stage):
                counts[stage] += 1
    return BenchReport(
        count=count,
        height=height,
        width=width,
        workers=workers,
        wall_time_s=elapsed,
        images_per_second=count / elapsed if elapsed > 0 else 0.0,
        stage_counts=counts,
    )
