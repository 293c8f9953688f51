"""Command-line front end.

Subcommands: ``augment`` (batch transform a manifest or directory),
``analyze-ratio`` (band-ratio map between two images), ``render-scene``
(synthetic Lambertian scene to band images), ``simulate-bands``
(horizontal banded linear transform plus discrepancy metrics), and
``bench`` (synthetic throughput measurement).
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .core import ParameterError, ShapeError
from .pipeline import (
    PolicyError,
    RunError,
    bench,
    default_policy,
    load_image,
    load_policy,
    run_batch,
    save_image,
)
from .scene_io import export_ratio_map, load_scene
from .spectral import (
    DEFAULT_EPS,
    band_ratio_map,
    banded_linear_transform,
    pixel_discrepancy,
    ratio_constancy_stats,
    render_all_bands,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="linaug", description=__doc__)
    parser.add_argument("--version", action="version", version=f"linaug {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("augment", help="augment a manifest or directory of images")
    p.add_argument("input", help="manifest CSV (path,modality,identifier) or image directory")
    p.add_argument("--config", help="policy JSON file (defaults apply when omitted)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, help="override the policy master seed")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("analyze-ratio", help="band-ratio map between two band images")
    p.add_argument("numerator", help="numerator band image (8-bit PNG/JPEG)")
    p.add_argument("denominator", help="denominator band image")
    p.add_argument("--eps", type=float, default=DEFAULT_EPS,
                   help="denominator cutoff below which the ratio is undefined")
    p.add_argument("--out", required=True, help="output prefix for .png and .npz")

    p = sub.add_parser("render-scene", help="render every band of a scene spec")
    p.add_argument("scene", help="scene JSON file")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("simulate-bands", help="multiply horizontal bands by given factors")
    p.add_argument("image", help="input image")
    p.add_argument("--factors", required=True,
                   help="comma-separated per-band factors, e.g. 0.4,1.0,0.7,1.2,0.5,0.9")
    p.add_argument("--out", required=True, help="output image path")

    p = sub.add_parser("bench", help="synthetic throughput benchmark")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--height", type=int, default=384)
    p.add_argument("--width", type=int, default=192)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--config", help="policy JSON file")
    p.add_argument("--seed", type=int, help="override the policy master seed")
    p.add_argument("--out", help="write the report JSON here as well")
    return parser


def _policy_for(args):
    policy = load_policy(args.config) if args.config else default_policy()
    if getattr(args, "seed", None) is not None:
        from dataclasses import replace

        policy = replace(policy, master_seed=args.seed)
    return policy


def _cmd_augment(args) -> int:
    report = run_batch(args.input, _policy_for(args), args.out, workers=args.workers)
    sys.stdout.write(report.to_json())
    return 0


def _cmd_analyze_ratio(args) -> int:
    num = load_image(args.numerator)
    den = load_image(args.denominator)
    if num.shape[0] == 3:
        num = num.mean(axis=0, keepdims=True)
    if den.shape[0] == 3:
        den = den.mean(axis=0, keepdims=True)
    ratio = band_ratio_map(num, den, eps=args.eps)
    png_path, npz_path = export_ratio_map(ratio, args.out)
    summary = {"png": str(png_path), "npz": str(npz_path),
               "defined_fraction": float(ratio.mask.mean())}
    if ratio.mask.sum() >= 2:
        stats = ratio_constancy_stats(ratio, np.ones_like(ratio.mask))
        summary.update(mean=stats.mean, stddev=stats.stddev, cv=stats.cv)
    sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    return 0


def _cmd_render_scene(args) -> int:
    scene = load_scene(args.scene)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rendered = render_all_bands(scene)
    arrays = {}
    for name, img in rendered.items():
        save_image(img, out_dir / f"band_{name}.png")
        arrays[name] = img[0]
    np.savez(out_dir / "bands.npz", **arrays)
    sys.stdout.write(json.dumps({"bands": sorted(rendered), "out": str(out_dir)}, indent=2) + "\n")
    return 0


def _cmd_simulate_bands(args) -> int:
    img = load_image(args.image)
    try:
        factors = [float(v) for v in args.factors.split(",") if v.strip()]
    except ValueError:
        raise ParameterError(f"--factors must be comma-separated numbers, got {args.factors!r}")
    out = banded_linear_transform(img, factors, len(factors))
    save_image(out, args.out)
    stats = pixel_discrepancy(img, out)
    sys.stdout.write(json.dumps({
        "out": args.out,
        "n_bands": len(factors),
        "mean_abs_diff": stats.mean_abs_diff,
        "histogram_distance": stats.histogram_distance,
    }, indent=2) + "\n")
    return 0


def _cmd_bench(args) -> int:
    report = bench(args.count, args.height, args.width, _policy_for(args), workers=args.workers)
    text = report.to_json()
    sys.stdout.write(text)
    if args.out:
        Path(args.out).write_text(text)
    return 0


_COMMANDS = {
    "augment": _cmd_augment,
    "analyze-ratio": _cmd_analyze_ratio,
    "render-scene": _cmd_render_scene,
    "simulate-bands": _cmd_simulate_bands,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ParameterError, ShapeError, PolicyError, RunError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
