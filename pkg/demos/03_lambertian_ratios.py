"""
Why local linear transforms: the Lambertian band-ratio prior
============================================================

Under a Lambertian model with one light source, the ratio between two
spectral bands of the same pixel depends only on the surface material:
shading and illumination intensity cancel.  Rendering a synthetic scene
and mapping the near-infrared/green ratio makes this visible — the map is
flat within each material and steps between materials.  Cross-band
appearance change is therefore a patchwork of per-material linear scalings,
which is the transformation family the augmentation side imitates.

Run:  python demos/03_lambertian_ratios.py
"""

from pathlib import Path

import numpy as np

from linaug import (
    band_ratio_map,
    demo_scene,
    export_ratio_map,
    make_rng,
    ratio_constancy_stats,
    render_all_bands,
    save_image,
    SceneSpec,
)

out_dir = Path(__file__).parent / "output" / "03_lambertian_ratios"
out_dir.mkdir(parents=True, exist_ok=True)

scene = demo_scene()
print(f"scene: {scene.width}x{scene.height}, {len(scene.materials)} materials, "
      f"{len(scene.bands)} bands")

rendered = render_all_bands(scene)
for name, img in rendered.items():
    save_image(img, out_dir / f"band_{name}.png")

# Near-infrared over green: constant inside each material.
ratio = band_ratio_map(rendered["N"], rendered["G"])
export_ratio_map(ratio, out_dir / "ratio_N_over_G")
for material, label in enumerate(("backdrop", "foliage", "fabric")):
    stats = ratio_constancy_stats(ratio, scene.material_mask(material))
    print(f"  {label:9s}: ratio mean={stats.mean:.4f}  stddev={stats.stddev:.2e}  cv={stats.cv:.2e}")

whole = ratio_constancy_stats(ratio, np.ones((scene.height, scene.width), dtype=bool))
print(f"  whole img: ratio mean={whole.mean:.4f}  cv={whole.cv:.2e}  <- materials mix")

# Scramble the shading field: every band changes, no ratio does.
field = 0.25 + make_rng(0).random((scene.height, scene.width)) * 3.0
rescaled = SceneSpec(
    width=scene.width, height=scene.height, material_map=scene.material_map,
    materials=scene.materials, bands=scene.bands,
    shading=scene.shading * field, incident_ratio=scene.incident_ratio,
)
re_rendered = render_all_bands(rescaled)
re_ratio = band_ratio_map(re_rendered["N"], re_rendered["G"])
both = ratio.mask & re_ratio.mask
drift = np.max(np.abs(re_ratio.values[both] - ratio.values[both]) / ratio.values[both])
print(f"max relative ratio drift after shading rescale: {drift:.2e}")

print(f"wrote images to {out_dir}")
