"""
Radical transformations: bounded linear scaling of random regions
==================================================================

The radical family multiplies random rectangles by random linear factors.
Each factor is capped by the reciprocal of the region's peak value, so the
result never leaves the unit interval, and a per-pixel memory matrix
tracks the accumulated change: once its minimum drops to ``t_min`` the
loop stops.  A factor of zero collapses the whole mechanism to classic
random erasing.

Run:  python demos/02_region_scaling.py
"""

from pathlib import Path

import numpy as np

from linaug import (
    ErasingParams,
    RrleParams,
    demo_scene,
    make_rng,
    random_erasing,
    render_all_bands,
    rrle,
    save_image,
)

out_dir = Path(__file__).parent / "output" / "02_region_scaling"

bands = render_all_bands(demo_scene())
visible = np.concatenate([bands["R"], bands["G"], bands["B"]], axis=0)
visible = visible.repeat(4, axis=1).repeat(4, axis=2)
save_image(visible, out_dir / "input.png")

params = RrleParams(p=1.0)  # gate forced on for the demo
print(f"defaults: beta_r={params.beta_r.beta}, t_min={params.t_min}, cap={params.max_iters}")

for seed in range(4):
    out, trace = rrle(visible, params, make_rng(seed), trace=True)
    save_image(out, out_dir / f"rrle_seed{seed}.png")
    print(
        f"seed {seed}: {len(trace.regions)} regions in {trace.attempts} attempts, "
        f"min(memory)={trace.memory.min():.4f}, "
        f"output range [{out.min():.3f}, {out.max():.3f}]"
    )

# The memory matrix itself, visualized for one run: dark cells changed most.
out, trace = rrle(visible, params, make_rng(11), trace=True)
memory_vis = np.clip(trace.memory.mean(axis=0, keepdims=True), 0.0, 1.0)
save_image(memory_vis, out_dir / "memory_matrix.png")

# Factor-zero special case: plain random erasing.
erased = random_erasing(visible, ErasingParams(p=1.0), make_rng(3))
save_image(erased, out_dir / "random_erasing.png")

# The same machinery works on single-band (infrared-like) images.
mono = bands["N"].repeat(4, axis=1).repeat(4, axis=2)
save_image(rrle(mono, params, make_rng(5)), out_dir / "rrle_infrared.png")

print(f"wrote images to {out_dir}")
