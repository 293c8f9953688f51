"""
Moderate transformations: convex channel mixing
================================================

A visible image's three channels are highly correlated views of the same
scene.  Any convex combination of them is another plausible single-band
view, and that is exactly what the moderate family produces: grayscale and
single-channel selection are fixed corners of the weight simplex, and
``mrle`` samples the simplex at random with U-shaped Beta marginals so that
corner-like mixes appear often.

Run:  python demos/01_channel_mixing.py
"""

from pathlib import Path

import numpy as np

from linaug import (
    BetaShape,
    broadcast_mono,
    demo_scene,
    grayscale,
    make_rng,
    mrle,
    random_channel,
    render_all_bands,
    sample_mix_weights,
    save_image,
)

out_dir = Path(__file__).parent / "output" / "01_channel_mixing"

# A structured test image: the bundled Lambertian scene rendered in R/G/B,
# stacked into a visible image and upsampled for easier viewing.
bands = render_all_bands(demo_scene())
visible = np.concatenate([bands["R"], bands["G"], bands["B"]], axis=0)
visible = visible.repeat(4, axis=1).repeat(4, axis=2)
save_image(visible, out_dir / "input.png")
print(f"input image: {visible.shape}, values in [{visible.min():.3f}, {visible.max():.3f}]")

# The two classic special cases.
save_image(broadcast_mono(grayscale(visible)), out_dir / "grayscale.png")
save_image(broadcast_mono(random_channel(visible, make_rng(7))), out_dir / "random_channel.png")

# Randomized mixing: same image, five seeds, five different convex mixes.
shape = BetaShape(0.3)
for seed in range(5):
    mixed = mrle(visible, shape, make_rng(seed))
    save_image(broadcast_mono(mixed), out_dir / f"mrle_seed{seed}.png")

# What do the sampled weights look like?  With beta=0.3 most draws hug the
# corners and edges of the simplex; with beta=1 they spread out evenly.
for beta in (0.3, 1.0):
    rng = make_rng(42)
    dominant = 0
    n = 20_000
    for _ in range(n):
        w = sample_mix_weights(BetaShape(beta), rng)
        if max(w.w_r, w.w_g, w.w_b) > 0.9:
            dominant += 1
    print(f"beta={beta}: {dominant / n:.1%} of draws have a dominant (>0.9) weight")

print(f"wrote images to {out_dir}")
