"""
AU-driven face drawings
=======================

Map AU frames onto a 68-point template and rasterize them as landmark
dots or polylines.
"""

import sys
import tempfile
from pathlib import Path

import numpy as np

import aukit
from aukit.io import write_pgm

template = aukit.canonical_template()
basis = aukit.default_basis()

# open the jaw and raise both brows
v = np.zeros(24)
v[[6, 7, 8]] = [0.8, 0.8, 1.0]
face = aukit.apply_aus(template, basis, v)
moved = np.flatnonzero(np.any(face != template, axis=1))
print("moved points:", moved.tolist())

# the map is linear: half the intensity, half the displacement
half = aukit.apply_aus(template, basis, v / 2) - template
print(np.abs(2 * half - (face - template)).max())

# a short smile ramp drawn both ways
frames = np.zeros((5, 24))
frames[:, 11] = frames[:, 12] = np.linspace(0, 1, 5)
shapes = aukit.map_sequence(aukit.AuSequence.dense(frames, fps=5), basis, clamp=True)

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp())
for t, pts in enumerate(shapes):
    for mode in ("lmk", "rom"):
        img = aukit.rasterize(pts, 96, 96, mode)
        write_pgm(img, out / f"smile_{mode}_{t}.pgm")
print("lit pixels (rom):", [aukit.rasterize(p, 96, 96, "rom").lit for p in shapes])
print("wrote", len(list(out.glob("*.pgm"))), "images to", out)

# mouth landmark distance between the neutral and the full smile
print("M-LMD:", aukit.landmark_distance(shapes[-1:], shapes[:1], "mouth"))
