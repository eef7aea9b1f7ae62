"""
Guidance arithmetic and evaluation
==================================

Combine four denoiser outputs with separate audio and AU scales, embed an
AU sequence, and score predictions against ground truth.
"""

import numpy as np

import aukit

rng = np.random.default_rng(1)

# four evaluations of the same denoiser with conditions dropped in turn
e_nn, e_hn, e_na, e_ha = rng.normal(size=(4, 8))
eps = aukit.disentangled_combine(aukit.GuidanceInputs(e_nn, e_hn, e_na, e_ha, s_h=1.0, s_au=3.5))
print(eps.round(3))

# ignoring the AU branch gives plain classifier-free guidance
same = aukit.disentangled_combine(aukit.GuidanceInputs(e_nn, e_hn, e_nn, e_hn, s_h=2.0, s_au=3.5))
print(np.allclose(same, aukit.cfg_combine(e_nn, e_hn, 2.0)))

# per-frame context embeddings from a 5-frame window
config = aukit.EmbeddingConfig(n=2, dim=16)
gt_frames = np.where(rng.random((40, 24)) < 0.3, rng.integers(1, 101, (40, 24)) / 100, 0.0)
gt = aukit.AuSequence.dense(gt_frames, fps=5)
emb = aukit.embed_sequence(gt, aukit.random_kernel(config, seed=0), config)
print("embedding", emb.shape)

# a noisy prediction that also drops a few units
noisy = np.clip(gt_frames + rng.normal(0, 0.05, gt_frames.shape) * (gt_frames > 0), 0, 1)
noisy[rng.random(noisy.shape) < 0.1] = 0.0
report = aukit.au_detection_metrics(aukit.AuSequence.dense(noisy, fps=5), gt)
for k, v in report.to_dict().items():
    print(f"  {k}: {v}")

# image metrics on two drawings
a = aukit.rasterize(aukit.canonical_template(), 64, 64, "rom").pixels
v = np.zeros(24)
v[8] = 1.0
b = aukit.rasterize(aukit.apply_aus(aukit.canonical_template(), aukit.default_basis(), v), 64, 64, "rom").pixels
print("PSNR", aukit.psnr(a, b), "SSIM", aukit.ssim(a, b))
