"""
Sparse AU tokens
================

A dense 24-dim frame becomes a short list of (index, intensity) pairs,
and the token text reads back to the same frame.
"""

import numpy as np

import aukit

# a frame with four active units
frame = np.zeros(24)
frame[[0, 1, 21, 22]] = [0.38, 0.45, 0.84, 0.90]
print(aukit.sparsify(frame).pairs)

# emotion first, then the frames; intensities are written with two decimals
second = np.zeros(24)
second[[2, 3, 8]] = [1.0, 1.0, 0.52]
seq = aukit.AuSequence.dense([frame, second], fps=5)
text = aukit.serialize_tokens("surprise", aukit.sparsify_sequence(seq))
print(text)

emotion, back = aukit.deserialize_tokens(text)
print(emotion, np.array_equal(aukit.densify_sequence(back).frames, seq.frames))

# how much shorter is the sparse form on a random corpus
rng = np.random.default_rng(0)
vals = rng.integers(1, 101, (500, 24)) / 100
corpus = aukit.AuSequence.dense(np.where(rng.random((500, 24)) < 0.3, vals, 0.0), fps=5)
stats = aukit.compression_stats(corpus)
print(f"{stats.dense_chars} -> {stats.sparse_chars} chars ({stats.reduction_pct:.1f}% shorter), "
      f"{stats.mean_active_per_frame:.2f} active per frame")

# video rate to AU rate and back
video = aukit.AuSequence.dense(vals[:100] * 0.5, fps=25)
au_rate = aukit.downsample(video)
print(len(video), "->", len(au_rate), "frames at", au_rate.fps, "fps")
print(len(aukit.upsample_linear(au_rate, 5)), "frames after linear upsampling")
