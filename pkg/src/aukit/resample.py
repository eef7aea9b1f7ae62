"""Temporal decimation and linear-interpolation resampling of dense sequences."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import AuSequence, require_dense
from .errors import AuError, BadPhase


@dataclass(frozen=True)
class ResampleConfig:
    gamma: float = 0.2
    phase: int = 0

    def __post_init__(self):
        if not 0.0 < self.gamma <= 1.0:
            raise AuError(f"gamma must lie in (0, 1], got {self.gamma}")
        if abs(1.0 / self.gamma - round(1.0 / self.gamma)) > 1e-9:
            raise AuError(f"1/gamma must be an integer stride, got {1.0 / self.gamma}")
        if self.phase < 0:
            raise BadPhase(f"phase must be >= 0, got {self.phase}")

    @property
    def stride(self) -> int:
        return int(round(1.0 / self.gamma))


def downsample(seq: AuSequence, config: ResampleConfig = ResampleConfig()) -> AuSequence:
    """Keep every ``stride``-th frame starting at ``phase`` (no averaging)."""
    frames = require_dense(seq)
    if config.phase >= len(frames):
        raise BadPhase(f"phase {config.phase} >= frame count {len(frames)}")
    stride = config.stride
    return AuSequence.dense(frames[config.phase::stride], seq.fps / stride)


def upsample_linear(seq: AuSequence, factor: int) -> AuSequence:
    """Insert ``factor - 1`` interpolated frames between neighbours.

    Output length is ``(N - 1) * factor + 1`` so both end frames survive, and
    original frame ``k`` lands exactly at position ``k * factor``.
    """
    frames = require_dense(seq)
    factor = int(factor)
    if factor < 1:
        raise AuError(f"factor must be >= 1, got {factor}")
    if factor == 1 or len(frames) == 1:
        return AuSequence.dense(frames, seq.fps * factor)
    left, right = frames[:-1], frames[1:]
    w = (np.arange(factor) / factor)[None, :, None]
    inner = left[:, None, :] + w * (right - left)[:, None, :]
    out = np.concatenate([inner.reshape(-1, frames.shape[1]), frames[-1:]])
    return AuSequence.dense(np.clip(out, 0.0, 1.0), seq.fps * factor)


def resample_to_length(seq: AuSequence, target_len: int, fps: float | None = None) -> AuSequence:
    """Linear resampling to exactly ``target_len`` frames, endpoints included.

    Unless *fps* is given, the output rate keeps the clip duration
    (``fps * target_len / N``).
    """
    frames = require_dense(seq)
    target_len = int(target_len)
    if target_len < 1:
        raise AuError(f"target_len must be >= 1, got {target_len}")
    n = len(frames)
    out_fps = fps if fps is not None else seq.fps * target_len / n
    if target_len == n:
        return AuSequence.dense(frames, out_fps)
    if n == 1:
        return AuSequence.dense(np.repeat(frames, target_len, axis=0), out_fps)
    pos = np.linspace(0.0, n - 1, target_len) if target_len > 1 else np.zeros(1)
    lo = np.minimum(np.floor(pos).astype(int), n - 2)
    frac = (pos - lo)[:, None]
    out = frames[lo] + frac * (frames[lo + 1] - frames[lo])
    return AuSequence.dense(np.clip(out, 0.0, 1.0), out_fps)
