"""Context-window AU embedding with a single temporal convolution layer.

For frame ``t`` the window stacks frames ``t-n .. t+n`` (edges padded), and
the embedding is ``bias + sum(weights * window)`` per output channel.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import N_UNITS, AuSequence, require_dense
from .errors import AuError, IndexOutOfRange, ShapeMismatch


@dataclass(frozen=True)
class EmbeddingConfig:
    n: int = 2
    dim: int = 128
    padding: str = "replicate"

    def __post_init__(self):
        if self.n < 0:
            raise AuError(f"half-window n must be >= 0, got {self.n}")
        if self.dim < 1:
            raise AuError(f"embedding dim must be >= 1, got {self.dim}")
        if self.padding not in ("replicate", "zero"):
            raise AuError(f"padding must be 'replicate' or 'zero', got {self.padding!r}")

    @property
    def window(self) -> int:
        return 2 * self.n + 1


@dataclass(frozen=True, eq=False)
class ConvKernel:
    weights: np.ndarray  # (dim, window, 24)
    bias: np.ndarray  # (dim,)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        b = np.asarray(self.bias, dtype=np.float64)
        if w.ndim != 3 or w.shape[2] != N_UNITS:
            raise ShapeMismatch(f"kernel weights must have shape (dim, window, 24), got {w.shape}")
        if b.shape != (w.shape[0],):
            raise ShapeMismatch(f"bias shape {b.shape} does not match dim {w.shape[0]}")
        if not (np.isfinite(w).all() and np.isfinite(b).all()):
            raise AuError("kernel entries must be finite")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", b)

    @property
    def dim(self) -> int:
        return self.weights.shape[0]

    @property
    def window(self) -> int:
        return self.weights.shape[1]

    def check(self, config: EmbeddingConfig):
        if (self.dim, self.window) != (config.dim, config.window):
            raise ShapeMismatch(
                f"kernel is dim={self.dim}, window={self.window}; "
                f"config expects dim={config.dim}, window={config.window}")


def random_kernel(config: EmbeddingConfig = EmbeddingConfig(), seed: int = 0, scale: float | None = None) -> ConvKernel:
    rng = np.random.default_rng(seed)
    fan_in = config.window * N_UNITS
    scale = 1.0 / np.sqrt(fan_in) if scale is None else scale
    w = rng.normal(0.0, scale, size=(config.dim, config.window, N_UNITS))
    b = rng.normal(0.0, scale, size=config.dim)
    return ConvKernel(w, b)


def _padded(frames: np.ndarray, config: EmbeddingConfig) -> np.ndarray:
    n = config.n
    if config.padding == "replicate":
        return np.pad(frames, ((n, n), (0, 0)), mode="edge")
    return np.pad(frames, ((n, n), (0, 0)), mode="constant")


def context_window(seq: AuSequence, t: int, config: EmbeddingConfig = EmbeddingConfig()) -> np.ndarray:
    frames = require_dense(seq)
    if not 0 <= t < len(frames):
        raise IndexOutOfRange(f"frame {t} outside 0..{len(frames) - 1}")
    return _padded(frames, config)[t:t + config.window]


def embed_sequence(seq: AuSequence, kernel: ConvKernel, config: EmbeddingConfig = EmbeddingConfig()) -> np.ndarray:
    """Embeddings for every frame, shape ``(T, dim)``."""
    kernel.check(config)
    frames = require_dense(seq)
    windows = np.lib.stride_tricks.sliding_window_view(_padded(frames, config), config.window, axis=0)
    # windows: (T, 24, window) -> contract over window and AU axes
    return np.einsum("tiw,dwi->td", windows, kernel.weights) + kernel.bias
