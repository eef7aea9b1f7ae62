"""AU regression/detection scores, emotion accuracy, PSNR/SSIM and landmark distances."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .core import N_UNITS, AuSequence, require_dense
from .errors import DimensionMismatch, EmptyInput, EmptySequence, LengthMismatch, TooSmall
from .geometry import MOUTH, N_POINTS

INF = float("inf")


@dataclass(frozen=True)
class AuMetricReport:
    precision: float
    recall: float
    f1: float
    slot_accuracy: float
    frame_set_accuracy: float
    mae: float
    tp: int
    fp: int
    fn: int
    tn: int
    aligned_frames: int
    length_mismatch: int
    # False when the denominator was zero and the value was set to 0 by convention
    precision_defined: bool = True
    recall_defined: bool = True

    def to_dict(self) -> dict:
        return asdict(self)


def au_detection_metrics(pred: AuSequence, gt: AuSequence, tau: float = 0.0,
                         mae_mode: str = "all") -> AuMetricReport:
    """Micro-averaged detection scores over all (frame, AU) slots plus MAE.

    A slot is active when its value exceeds ``tau``. Sequences of different
    length are truncated to the shorter one. ``mae_mode="active"`` averages the
    absolute error over ground-truth-active slots only.
    """
    p, g = require_dense(pred), require_dense(gt)
    t = min(len(p), len(g))
    p, g = p[:t], g[:t]
    pa, ga = p > tau, g > tau
    tp = int(np.count_nonzero(pa & ga))
    fp = int(np.count_nonzero(pa & ~ga))
    fn = int(np.count_nonzero(~pa & ga))
    tn = int(np.count_nonzero(~pa & ~ga))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    err = np.abs(p - g)
    if mae_mode == "all":
        # correctly rounded sum, so the value does not depend on summation order
        mae = math.fsum(err.ravel().tolist()) / err.size
    elif mae_mode == "active":
        mae = math.fsum(err[ga].tolist()) / int(ga.sum()) if ga.any() else 0.0
    else:
        raise ValueError(f"mae_mode must be 'all' or 'active', got {mae_mode!r}")
    return AuMetricReport(
        precision=precision, recall=recall, f1=f1,
        slot_accuracy=(tp + tn) / (t * N_UNITS),
        frame_set_accuracy=float(np.all(pa == ga, axis=1).mean()),
        mae=mae, tp=tp, fp=fp, fn=fn, tn=tn,
        aligned_frames=t, length_mismatch=abs(len(pred) - len(gt)),
        precision_defined=bool(tp + fp), recall_defined=bool(tp + fn),
    )


def emotion_accuracy(pred, gt) -> float:
    if len(pred) != len(gt):
        raise LengthMismatch(f"{len(pred)} predictions vs {len(gt)} labels")
    if not pred:
        raise EmptyInput("no labels to compare")
    hits = sum(a.strip().lower() == b.strip().lower() for a, b in zip(pred, gt))
    return hits / len(pred)


def _pair(a, b, dtype=np.float64):
    a = np.asarray(a, dtype=dtype)
    b = np.asarray(b, dtype=dtype)
    if a.shape != b.shape:
        raise DimensionMismatch(f"image shapes differ: {a.shape} vs {b.shape}")
    return a, b


def psnr(a, b, peak: float = 255.0) -> float:
    """Peak signal-to-noise ratio in dB; identical images give ``inf``.

    Works on stacks too: the MSE is pooled over every pixel of every frame.
    """
    a, b = _pair(a, b, None)
    if a.dtype == np.uint8 and b.dtype == np.uint8 and a.size:
        # 8-bit images: every partial sum of squared errors is an integer below 2**53, so exact
        d = np.maximum(a, b)
        d -= np.minimum(a, b)
        d = d.ravel().astype(np.float64)
        mse = float(np.dot(d, d)) / d.size
    else:
        a, b = a.astype(np.float64), b.astype(np.float64)
        mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return INF
    return 10.0 * np.log10(peak ** 2 / mse)


def gaussian_window(size: int = 11, sigma: float = 1.5) -> np.ndarray:
    return np.outer(_gauss1d(size, sigma), _gauss1d(size, sigma))


def _gauss1d(size, sigma):
    x = np.arange(size) - (size - 1) / 2
    g = np.exp(-(x ** 2) / (2 * sigma ** 2))
    return g / g.sum()


def _valid_filter_matrix(n, g):
    # row i holds the 1-D window placed at offset i: x @ M.T is a "valid" correlation
    m = n - len(g) + 1
    out = np.zeros((m, n))
    for i in range(m):
        out[i, i:i + len(g)] = g
    return out


def ssim_frames(a, b, data_range: float = 255.0, size: int = 11, sigma: float = 1.5,
                chunk: int = 4) -> np.ndarray:
    """Per-image SSIM for two ``(T, H, W)`` stacks.

    The Gaussian window is separable, so every local mean is ``Gh @ x @ Gw.T``
    with banded matrices; only fully covered windows count. Frames are
    processed *chunk* at a time so the working set stays in cache.
    """
    a, b = _pair(a, b, None)
    if a.ndim != 3:
        raise DimensionMismatch("ssim_frames expects (T, H, W) stacks")
    if a.shape[0] == 0:
        raise EmptyInput("no images to compare")
    if a.shape[1] < size or a.shape[2] < size:
        raise TooSmall(f"images must be at least {size}x{size}, got {a.shape[1:]}")
    g = _gauss1d(size, sigma)
    gh = _valid_filter_matrix(a.shape[1], g)
    gw_t = _valid_filter_matrix(a.shape[2], g).T

    def filt(x):
        y = np.matmul(gh, x)
        return (y.reshape(-1, y.shape[-1]) @ gw_t).reshape(y.shape[0], y.shape[1], -1)

    c1 = (0.01 * data_range) ** 2
    c2 = (0.03 * data_range) ** 2
    out = np.empty(a.shape[0])
    # in-place arithmetic: on long clips the temporaries cost as much as the filtering
    for lo in range(0, a.shape[0], chunk):
        x = a[lo:lo + chunk].astype(np.float64)
        y = b[lo:lo + chunk].astype(np.float64)
        mu_a, mu_b = filt(x), filt(y)
        sab = filt(x * y)
        x *= x
        y *= y
        x += y
        s = filt(x)                 # E[a^2] + E[b^2], one pass by linearity
        mab = mu_a * mu_b
        np.square(mu_a, out=mu_a)
        np.square(mu_b, out=mu_b)
        mu_a += mu_b                # mu_a^2 + mu_b^2
        s -= mu_a
        s += c2                     # var_a + var_b + c2
        mu_a += c1
        mu_a *= s                   # denominator
        sab -= mab
        sab *= 2
        sab += c2                   # 2 cov + c2
        mab *= 2
        mab += c1
        mab *= sab                  # numerator
        mab /= mu_a
        out[lo:lo + chunk] = mab.mean(axis=(1, 2))
    return out


def ssim(a, b, data_range: float = 255.0, size: int = 11, sigma: float = 1.5) -> float:
    """Mean structural similarity over all fully-covered 11x11 Gaussian windows."""
    a, b = _pair(a, b)
    if a.ndim != 2:
        raise DimensionMismatch("ssim expects 2-D grayscale images")
    return float(ssim_frames(a[None], b[None], data_range, size, sigma)[0])


def landmark_distance(pred, gt, subset: str = "mouth") -> float:
    """Mean Euclidean point distance over frames; ``mouth`` uses points 48-67."""
    p = np.asarray(pred, dtype=np.float64)
    g = np.asarray(gt, dtype=np.float64)
    if p.ndim == 2:
        p, g = p[None], g[None]
    if p.shape[0] != g.shape[0]:
        raise LengthMismatch(f"{p.shape[0]} predicted frames vs {g.shape[0]} reference frames")
    if p.shape != g.shape or p.shape[1:] != (N_POINTS, 2):
        raise DimensionMismatch(f"landmark arrays must be (T, 68, 2), got {p.shape} and {g.shape}")
    if p.shape[0] == 0:
        raise EmptySequence("no landmark frames")
    if subset == "mouth":
        p, g = p[:, MOUTH], g[:, MOUTH]
    elif subset != "face":
        raise ValueError(f"subset must be 'mouth' or 'face', got {subset!r}")
    return float(np.linalg.norm(p - g, axis=-1).mean())
