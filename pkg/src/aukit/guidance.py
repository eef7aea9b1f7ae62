"""Guidance arithmetic over caller-supplied denoiser outputs.

Two conditions are guided separately: the auxiliary group H (audio and
reference image) with scale ``s_h`` and the AU embedding with scale ``s_au``::

    eps = e(null, AU) + s_h * (e(H, null) - e(null, null))
                      + s_au * (e(H, AU) - e(H, null))

Nothing here calls a model; the four evaluations are plain arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AuError, ShapeMismatch

DEFAULT_S_AU = 3.5
DEFAULT_S_H = 1.0


@dataclass(frozen=True, eq=False)
class GuidanceInputs:
    e_null_null: np.ndarray
    e_h_null: np.ndarray
    e_null_au: np.ndarray
    e_h_au: np.ndarray
    s_h: float = DEFAULT_S_H
    s_au: float = DEFAULT_S_AU

    def __post_init__(self):
        arrs = [np.asarray(getattr(self, k), dtype=np.float64)
                for k in ("e_null_null", "e_h_null", "e_null_au", "e_h_au")]
        shape = arrs[0].shape
        if any(a.shape != shape for a in arrs) or arrs[0].size < 1:
            raise ShapeMismatch(f"guidance inputs need one common non-empty shape, got {[a.shape for a in arrs]}")
        if not all(np.isfinite(a).all() for a in arrs):
            raise AuError("guidance inputs must be finite")
        for name in ("s_h", "s_au"):
            s = float(getattr(self, name))
            if not (math.isfinite(s) and s >= 0):
                raise AuError(f"{name} must be finite and >= 0, got {s}")
            object.__setattr__(self, name, s)
        for k, a in zip(("e_null_null", "e_h_null", "e_null_au", "e_h_au"), arrs):
            object.__setattr__(self, k, a)


def disentangled_combine(inputs: GuidanceInputs) -> np.ndarray:
    return (inputs.e_null_au
            + inputs.s_h * (inputs.e_h_null - inputs.e_null_null)
            + inputs.s_au * (inputs.e_h_au - inputs.e_h_null))


def cfg_combine(e_uncond, e_cond, s: float) -> np.ndarray:
    """Standard single-condition classifier-free guidance."""
    e_uncond = np.asarray(e_uncond, dtype=np.float64)
    e_cond = np.asarray(e_cond, dtype=np.float64)
    if e_uncond.shape != e_cond.shape:
        raise ShapeMismatch(f"shapes differ: {e_uncond.shape} vs {e_cond.shape}")
    return e_uncond + s * (e_cond - e_uncond)
