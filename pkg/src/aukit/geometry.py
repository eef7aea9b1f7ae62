"""AU frames to 2D facial drawings: 68-point landmarks and polyline renderings.

The AU-to-landmark mapping is a linear displacement basis: each AU moves a
fixed set of points by ``intensity * (dx, dy)``. Coordinates live in the unit
square with y pointing down; "left" means image-left.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .core import N_UNITS, AuSequence, default_taxonomy, require_dense, validate_dense
from .errors import BadDimensions, SchemaError, ShapeMismatch

N_POINTS = 68

REGION_SLICES = {
    "jaw": range(0, 17),
    "brows": range(17, 27),
    "nose": range(27, 36),
    "eyes": range(36, 48),
    "lips": range(48, 68),
}

# Points each AU region may move. Jaw motion carries the mouth with it, the
# chin covers the lower contour and lower lip, cheeks the jaw-line sides.
REGION_POINTS = {
    "eyes": frozenset(range(36, 48)),
    "brows": frozenset(range(17, 27)),
    "nose": frozenset(range(27, 36)),
    "lips": frozenset(range(48, 68)),
    "jaw": frozenset(range(0, 17)) | frozenset(range(48, 68)),
    "chin": frozenset(range(5, 12)) | frozenset(range(55, 60)) | frozenset(range(65, 68)),
    "cheeks": frozenset(range(1, 6)) | frozenset(range(11, 16)),
}

MOUTH = np.arange(48, 68)


def _mirror_pairs():
    pairs = [(i, 16 - i) for i in range(8)]
    pairs += [(17 + i, 26 - i) for i in range(5)]
    pairs += [(31, 35), (32, 34)]
    pairs += [(36, 45), (37, 44), (38, 43), (39, 42), (40, 47), (41, 46)]
    pairs += [(48, 54), (49, 53), (50, 52), (59, 55), (58, 56)]
    pairs += [(60, 64), (61, 63), (67, 65)]
    return pairs


MIRROR_PAIRS = tuple(_mirror_pairs())
MIDLINE = (8, 27, 28, 29, 30, 33, 51, 57, 62, 66)


def canonical_template() -> np.ndarray:
    """Neutral 68-point face, symmetric about ``x = 0.5``."""
    pts = np.full((N_POINTS, 2), np.nan)
    theta = np.pi * np.arange(8) / 16
    pts[:8, 0] = 0.5 - 0.4 * np.cos(theta)
    pts[:8, 1] = 0.40 + 0.45 * np.sin(theta)
    left = {
        17: (0.17, 0.33), 18: (0.22, 0.30), 19: (0.28, 0.29), 20: (0.34, 0.30), 21: (0.42, 0.32),
        31: (0.44, 0.60), 32: (0.47, 0.61),
        36: (0.22, 0.42), 37: (0.27, 0.395), 38: (0.34, 0.395), 39: (0.40, 0.42), 40: (0.34, 0.445),
        41: (0.27, 0.445),
        48: (0.36, 0.72), 49: (0.41, 0.69), 50: (0.46, 0.675), 59: (0.41, 0.76), 58: (0.46, 0.785),
        60: (0.38, 0.72), 61: (0.45, 0.705), 67: (0.45, 0.74),
    }
    for i, xy in left.items():
        pts[i] = xy
    mid_y = {8: 0.85, 27: 0.38, 28: 0.44, 29: 0.50, 30: 0.56, 33: 0.62, 51: 0.685, 57: 0.79,
             62: 0.71, 66: 0.745}
    for i, y in mid_y.items():
        pts[i] = (0.5, y)
    for a, b in MIRROR_PAIRS:
        pts[b] = (1.0 - pts[a, 0], pts[a, 1])
    assert not np.isnan(pts).any()
    pts.setflags(write=False)
    return pts


def validate_landmarks(points) -> np.ndarray:
    arr = np.asarray(points, dtype=np.float64)
    if arr.shape != (N_POINTS, 2):
        raise ShapeMismatch(f"landmark frame must have shape (68, 2), got {arr.shape}")
    if not np.isfinite(arr).all():
        raise SchemaError("landmark coordinates must be finite")
    return arr


class DisplacementBasis:
    """Per-AU unit-intensity point displacements.

    ``entries[au]`` is a list of ``(point_index, dx, dy)``; :attr:`matrix`
    holds the same data densely with shape ``(24, 68, 2)``.
    """

    def __init__(self, entries: dict, check_regions: bool = True, taxonomy=None):
        entries = {int(k): [(int(p), float(dx), float(dy)) for p, dx, dy in v] for k, v in entries.items()}
        missing = set(range(N_UNITS)) - set(entries)
        extra = set(entries) - set(range(N_UNITS))
        if missing or extra:
            raise SchemaError(f"basis must cover AU 0-23 exactly (missing {sorted(missing)}, extra {sorted(extra)})")
        descs = taxonomy or default_taxonomy()
        mat = np.zeros((N_UNITS, N_POINTS, 2))
        for au, items in entries.items():
            allowed = REGION_POINTS[descs[au].region]
            for p, dx, dy in items:
                if not 0 <= p < N_POINTS:
                    raise SchemaError(f"AU{au}: point index {p} outside 0-67")
                if not (np.isfinite(dx) and np.isfinite(dy)):
                    raise SchemaError(f"AU{au}: non-finite displacement")
                if check_regions and p not in allowed and (dx or dy):
                    raise SchemaError(f"AU{au} moves point {p} outside its {descs[au].region} region")
                mat[au, p] += (dx, dy)
        mat.setflags(write=False)
        self.entries = entries
        self.matrix = mat

    @classmethod
    def load(cls, path=None, **kw) -> "DisplacementBasis":
        if path is None:
            text = resources.files("aukit.data").joinpath("default_basis.json").read_text("utf-8")
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        return cls(json.loads(text), **kw)

    def to_json(self) -> str:
        return json.dumps({str(k): [list(e) for e in self.entries[k]] for k in sorted(self.entries)})

    def moved_points(self, au: int) -> set[int]:
        return {int(p) for p in np.flatnonzero(np.abs(self.matrix[au]).sum(axis=1))}


def default_basis() -> DisplacementBasis:
    return DisplacementBasis.load()


def apply_aus(template, basis: DisplacementBasis, frame, clamp: bool = False) -> np.ndarray:
    v = validate_dense(frame)
    out = validate_landmarks(template) + np.tensordot(v, basis.matrix, axes=1)
    if clamp:
        out = np.clip(out, 0.0, 1.0)
    return out


def map_sequence(seq: AuSequence, basis: DisplacementBasis, clamp: bool = False,
                 template=None) -> np.ndarray:
    """Landmarks for every frame, shape ``(T, 68, 2)``."""
    frames = require_dense(seq)
    base = canonical_template() if template is None else validate_landmarks(template)
    out = base[None] + np.tensordot(frames, basis.matrix, axes=1)
    if clamp:
        out = np.clip(out, 0.0, 1.0)
    return out


# -- rasterization -----------------------------------------------------------

def _chain(idx, closed=False):
    idx = list(idx)
    segs = list(zip(idx[:-1], idx[1:]))
    if closed:
        segs.append((idx[-1], idx[0]))
    return segs


ROM_SEGMENTS = np.array(
    _chain(range(0, 17))
    + _chain(range(17, 22)) + _chain(range(22, 27))
    + _chain(range(27, 31)) + _chain(range(31, 36))
    + _chain(range(36, 42), closed=True) + _chain(range(42, 48), closed=True)
    + _chain(range(48, 60), closed=True) + _chain(range(60, 68), closed=True)
)


@dataclass(frozen=True, eq=False)
class RasterImage:
    width: int
    height: int
    pixels: np.ndarray  # (height, width) uint8, values 0 or 255

    def __eq__(self, other):
        return (isinstance(other, RasterImage) and (self.width, self.height) == (other.width, other.height)
                and np.array_equal(self.pixels, other.pixels))

    @property
    def lit(self) -> int:
        return int(np.count_nonzero(self.pixels))


def to_pixels(points, width: int, height: int) -> np.ndarray:
    """Nearest-pixel integer (col, row) for unit-square coordinates, clipped to the image."""
    pts = np.asarray(points, dtype=np.float64)
    scale = np.array([width - 1, height - 1], dtype=np.float64)
    px = np.floor(pts * scale + 0.5).astype(np.int64)
    return np.clip(px, 0, scale.astype(np.int64))


def line_pixels(x0, y0, x1, y1):
    """Integer line rasterization of many segments at once.

    Steps along the major axis and rounds the minor coordinate to the nearest
    integer (ties away from the start point), which is the midpoint/Bresenham
    pixel set. Returns flat ``(xs, ys)`` arrays.
    """
    x0, y0, x1, y1 = (np.asarray(a, dtype=np.int64).ravel() for a in (x0, y0, x1, y1))
    dx, dy = x1 - x0, y1 - y0
    n = np.maximum(np.abs(dx), np.abs(dy))
    counts = n + 1
    seg = np.repeat(np.arange(len(n)), counts)
    starts = np.cumsum(counts) - counts
    k = np.arange(counts.sum()) - starts[seg]
    two_n = 2.0 * np.maximum(n[seg], 1)
    kf = k.astype(np.float64)

    def offset(d):
        # floor((2k|d| + n) / 2n); operands are small integers, so the float
        # quotient lands on the right side of every integer and floor is exact
        d = d[seg]
        q = np.floor((2.0 * np.abs(d) * kf + 0.5 * two_n) / two_n)
        return np.sign(d) * q.astype(np.int64)

    return x0[seg] + offset(dx), y0[seg] + offset(dy)


def rasterize_many(frames, width: int, height: int, mode: str = "rom", segments=None) -> np.ndarray:
    """Render ``(T, P, 2)`` point frames into a ``(T, height, width)`` uint8 stack."""
    if width < 8 or height < 8:
        raise BadDimensions(f"raster size must be at least 8x8, got {width}x{height}")
    if mode not in ("lmk", "rom"):
        raise BadDimensions(f"unknown render mode {mode!r}")
    frames = np.asarray(frames, dtype=np.float64)
    if frames.ndim != 3 or frames.shape[2] != 2:
        raise ShapeMismatch(f"expected (T, P, 2) points, got {frames.shape}")
    t = frames.shape[0]
    px = to_pixels(frames, width, height)
    out = np.zeros((t, height, width), dtype=np.uint8)
    if mode == "lmk":
        tt = np.repeat(np.arange(t), frames.shape[1])
        out[tt, px[..., 1].ravel(), px[..., 0].ravel()] = 255
        return out
    segs = ROM_SEGMENTS if segments is None else np.asarray(segments, dtype=np.int64).reshape(-1, 2)
    a, b = px[:, segs[:, 0]], px[:, segs[:, 1]]  # (T, S, 2)
    xs, ys = line_pixels(a[..., 0], a[..., 1], b[..., 0], b[..., 1])
    lengths = np.maximum(np.abs(b[..., 0] - a[..., 0]), np.abs(b[..., 1] - a[..., 1])).ravel() + 1
    tt = np.repeat(np.repeat(np.arange(t), segs.shape[0]), lengths)
    out[tt, ys, xs] = 255
    return out


def rasterize(frame, width: int, height: int, mode: str = "rom", segments=None) -> RasterImage:
    pts = np.asarray(frame, dtype=np.float64)
    if segments is None:
        pts = validate_landmarks(pts)
    pixels = rasterize_many(pts[None], width, height, mode, segments)[0]
    return RasterImage(width, height, pixels)
