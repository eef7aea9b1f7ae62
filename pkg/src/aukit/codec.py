"""Sparse index/intensity coding of AU frames and its token-text form.

The text form is ``<emotion>, [frame, frame, ...]`` where each frame is a
bracketed list of ``[index, intensity]`` pairs, e.g.::

    surprise, [[[2, 1.0], [3, 1.0], [8, .52]]]

Intensities are rounded half-up to ``quantize_decimals`` places only when text
is produced; in-memory values keep full precision.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from functools import lru_cache

import numpy as np

from .core import MEAD8, N_UNITS, AuSequence, EmotionTaxonomy, SparseAuFrame, require_dense, validate_dense
from .errors import AuError, BadIndex, BadIntensity, EmptySequence, ParseError, SchemaError


@dataclass(frozen=True)
class CodecConfig:
    lam: float = 0.0
    quantize_decimals: int = 2

    def __post_init__(self):
        if not 0.0 <= self.lam < 1.0:
            raise AuError(f"sparsity threshold must lie in [0, 1), got {self.lam}")
        if self.quantize_decimals < 1:
            raise AuError("quantize_decimals must be >= 1")


DEFAULT_CONFIG = CodecConfig()


@dataclass(frozen=True)
class CompressionStats:
    dense_chars: int
    sparse_chars: int
    reduction_pct: float
    mean_active_per_frame: float


def sparsify(frame, config: CodecConfig = DEFAULT_CONFIG) -> SparseAuFrame:
    arr = validate_dense(frame)
    idx = np.flatnonzero(arr > config.lam)
    return SparseAuFrame(tuple(zip(idx.tolist(), arr[idx].tolist())))


def densify(frame: SparseAuFrame) -> np.ndarray:
    out = np.zeros(N_UNITS)
    for i, v in frame.pairs:
        out[i] = v
    out.setflags(write=False)
    return out


def sparsify_sequence(seq: AuSequence, config: CodecConfig = DEFAULT_CONFIG) -> AuSequence:
    frames = require_dense(seq, allow_empty=True)
    active = frames > config.lam
    out = []
    for row, mask in zip(frames, active):
        idx = np.flatnonzero(mask)
        out.append(SparseAuFrame(tuple(zip(idx.tolist(), row[idx].tolist()))))
    return AuSequence.sparse(out, seq.fps)


def densify_sequence(seq: AuSequence) -> AuSequence:
    if seq.is_dense:
        return seq
    arr = np.zeros((len(seq), N_UNITS))
    for t, frame in enumerate(seq.frames):
        for i, v in frame.pairs:
            arr[t, i] = v
    return AuSequence.dense(arr, seq.fps)


@lru_cache(maxsize=65536)
def _quantized(value: float, decimals: int) -> Decimal:
    # repr() gives the shortest decimal that round-trips, so 0.285 rounds to .29
    return Decimal(repr(value)).quantize(Decimal(1).scaleb(-decimals), rounding=ROUND_HALF_UP)


def quantize(value: float, decimals: int = 2) -> float:
    return float(_quantized(float(value), decimals))


@lru_cache(maxsize=65536)
def format_intensity(value: float, decimals: int = 2) -> str:
    """``.XX`` for values below one after rounding, ``1.0`` otherwise."""
    q = _quantized(float(value), decimals)
    if q >= 1:
        return "1.0"
    return str(q)[1:]  # drop the leading "0"


def _frame_text(frame: SparseAuFrame, decimals: int) -> str:
    return "[" + ", ".join(f"[{i}, {format_intensity(v, decimals)}]" for i, v in frame.pairs) + "]"


def serialize_frames(seq: AuSequence, config: CodecConfig = DEFAULT_CONFIG) -> str:
    """Token text of the frames alone, without the emotion prefix."""
    if seq.is_dense:
        raise SchemaError("serialize a sparse sequence (use sparsify_sequence first)")
    if len(seq) == 0:
        raise EmptySequence("cannot serialize a sequence with no frames")
    d = config.quantize_decimals
    return "[" + ", ".join(_frame_text(f, d) for f in seq.frames) + "]"


def serialize_tokens(emotion: str, seq: AuSequence, config: CodecConfig = DEFAULT_CONFIG,
                     taxonomy: EmotionTaxonomy = MEAD8) -> str:
    label = taxonomy.normalize(emotion)
    return f"{label}, {serialize_frames(seq, config)}"


_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_PAIR = re.compile(rf"\[([-+]?\d+), ({_NUM})\]")


def deserialize_tokens(text: str, taxonomy: EmotionTaxonomy = MEAD8, fps: float = 5.0):
    """Strict inverse of :func:`serialize_tokens`; returns ``(emotion, sparse sequence)``."""
    head = text.find(", [")
    if head < 0:
        raise ParseError("missing '<emotion>, [' header", 0)
    emotion = taxonomy.normalize(text[:head])
    end = len(text.rstrip())
    pos = head + 2

    def expect(token):
        nonlocal pos
        if not text.startswith(token, pos):
            found = text[pos:pos + 8] or "end of text"
            raise ParseError(f"expected {token!r}, found {found!r}", pos)
        pos += len(token)

    expect("[")
    if text.startswith("]", pos):
        raise EmptySequence("token text holds no frames")
    frames = []
    while True:
        expect("[")
        pairs = []
        if not text.startswith("]", pos):
            while True:
                m = _PAIR.match(text, pos)
                if m is None:
                    raise ParseError("malformed [index, intensity] pair", pos)
                index = int(m.group(1))
                if not 0 <= index < N_UNITS:
                    raise BadIndex(index, m.start(1))
                try:
                    value = float(m.group(2))
                except ValueError:
                    raise ParseError("non-numeric intensity", m.start(2)) from None
                if not 0.0 <= value <= 1.0:
                    raise BadIntensity(value, m.start(2))
                if pairs and index <= pairs[-1][0]:
                    raise ParseError("AU indices must be strictly increasing", m.start(1))
                pairs.append((index, value))
                pos = m.end()
                if text.startswith(", ", pos):
                    pos += 2
                    continue
                break
        expect("]")
        frames.append(SparseAuFrame(tuple(pairs)))
        if text.startswith(", ", pos):
            pos += 2
            continue
        expect("]")
        break
    if pos != end:
        raise ParseError("trailing characters after token sequence", pos)
    return emotion, AuSequence.sparse(frames, fps)


def render_dense_frames(seq: AuSequence, config: CodecConfig = DEFAULT_CONFIG) -> str:
    """Fixed-width dense rendering with the same number formatting as the sparse form."""
    frames = require_dense(seq)
    d = config.quantize_decimals
    rows = ("[" + ", ".join(format_intensity(v, d) for v in row) + "]" for row in frames.tolist())
    return "[" + ", ".join(rows) + "]"


def compression_stats(seq: AuSequence, config: CodecConfig = DEFAULT_CONFIG) -> CompressionStats:
    require_dense(seq)
    sparse = sparsify_sequence(seq, config)
    dense_chars = len(render_dense_frames(seq, config))
    sparse_chars = len(serialize_frames(sparse, config))
    reduction = 100.0 * (1.0 - sparse_chars / dense_chars) if dense_chars else 0.0
    active = sum(len(f) for f in sparse.frames) / len(sparse)
    return CompressionStats(dense_chars, sparse_chars, max(0.0, min(100.0, reduction)), active)
