"""Domain types for 24-unit facial action sequences.

Dense frames are float64 numpy vectors of length 24 with values in [0, 1].
Sparse frames keep only (index, intensity) pairs in ascending index order.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadLength,
    EmptySequence,
    IndexOutOfRange,
    SchemaError,
    UnknownEmotion,
    ValueOutOfRange,
)

N_UNITS = 24
REGIONS = ("eyes", "brows", "jaw", "lips", "cheeks", "nose", "chin")

DENSE = "dense"
SPARSE = "sparse"


@dataclass(frozen=True)
class AuDescriptor:
    index: int
    name: str
    region: str
    alias: str = ""


def load_taxonomy(path=None) -> tuple[AuDescriptor, ...]:
    """Read a descriptor list; the embedded default is used when *path* is None."""
    if path is None:
        text = resources.files("aukit.data").joinpath("taxonomy.json").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    items = json.loads(text)
    descs = tuple(
        AuDescriptor(int(d["index"]), str(d["name"]), str(d["region"]), str(d.get("alias", "")))
        for d in items
    )
    if sorted(d.index for d in descs) != list(range(N_UNITS)):
        raise SchemaError("taxonomy must list each AU index 0-23 exactly once")
    if len({d.name for d in descs}) != N_UNITS:
        raise SchemaError("AU names must be unique")
    bad = [d.region for d in descs if d.region not in REGIONS]
    if bad:
        raise SchemaError(f"unknown region(s) {bad}")
    return tuple(sorted(descs, key=lambda d: d.index))


@lru_cache(maxsize=None)
def default_taxonomy() -> tuple[AuDescriptor, ...]:
    return load_taxonomy()


def au_metadata(index: int, taxonomy: Sequence[AuDescriptor] | None = None) -> AuDescriptor:
    if not 0 <= index < N_UNITS:
        raise IndexOutOfRange(f"AU index {index} outside 0-23")
    return (taxonomy or default_taxonomy())[index]


def validate_dense(values) -> np.ndarray:
    """Check a 24-vector of intensities and return it as a read-only float array."""
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] != N_UNITS:
        raise BadLength(f"expected {N_UNITS} AU values, got shape {arr.shape}")
    ok = (arr >= 0.0) & (arr <= 1.0)
    if not ok.all():
        i = int(np.flatnonzero(~ok)[0])
        raise ValueOutOfRange(i, float(arr[i]))
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SparseAuFrame:
    """Active units of one frame as ``((index, intensity), ...)``."""

    pairs: tuple[tuple[int, float], ...] = ()

    def __post_init__(self):
        pairs = tuple((int(i), float(v)) for i, v in self.pairs)
        prev = -1
        for i, v in pairs:
            if not 0 <= i < N_UNITS:
                raise IndexOutOfRange(f"AU index {i} outside 0-23")
            if i <= prev:
                raise SchemaError(f"sparse indices must be strictly increasing, got {i} after {prev}")
            if not 0.0 <= v <= 1.0:
                raise ValueOutOfRange(i, v)
            prev = i
        object.__setattr__(self, "pairs", pairs)

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.pairs)


class AuSequence:
    """A timed run of AU frames, either all dense or all sparse."""

    __slots__ = ("fps", "frames", "representation")

    def __init__(self, frames, fps: float, representation: str = DENSE):
        fps = float(fps)
        if not (math.isfinite(fps) and fps > 0):
            raise SchemaError(f"fps must be positive, got {fps}")
        if representation == DENSE:
            arr = np.array(frames, dtype=np.float64)
            if arr.size == 0:
                arr = arr.reshape(0, N_UNITS)
            if arr.ndim != 2 or arr.shape[1] != N_UNITS:
                raise BadLength(f"dense frames must have shape (T, {N_UNITS}), got {arr.shape}")
            ok = (arr >= 0.0) & (arr <= 1.0)
            if not ok.all():
                t, i = np.argwhere(~ok)[0]
                raise ValueOutOfRange(int(i), float(arr[t, i]))
            arr.setflags(write=False)
            frames = arr
        elif representation == SPARSE:
            frames = tuple(f if isinstance(f, SparseAuFrame) else SparseAuFrame(tuple(f)) for f in frames)
        else:
            raise SchemaError(f"unknown representation {representation!r}")
        object.__setattr__(self, "fps", fps)
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "representation", representation)

    def __setattr__(self, name, value):
        raise AttributeError("AuSequence is immutable")

    @classmethod
    def dense(cls, frames, fps: float) -> "AuSequence":
        return cls(frames, fps, DENSE)

    @classmethod
    def sparse(cls, frames: Iterable, fps: float) -> "AuSequence":
        return cls(frames, fps, SPARSE)

    @property
    def is_dense(self) -> bool:
        return self.representation == DENSE

    def __len__(self):
        return len(self.frames)

    def __eq__(self, other):
        if not isinstance(other, AuSequence):
            return NotImplemented
        if (self.fps, self.representation, len(self)) != (other.fps, other.representation, len(other)):
            return False
        if self.is_dense:
            return bool(np.array_equal(self.frames, other.frames))
        return self.frames == other.frames

    __hash__ = None

    def __repr__(self):
        return f"AuSequence({self.representation}, {len(self)} frames @ {self.fps:g} fps)"


def require_dense(seq: AuSequence, allow_empty=False) -> np.ndarray:
    if not seq.is_dense:
        raise SchemaError("operation needs a dense sequence")
    if not allow_empty and len(seq) == 0:
        raise EmptySequence("sequence has no frames")
    return seq.frames


class EmotionTaxonomy:
    """A set of lowercase emotion labels plus optional alias spellings."""

    def __init__(self, labels: Iterable[str], aliases: dict[str, str] | None = None):
        self.labels = tuple(label.strip().lower() for label in labels)
        self.aliases = {k.lower(): v.lower() for k, v in (aliases or {}).items()}
        for target in self.aliases.values():
            if target not in self.labels:
                raise SchemaError(f"alias target {target!r} not in taxonomy")

    def normalize(self, label: str) -> str:
        key = label.strip().lower()
        if key in self.labels:
            return key
        if key in self.aliases:
            return self.aliases[key]
        raise UnknownEmotion(f"unknown emotion {label!r}; expected one of {', '.join(self.labels)}")

    def __contains__(self, label):
        try:
            self.normalize(label)
        except UnknownEmotion:
            return False
        return True

    def __iter__(self):
        return iter(self.labels)

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        return f"EmotionTaxonomy({list(self.labels)})"


# "surprise" is the spelling used in the reference prompt records; the
# dataset's adjective forms are kept as aliases.
MEAD8 = EmotionTaxonomy(
    ["angry", "contempt", "disgusted", "fear", "happy", "neutral", "sad", "surprise"],
    aliases={"surprised": "surprise", "anger": "angry", "happiness": "happy",
             "sadness": "sad", "disgust": "disgusted", "fearful": "fear"},
)
CREMA6 = EmotionTaxonomy(
    ["angry", "disgusted", "fear", "happy", "neutral", "sad"],
    aliases={"anger": "angry", "happiness": "happy", "sadness": "sad",
             "disgust": "disgusted", "fearful": "fear"},
)
TAXONOMIES = {"mead": MEAD8, "crema": CREMA6}


def emotion_label(label: str, taxonomy: EmotionTaxonomy = MEAD8) -> str:
    return taxonomy.normalize(label)
