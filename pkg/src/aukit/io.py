"""On-disk formats: AU sequences (JSON / binary AUSQ), conv kernels (AUCK),
raw float32 vectors, landmark JSON / .npy and binary PGM images.

Binary layouts are little-endian:

* AUSQ: ``b"AUSQ"``, version u8, fps f32, n_units u16, n_frames u32, then
  ``n_frames * 24`` float32 values row-major (dense sequences only).
* AUCK: ``b"AUCK"``, version u8, dim u16, window u16, n_units u16, then
  ``dim * window * 24`` float32 weights row-major and ``dim`` float32 biases.
"""
from __future__ import annotations

import io
import json
import os
import struct

import numpy as np

from .core import DENSE, N_UNITS, SPARSE, AuSequence
from .embedding import ConvKernel
from .errors import AuError, CorruptFile, SchemaError
from .geometry import N_POINTS, RasterImage

SEQ_MAGIC = b"AUSQ"
SEQ_VERSION = 1
SEQ_HEADER = struct.Struct("<4sBfHI")

KERNEL_MAGIC = b"AUCK"
KERNEL_VERSION = 1
KERNEL_HEADER = struct.Struct("<4sBHHH")

BINARY_SUFFIXES = (".ausq", ".bin")


# -- sequences ---------------------------------------------------------------

def sequence_to_json(seq: AuSequence) -> str:
    if seq.is_dense:
        rows = [json.dumps(r) for r in seq.frames.tolist()]
    else:
        rows = [json.dumps([[i, v] for i, v in f.pairs]) for f in seq.frames]
    head = json.dumps({"fps": seq.fps, "n_units": N_UNITS, "representation": seq.representation})
    body = ",\n".join(rows)
    return head[:-1] + ', "frames": [\n' + body + ("\n" if rows else "") + "]}\n"


def sequence_from_json(text: str) -> AuSequence:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptFile(f"not a valid sequence file: {exc}") from None
    if not isinstance(obj, dict) or not {"fps", "frames"} <= obj.keys():
        raise SchemaError("sequence JSON needs 'fps' and 'frames'")
    n_units = obj.get("n_units", N_UNITS)
    if n_units != N_UNITS:
        raise SchemaError(f"n_units must be {N_UNITS}, got {n_units}")
    rep = obj.get("representation", DENSE)
    if rep == SPARSE:
        return AuSequence.sparse([[tuple(p) for p in f] for f in obj["frames"]], obj["fps"])
    return AuSequence(obj["frames"], obj["fps"], rep)


def sequence_to_bytes(seq: AuSequence) -> bytes:
    if not seq.is_dense:
        raise SchemaError("the binary AUSQ form stores dense sequences only")
    head = SEQ_HEADER.pack(SEQ_MAGIC, SEQ_VERSION, seq.fps, N_UNITS, len(seq))
    return head + seq.frames.astype("<f4").tobytes()


def sequence_from_bytes(data: bytes) -> AuSequence:
    if len(data) < SEQ_HEADER.size:
        raise CorruptFile("file shorter than the AUSQ header")
    magic, version, fps, n_units, n_frames = SEQ_HEADER.unpack_from(data)
    if magic != SEQ_MAGIC:
        raise CorruptFile(f"bad magic {magic!r}")
    if version != SEQ_VERSION:
        raise CorruptFile(f"unsupported AUSQ version {version}")
    if n_units != N_UNITS:
        raise SchemaError(f"n_units must be {N_UNITS}, got {n_units}")
    payload = data[SEQ_HEADER.size:]
    if len(payload) != 4 * N_UNITS * n_frames:
        raise CorruptFile(f"payload is {len(payload)} bytes, expected {4 * N_UNITS * n_frames}")
    frames = np.frombuffer(payload, dtype="<f4").reshape(n_frames, N_UNITS).astype(np.float64)
    return AuSequence.dense(frames, float(fps))


def read_sequence(path) -> AuSequence:
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] == SEQ_MAGIC:
        return sequence_from_bytes(data)
    if str(path).endswith(BINARY_SUFFIXES):
        raise CorruptFile(f"bad magic {data[:4]!r}")
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise CorruptFile("sequence file is neither AUSQ binary nor UTF-8 JSON") from None
    return sequence_from_json(text)


def write_sequence(seq: AuSequence, path, fmt: str | None = None) -> None:
    if fmt is None:
        fmt = "bin" if str(path).endswith(BINARY_SUFFIXES) else "json"
    if fmt == "bin":
        data = sequence_to_bytes(seq)
    elif fmt == "json":
        data = sequence_to_json(seq).encode("utf-8")
    else:
        raise AuError(f"unknown sequence format {fmt!r}")
    with open(path, "wb") as fh:
        fh.write(data)


# -- kernels -----------------------------------------------------------------

def write_kernel(kernel: ConvKernel, path) -> None:
    head = KERNEL_HEADER.pack(KERNEL_MAGIC, KERNEL_VERSION, kernel.dim, kernel.window, N_UNITS)
    with open(path, "wb") as fh:
        fh.write(head + kernel.weights.astype("<f4").tobytes() + kernel.bias.astype("<f4").tobytes())


def read_kernel(path) -> ConvKernel:
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < KERNEL_HEADER.size:
        raise CorruptFile("file shorter than the AUCK header")
    magic, version, dim, window, n_units = KERNEL_HEADER.unpack_from(data)
    if magic != KERNEL_MAGIC:
        raise CorruptFile(f"bad magic {magic!r}")
    if version != KERNEL_VERSION:
        raise CorruptFile(f"unsupported AUCK version {version}")
    if n_units != N_UNITS:
        raise SchemaError(f"n_units must be {N_UNITS}, got {n_units}")
    n_w = dim * window * N_UNITS
    payload = data[KERNEL_HEADER.size:]
    if len(payload) != 4 * (n_w + dim):
        raise CorruptFile(f"kernel payload is {len(payload)} bytes, expected {4 * (n_w + dim)}")
    vals = np.frombuffer(payload, dtype="<f4").astype(np.float64)
    return ConvKernel(vals[:n_w].reshape(dim, window, N_UNITS), vals[n_w:])


# -- plain vectors -----------------------------------------------------------

def read_vector(path) -> np.ndarray:
    """Raw little-endian float32, or a JSON list when the file ends in ``.json``."""
    if str(path).endswith(".json"):
        with open(path, encoding="utf-8") as fh:
            return np.asarray(json.load(fh), dtype=np.float64)
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) % 4:
        raise CorruptFile(f"{path}: size {len(data)} is not a multiple of 4")
    return np.frombuffer(data, dtype="<f4").astype(np.float64)


def write_vector(values, path) -> None:
    with open(path, "wb") as fh:
        fh.write(np.asarray(values, dtype="<f4").tobytes())


# -- landmarks and images ----------------------------------------------------

def landmarks_to_json(frames) -> str:
    arr = np.asarray(frames, dtype=np.float64)
    return "[\n" + ",\n".join(json.dumps(f) for f in arr.tolist()) + "\n]\n"


def write_landmarks(frames, path) -> None:
    """``.npy`` for bulk output, JSON (one frame per line) otherwise."""
    arr = np.asarray(frames, dtype=np.float64)
    if str(path).endswith(".npy"):
        with open(path, "wb") as fh:
            np.save(fh, arr, allow_pickle=False)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(landmarks_to_json(arr))


def read_landmarks(path) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        if data[:6] == b"\x93NUMPY":
            arr = np.load(io.BytesIO(data), allow_pickle=False).astype(np.float64)
        else:
            arr = np.asarray(json.loads(data.decode("utf-8")), dtype=np.float64)
    except (ValueError, UnicodeDecodeError) as exc:
        raise CorruptFile(f"bad landmark file: {exc}") from None
    if arr.ndim != 3 or arr.shape[1:] != (N_POINTS, 2):
        raise SchemaError(f"landmark file must hold (T, 68, 2) points, got {arr.shape}")
    return arr


def pgm_bytes(pixels) -> bytes:
    """One binary PGM image, or several back to back for a ``(T, H, W)`` stack."""
    px = np.asarray(pixels, dtype=np.uint8)
    if px.ndim == 2:
        px = px[None]
    t, h, w = px.shape
    head = f"P5\n{w} {h}\n255\n".encode("ascii")
    if t == 0:
        return b""
    frame_len = len(head) + h * w
    out = bytearray(t * frame_len)
    view = np.frombuffer(out, dtype=np.uint8).reshape(t, frame_len)
    view[:, :len(head)] = np.frombuffer(head, dtype=np.uint8)
    view[:, len(head):] = px.reshape(t, h * w)
    return bytes(out)


def write_pgm(image, path) -> None:
    pixels = image.pixels if isinstance(image, RasterImage) else image
    with open(path, "wb") as fh:
        fh.write(pgm_bytes(pixels))


def _pgm_header(data, pos):
    fields = []
    while len(fields) < 4:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            pos = data.find(b"\n", pos)
            if pos < 0:
                raise CorruptFile("truncated PGM header")
            continue
        end = pos
        while end < len(data) and not data[end:end + 1].isspace():
            end += 1
        if end == pos:
            raise CorruptFile("truncated PGM header")
        fields.append(data[pos:end])
        pos = end
    if fields[0] != b"P5":
        raise CorruptFile(f"not a binary PGM (magic {fields[0]!r})")
    try:
        w, h, maxval = (int(f) for f in fields[1:])
    except ValueError:
        raise CorruptFile("non-numeric PGM header field") from None
    if maxval != 255:
        raise CorruptFile(f"only 8-bit PGM is supported (maxval {maxval})")
    return w, h, pos + 1


def read_pgm_stream(path) -> np.ndarray:
    """All images of a PGM file as a ``(T, H, W)`` stack; sizes must agree."""
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.strip():
        raise CorruptFile("empty PGM file")
    w, h, pos = _pgm_header(data, 0)
    frame_len = pos + h * w
    head = data[:pos]
    n, rest = divmod(len(data), frame_len)
    if not rest and all(data[k * frame_len:k * frame_len + pos] == head for k in range(n)):
        # uniform stream written by pgm_bytes: slice it in one go
        return np.frombuffer(data, dtype=np.uint8).reshape(n, frame_len)[:, pos:].reshape(n, h, w).copy()
    frames = []
    while True:
        body = data[pos:pos + w * h]
        if len(body) != w * h:
            raise CorruptFile(f"PGM payload is {len(body)} bytes, expected {w * h}")
        frames.append(np.frombuffer(body, dtype=np.uint8).reshape(h, w))
        pos += w * h
        if not data[pos:].strip():
            break
        w2, h2, pos = _pgm_header(data, pos)
        if (w2, h2) != (w, h):
            raise CorruptFile(f"PGM stream mixes sizes {w}x{h} and {w2}x{h2}")
    return np.stack(frames)


def read_pgm(path) -> np.ndarray:
    """The first image of a PGM file."""
    return read_pgm_stream(path)[0]


def ensure_dir(path) -> None:
    os.makedirs(path, exist_ok=True)
