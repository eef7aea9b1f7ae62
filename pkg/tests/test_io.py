import json
import struct

import numpy as np
import pytest

from aukit import AuSequence
from aukit.embedding import EmbeddingConfig, random_kernel
from aukit.errors import CorruptFile, SchemaError
from aukit.io import (
    SEQ_HEADER, landmarks_to_json, read_kernel, read_landmarks, read_pgm, read_pgm_stream, read_sequence, read_vector,
    sequence_from_bytes, sequence_from_json, sequence_to_bytes, sequence_to_json, write_kernel, write_landmarks,
    write_pgm, write_sequence, write_vector,
)

from conftest import random_dense


def test_json_roundtrip_dense(rng):
    seq = random_dense(rng, 12)
    assert sequence_from_json(sequence_to_json(seq)) == seq


def test_json_roundtrip_sparse():
    seq = AuSequence.sparse([[(0, 0.38), (22, 0.9)], [], [(5, 1.0)]], 5)
    back = sequence_from_json(sequence_to_json(seq))
    assert back == seq and not back.is_dense


def test_json_one_frame_per_line(rng):
    text = sequence_to_json(random_dense(rng, 3))
    assert text.count("\n") == 5
    assert json.loads(text)["n_units"] == 24


def test_json_schema_errors():
    with pytest.raises(SchemaError):
        sequence_from_json('{"fps": 5, "n_units": 23, "frames": []}')
    with pytest.raises(SchemaError):
        sequence_from_json('{"frames": []}')
    with pytest.raises(CorruptFile):
        sequence_from_json("{not json")


def test_binary_roundtrip(rng):
    # values representable in float32 survive exactly
    frames = rng.integers(0, 257, (9, 24)) / 256
    seq = AuSequence.dense(frames, 25)
    data = sequence_to_bytes(seq)
    assert data[:4] == b"AUSQ"
    assert len(data) == SEQ_HEADER.size + 9 * 24 * 4
    assert sequence_from_bytes(data) == seq


def test_binary_rejects_sparse():
    with pytest.raises(SchemaError):
        sequence_to_bytes(AuSequence.sparse([[(1, 0.5)]], 5))


def test_binary_corruption(rng):
    data = sequence_to_bytes(random_dense(rng, 4))
    with pytest.raises(CorruptFile):
        sequence_from_bytes(b"XXXX" + data[4:])
    with pytest.raises(CorruptFile):
        sequence_from_bytes(data[:-3])
    with pytest.raises(CorruptFile):
        sequence_from_bytes(data[:5])
    bad_units = SEQ_HEADER.pack(b"AUSQ", 1, 5.0, 23, 0)
    with pytest.raises(SchemaError):
        sequence_from_bytes(bad_units)


def test_file_autodetect(tmp_path, rng):
    seq = AuSequence.dense(rng.integers(0, 5, (3, 24)) / 4, 5)
    for name in ("a.json", "a.ausq", "a.bin"):
        write_sequence(seq, tmp_path / name)
        assert read_sequence(tmp_path / name) == seq
    write_sequence(seq, tmp_path / "b.json", fmt="bin")
    assert read_sequence(tmp_path / "b.json") == seq
    (tmp_path / "c.ausq").write_bytes(b"nope" * 10)
    with pytest.raises(CorruptFile):
        read_sequence(tmp_path / "c.ausq")
    (tmp_path / "d.json").write_bytes(b"\xff\xfe\x00")
    with pytest.raises(CorruptFile):
        read_sequence(tmp_path / "d.json")


def test_kernel_roundtrip(tmp_path):
    k = random_kernel(EmbeddingConfig(n=1, dim=4), seed=5)
    write_kernel(k, tmp_path / "k.auck")
    back = read_kernel(tmp_path / "k.auck")
    np.testing.assert_array_equal(back.weights, k.weights.astype(np.float32))
    np.testing.assert_array_equal(back.bias, k.bias.astype(np.float32))
    data = (tmp_path / "k.auck").read_bytes()
    (tmp_path / "bad.auck").write_bytes(data[:-1])
    with pytest.raises(CorruptFile):
        read_kernel(tmp_path / "bad.auck")


def test_vectors(tmp_path):
    write_vector([0.5, -2.0], tmp_path / "v.f32")
    assert (tmp_path / "v.f32").read_bytes() == struct.pack("<2f", 0.5, -2.0)
    assert read_vector(tmp_path / "v.f32").tolist() == [0.5, -2.0]
    (tmp_path / "v.json").write_text("[0.25, 1]")
    assert read_vector(tmp_path / "v.json").tolist() == [0.25, 1.0]
    (tmp_path / "odd.f32").write_bytes(b"abc")
    with pytest.raises(CorruptFile):
        read_vector(tmp_path / "odd.f32")


def test_landmarks_roundtrip(tmp_path, rng):
    pts = rng.random((3, 68, 2))
    (tmp_path / "l.json").write_text(landmarks_to_json(pts))
    np.testing.assert_array_equal(read_landmarks(tmp_path / "l.json"), pts)
    write_landmarks(pts, tmp_path / "l.npy")
    np.testing.assert_array_equal(read_landmarks(tmp_path / "l.npy"), pts)
    (tmp_path / "bad.json").write_text("[[0, 1]]")
    with pytest.raises(SchemaError):
        read_landmarks(tmp_path / "bad.json")
    (tmp_path / "junk.npy").write_bytes(b"\x93NUMPY garbage")
    with pytest.raises(CorruptFile):
        read_landmarks(tmp_path / "junk.npy")


def test_pgm_roundtrip(tmp_path, rng):
    px = rng.integers(0, 256, (5, 7), dtype=np.uint8)
    write_pgm(px, tmp_path / "a.pgm")
    assert (tmp_path / "a.pgm").read_bytes().startswith(b"P5\n7 5\n255\n")
    np.testing.assert_array_equal(read_pgm(tmp_path / "a.pgm"), px)


def test_pgm_stream(tmp_path, rng):
    stack = rng.integers(0, 256, (3, 5, 6), dtype=np.uint8)
    write_pgm(stack, tmp_path / "s.pgm")
    data = (tmp_path / "s.pgm").read_bytes()
    assert data.count(b"P5\n6 5\n255\n") == 3
    np.testing.assert_array_equal(read_pgm_stream(tmp_path / "s.pgm"), stack)
    np.testing.assert_array_equal(read_pgm(tmp_path / "s.pgm"), stack[0])
    # hand-written stream with a comment in the second header
    (tmp_path / "h.pgm").write_bytes(b"P5 2 1 255\n\x01\x02P5\n# next\n2 1\n255\n\x03\x04\n")
    assert read_pgm_stream(tmp_path / "h.pgm").tolist() == [[[1, 2]], [[3, 4]]]
    (tmp_path / "mixed.pgm").write_bytes(b"P5 2 1 255\n\x01\x02P5 1 1 255\n\x03")
    with pytest.raises(CorruptFile):
        read_pgm_stream(tmp_path / "mixed.pgm")


def test_pgm_comments_and_errors(tmp_path):
    (tmp_path / "c.pgm").write_bytes(b"P5\n# made by hand\n2 1\n255\n\x00\xff")
    assert read_pgm(tmp_path / "c.pgm").tolist() == [[0, 255]]
    (tmp_path / "p2.pgm").write_bytes(b"P2\n1 1\n255\n0")
    with pytest.raises(CorruptFile):
        read_pgm(tmp_path / "p2.pgm")
    (tmp_path / "short.pgm").write_bytes(b"P5\n4 4\n255\n\x00")
    with pytest.raises(CorruptFile):
        read_pgm(tmp_path / "short.pgm")
