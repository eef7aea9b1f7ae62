import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from aukit import CREMA6, MEAD8, AuSequence, SparseAuFrame, au_metadata, emotion_label, validate_dense
from aukit.core import REGIONS, default_taxonomy, load_taxonomy
from aukit.errors import BadLength, IndexOutOfRange, SchemaError, UnknownEmotion, ValueOutOfRange


def test_au_metadata_ends():
    d0 = au_metadata(0)
    assert d0.name == "left eye closure"
    assert d0.region == "eyes"
    d23 = au_metadata(23)
    assert d23.name == "nose wrinkle"
    assert d23.region == "nose"


@pytest.mark.parametrize("index", [-1, 24, 100])
def test_au_metadata_out_of_range(index):
    with pytest.raises(IndexOutOfRange):
        au_metadata(index)


def test_taxonomy_complete_and_unique():
    descs = [au_metadata(i) for i in range(24)]
    assert [d.index for d in descs] == list(range(24))
    assert len({d.name for d in descs}) == 24
    assert all(d.region in REGIONS for d in descs)
    assert au_metadata(8).alias == "AU9 Jaw Drop"


def test_taxonomy_file_roundtrip(tmp_path):
    path = tmp_path / "tax.json"
    path.write_text(json.dumps([d.__dict__ for d in default_taxonomy()]))
    assert load_taxonomy(path) == default_taxonomy()


def test_taxonomy_file_rejects_duplicates(tmp_path):
    items = [d.__dict__ for d in default_taxonomy()]
    items[1] = dict(items[1], name=items[0]["name"])
    path = tmp_path / "tax.json"
    path.write_text(json.dumps(items))
    with pytest.raises(SchemaError):
        load_taxonomy(path)


def test_validate_dense_neutral():
    v = validate_dense([0.0] * 24)
    assert v.shape == (24,)
    assert not v.any()
    assert not v.flags.writeable


def test_validate_dense_bad_length():
    with pytest.raises(BadLength):
        validate_dense([0.0] * 23)


def test_validate_dense_reports_offender():
    vals = [0.0] * 24
    vals[3] = 1.5
    with pytest.raises(ValueOutOfRange) as exc:
        validate_dense(vals)
    assert (exc.value.index, exc.value.value) == (3, 1.5)


@given(st.lists(st.floats(min_value=-0.5, max_value=1.5, allow_nan=False), min_size=20, max_size=28))
def test_validate_dense_iff(values):
    ok = len(values) == 24 and min(values) >= 0 and max(values) <= 1
    try:
        validate_dense(values)
    except (BadLength, ValueOutOfRange):
        assert not ok
    else:
        assert ok


def test_validate_dense_nan():
    vals = [0.0] * 24
    vals[5] = float("nan")
    with pytest.raises(ValueOutOfRange):
        validate_dense(vals)


def test_sparse_frame_invariants():
    SparseAuFrame(((0, 0.1), (5, 1.0)))
    with pytest.raises(SchemaError):
        SparseAuFrame(((5, 0.1), (0, 0.2)))
    with pytest.raises(SchemaError):
        SparseAuFrame(((5, 0.1), (5, 0.2)))
    with pytest.raises(IndexOutOfRange):
        SparseAuFrame(((24, 0.1),))
    with pytest.raises(ValueOutOfRange):
        SparseAuFrame(((3, 1.2),))


def test_sequence_equality_and_immutability():
    a = AuSequence.dense(np.zeros((3, 24)), 25)
    b = AuSequence.dense(np.zeros((3, 24)), 25.0)
    assert a == b
    assert a != AuSequence.dense(np.zeros((3, 24)), 5)
    with pytest.raises(AttributeError):
        a.fps = 3
    with pytest.raises(ValueError):
        a.frames[0, 0] = 1.0


def test_sequence_rejects_bad_values():
    with pytest.raises(SchemaError):
        AuSequence.dense(np.zeros((2, 24)), 0)
    with pytest.raises(BadLength):
        AuSequence.dense(np.zeros((2, 23)), 5)
    with pytest.raises(ValueOutOfRange):
        AuSequence.dense(np.full((2, 24), 2.0), 5)


def test_empty_sequence_allowed():
    assert len(AuSequence.dense([], 5)) == 0
    assert len(AuSequence.sparse([], 5)) == 0


def test_emotion_taxonomies():
    assert len(MEAD8) == 8
    assert len(CREMA6) == 6
    assert emotion_label("Happy") == "happy"
    assert emotion_label(" SURPRISED ") == "surprise"
    assert "contempt" in MEAD8
    assert "contempt" not in CREMA6
    with pytest.raises(UnknownEmotion):
        emotion_label("bored")
