import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from aukit import (
    AuSequence, CodecConfig, SparseAuFrame, compression_stats, densify, deserialize_tokens,
    serialize_tokens, sparsify, sparsify_sequence,
)
from aukit.codec import densify_sequence, format_intensity, quantize
from aukit.errors import AuError, BadIndex, BadIntensity, EmptySequence, ParseError, UnknownEmotion

from oracles import char_counts, corpus_7_active, dense_rows

FOOTNOTE_PAIRS = ((0, 0.38), (1, 0.45), (21, 0.84), (22, 0.90))

two_decimal = st.integers(0, 100).map(lambda c: c / 100)
dense_2dp = st.lists(two_decimal, min_size=24, max_size=24)


def test_sparsify_footnote(footnote_vector):
    assert sparsify(footnote_vector).pairs == FOOTNOTE_PAIRS


def test_sparsify_zero():
    assert sparsify(np.zeros(24)).pairs == ()


def test_sparsify_threshold(footnote_vector):
    assert sparsify(footnote_vector, CodecConfig(lam=0.5)).pairs == ((21, 0.84), (22, 0.90))


def test_codec_config_range():
    with pytest.raises(AuError):
        CodecConfig(lam=1.0)
    with pytest.raises(AuError):
        CodecConfig(lam=-0.1)


def test_densify_footnote(footnote_vector):
    np.testing.assert_array_equal(densify(SparseAuFrame(FOOTNOTE_PAIRS)), footnote_vector)


def test_densify_empty():
    np.testing.assert_array_equal(densify(SparseAuFrame()), np.zeros(24))


@given(dense_2dp)
def test_densify_sparsify_identity(values):
    v = np.array(values)
    np.testing.assert_array_equal(densify(sparsify(v)), v)


@given(dense_2dp, st.floats(0, 0.99), st.floats(0, 0.99))
def test_sparsity_monotone(values, a, b):
    lo, hi = sorted((a, b))
    small = set(sparsify(values, CodecConfig(lam=hi)).pairs)
    big = set(sparsify(values, CodecConfig(lam=lo)).pairs)
    assert small <= big


@given(arrays(np.float64, 24, elements=st.floats(0, 1)), st.floats(0, 0.99))
def test_indices_increasing_and_lossiness(values, lam):
    config = CodecConfig(lam=lam)
    frame = sparsify(values, config)
    assert list(frame.indices) == sorted(set(frame.indices))
    text = serialize_tokens("neutral", AuSequence.sparse([frame], 5), config)
    _, back = deserialize_tokens(text)
    err = np.abs(densify(back.frames[0]) - values).max()
    assert err <= max(lam, 0.5 * 10 ** -config.quantize_decimals) + 1e-12


@pytest.mark.parametrize("value,text", [
    (0.0, ".00"), (0.52, ".52"), (0.5, ".50"), (1.0, "1.0"), (0.995, "1.0"),
    (0.285, ".29"), (0.125, ".13"), (0.004, ".00"), (0.005, ".01"), (1e-9, ".00"),
])
def test_format_intensity(value, text):
    assert format_intensity(value) == text


def test_quantize_half_up():
    assert quantize(0.125) == 0.13
    assert quantize(0.135) == 0.14
    assert quantize(0.3333, 3) == 0.333


def test_serialize_appendix_fixture():
    seq = AuSequence.sparse([[(2, 1.0), (3, 1.0), (8, 0.52)]], 5)
    assert serialize_tokens("surprise", seq) == "surprise, [[[2, 1.0], [3, 1.0], [8, .52]]]"


def test_serialize_empty_frame():
    assert serialize_tokens("happy", AuSequence.sparse([[]], 5)) == "happy, [[]]"


def test_serialize_two_frames():
    seq = AuSequence.sparse([[(0, 0.10)], [(1, 0.20)]], 5)
    assert serialize_tokens("sad", seq) == "sad, [[[0, .10]], [[1, .20]]]"


def test_serialize_errors():
    with pytest.raises(EmptySequence):
        serialize_tokens("sad", AuSequence.sparse([], 5))
    with pytest.raises(UnknownEmotion):
        serialize_tokens("bored", AuSequence.sparse([[]], 5))


def test_deserialize_appendix_fixture():
    emotion, seq = deserialize_tokens("surprise, [[[2, 1.0], [3, 1.0], [8, .52]]]")
    assert emotion == "surprise"
    assert seq.frames == (SparseAuFrame(((2, 1.0), (3, 1.0), (8, 0.52))),)


def test_deserialize_empty_frame():
    emotion, seq = deserialize_tokens("happy, [[]]")
    assert emotion == "happy"
    assert seq.frames == (SparseAuFrame(),)


def test_deserialize_bad_index():
    with pytest.raises(BadIndex) as exc:
        deserialize_tokens("happy, [[[24, .10]]]")
    assert exc.value.index == 24
    assert exc.value.offset == 10


@pytest.mark.parametrize("text,error", [
    ("happy, [[[2, 1.5]]]", BadIntensity),
    ("happy, [[[2, abc]]]", ParseError),
    ("happy, [[[2, .10]]", ParseError),
    ("happy, [[[2, .10]]]]", ParseError),
    ("happy, [[[3, .10], [2, .10]]]", ParseError),
    ("happy [[[2, .10]]]", ParseError),
    ("bored, [[[2, .10]]]", UnknownEmotion),
    ("happy, []", EmptySequence),
])
def test_deserialize_errors(text, error):
    with pytest.raises(error):
        deserialize_tokens(text)


def test_parse_error_offset():
    with pytest.raises(ParseError) as exc:
        deserialize_tokens("happy, [[[2, .10]; [3, .20]]]")
    assert exc.value.offset == 17


sparse_frames = st.lists(
    st.dictionaries(st.integers(0, 23), two_decimal, max_size=24).map(lambda d: sorted(d.items())),
    min_size=1, max_size=12)


@given(sparse_frames, st.sampled_from(["angry", "happy", "surprise", "neutral"]))
def test_text_roundtrip(frames, emotion):
    seq = AuSequence.sparse(frames, 5)
    assert deserialize_tokens(serialize_tokens(emotion, seq)) == (emotion, seq)


def test_sequence_sparsify_densify(rng):
    vals = np.where(rng.random((50, 24)) < 0.3, rng.integers(1, 101, (50, 24)) / 100, 0.0)
    seq = AuSequence.dense(vals, 25)
    sp = sparsify_sequence(seq)
    assert sp.representation == "sparse" and sp.fps == 25
    assert densify_sequence(sp) == seq


def test_compression_zero_frame():
    stats = compression_stats(AuSequence.dense(np.zeros((1, 24)), 5))
    assert stats.sparse_chars == len("[[]]")
    assert stats.mean_active_per_frame == 0.0
    assert stats.dense_chars == 2 + 24 * 3 + 23 * 2 + 2


def test_compression_seven_active():
    frames = corpus_7_active(seed=1234, n_frames=1000)
    stats = compression_stats(AuSequence.dense(dense_rows(frames), 25))
    assert stats.mean_active_per_frame == 7.0
    # frozen from the independent character count in oracles.char_counts
    assert (stats.dense_chars, stats.sparse_chars) == (122000, 76093)
    assert (stats.dense_chars, stats.sparse_chars) == char_counts(frames)
    assert stats.reduction_pct == pytest.approx(100 * (1 - 76093 / 122000), abs=1e-12)


def test_compression_empty():
    with pytest.raises(EmptySequence):
        compression_stats(AuSequence.dense([], 5))


@settings(max_examples=50)
@given(st.integers(1, 30), st.integers(0, 2**32 - 1))
def test_compression_matches_char_count(n, seed):
    frames = corpus_7_active(seed=seed, n_frames=n)
    stats = compression_stats(AuSequence.dense(dense_rows(frames), 25))
    assert (stats.dense_chars, stats.sparse_chars) == char_counts(frames)
