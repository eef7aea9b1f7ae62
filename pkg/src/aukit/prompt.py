"""Instruction records for the emotion-then-AU protocol and response recovery.

Records follow the chat-style JSON layout::

    {"messages": [{"role": "user", "audio": "...", "content": "..."},
                  {"role": "assistant", "content": "surprise, [[[2, 1.0], ...]]"}]}
"""
from __future__ import annotations

import json
import re
import string
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Sequence

from .codec import DEFAULT_CONFIG, CodecConfig, serialize_tokens, sparsify_sequence
from .core import MEAD8, N_UNITS, AuDescriptor, AuSequence, EmotionTaxonomy, SparseAuFrame, default_taxonomy
from .errors import AuError, EmptySequence, NoEmotionHeader, NoFrames, SchemaError, UnknownEmotion


@dataclass(frozen=True)
class PromptTemplateConfig:
    sample_rate: int = 16000
    fps: int = 5
    template_path: str | None = None
    taxonomy: tuple[AuDescriptor, ...] | None = None

    def __post_init__(self):
        if self.fps <= 0 or self.sample_rate % self.fps:
            raise AuError(f"sample rate {self.sample_rate} is not divisible into {self.fps} fps frames")


DEFAULT_TEMPLATE = PromptTemplateConfig()


def au_definition_list(taxonomy: Sequence[AuDescriptor] | None = None) -> str:
    descs = taxonomy or default_taxonomy()
    items = [f"AU{d.index} {d.name}" for d in descs]
    return "; ".join(items[:-1]) + "; and " + items[-1]


def render_instruction(template: PromptTemplateConfig = DEFAULT_TEMPLATE) -> str:
    if template.template_path is None:
        raw = resources.files("aukit.data").joinpath("prompt_template.txt").read_text("utf-8")
    else:
        with open(template.template_path, encoding="utf-8") as fh:
            raw = fh.read()
    return string.Template(raw).substitute(
        rate_khz=f"{template.sample_rate / 1000:g}",
        samples=template.sample_rate // template.fps,
        fps=template.fps,
        n_units=N_UNITS,
        last_index=N_UNITS - 1,
        au_definitions=au_definition_list(template.taxonomy),
    )


@dataclass(frozen=True)
class Message:
    role: str
    content: str
    audio: str | None = None

    def to_dict(self) -> dict:
        d = {"role": self.role}
        if self.audio is not None:
            d["audio"] = self.audio
        d["content"] = self.content
        return d


@dataclass(frozen=True)
class PromptRecord:
    messages: tuple[Message, ...]

    def __post_init__(self):
        if not self.messages or self.messages[0].role != "user" or not self.messages[0].audio:
            raise SchemaError("first message must be a user turn with an audio path")
        n_assistant = sum(m.role == "assistant" for m in self.messages)
        if n_assistant > 1:
            raise SchemaError("a record holds at most one assistant message")

    @property
    def is_training(self) -> bool:
        return any(m.role == "assistant" for m in self.messages)

    def to_dict(self) -> dict:
        return {"messages": [m.to_dict() for m in self.messages]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)

    @classmethod
    def from_dict(cls, d: dict) -> "PromptRecord":
        try:
            msgs = tuple(Message(m["role"], m["content"], m.get("audio")) for m in d["messages"])
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"malformed prompt record: {exc}") from None
        return cls(msgs)


def build_inference_prompt(audio_path: str, template: PromptTemplateConfig = DEFAULT_TEMPLATE) -> PromptRecord:
    if not audio_path:
        raise AuError("audio path must be non-empty")
    return PromptRecord((Message("user", render_instruction(template), audio_path),))


def build_training_record(audio_path: str, emotion: str, seq: AuSequence,
                          template: PromptTemplateConfig = DEFAULT_TEMPLATE,
                          codec: CodecConfig = DEFAULT_CONFIG,
                          taxonomy: EmotionTaxonomy = MEAD8) -> PromptRecord:
    if len(seq) == 0:
        raise EmptySequence("training record needs at least one AU frame")
    if seq.is_dense:
        seq = sparsify_sequence(seq, codec)
    answer = serialize_tokens(emotion, seq, codec, taxonomy)
    user = build_inference_prompt(audio_path, template).messages[0]
    return PromptRecord((user, Message("assistant", answer)))


def write_corpus(records: Iterable[PromptRecord], path) -> int:
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(rec.to_json() + "\n")
            n += 1
    return n


def read_corpus(path) -> list[PromptRecord]:
    with open(path, encoding="utf-8") as fh:
        return [PromptRecord.from_dict(json.loads(line)) for line in fh if line.strip()]


# -- response recovery -------------------------------------------------------

_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_LPAIR = re.compile(rf"\[\s*({_NUM})\s*,\s*({_NUM})\s*\]")
_PAIR_BODY = rf"\[\s*{_NUM}\s*,\s*{_NUM}\s*\]"
_FRAME = re.compile(rf"\[\s*(?:{_PAIR_BODY}\s*(?:,\s*{_PAIR_BODY}\s*)*)?\]")
_HEADER = re.compile(r",\s*\[")
_WS = re.compile(r"\s*")


@dataclass(frozen=True)
class ParseReport:
    emotion: str
    frames: AuSequence
    complete_frames: int
    dropped_suffix: bool
    warnings: tuple[str, ...] = field(default=())


def _lenient_frame(body: str, t: int, warnings: list) -> SparseAuFrame:
    seen = {}
    for si, sv in _LPAIR.findall(body):
        raw_i, v = float(si), float(sv)
        if not raw_i.is_integer() or not 0 <= raw_i < N_UNITS:
            warnings.append(f"frame {t}: dropped pair with invalid AU index {si}")
            continue
        i = int(raw_i)
        if i in seen:
            warnings.append(f"frame {t}: duplicate AU index {i}, kept first value")
            continue
        if not 0.0 <= v <= 1.0:
            v = min(1.0, max(0.0, v))
            warnings.append(f"frame {t}: AU{i} intensity {sv} clamped to {v:g}")
        seen[i] = v
    if list(seen) != sorted(seen):
        warnings.append(f"frame {t}: AU indices reordered")
    return SparseAuFrame(tuple(sorted(seen.items())))


def parse_response(text: str, taxonomy: EmotionTaxonomy = MEAD8, fps: float = 5.0) -> ParseReport:
    """Recover the emotion and every complete frame from a model response.

    Numbers may be written ``.52``, ``0.52`` or ``1.0``. Parsing stops at the
    first frame that is not closed (truncation) or is malformed; everything
    from there on is discarded and ``dropped_suffix`` is set.
    """
    head = _HEADER.search(text)
    if head is None:
        raise NoEmotionHeader("response has no '<emotion>, [' prefix")
    label = text[:head.start()].strip().strip("\"'").strip()
    try:
        emotion = taxonomy.normalize(label)
    except UnknownEmotion:
        raise NoEmotionHeader(f"unrecognized emotion header {label!r}") from None

    warnings: list[str] = []
    frames: list[SparseAuFrame] = []
    dropped = False
    n = len(text)
    pos = head.end()  # just past the outer "["
    while True:
        pos = _WS.match(text, pos).end()
        if pos >= n:
            warnings.append("response ended before the closing bracket")
            break
        if text[pos] == "]":
            rest = text[pos + 1:].strip()
            if rest:
                warnings.append(f"ignored {len(rest)} trailing characters")
            break
        m = _FRAME.match(text, pos)
        if m is None:
            dropped = True
            warnings.append(f"dropped incomplete or malformed frame at offset {pos}")
            break
        frames.append(_lenient_frame(m.group(0), len(frames), warnings))
        pos = _WS.match(text, m.end()).end()
        if pos < n and text[pos] == ",":
            pos += 1
        elif pos < n and text[pos] != "]":
            dropped = True
            warnings.append(f"unexpected text after frame at offset {pos}")
            break
    if not frames:
        raise NoFrames("no complete AU frame could be recovered")
    seq = AuSequence.sparse(frames, fps)
    return ParseReport(emotion, seq, len(frames), dropped, tuple(warnings))
