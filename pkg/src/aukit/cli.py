"""Command-line entry point: ``aukit <command> ...``.

Exit status is 0 on success, 1 for invalid input or arguments and 2 for I/O
failures. Results go to stdout or files, diagnostics to stderr. Defaults can
be overridden with ``AUHEAD_*`` environment variables; flags win over both.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .codec import CodecConfig, deserialize_tokens, densify_sequence, serialize_tokens, sparsify_sequence
from .core import N_UNITS, TAXONOMIES, AuSequence, default_taxonomy
from .embedding import EmbeddingConfig, embed_sequence, random_kernel
from .errors import AuError, CorruptFile, LengthMismatch
from .geometry import DisplacementBasis, map_sequence, rasterize_many
from .guidance import DEFAULT_S_AU, DEFAULT_S_H, GuidanceInputs, disentangled_combine
from .io import (
    pgm_bytes, read_kernel, read_landmarks, read_pgm_stream, read_sequence, read_vector,
    sequence_to_json, write_kernel, write_landmarks, write_sequence, write_vector,
)
from .metrics import au_detection_metrics, emotion_accuracy, landmark_distance, psnr, ssim_frames
from .prompt import PromptTemplateConfig, build_inference_prompt, build_training_record, parse_response
from .resample import ResampleConfig, downsample, resample_to_length, upsample_linear

ENV_PREFIX = "AUHEAD_"
SEQ_SUFFIXES = (".json", ".ausq", ".bin")


class UsageError(AuError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _env(name, default, cast=float):
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        raise UsageError(f"environment variable {ENV_PREFIX}{name}={raw!r} is not a valid {cast.__name__}") from None


def _size(text):
    try:
        w, h = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"--size expects WxH, got {text!r}") from None
    return w, h


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="aukit", description="Sparse AU sequence tools.")
    p.add_argument("--json", action="store_true", help="emit diagnostics as JSON objects")
    p.add_argument("--version", action="version", version=f"aukit {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def taxonomy_arg(sp):
        sp.add_argument("--taxonomy", choices=sorted(TAXONOMIES), default="mead",
                        help="emotion label set (default: mead)")

    sp = sub.add_parser("encode", help="dense sequence -> sparse sequence or token text")
    sp.add_argument("input")
    sp.add_argument("--lambda", dest="lam", type=float, default=_env("LAMBDA", 0.0))
    sp.add_argument("--tokens", action="store_true", help="write token text instead of sparse JSON")
    sp.add_argument("--emotion", help="emotion label prefixed to token text")
    sp.add_argument("-o", "--out")
    taxonomy_arg(sp)

    sp = sub.add_parser("decode", help="sparse sequence or token text -> dense sequence")
    sp.add_argument("input")
    sp.add_argument("--fps", type=float, default=_env("FPS_AU", 5.0), help="frame rate for token text input")
    sp.add_argument("--format", choices=("json", "bin"))
    sp.add_argument("-o", "--out")
    taxonomy_arg(sp)

    sp = sub.add_parser("resample", help="decimate or linearly upsample a dense sequence")
    sp.add_argument("input")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--gamma", type=float)
    g.add_argument("--factor", type=int)
    g.add_argument("--target-len", type=int)
    sp.add_argument("--phase", type=int, default=0)
    sp.add_argument("--format", choices=("json", "bin"))
    sp.add_argument("-o", "--out")

    sp = sub.add_parser("prompts", help="build instruction corpora or parse model responses")
    psub = sp.add_subparsers(dest="prompts_command", required=True, parser_class=_Parser)
    b = psub.add_parser("build", help="write one JSONL record per audio file")
    b.add_argument("--audio-dir", required=True)
    b.add_argument("--emotions", help="JSON object mapping audio stem -> emotion label")
    b.add_argument("--seq-dir", help="directory with <stem>.json / <stem>.ausq sequences (default: audio dir)")
    b.add_argument("--inference", action="store_true", help="emit user-only inference prompts")
    b.add_argument("--lambda", dest="lam", type=float, default=_env("LAMBDA", 0.0))
    b.add_argument("--sample-rate", type=int, default=16000)
    b.add_argument("--fps", type=int, default=int(_env("FPS_AU", 5.0)))
    b.add_argument("--out", required=True)
    taxonomy_arg(b)
    r = psub.add_parser("parse", help="recover emotion and AU frames from a model response")
    r.add_argument("--in", dest="input", required=True)
    r.add_argument("--fps", type=float, default=_env("FPS_AU", 5.0))
    r.add_argument("--dense", action="store_true", help="write the recovered sequence densified")
    r.add_argument("-o", "--out", help="write the recovered sequence here")
    taxonomy_arg(r)

    sp = sub.add_parser("render", help="draw landmark or polyline images for each frame")
    sp.add_argument("input")
    sp.add_argument("--mode", choices=("lmk", "rom"), default="rom")
    sp.add_argument("--basis", help="displacement basis JSON (default: built-in)")
    sp.add_argument("--size", type=_size, default=(64, 64))
    sp.add_argument("--out-dir", help="write frame_%%05d.pgm files here")
    sp.add_argument("-o", "--out", help="write all frames to one multi-image PGM file")
    sp.add_argument("--no-clamp", action="store_true")
    sp.add_argument("--landmarks-out", help="also write landmark frames (.npy, else JSON)")

    sp = sub.add_parser("embed", help="context-window AU embeddings")
    sp.add_argument("input", nargs="?")
    sp.add_argument("--kernel", required=True, help="AUCK kernel file")
    sp.add_argument("-n", type=int, default=int(_env("N", 2.0)), help="half window")
    sp.add_argument("--padding", choices=("replicate", "zero"), default="replicate")
    sp.add_argument("--init", action="store_true", help="write a seeded random kernel to --kernel and exit")
    sp.add_argument("--dim", type=int, default=128)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--out", help=".npy output (default: JSON on stdout)")

    sp = sub.add_parser("guide", help="combine four denoiser outputs with disentangled guidance")
    sp.add_argument("--s-h", type=float, default=_env("S_H", DEFAULT_S_H))
    sp.add_argument("--s-au", type=float, default=_env("S_AU", DEFAULT_S_AU))
    sp.add_argument("--inputs", nargs=4, required=True, metavar=("NULL_NULL", "H_NULL", "NULL_AU", "H_AU"))
    sp.add_argument("-o", "--out", help="float32 output file (default: JSON on stdout)")

    sp = sub.add_parser("eval", help="metrics")
    esub = sp.add_subparsers(dest="eval_command", required=True, parser_class=_Parser)
    e = esub.add_parser("au", help="AU detection/regression report")
    e.add_argument("pred")
    e.add_argument("gt")
    e.add_argument("--tau", type=float, default=0.0)
    e.add_argument("--mae-mode", choices=("all", "active"), default="all")
    e = esub.add_parser("emotion", help="emotion label accuracy")
    e.add_argument("pred")
    e.add_argument("gt")
    e = esub.add_parser("image", help="PSNR and mean SSIM of two PGM files (one or more images each)")
    e.add_argument("a")
    e.add_argument("b")
    e.add_argument("--peak", type=float, default=255.0)
    e = esub.add_parser("lmd", help="mean landmark distance")
    e.add_argument("pred")
    e.add_argument("gt")
    e.add_argument("--subset", choices=("mouth", "face"), default="mouth")

    sub.add_parser("info", help="print the AU taxonomy and defaults")
    return p


# -- helpers -----------------------------------------------------------------

def _emit(text: str, out, stdout):
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_seq(seq: AuSequence, out, fmt, stdout):
    if out:
        write_sequence(seq, out, fmt)
    else:
        stdout.write(sequence_to_json(seq))


def _batch(args, fn, stdout):
    """Run *fn(input, output)* per file when the input is a directory."""
    src = Path(args.input)
    if not src.is_dir():
        return fn(str(src), args.out)
    if not args.out:
        raise UsageError("-o/--out must name an output directory when the input is a directory")
    Path(args.out).mkdir(parents=True, exist_ok=True)
    for path in sorted(src.iterdir()):
        if path.suffix in SEQ_SUFFIXES or path.suffix == ".txt":
            fn(str(path), str(Path(args.out) / path.name))
    return 0


def _read_labels(path):
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("["):
        return [str(x) for x in json.loads(text)]
    return [line.strip() for line in text.splitlines() if line.strip()]


def _jsonable(v):
    if isinstance(v, float) and not np.isfinite(v):
        return "inf" if v > 0 else "-inf"
    return v


# -- commands ----------------------------------------------------------------

def cmd_encode(args, stdout):
    config = CodecConfig(lam=args.lam)
    taxonomy = TAXONOMIES[args.taxonomy]
    if args.tokens and not args.emotion:
        raise UsageError("--tokens needs --emotion")

    def one(src, dst):
        seq = read_sequence(src)
        sparse = sparsify_sequence(seq, config) if seq.is_dense else seq
        if args.tokens:
            text = serialize_tokens(args.emotion, sparse, config, taxonomy)
            if dst:
                Path(dst).write_text(text, encoding="utf-8", newline="\n")
            else:
                stdout.write(text + "\n")
        else:
            _emit_seq(sparse, dst, "json", stdout)

    return _batch(args, one, stdout) or 0


def cmd_decode(args, stdout, stderr):
    taxonomy = TAXONOMIES[args.taxonomy]

    def one(src, dst):
        raw = Path(src).read_bytes()
        head = raw.lstrip()[:1]
        if raw[:4] == b"AUSQ" or head == b"{":
            seq = read_sequence(src)
        else:
            emotion, seq = deserialize_tokens(raw.decode("utf-8"), taxonomy, fps=args.fps)
            stderr.write(f"emotion: {emotion}\n")
        _emit_seq(densify_sequence(seq), dst, args.format, stdout)

    return _batch(args, one, stdout) or 0


def cmd_resample(args, stdout):
    def one(src, dst):
        seq = read_sequence(src)
        if args.factor is not None:
            out = upsample_linear(seq, args.factor)
        elif args.target_len is not None:
            out = resample_to_length(seq, args.target_len)
        else:
            gamma = args.gamma if args.gamma is not None else _env("GAMMA", 0.2)
            out = downsample(seq, ResampleConfig(gamma=gamma, phase=args.phase))
        _emit_seq(out, dst, args.format, stdout)

    return _batch(args, one, stdout) or 0


def _find_sequence(seq_dir: Path, stem: str):
    for suffix in (".json", ".ausq.json", ".ausq", ".bin"):
        path = seq_dir / (stem + suffix)
        if path.exists():
            return path
    return None


def cmd_prompts_build(args, stdout, stderr):
    template = PromptTemplateConfig(sample_rate=args.sample_rate, fps=args.fps)
    taxonomy = TAXONOMIES[args.taxonomy]
    codec = CodecConfig(lam=args.lam)
    audio_dir = Path(args.audio_dir)
    audio = sorted(p for p in audio_dir.iterdir() if p.suffix.lower() in (".wav", ".flac", ".mp3"))
    if not audio:
        raise UsageError(f"--audio-dir {audio_dir} holds no audio files")
    emotions = {}
    if not args.inference:
        if not args.emotions:
            raise UsageError("--emotions is required unless --inference is given")
        emotions = json.loads(Path(args.emotions).read_text(encoding="utf-8"))
    seq_dir = Path(args.seq_dir) if args.seq_dir else audio_dir
    n = 0
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        for path in audio:
            audio_path = str(audio_dir / path.name)
            if args.inference:
                rec = build_inference_prompt(audio_path, template)
            else:
                stem = path.stem
                if stem not in emotions:
                    raise UsageError(f"--emotions has no label for {stem!r}")
                seq_path = _find_sequence(seq_dir, stem)
                if seq_path is None:
                    raise UsageError(f"no AU sequence for {stem!r} in {seq_dir}")
                seq = read_sequence(seq_path)
                if seq.is_dense and seq.fps != template.fps:
                    seq = downsample(seq, ResampleConfig(gamma=template.fps / seq.fps))
                rec = build_training_record(audio_path, emotions[stem], seq, template, codec, taxonomy)
            fh.write(rec.to_json() + "\n")
            n += 1
    stderr.write(f"wrote {n} records to {args.out}\n")
    return 0


def cmd_prompts_parse(args, stdout, stderr):
    text = Path(args.input).read_text(encoding="utf-8")
    report = parse_response(text, TAXONOMIES[args.taxonomy], fps=args.fps)
    for w in report.warnings:
        stderr.write(f"warning: {w}\n")
    if args.out:
        seq = densify_sequence(report.frames) if args.dense else report.frames
        write_sequence(seq, args.out)
    summary = {"emotion": report.emotion, "complete_frames": report.complete_frames,
               "dropped_suffix": report.dropped_suffix, "warnings": list(report.warnings)}
    stdout.write(json.dumps(summary) + "\n")
    return 0


def cmd_render(args, stdout, stderr):
    if not (args.out_dir or args.out):
        raise UsageError("render needs --out-dir or -o/--out")
    seq = densify_sequence(read_sequence(args.input))
    basis = DisplacementBasis.load(args.basis)
    width, height = args.size
    frames = map_sequence(seq, basis, clamp=not args.no_clamp)
    images = rasterize_many(frames, width, height, args.mode)
    if args.out:
        Path(args.out).write_bytes(pgm_bytes(images))
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for t, img in enumerate(images):
            (out_dir / f"frame_{t:05d}.pgm").write_bytes(pgm_bytes(img))
    if args.landmarks_out:
        write_landmarks(frames, args.landmarks_out)
    stderr.write(f"rendered {len(images)} frames\n")
    return 0


def cmd_embed(args, stdout):
    config = EmbeddingConfig(n=args.n, dim=args.dim, padding=args.padding)
    if args.init:
        write_kernel(random_kernel(config, seed=args.seed), args.kernel)
        return 0
    if args.input is None:
        raise UsageError("embed needs an input sequence (or --init)")
    kernel = read_kernel(args.kernel)
    config = EmbeddingConfig(n=args.n, dim=kernel.dim, padding=args.padding)
    emb = embed_sequence(densify_sequence(read_sequence(args.input)), kernel, config)
    if args.out:
        with open(args.out, "wb") as fh:
            np.save(fh, emb)
    else:
        stdout.write(json.dumps(emb.tolist()) + "\n")
    return 0


def cmd_guide(args, stdout):
    vecs = [read_vector(p) for p in args.inputs]
    eps = disentangled_combine(GuidanceInputs(*vecs, s_h=args.s_h, s_au=args.s_au))
    if args.out:
        write_vector(eps, args.out)
    else:
        stdout.write(json.dumps(eps.tolist()) + "\n")
    return 0


def cmd_eval(args, stdout):
    if args.eval_command == "au":
        pred = densify_sequence(read_sequence(args.pred))
        gt = densify_sequence(read_sequence(args.gt))
        report = au_detection_metrics(pred, gt, tau=args.tau, mae_mode=args.mae_mode).to_dict()
    elif args.eval_command == "emotion":
        report = {"accuracy": emotion_accuracy(_read_labels(args.pred), _read_labels(args.gt))}
    elif args.eval_command == "image":
        a, b = read_pgm_stream(args.a), read_pgm_stream(args.b)
        if len(a) != len(b):
            raise LengthMismatch(f"{len(a)} images vs {len(b)} images")
        report = {"psnr": psnr(a, b, args.peak), "ssim": float(ssim_frames(a, b, args.peak).mean()),
                  "frames": len(a)}
    else:
        report = {"lmd": landmark_distance(read_landmarks(args.pred), read_landmarks(args.gt), args.subset),
                  "subset": args.subset}
    stdout.write(json.dumps({k: _jsonable(v) for k, v in report.items()}) + "\n")
    return 0


def cmd_info(args, stdout):
    info = {
        "version": __version__,
        "n_units": N_UNITS,
        "aus": [{"index": d.index, "name": d.name, "region": d.region, "alias": d.alias}
                for d in default_taxonomy()],
        "emotions": {k: list(v.labels) for k, v in TAXONOMIES.items()},
        "defaults": {"lambda": _env("LAMBDA", 0.0), "gamma": _env("GAMMA", 0.2), "n": int(_env("N", 2.0)),
                     "s_au": _env("S_AU", DEFAULT_S_AU), "s_h": _env("S_H", DEFAULT_S_H),
                     "fps_video": _env("FPS_VIDEO", 25.0), "fps_au": _env("FPS_AU", 5.0)},
    }
    stdout.write(json.dumps(info, indent=1) + "\n")
    return 0


def _dispatch(args, stdout, stderr):
    c = args.command
    if c == "encode":
        return cmd_encode(args, stdout)
    if c == "decode":
        return cmd_decode(args, stdout, stderr)
    if c == "resample":
        return cmd_resample(args, stdout)
    if c == "prompts":
        if args.prompts_command == "build":
            return cmd_prompts_build(args, stdout, stderr)
        return cmd_prompts_parse(args, stdout, stderr)
    if c == "render":
        return cmd_render(args, stdout, stderr)
    if c == "embed":
        return cmd_embed(args, stdout)
    if c == "guide":
        return cmd_guide(args, stdout)
    if c == "eval":
        return cmd_eval(args, stdout)
    return cmd_info(args, stdout)


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = "--json" in argv

    def fail(code, exc):
        if as_json:
            stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc), "exit": code}) + "\n")
        else:
            stderr.write(f"aukit: error: {exc}\n")
        return code

    try:
        args = build_parser().parse_args(argv)
        return _dispatch(args, stdout, stderr)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except CorruptFile as exc:
        return fail(2, exc)
    except (OSError, UnicodeDecodeError) as exc:
        return fail(2, exc)
    except (AuError, ValueError, json.JSONDecodeError) as exc:
        return fail(1, exc)


if __name__ == "__main__":
    sys.exit(main())
