"""Slow, obviously-correct reference implementations used to check the library.

None of these import the code paths they check.
"""
import math
import random


def corpus_7_active(seed=1234, n_frames=1000):
    """Frames as {index: two-decimal intensity} dicts with exactly 7 active AUs."""
    rng = random.Random(seed)
    frames = []
    for _ in range(n_frames):
        idx = sorted(rng.sample(range(24), 7))
        frames.append({i: rng.randint(1, 100) / 100 for i in idx})
    return frames


def dense_rows(frames):
    return [[f.get(i, 0.0) for i in range(24)] for f in frames]


def fmt2(v):
    cents = round(v * 100)
    return "1.0" if cents == 100 else "." + str(cents).zfill(2)


def char_counts(frames):
    """Lengths of the dense and sparse renderings, assembled by hand."""
    dense = "[" + ", ".join("[" + ", ".join(fmt2(f.get(i, 0.0)) for i in range(24)) + "]" for f in frames) + "]"
    sparse = "[" + ", ".join(
        "[" + ", ".join("[%d, %s]" % (i, fmt2(v)) for i, v in sorted(f.items())) + "]" for f in frames) + "]"
    return len(dense), len(sparse)


def closed_frames_before(text, cut):
    """Count frames whose closing bracket sits before offset *cut* (bracket matching on the full text)."""
    start = text.index(", [") + 2
    depth = 0
    count = 0
    for pos in range(start, len(text)):
        ch = text[pos]
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth == 1 and pos < cut:
                count += 1
    return count


def slot_metrics(pred, gt, tau=0.0):
    """Enumerate every (frame, AU) slot one at a time."""
    t = min(len(pred), len(gt))
    tp = fp = fn = tn = 0
    abs_errs = []
    exact_frames = 0
    for k in range(t):
        same = True
        for i in range(24):
            p_on = pred[k][i] > tau
            g_on = gt[k][i] > tau
            if p_on and g_on:
                tp += 1
            elif p_on:
                fp += 1
            elif g_on:
                fn += 1
            else:
                tn += 1
            if p_on != g_on:
                same = False
            abs_errs.append(abs(pred[k][i] - gt[k][i]))
        exact_frames += same
    precision = tp / (tp + fp) if tp + fp > 0 else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return {
        "tp": tp, "fp": fp, "fn": fn, "tn": tn,
        "precision": precision, "recall": recall, "f1": f1,
        "slot_accuracy": (tp + tn) / (t * 24),
        "frame_set_accuracy": exact_frames / t,
        "mae": math.fsum(abs_errs) / (t * 24),
        "aligned_frames": t,
        "length_mismatch": abs(len(pred) - len(gt)),
    }


def guidance_scalar(nn, hn, na, ha, s_h, s_au):
    return [na[k] + s_h * (hn[k] - nn[k]) + s_au * (ha[k] - hn[k]) for k in range(len(nn))]


def landmark_mean_distance(pred, gt, points):
    total = 0.0
    n = 0
    for fp, fg in zip(pred, gt):
        for p in points:
            total += math.hypot(fp[p][0] - fg[p][0], fp[p][1] - fg[p][1])
            n += 1
    return total / n
