"""
Instruction records and response parsing
========================================

Build one training record, then recover frames from a response that was
cut off part way through.
"""

import aukit

seq = aukit.AuSequence.sparse([
    [(2, 1.0), (3, 1.0), (6, 1.0), (7, 1.0), (8, 0.52), (18, 0.17), (19, 0.11)],
    [(2, 1.0), (3, 1.0), (6, 1.0), (7, 1.0), (18, 0.19), (19, 0.08)],
], fps=5)

rec = aukit.build_training_record("audio/M013_sur_3_014.wav", "surprise", seq)
print(rec.messages[0].content[:80], "...")
print(rec.messages[1].content)

# one JSON object per line in a corpus file
print(rec.to_json()[:120], "...")

# a truncated answer keeps only the frames that closed
report = aukit.parse_response("surprise, [[[2, 1.0], [3, 1.0]], [[2, .9], [8, .4")
print(report.emotion, report.complete_frames, report.dropped_suffix)
for w in report.warnings:
    print("  warning:", w)

# out-of-range values and duplicates are repaired with a warning
report = aukit.parse_response("happy, [[[11, 1.3], [11, .2], [4, .10]]]")
print(report.frames.frames[0].pairs, report.warnings)
