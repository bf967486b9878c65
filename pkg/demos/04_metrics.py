"""
Segmentation metrics
====================

Boundary scoring is one-to-one: each reference boundary may claim at
most one hypothesis boundary within the tolerance, walked in ascending
reference order with ties going to the earlier hypothesis. Counts are
pooled over the corpus before computing precision, recall, F1,
over-segmentation (OS) and the R-value.
"""

from gradword import BoundarySet, compute_report, format_report, match_boundaries

# one utterance, 200 frames at 20 ms: reference cuts at frames 10, 20, 30
ref = BoundarySet("utt", (10, 20, 30), 200)

# hypothesis: one exact hit, one a single frame off (20 ms, inside the
# default tolerance), one far away
hyp = BoundarySet("utt", (10, 21, 40), 200)
hits = match_boundaries(ref, hyp, tolerance_ms=20.0, frame_period_ms=20.0)
print("hits:", hits, "of", len(ref), "reference boundaries")

# matching is one-to-one: two references cannot share one hypothesis
print("shared hyp counts once:",
      match_boundaries(BoundarySet("u", (10, 11), 50), BoundarySet("u", (10,), 50), 40.0, 20.0))

# corpus-level report: counts pool across utterances (micro-average)
refs = {"a": BoundarySet("a", (10, 20), 100), "b": BoundarySet("b", (30,), 100)}
hyps = {"a": BoundarySet("a", (10, 50), 100), "b": BoundarySet("b", (30,), 100)}
report = compute_report(refs, hyps, tolerance_ms=20.0, frame_period_ms=20.0)
print()
print(format_report(report))

# OS = recall/precision - 1 reads the error balance: negative means too few
# boundaries proposed, positive too many; the R-value folds recall and OS
# into one number that is 100 only at perfect segmentation
over = compute_report(refs, {"a": BoundarySet("a", tuple(range(0, 100, 3)), 100),
                             "b": BoundarySet("b", tuple(range(0, 100, 3)), 100)},
                      20.0, 20.0)
print("over-segmenting every 3rd frame: os =", round(over.os, 1),
      " r_value =", round(over.r_value, 1))
