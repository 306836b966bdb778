"""Sequence and bit-level scoring used by the experiment harness."""

from __future__ import annotations

from typing import Sequence

import numpy as np


def levenshtein(a: Sequence, b: Sequence) -> int:
    """Edit distance with unit insert/delete/substitute costs."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, start=1):
        cur = [i] + [0] * len(b)
        for j, y in enumerate(b, start=1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y))
        prev = cur
    return prev[-1]


def nld(decoded: Sequence, emitted: Sequence, l_s: int) -> float:
    """Levenshtein distance between symbol sequences, normalized by l_s."""
    return levenshtein(decoded, emitted) / l_s


def bit_error_fraction(path_bits: np.ndarray, sent_bits: np.ndarray) -> float:
    """Hamming distance between the decoded path labels and the transmitted
    bits, divided by the frame bit length."""
    path_bits = np.asarray(path_bits)
    sent_bits = np.asarray(sent_bits)
    if len(path_bits) != len(sent_bits):
        # A diagnostic (infeasible) path may be shorter; count the length
        # mismatch as errors so the fraction stays in [0, 1].
        n = max(len(path_bits), len(sent_bits))
        m = min(len(path_bits), len(sent_bits))
        errs = int((path_bits[:m] != sent_bits[:m]).sum()) + (n - m)
        return errs / n
    if len(sent_bits) == 0:
        return 0.0
    return float((path_bits != sent_bits).mean())
