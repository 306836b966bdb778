"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import math

import numpy as np
import pytest

from vlcsync.codes import SourceModel, VlcCode, cached_tree


@pytest.fixture(scope="session")
def c0():
    """Three-symbol code used for hand-checkable trellis cases."""
    code = VlcCode("C0", ("a1", "a2", "a3"), ("0", "10", "11"))
    source = SourceModel(("a1", "a2", "a3"), (0.5, 0.25, 0.25))
    return code, source


def enumerate_best(code, source, config, received, channel):
    """Exhaustive length-constrained MAP oracle for short frames.

    Enumerates every parse whose encoding has the received length and
    whose symbol count satisfies the termination residue, folds the same
    per-bit metric the decoder uses (bit log-likelihood, plus the symbol
    log prior at the codeword-final bit), and picks the maximum with
    lexicographically smallest bit labels among exact ties.  Returns
    (metric, bits, symbols) or None when no parse is feasible.
    """
    tree = cached_tree(code, source)
    ll = channel.bit_loglik(np.asarray(received))
    l_x = len(received)
    lens = [len(cw) for cw in code.codewords]
    logp = [math.log(p) for p in source.probs]
    candidates = []

    def fold(seq):
        m = 0.0
        k = 0
        for s in seq:
            bits = tree.codeword_bits[s]
            last = len(bits) - 1
            for j, b in enumerate(bits):
                w = (logp[s] + ll[k, int(b)]) if j == last else ll[k, int(b)]
                m = m + w
                k += 1
        return m

    def rec(remaining, seq):
        if remaining == 0:
            if config.exact:
                if len(seq) != config.l_s:
                    return
            elif len(seq) % config.t != config.m_star:
                return
            bits = (np.concatenate([tree.codeword_bits[s] for s in seq])
                    if seq else np.zeros(0, dtype=np.uint8))
            candidates.append((fold(seq), bits.tobytes(),
                               [code.symbols[s] for s in seq]))
            return
        for s in range(len(code)):
            if lens[s] <= remaining:
                rec(remaining - lens[s], seq + [s])

    rec(l_x, [])
    if not candidates:
        return None
    best_metric = max(c[0] for c in candidates)
    tied = sorted((c for c in candidates if c[0] == best_metric),
                  key=lambda c: c[1])
    return tied[0]


def levenshtein_recursive(a, b, _memo=None):
    """Exponential-style reference edit distance (memoized recursion)."""
    if _memo is None:
        _memo = {}
    key = (len(a), len(b))
    if key in _memo:
        return _memo[key]
    if not a:
        result = len(b)
    elif not b:
        result = len(a)
    else:
        result = min(
            levenshtein_recursive(a[1:], b, _memo={}) + 1,
            levenshtein_recursive(a, b[1:], _memo={}) + 1,
            levenshtein_recursive(a[1:], b[1:], _memo={}) + (a[0] != b[0]),
        )
    _memo[key] = result
    return result
