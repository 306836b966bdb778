"""Length-constrained Viterbi decoding on aggregated state models.

The decoder state is a pair (internal code-tree node, symbol-count
residue).  With aggregation modulus ``T`` the residue is the decoded
symbol count modulo T; the exact bit/symbol variant tracks the count
itself.  ``T = 1`` degenerates to the plain bit-level trellis.  Paths
start at (root, 0), consume one received bit per trellis section — each
bit step either descends the code tree or emits a symbol and returns to
the root, advancing the residue — and only paths ending at
(root, L_S mod T) (exact variant: (root, L_S)) survive termination.

The path metric is the standard MAP sequence score: the channel
log-likelihood of every bit plus the log source probability of every
decoded symbol.  The symbol prior is the telescoped product of the
source-induced branch priors along its codeword, and is applied in one
piece at the symbol-completing bit: states inside a codeword have a
single incoming edge, so path comparisons only ever happen at root
states, where this association makes mathematically equal priors
bitwise equal.  Metric ties are broken at each merge, under exact
floating-point equality, toward the path whose bit-label sequence is
lexicographically smaller; the rule does not depend on T.  With
continuous channel values distinct label sequences tie with probability
zero; with discrete metrics (hard channel) rounding can hide a
mathematical tie at a merge, in which case the survivor is still
max-metric but need not be the globally lexicographically smallest of
the tied paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .channel import ChannelSpec
from .codes import SourceModel, VlcCode, cached_tree

BIT_SYMBOL = "bit/symbol"


@dataclass(frozen=True)
class TrellisConfig:
    """Decoder configuration: frame length and aggregation modulus.

    ``t = None`` selects the exact bit/symbol state model; otherwise the
    residue modulus ``t >= 1`` is used.  ``l_x``, when given, is checked
    against the received frame at decode time.
    """

    l_s: int
    t: int | None = None
    l_x: int | None = None

    def __post_init__(self):
        if self.l_s < 1:
            raise ValueError("l_s must be >= 1")
        if self.t is not None and self.t < 1:
            raise ValueError("aggregation modulus must be >= 1")

    @classmethod
    def aggregated(cls, t: int, l_s: int) -> "TrellisConfig":
        return cls(l_s=l_s, t=t)

    @classmethod
    def bit_symbol(cls, l_s: int) -> "TrellisConfig":
        return cls(l_s=l_s, t=None)

    @property
    def exact(self) -> bool:
        return self.t is None

    @property
    def width(self) -> int:
        """Number of residue (or count) slots per node."""
        return self.l_s + 1 if self.exact else self.t

    @property
    def m_star(self) -> int:
        """Termination residue: final states are (root, m_star)."""
        return self.l_s if self.exact else self.l_s % self.t

    @property
    def label(self) -> str:
        return BIT_SYMBOL if self.exact else f"T={self.t}"


@dataclass
class DecodeResult:
    """Winning path of a length-constrained decode.

    ``path_bits`` re-parse exactly to ``symbols``; when ``feasible`` the
    symbol count satisfies the termination residue.  ``branch_ops``
    counts every transition examined (edges out of reachable states).
    """

    symbols: list[str]
    path_bits: np.ndarray
    log_metric: float
    branch_ops: int
    feasible: bool
    t_label: str
    m_star: int


class _Automaton:
    """Per-(code, source) arrays driving the vectorized trellis sweep."""

    def __init__(self, code: VlcCode, source: SourceModel):
        tree = cached_tree(code, source)
        self.tree = tree
        self.code = code
        gamma = tree.gamma
        self.gamma = gamma
        # Non-root internal nodes: unique (parent, bit) incoming edge.
        parents = np.zeros(gamma, dtype=np.int64)
        pbits = np.zeros(gamma, dtype=np.int64)
        for i, node in enumerate(tree.nodes):
            if node:
                parents[i] = tree.index[node[:-1]]
                pbits[i] = int(node[-1])
        self.nr_parent = parents[1:]
        self.nr_bit = pbits[1:]
        # Leaf edges: (node, bit) pairs that emit a symbol.  Each carries the
        # whole-codeword log prior (telescoped branch priors).
        srcs, bits, syms = [], [], []
        for i in range(gamma):
            for b in (0, 1):
                if tree.child_kind[i, b] == 1:
                    srcs.append(i)
                    bits.append(b)
                    syms.append(int(tree.child_ref[i, b]))
        self.le_src = np.array(srcs, dtype=np.int64)
        self.le_bit = np.array(bits, dtype=np.int64)
        self.le_sym = np.array(syms, dtype=np.int64)
        self.le_lp = np.log(np.array([source.probs[s] for s in syms]))
        self.le_bits = [tree.codeword_bits[s] for s in syms]
        self.le_len = np.array([len(b) for b in self.le_bits], dtype=np.int64)
        self.out_degree = (tree.child_kind != 2).sum(axis=1).astype(np.int64)


@lru_cache(maxsize=None)
def _automaton(code: VlcCode, source: SourceModel) -> _Automaton:
    return _Automaton(code, source)


def viterbi_decode(code: VlcCode, source: SourceModel, config: TrellisConfig,
                   received: np.ndarray, channel: ChannelSpec) -> DecodeResult:
    """Maximum a posteriori sequence decode under the length constraint.

    When no path of the received length ends at (root, m_star) the result
    carries ``feasible=False`` and the best unconstrained complete parse
    for diagnostics.
    """
    aut = _automaton(code, source)
    received = np.asarray(received)
    l_x = len(received)
    if config.l_x is not None and config.l_x != l_x:
        raise ValueError(f"received length {l_x} != configured {config.l_x}")
    loglik = channel.bit_loglik(received)
    exact = config.exact
    width = config.width
    gamma = aut.gamma
    cols = np.arange(width)

    metric = np.full((gamma, width), -np.inf)
    metric[0, 0] = 0.0
    choices = np.full((l_x, width), -1, dtype=np.int32)
    ops = 0
    for k in range(l_x):
        ll = loglik[k]
        ops += int(aut.out_degree @ np.isfinite(metric).sum(axis=1))
        new_nr = (metric[aut.nr_parent] + ll[aut.nr_bit][:, None]
                  if gamma > 1 else np.zeros((0, width)))
        if exact:
            shifted = np.empty_like(metric)
            shifted[:, 0] = -np.inf
            shifted[:, 1:] = metric[:, :-1]
        else:
            shifted = np.roll(metric, 1, axis=1)
        cand = shifted[aut.le_src] + (aut.le_lp + ll[aut.le_bit])[:, None]
        best_edge = np.argmax(cand, axis=0)
        best_val = cand[best_edge, cols]
        finite = np.isfinite(best_val)
        tie_cols = np.nonzero(finite &
                              (np.count_nonzero(cand == best_val, axis=0) > 1))[0]
        for m in tie_cols:
            tied = np.nonzero(cand[:, m] == best_val[m])[0]
            best_edge[m] = _lex_winner(aut, choices, k, int(m), tied, exact, width)
        new_metric = np.empty_like(metric)
        new_metric[0] = np.where(finite, best_val, -np.inf)
        new_metric[1:] = new_nr
        choices[k] = np.where(finite, best_edge, -1)
        metric = new_metric

    end = config.m_star
    feasible = bool(np.isfinite(metric[0, end]))
    if not feasible:
        root_finite = np.isfinite(metric[0])
        if not root_finite.any():
            return DecodeResult([], np.zeros(0, dtype=np.uint8), -np.inf,
                                ops, False, config.label, config.m_star)
        end = int(np.argmax(np.where(root_finite, metric[0], -np.inf)))
    symbols_idx, bits = _backtrack(aut, choices, l_x, end, exact, width)
    return DecodeResult(
        symbols=[code.symbols[i] for i in symbols_idx],
        path_bits=bits,
        log_metric=float(metric[0, end]),
        branch_ops=ops,
        feasible=feasible,
        t_label=config.label,
        m_star=config.m_star,
    )


def exact_bit_symbol_decode(code: VlcCode, source: SourceModel, l_s: int,
                            received: np.ndarray,
                            channel: ChannelSpec) -> DecodeResult:
    """Decode on the exact bit/symbol state model (count constrained to l_s)."""
    return viterbi_decode(code, source, TrellisConfig.bit_symbol(l_s),
                          received, channel)


def _backtrack(aut: _Automaton, choices: np.ndarray, l_x: int, end_col: int,
               exact: bool, width: int) -> tuple[list[int], np.ndarray]:
    symbols: list[int] = []
    segments: list[np.ndarray] = []
    k, col = l_x, end_col
    while k > 0:
        edge = int(choices[k - 1, col])
        if edge < 0:
            raise AssertionError("backtrack through unreachable state")
        symbols.append(int(aut.le_sym[edge]))
        segments.append(aut.le_bits[edge])
        k -= int(aut.le_len[edge])
        col = col - 1 if exact else (col - 1) % width
    symbols.reverse()
    bits = (np.concatenate(segments[::-1]) if segments
            else np.zeros(0, dtype=np.uint8))
    return symbols, bits


def _root_path_bits(aut: _Automaton, choices: np.ndarray, k: int, col: int,
                    exact: bool, width: int) -> np.ndarray:
    segments: list[np.ndarray] = []
    while k > 0:
        edge = int(choices[k - 1, col])
        segments.append(aut.le_bits[edge])
        k -= int(aut.le_len[edge])
        col = col - 1 if exact else (col - 1) % width
    return (np.concatenate(segments[::-1]) if segments
            else np.zeros(0, dtype=np.uint8))


def _lex_winner(aut: _Automaton, choices: np.ndarray, k: int, col: int,
                tied_edges: np.ndarray, exact: bool, width: int) -> int:
    """Among metric-tied candidate edges into (root, col) at step k, pick the
    one whose full bit-label sequence is lexicographically smallest."""
    prev_col = col - 1 if exact else (col - 1) % width
    best_edge = -1
    best_key: bytes | None = None
    for edge in tied_edges:
        edge = int(edge)
        src_depth = int(aut.le_len[edge]) - 1
        root_k = k - src_depth  # time the path was last at the root
        prefix = _root_path_bits(aut, choices, root_k, prev_col, exact, width)
        key = prefix.tobytes() + aut.le_bits[edge].tobytes()
        if best_key is None or key < best_key:
            best_key = key
            best_edge = edge
    return best_edge


def state_reachability(code: VlcCode, source: SourceModel,
                       config: TrellisConfig, l_x: int) -> list[np.ndarray]:
    """Forward-reachable (node, residue) mask per bit instant 0..l_x.

    Structural companion to the decoder: entry ``[k][n, m]`` is True when
    some prefix of a path reaches that state after k bits.
    """
    aut = _automaton(code, source)
    width = config.width
    reach = np.zeros((aut.gamma, width), dtype=bool)
    reach[0, 0] = True
    history = [reach.copy()]
    for _ in range(l_x):
        new = np.zeros_like(reach)
        if aut.gamma > 1:
            new[1:] = reach[aut.nr_parent]
        if config.exact:
            shifted = np.zeros_like(reach)
            shifted[:, 1:] = reach[:, :-1]
        else:
            shifted = np.roll(reach, 1, axis=1)
        new[0] = shifted[aut.le_src].any(axis=0)
        reach = new
        history.append(reach.copy())
    return history


def complexity_ratio(code: VlcCode, source: SourceModel, l_s: int, t: int,
                     trials: int, channel: ChannelSpec,
                     seed: int = 0) -> float:
    """Measured branch-operation ratio of a modulus-t decode to a bit-level
    decode over ``trials`` random frames."""
    from .experiments import frame_rng, sample_frame

    if trials < 1:
        raise ValueError("trials must be >= 1")
    ops_t = 0
    ops_bal = 0
    cfg_t = TrellisConfig.aggregated(t, l_s)
    cfg_1 = TrellisConfig.aggregated(1, l_s)
    for i in range(trials):
        rng = frame_rng(seed, i)
        _, bits = sample_frame(code, source, l_s, rng)
        received = channel.transmit(bits, rng)
        ops_t += viterbi_decode(code, source, cfg_t, received, channel).branch_ops
        ops_bal += viterbi_decode(code, source, cfg_1, received, channel).branch_ops
    return ops_t / ops_bal
