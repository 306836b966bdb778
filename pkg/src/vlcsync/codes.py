"""Memoryless sources, prefix-free variable-length codes, and their automata.

A `VlcCode` pairs an ordered symbol alphabet with one binary codeword per
symbol.  A `CodeTree` is the decoding automaton: internal nodes are the
proper prefixes of codewords (identified by their prefix string, the root
being the empty string) and each (node, bit) step either moves deeper or
emits a symbol and returns to the root.  When built with a `SourceModel`
the tree also carries per-node leaf mass, from which bit-transition
priors are derived.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

ROOT = ""  # the root node is the empty prefix


class CodeError(Exception):
    """Base class for code construction and decoding errors."""


class PrefixViolation(CodeError):
    """A codeword is a proper prefix of another codeword."""


class DuplicateCodeword(CodeError):
    """Two symbols share the same codeword."""


class UnknownSymbol(CodeError):
    """A symbol outside the code's alphabet was supplied."""


class DeadEnd(CodeError):
    """Decoding reached an internal node with no child for the next bit."""

    def __init__(self, message: str, position: int):
        super().__init__(message)
        self.position = position


class MissingChild(CodeError):
    """A branch prior was requested for a child the code does not have."""


@dataclass(frozen=True)
class SourceModel:
    """A memoryless source: ordered symbols with their probabilities.

    Probabilities must be positive and sum to 1.  Sums off by at most
    1e-6 (tabulated values rounded to a fixed number of decimals) are
    renormalized; the original decimal strings are kept in
    ``prob_strings`` so reports can echo them verbatim.
    """

    symbols: tuple[str, ...]
    probs: tuple[float, ...]
    prob_strings: tuple[str, ...] = field(default=())

    def __post_init__(self):
        symbols = tuple(self.symbols)
        probs = tuple(float(p) for p in self.probs)
        if len(symbols) != len(probs):
            raise ValueError("symbols and probs must have the same length")
        if len(set(symbols)) != len(symbols):
            raise ValueError("duplicate symbol identifiers")
        if any(p <= 0.0 for p in probs):
            raise ValueError("probabilities must be strictly positive")
        total = math.fsum(probs)
        if abs(total - 1.0) > 1e-6:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        strings = tuple(self.prob_strings) or tuple(repr(p) for p in probs)
        if len(strings) != len(symbols):
            raise ValueError("prob_strings length mismatch")
        if abs(total - 1.0) > 1e-12:
            probs = tuple(p / total for p in probs)
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "prob_strings", strings)

    def __len__(self) -> int:
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise UnknownSymbol(f"symbol {symbol!r} not in alphabet") from None

    def entropy(self) -> float:
        """Shannon entropy of the source in bits per symbol."""
        return -math.fsum(p * math.log2(p) for p in self.probs)


@dataclass(frozen=True)
class VlcCode:
    """A prefix-free binary code over an ordered symbol alphabet."""

    code_id: str
    symbols: tuple[str, ...]
    codewords: tuple[str, ...]

    def __post_init__(self):
        symbols = tuple(self.symbols)
        codewords = tuple(self.codewords)
        if len(symbols) != len(codewords):
            raise ValueError("one codeword per symbol required")
        if len(set(symbols)) != len(symbols):
            raise ValueError("duplicate symbol identifiers")
        for cw in codewords:
            if not cw:
                raise ValueError("codewords must be nonempty")
            if set(cw) - {"0", "1"}:
                raise ValueError(f"codeword {cw!r} is not binary")
        if len(set(codewords)) != len(codewords):
            raise DuplicateCodeword("two symbols share a codeword")
        ordered = sorted(codewords)
        for a, b in zip(ordered, ordered[1:]):
            if b.startswith(a):
                raise PrefixViolation(f"{a!r} is a prefix of {b!r}")
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "codewords", codewords)

    def __len__(self) -> int:
        return len(self.codewords)

    @property
    def l_m(self) -> int:
        """Length of the shortest codeword, in bits."""
        return min(len(cw) for cw in self.codewords)

    @property
    def l_M(self) -> int:
        """Length of the longest codeword, in bits."""
        return max(len(cw) for cw in self.codewords)

    def codeword(self, symbol: str) -> str:
        try:
            return self.codewords[self.symbols.index(symbol)]
        except ValueError:
            raise UnknownSymbol(f"symbol {symbol!r} not in alphabet") from None

    def kraft_sum(self) -> float:
        return math.fsum(2.0 ** -len(cw) for cw in self.codewords)


# child_kind codes
_INTERNAL, _LEAF, _MISSING = 0, 1, 2


class CodeTree:
    """Decoding automaton of a prefix code.

    ``nodes`` lists the internal nodes (codeword proper prefixes) sorted by
    (depth, prefix string); the root (empty prefix) is index 0.  The two
    arrays ``child_kind``/``child_ref`` describe, for every (node, bit),
    whether the step stays internal (ref = node index), emits a symbol
    (ref = symbol index) or is missing (incomplete code).
    """

    def __init__(self, code: VlcCode, source: SourceModel | None = None):
        if source is not None and source.symbols != code.symbols:
            raise ValueError("source and code alphabets differ")
        self.code = code
        self.source = source
        prefixes = {cw[:i] for cw in code.codewords for i in range(len(cw))}
        self.nodes: tuple[str, ...] = tuple(sorted(prefixes, key=lambda s: (len(s), s)))
        self.index: dict[str, int] = {n: i for i, n in enumerate(self.nodes)}
        gamma = len(self.nodes)
        self.child_kind = np.full((gamma, 2), _MISSING, dtype=np.int8)
        self.child_ref = np.full((gamma, 2), -1, dtype=np.int64)
        leaf_of = {cw: s for s, cw in enumerate(code.codewords)}
        for n, i in self.index.items():
            for bit in (0, 1):
                child = n + "01"[bit]
                if child in self.index:
                    self.child_kind[i, bit] = _INTERNAL
                    self.child_ref[i, bit] = self.index[child]
                elif child in leaf_of:
                    self.child_kind[i, bit] = _LEAF
                    self.child_ref[i, bit] = leaf_of[child]
        self.codeword_bits = tuple(
            np.frombuffer(cw.encode(), dtype=np.uint8) - ord("0")
            for cw in code.codewords)
        if source is not None:
            mass = np.zeros(gamma, dtype=np.float64)
            for s, cw in enumerate(code.codewords):
                for i in range(len(cw)):
                    mass[self.index[cw[:i]]] += source.probs[s]
            self.node_mass = mass
        else:
            self.node_mass = None

    @property
    def gamma(self) -> int:
        """Number of internal nodes."""
        return len(self.nodes)

    def is_complete(self) -> bool:
        return not (self.child_kind == _MISSING).any()

    def mass(self, node: str) -> float:
        if self.node_mass is None:
            raise ValueError("tree was built without a source model")
        return float(self.node_mass[self.index[node]])

    def child(self, node: str, bit: int):
        """('node', prefix) | ('leaf', symbol) | None for a missing child."""
        i = self.index[node]
        kind = self.child_kind[i, bit]
        if kind == _INTERNAL:
            return "node", self.nodes[self.child_ref[i, bit]]
        if kind == _LEAF:
            return "leaf", self.code.symbols[self.child_ref[i, bit]]
        return None

    def walk(self, start: int, bits: Iterable[int]) -> tuple[int, int, int]:
        """Feed bits from node index ``start``; return (decoded, end, pos).

        ``decoded`` counts emitted symbols, ``end`` is the final node index
        and ``pos`` the number of bits consumed.  Raises DeadEnd on a
        missing child.
        """
        node = start
        decoded = 0
        pos = 0
        for b in bits:
            kind = self.child_kind[node, b]
            if kind == _MISSING:
                raise DeadEnd(
                    f"no child for bit {b} at node {self.nodes[node]!r}", pos)
            if kind == _LEAF:
                decoded += 1
                node = 0
            else:
                node = int(self.child_ref[node, b])
            pos += 1
        return decoded, node, pos


def build_code_tree(code: VlcCode, source: SourceModel | None = None) -> CodeTree:
    """Build the decoding automaton (with node masses when a source is given)."""
    return CodeTree(code, source)


@lru_cache(maxsize=None)
def cached_tree(code: VlcCode, source: SourceModel | None = None) -> CodeTree:
    return CodeTree(code, source)


def bits_from_str(s: str) -> np.ndarray:
    if set(s) - {"0", "1"}:
        raise ValueError(f"non-binary bit string {s!r}")
    return np.frombuffer(s.encode(), dtype=np.uint8) - ord("0")


def bits_to_str(bits: np.ndarray) -> str:
    return "".join("01"[int(b)] for b in np.asarray(bits))


def encode(code: VlcCode, seq: Sequence[str] | np.ndarray) -> np.ndarray:
    """Concatenate the codewords of a symbol sequence into a bit array.

    ``seq`` may hold symbol identifiers or integer alphabet indices.
    """
    tree = cached_tree(code)
    arr = np.asarray(seq)
    if arr.size == 0:
        return np.zeros(0, dtype=np.uint8)
    if np.issubdtype(arr.dtype, np.integer):
        indices = arr
        if indices.min() < 0 or indices.max() >= len(code):
            raise UnknownSymbol("symbol index out of range")
    else:
        lookup = {s: i for i, s in enumerate(code.symbols)}
        try:
            indices = np.array([lookup[s] for s in seq], dtype=np.int64)
        except KeyError as exc:
            raise UnknownSymbol(f"symbol {exc.args[0]!r} not in alphabet") from None
    return np.concatenate([tree.codeword_bits[i] for i in indices])


def hard_decode(code: VlcCode, bits) -> tuple[list[str], str]:
    """Greedy prefix parse of a bit sequence.

    Returns the decoded symbols and the internal node holding any trailing
    partial codeword (the root if the parse ends on a boundary).  Raises
    DeadEnd only for incomplete codes.
    """
    tree = cached_tree(code)
    if isinstance(bits, str):
        bits = bits_from_str(bits)
    symbols: list[str] = []
    node = 0
    for pos, b in enumerate(np.asarray(bits)):
        kind = tree.child_kind[node, b]
        if kind == _MISSING:
            raise DeadEnd(f"no child for bit {int(b)} at node "
                          f"{tree.nodes[node]!r}", pos)
        if kind == _LEAF:
            symbols.append(code.symbols[tree.child_ref[node, b]])
            node = 0
        else:
            node = int(tree.child_ref[node, b])
    return symbols, tree.nodes[node]


def mdl(code: VlcCode, source: SourceModel) -> float:
    """Mean description length of the code, in bits per symbol."""
    if source.symbols != code.symbols:
        raise ValueError("source and code alphabets differ")
    return math.fsum(p * len(cw) for p, cw in zip(source.probs, code.codewords))


def excess_rate(code: VlcCode, source: SourceModel) -> float:
    """Residual redundancy: mean description length minus source entropy."""
    return mdl(code, source) - source.entropy()


def branch_prior(tree: CodeTree, node: str, bit: int) -> float:
    """P(next bit = bit | decoder at node), from the source statistics."""
    if tree.node_mass is None:
        raise ValueError("tree was built without a source model")
    i = tree.index[node]
    kind = tree.child_kind[i, bit]
    if kind == _MISSING:
        raise MissingChild(f"node {node!r} has no child for bit {bit}")
    if kind == _LEAF:
        child_mass = tree.source.probs[tree.child_ref[i, bit]]
    else:
        child_mass = tree.node_mass[tree.child_ref[i, bit]]
    return float(child_mass / tree.node_mass[i])
