"""Error state diagram of a prefix code and its synchronization statistics.

After one bit error, the decoder's state relative to the encoder (which is
at a codeword boundary) follows a finite absorbing chain: the *error state
diagram*.  Its states are a loss-of-synchronization entry state ``n_l``,
one state per non-root internal node of the code tree, and an absorbing
return-to-synchronization state ``n_s``.  Each transition corresponds to
one emitted source symbol and is labeled by a Laurent monomial weight in
``y`` whose exponent is (symbols emitted - symbols decoded) on that step.

Accumulating the flow from ``n_l`` into ``n_s`` yields:

* the gain polynomial ``G(y)``: coefficient at exponent ``i`` is the
  probability that one bit error leaves the decoded symbol count short of
  the emitted count by ``i`` (negative ``i``: extra decoded symbols);
* the error-span distribution: probability that resynchronization happens
  after exactly ``k`` emitted symbols, whose mean/variance are the MEPL
  and VEPL resilience measures used for hard decoding.
"""

from __future__ import annotations

from dataclasses import dataclass

from .codes import CodeTree, SourceModel, VlcCode, cached_tree, mdl
from .laurent import LaurentPoly

N_LOSS = "n_l"
N_SYNC = "n_s"

_ROW_SUM_TOL = 1e-12


class NotAbsorbed(RuntimeError):
    """The diagram did not absorb enough mass within the step budget."""


@dataclass(frozen=True)
class ErrorStateDiagram:
    """Absorbing chain over (n_l, non-root internal nodes..., n_s).

    ``edges[src][dst]`` is the Laurent-labeled transition weight; rows of
    transient states sum to 1 at y=1, the ``n_s`` row is empty.
    """

    code: VlcCode
    source: SourceModel
    states: tuple[str, ...]
    edges: dict[str, dict[str, LaurentPoly]]

    @property
    def transient_states(self) -> tuple[str, ...]:
        return self.states[:-1]

    def entry(self, src: str, dst: str) -> LaurentPoly:
        return self.edges.get(src, {}).get(dst, LaurentPoly.zero())

    def matrix(self) -> list[list[LaurentPoly]]:
        """Dense transition matrix in state order (zeros included)."""
        return [[self.entry(s, d) for d in self.states] for s in self.states]

    def dump(self) -> str:
        """Adjacency list, one ``from<TAB>to<TAB>polynomial`` line per edge."""
        lines = []
        for src in self.states:
            for dst in self.states:
                poly = self.edges.get(src, {}).get(dst)
                if poly is not None and not poly.is_zero():
                    body = " + ".join(_term(e, c) for e, c in poly.items())
                    lines.append(f"{src}\t{dst}\t{body}")
        return "\n".join(lines)


def _term(exp: int, coeff: float) -> str:
    if exp == 0:
        return f"{coeff!r}"
    return f"{coeff!r}*y^{exp}"


def build_esd(code: VlcCode, source: SourceModel) -> ErrorStateDiagram:
    """Construct the error state diagram of a complete prefix code.

    Entry-state row: a single bit error lands in codeword ``c_i`` at bit
    position ``j`` with probability ``p_i / mdl``; the corrupted codeword
    is re-parsed from the root and the walk's end node receives weight
    ``(p_i/mdl) * y**(1-d)`` where ``d`` symbols were decoded.  Rows of
    internal nodes feed each codeword (weight ``p_i``) into the decoder
    parked at that node.  Walks ending at the root map to ``n_s``.
    """
    tree = cached_tree(code, source)
    if not tree.is_complete():
        # Completeness is required: during loss of sync the decoder may sit
        # at any internal node and must be able to consume any bit.
        raise _incomplete_error(tree)
    internal = tuple(n for n in tree.nodes if n)  # sorted (depth, prefix)
    states = (N_LOSS,) + internal + (N_SYNC,)
    edges: dict[str, dict[str, LaurentPoly]] = {s: {} for s in states[:-1]}

    mean_len = mdl(code, source)
    cw_bits = tree.codeword_bits

    def add(src: str, node_idx: int, decoded: int, weight: float):
        dst = N_SYNC if node_idx == 0 else tree.nodes[node_idx]
        mono = LaurentPoly({1 - decoded: weight})
        row = edges[src]
        row[dst] = row.get(dst, LaurentPoly.zero()) + mono

    for s, bits in enumerate(cw_bits):
        weight = source.probs[s] / mean_len
        for j in range(len(bits)):
            flipped = bits.copy()
            flipped[j] ^= 1
            decoded, end, _ = tree.walk(0, flipped)
            add(N_LOSS, end, decoded, weight)

    for node in internal:
        start = tree.index[node]
        for s, bits in enumerate(cw_bits):
            decoded, end, _ = tree.walk(start, bits)
            add(node, end, decoded, source.probs[s])

    esd = ErrorStateDiagram(code, source, states, edges)
    _validate(esd, code.l_M)
    return esd


def _incomplete_error(tree: CodeTree) -> Exception:
    from .codes import DeadEnd

    for i, node in enumerate(tree.nodes):
        for bit in (0, 1):
            if tree.child_kind[i, bit] == 2:
                return DeadEnd(
                    f"code is incomplete: node {node!r} lacks child {bit}", 0)
    raise AssertionError("unreachable")


def _validate(esd: ErrorStateDiagram, l_max: int) -> None:
    for src in esd.transient_states:
        total = sum(p.mass() for p in esd.edges[src].values())
        if abs(total - 1.0) > _ROW_SUM_TOL:
            raise ValueError(f"row {src!r} sums to {total!r} at y=1")
        for poly in esd.edges[src].values():
            if poly.min_exp < 1 - l_max or poly.max_exp > 1:
                raise ValueError(f"branch exponent outside [1-l_M, 1] in row {src!r}")


def _flow(esd: ErrorStateDiagram):
    """Yield (step_absorbed_poly, remaining_transient_mass) per symbol step."""
    front: dict[str, LaurentPoly] = {}
    absorbed = LaurentPoly.zero()
    for dst, poly in esd.edges[N_LOSS].items():
        if dst == N_SYNC:
            absorbed = absorbed + poly
        else:
            front[dst] = poly
    remaining = sum(p.mass() for p in front.values())
    yield absorbed, remaining
    while True:
        new_front: dict[str, LaurentPoly] = {}
        absorbed = LaurentPoly.zero()
        for src, poly in front.items():
            for dst, label in esd.edges[src].items():
                contrib = poly * label
                if dst == N_SYNC:
                    absorbed = absorbed + contrib
                else:
                    prev = new_front.get(dst)
                    new_front[dst] = contrib if prev is None else prev + contrib
        front = new_front
        remaining = sum(p.mass() for p in front.values())
        yield absorbed, remaining


def absorption_steps(esd: ErrorStateDiagram, steps: int) -> list[LaurentPoly]:
    """The first ``steps`` per-step absorbed polynomials (step k entry of the
    chain's k-step transition from n_l to n_s)."""
    out = []
    gen = _flow(esd)
    for _ in range(steps):
        poly, _ = next(gen)
        out.append(poly)
    return out


def gain_polynomial(esd: ErrorStateDiagram, tol: float = 1e-12,
                    max_steps: int = 100_000) -> LaurentPoly:
    """Total gain/loss distribution G(y), accumulated until the transient
    mass falls below ``tol``.  Raises NotAbsorbed past ``max_steps``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    total = LaurentPoly.zero()
    for step, (absorbed, remaining) in enumerate(_flow(esd), start=1):
        total = total + absorbed
        if remaining < tol:
            return total
        if step >= max_steps:
            raise NotAbsorbed(
                f"transient mass {remaining!r} after {max_steps} steps")
    raise AssertionError("unreachable")


def error_span_poly(esd: ErrorStateDiagram, tol: float = 1e-12,
                    max_steps: int = 100_000) -> LaurentPoly:
    """Distribution of the resynchronization span in symbols (support k >= 1)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    masses: dict[int, float] = {}
    for step, (absorbed, remaining) in enumerate(_flow(esd), start=1):
        m = absorbed.mass()
        if m:
            masses[step] = m
        if remaining < tol:
            return LaurentPoly(masses)
        if step >= max_steps:
            raise NotAbsorbed(
                f"transient mass {remaining!r} after {max_steps} steps")
    raise AssertionError("unreachable")


def mepl(esd: ErrorStateDiagram, tol: float = 1e-12,
         max_steps: int = 100_000) -> float:
    """Mean error propagation length (expected resynchronization span)."""
    return error_span_poly(esd, tol, max_steps).mean()


def vepl(esd: ErrorStateDiagram, tol: float = 1e-12,
         max_steps: int = 100_000) -> float:
    """Variance of the error propagation length."""
    return error_span_poly(esd, tol, max_steps).variance()
