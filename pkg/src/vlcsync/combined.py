"""Combined two-trellis decoding with coprime aggregation moduli.

Running decoders of coprime moduli ``t1`` and ``t2`` and falling back to
the product modulus only when they disagree returns, on every frame, the
same sequence as decoding directly at ``t1 * t2``: agreement of the two
small decoders certifies the product-trellis winner, because a length
residue modulo ``t1*t2`` is pinned down by its residues modulo the
coprime factors and the tie rule does not depend on the modulus.  The
expected cost is ``(t1 + t2 + rho * t1 * t2) * d_bal`` where ``rho`` is
the disagreement probability, so the scheme beats direct decoding
whenever ``rho < 1 - (t1 + t2)/(t1 * t2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelSpec
from .codes import SourceModel, VlcCode
from .trellis import DecodeResult, TrellisConfig, viterbi_decode


@dataclass(frozen=True)
class CombinedConfig:
    """Pair of coprime aggregation moduli; the fallback modulus is t1*t2."""

    t1: int
    t2: int

    def __post_init__(self):
        if self.t1 < 1 or self.t2 < 1:
            raise ValueError("moduli must be positive")
        if math.gcd(self.t1, self.t2) != 1:
            raise ValueError("t1 and t2 must be relatively prime")

    @property
    def t3(self) -> int:
        return self.t1 * self.t2


@dataclass
class CostModel:
    """Measured/projected cost of combined decoding relative to bit-level."""

    t1: int
    t2: int
    rho: float
    d_bal: float
    d_mtd: float
    rho_star: float


@dataclass
class RhoEstimate:
    """Empirical disagreement rate of the two component decoders."""

    rho: float
    ci95: float
    trials: int
    disagreements: int


@dataclass
class ParameterChoice:
    t1: int
    t2: int
    no_benefit: bool
    note: str = ""


def combined_decode(code: VlcCode, source: SourceModel, config: CombinedConfig,
                    l_s: int, received: np.ndarray,
                    channel: ChannelSpec) -> tuple[DecodeResult, bool, int]:
    """Three-step decode: run t1 and t2; on agreement return that sequence,
    otherwise decode at t1*t2.  Returns (result, agreed, total branch ops)."""
    res1 = viterbi_decode(code, source, TrellisConfig.aggregated(config.t1, l_s),
                          received, channel)
    res2 = viterbi_decode(code, source, TrellisConfig.aggregated(config.t2, l_s),
                          received, channel)
    ops = res1.branch_ops + res2.branch_ops
    if res1.symbols == res2.symbols and res1.feasible and res2.feasible:
        return res1, True, ops
    res3 = viterbi_decode(code, source, TrellisConfig.aggregated(config.t3, l_s),
                          received, channel)
    return res3, False, ops + res3.branch_ops


def rho_estimate(code: VlcCode, source: SourceModel, t1: int, t2: int,
                 channel: ChannelSpec, l_s: int, trials: int,
                 seed: int = 0) -> RhoEstimate:
    """Monte-Carlo estimate of the component-decoder disagreement rate."""
    from .experiments import frame_rng, sample_frame

    if trials < 1:
        raise ValueError("trials must be >= 1")
    config = CombinedConfig(t1, t2)
    cfg1 = TrellisConfig.aggregated(config.t1, l_s)
    cfg2 = TrellisConfig.aggregated(config.t2, l_s)
    disagreements = 0
    for i in range(trials):
        rng = frame_rng(seed, i)
        _, bits = sample_frame(code, source, l_s, rng)
        received = channel.transmit(bits, rng)
        s1 = viterbi_decode(code, source, cfg1, received, channel).symbols
        s2 = viterbi_decode(code, source, cfg2, received, channel).symbols
        disagreements += s1 != s2
    rho = disagreements / trials
    ci95 = 1.96 * math.sqrt(rho * (1.0 - rho) / trials)
    return RhoEstimate(rho=rho, ci95=ci95, trials=trials,
                       disagreements=disagreements)


def cost_projection(t1: int, t2: int, rho: float, d_bal: float) -> float:
    """Expected combined-decoding cost: (t1 + t2 + rho*t1*t2) * d_bal."""
    if not 0.0 <= rho <= 1.0:
        raise ValueError("rho must lie in [0, 1]")
    return (t1 + t2 + rho * t1 * t2) * d_bal


def rho_star(t1: int, t2: int) -> float:
    """Break-even disagreement rate: below it the combined scheme is cheaper
    than decoding directly at t1*t2."""
    return 1.0 - (t1 + t2) / (t1 * t2)


def choose_parameters(t_c: int) -> ParameterChoice:
    """Pick the coprime factor pair of ``t_c`` with the smallest gap.

    Minimizing |t2 - t1| minimizes t1 + t2 at fixed product, hence the
    expected cost, under the usual assumption that the disagreement rate
    grows with the gap.  Codes whose performance is not monotone in the
    modulus (only odd moduli helping, for instance) can break that
    assumption; the note flags it rather than special-casing.
    """
    if t_c < 2:
        raise ValueError("target modulus must be >= 2")
    best: tuple[int, int] | None = None
    for t1 in range(2, int(math.isqrt(t_c)) + 1):
        if t_c % t1 == 0:
            t2 = t_c // t1
            if t2 > 1 and math.gcd(t1, t2) == 1:
                if best is None or t2 - t1 < best[1] - best[0]:
                    best = (t1, t2)
    note = ("gap rule assumes disagreement grows with |t2 - t1|; codes with "
            "modulus-parity quirks may prefer another coprime pair")
    if best is None:
        return ParameterChoice(1, t_c, no_benefit=True,
                               note="no coprime factor pair with both factors > 1")
    return ParameterChoice(best[0], best[1], no_benefit=False, note=note)
