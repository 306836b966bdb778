"""Channel abstractions and end-to-end gain/loss statistics.

Two memoryless channels are supported: a binary symmetric channel and
BPSK over additive white Gaussian noise (bit ``x`` maps to ``1 - 2x``,
unit symbol energy, noise variance ``N0/2``).  Under hard decoding the
AWGN channel behaves like a BSC with crossover probability
``p = erfc(sqrt(Eb/N0)) / 2``, which is how the analytic pipeline treats
it.

Given a code and a frame of ``L_S`` source symbols, the pipeline composes

    bitstream length law  ->  channel error count law  ->  gain/loss law

where the per-error gain/loss distribution comes from the error state
diagram and independent errors compound by convolution.  The resulting
distribution of ``delta_s = decoded - emitted`` symbol counts yields the
code selection criteria: strict-sense resynchronization probability
``P(delta_s = 0)``, the entropy of the distribution (the information a
sequence-length constraint can contribute), and the pseudo-degree used to
size aggregated decoders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import special, stats

from .codes import SourceModel, VlcCode, excess_rate, mdl
from .laurent import LaurentPoly
from .sync import build_esd, error_span_poly, gain_polynomial

# Zero-probability bits get this log-likelihood instead of -inf so that
# metric arithmetic stays finite.
_LOG_FLOOR = -745.0  # log of the smallest positive double


def crossover_from_ebn0(ebn0_db: float) -> float:
    """Hard-decision BPSK/AWGN bit error probability at the given Eb/N0."""
    if not math.isfinite(ebn0_db):
        raise ValueError("Eb/N0 must be finite")
    return float(0.5 * special.erfc(math.sqrt(10.0 ** (ebn0_db / 10.0))))


@dataclass(frozen=True)
class Bsc:
    """Binary symmetric channel with crossover probability ``p``."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 0.5:
            raise ValueError("crossover probability must lie in [0, 0.5]")

    @property
    def crossover(self) -> float:
        return self.p

    def transmit(self, bits: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        bits = np.asarray(bits, dtype=np.uint8)
        flips = rng.random(bits.shape) < self.p
        return bits ^ flips.astype(np.uint8)

    def hard_bits(self, received: np.ndarray) -> np.ndarray:
        return np.asarray(received, dtype=np.uint8)

    def bit_loglik(self, received: np.ndarray) -> np.ndarray:
        """(L, 2) array of log P(received_k | sent bit b)."""
        r = np.asarray(received, dtype=np.uint8)
        log_ok = math.log(1.0 - self.p) if self.p < 1.0 else _LOG_FLOOR
        log_err = math.log(self.p) if self.p > 0.0 else _LOG_FLOOR
        out = np.empty((len(r), 2), dtype=np.float64)
        out[:, 0] = np.where(r == 0, log_ok, log_err)
        out[:, 1] = np.where(r == 1, log_ok, log_err)
        return out


@dataclass(frozen=True)
class Awgn:
    """BPSK over AWGN at ``ebn0_db`` decibels, unit symbol energy."""

    ebn0_db: float

    def __post_init__(self):
        if not math.isfinite(self.ebn0_db):
            raise ValueError("Eb/N0 must be finite")

    @property
    def sigma2(self) -> float:
        return 1.0 / (2.0 * 10.0 ** (self.ebn0_db / 10.0))

    @property
    def crossover(self) -> float:
        return crossover_from_ebn0(self.ebn0_db)

    def transmit(self, bits: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        s = 1.0 - 2.0 * np.asarray(bits, dtype=np.float64)
        return s + rng.standard_normal(len(s)) * math.sqrt(self.sigma2)

    def hard_bits(self, received: np.ndarray) -> np.ndarray:
        return (np.asarray(received) < 0.0).astype(np.uint8)

    def bit_loglik(self, received: np.ndarray) -> np.ndarray:
        """(L, 2) array of Gaussian log-likelihood kernels.

        The additive normalization constant is dropped; it is common to
        every path of a fixed length.
        """
        r = np.asarray(received, dtype=np.float64)
        inv = 1.0 / (2.0 * self.sigma2)
        out = np.empty((len(r), 2), dtype=np.float64)
        out[:, 0] = -((r - 1.0) ** 2) * inv
        out[:, 1] = -((r + 1.0) ** 2) * inv
        return out


ChannelSpec = Union[Bsc, Awgn]


def transmit(bits: np.ndarray, channel: ChannelSpec,
             rng: np.random.Generator) -> np.ndarray:
    """Send a bit array through the channel using the caller's RNG."""
    return channel.transmit(bits, rng)


def bitstream_length_pmf(code: VlcCode, source: SourceModel,
                         l_s: int) -> LaurentPoly:
    """Distribution of the encoded bitstream length for ``l_s`` symbols."""
    if l_s < 1:
        raise ValueError("l_s must be >= 1")
    per_symbol: dict[int, float] = {}
    for p, cw in zip(source.probs, code.codewords):
        per_symbol[len(cw)] = per_symbol.get(len(cw), 0.0) + p
    return LaurentPoly(per_symbol).power(l_s)


def error_count_pmf(length_pmf: LaurentPoly, p: float,
                    tail_tol: float = 1e-12) -> LaurentPoly:
    """Distribution of the number of hard bit errors in a frame.

    Mixes Binomial(k, p) over the bitstream-length law; the enumeration
    stops once the omitted upper tail is below ``tail_tol`` (the omission
    is recorded in the result's ``lost_mass``).
    """
    if not 0.0 <= p <= 0.5:
        raise ValueError("crossover probability must lie in [0, 0.5]")
    ks = np.array([e for e, _ in length_pmf.items()], dtype=np.int64)
    wk = np.array([c for _, c in length_pmf.items()], dtype=np.float64)
    if len(ks) == 0:
        raise ValueError("empty length distribution")
    if p == 0.0:
        return LaurentPoly({0: 1.0})
    k_max = int(ks.max())
    coeffs = []
    cum = 0.0
    for e in range(k_max + 1):
        pe = float((wk * stats.binom.pmf(e, ks, p)).sum())
        coeffs.append(pe)
        cum += pe
        if 1.0 - cum < tail_tol:
            break
    return LaurentPoly._from_dense(0, np.asarray(coeffs),
                                   lost_mass=max(0.0, 1.0 - cum))


def multi_error_gain(gain: LaurentPoly, error_pmf: LaurentPoly) -> LaurentPoly:
    """Compound gain/loss law: mixture of convolution powers of ``gain``
    weighted by the error count distribution (errors act independently)."""
    if abs(gain.mass() - 1.0) > 1e-9:
        raise ValueError("per-error gain/loss law must have unit mass")
    power = gain.power(0)
    total = LaurentPoly.zero()
    prev_e = 0
    for e, w in error_pmf.items():
        for _ in range(e - prev_e):
            power = power * gain
        prev_e = e
        total = total + power.scale(w)
    return LaurentPoly._from_dense(*total.dense(),
                                   total.lost_mass + error_pmf.lost_mass,
                                   total.window)


@dataclass(frozen=True)
class DeltaSAnalysis:
    """End-to-end gain/loss statistics of a code on a noisy channel.

    ``delta_pmf`` holds P(delta_s = i) at exponent ``i`` where
    ``delta_s = decoded - emitted`` symbol count over the frame.
    """

    code_id: str
    l_s: int
    eta: float
    p_crossover: float
    delta_pmf: LaurentPoly
    p_sync: float
    h_delta_s: float
    d_eta: int
    length_pmf: LaurentPoly
    error_pmf: LaurentPoly
    mepl: float
    vepl: float
    mdl: float
    excess_rate: float
    lost_mass: float

    def h_mod(self, t: int) -> float:
        return constraint_entropy_mod(self.delta_pmf, t)


def criteria(code: VlcCode, source: SourceModel, l_s: int,
             channel: ChannelSpec, eta: float = 1e-6,
             tail_tol: float = 1e-12, gain_tol: float = 1e-12) -> DeltaSAnalysis:
    """Full analytic record for one (code, frame length, channel) setting."""
    if not 0.0 < eta < 1.0 / math.e:
        raise ValueError("eta must lie in (0, 1/e)")
    esd = build_esd(code, source)
    gain = gain_polynomial(esd, tol=gain_tol)
    span = error_span_poly(esd, tol=gain_tol)
    # Gain exponents count emitted-minus-decoded symbols; flip to the
    # decoded-minus-emitted convention used for delta_s throughout.
    window = code.l_M * l_s
    delta_single = gain.mirror().with_window(window)
    length_pmf = bitstream_length_pmf(code, source, l_s)
    p = channel.crossover
    err_pmf = error_count_pmf(length_pmf, p, tail_tol)
    g_tilde = multi_error_gain(delta_single, err_pmf)
    return DeltaSAnalysis(
        code_id=code.code_id,
        l_s=l_s,
        eta=eta,
        p_crossover=p,
        delta_pmf=g_tilde,
        p_sync=g_tilde.coeff(0),
        h_delta_s=g_tilde.entropy(),
        d_eta=g_tilde.pseudo_degree(eta),
        length_pmf=length_pmf,
        error_pmf=err_pmf,
        mepl=span.mean(),
        vepl=span.variance(),
        mdl=mdl(code, source),
        excess_rate=excess_rate(code, source),
        lost_mass=g_tilde.lost_mass,
    )


def constraint_entropy_mod(delta_pmf: LaurentPoly, t: int) -> float:
    """Entropy (bits) of the gain/loss residue modulo ``t``: the information
    a length constraint contributes on an aggregated decoder of modulus t."""
    return delta_pmf.fold_mod(t).entropy()


def entropy_bounds(delta_pmf: LaurentPoly, eta: float,
                   l_x_max: int) -> tuple[float, float]:
    """Bracket for the residue entropy at modulus ``2*d_eta + 1``.

    Returns (lower, upper) with
    ``lower = H + (l_x_max - 2 d - 1) * eta * log2(eta)`` and ``upper = H``:
    aggregating at modulus 2d+1 loses at most the tail term.
    """
    if not 0.0 < eta < 1.0 / math.e:
        raise ValueError("eta must lie in (0, 1/e)")
    h = delta_pmf.entropy()
    d = delta_pmf.pseudo_degree(eta)
    lower = h + (l_x_max - 2 * d - 1) * eta * math.log2(eta)
    return lower, h
