"""Laurent polynomials with real coefficients.

Every distribution manipulated by this package (symbol gain/loss after a
bit error, resynchronization span, bitstream length, channel error count)
is a probability mass function over integers that may be negative.  They
are all represented here as Laurent polynomials: a map from integer
exponent to real coefficient.

Coefficients are stored densely over the contiguous exponent range
``[min_exp, max_exp]``; the public view (`items`, `as_dict`, `coeff`)
never exposes stored zeros.  An optional symmetric window ``[-D, +D]``
confines a polynomial and all of its products: coefficients falling
outside the window are accumulated into ``lost_mass`` instead of being
kept, so window truncation error stays observable.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator, Mapping, Union

import numpy as np

# Coefficients below this magnitude are flushed to zero (and tracked in
# lost_mass) to keep denormals out of long convolution chains.
UNDERFLOW_EPS = 1e-300

CoeffSource = Union[Mapping[int, float], Iterable[tuple[int, float]], None]


class ZeroMass(ValueError):
    """Raised when a moment of an empty (all-zero) polynomial is requested."""


class NotConverged(RuntimeError):
    """Raised when a tail criterion cannot be certified within the window."""


class LaurentPoly:
    """Immutable sparse-to-the-user, dense-inside Laurent polynomial."""

    __slots__ = ("_lo", "_c", "lost_mass", "window")

    def __init__(self, coeffs: CoeffSource = None, *, lost_mass: float = 0.0,
                 window: int | None = None):
        if coeffs is None:
            items: list[tuple[int, float]] = []
        elif isinstance(coeffs, Mapping):
            items = [(int(e), float(c)) for e, c in coeffs.items()]
        else:
            items = [(int(e), float(c)) for e, c in coeffs]
        if items:
            lo = min(e for e, _ in items)
            hi = max(e for e, _ in items)
            arr = np.zeros(hi - lo + 1, dtype=np.float64)
            for e, c in items:
                arr[e - lo] += c
        else:
            lo, arr = 0, np.zeros(0, dtype=np.float64)
        lo, arr, lost = _normalize(lo, arr, float(lost_mass), window)
        self._lo = lo
        self._c = arr
        self.lost_mass = lost
        self.window = window

    @classmethod
    def _from_dense(cls, lo: int, arr: np.ndarray, lost_mass: float = 0.0,
                    window: int | None = None) -> "LaurentPoly":
        self = object.__new__(cls)
        lo, arr, lost = _normalize(lo, np.asarray(arr, dtype=np.float64),
                                   float(lost_mass), window)
        self._lo = lo
        self._c = arr
        self.lost_mass = lost
        self.window = window
        return self

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def unit(cls, coeff: float = 1.0, exp: int = 0) -> "LaurentPoly":
        """The monomial ``coeff * y**exp`` (defaults to the identity 1)."""
        return cls({exp: coeff})

    # -- inspection ------------------------------------------------------

    @property
    def min_exp(self) -> int:
        if not len(self._c):
            raise ZeroMass("zero polynomial has no support")
        return self._lo

    @property
    def max_exp(self) -> int:
        if not len(self._c):
            raise ZeroMass("zero polynomial has no support")
        return self._lo + len(self._c) - 1

    def is_zero(self) -> bool:
        return len(self._c) == 0

    def coeff(self, exp: int) -> float:
        i = exp - self._lo
        if 0 <= i < len(self._c):
            return float(self._c[i])
        return 0.0

    def items(self) -> Iterator[tuple[int, float]]:
        """Nonzero (exponent, coefficient) pairs in increasing exponent order."""
        for i, c in enumerate(self._c):
            if c != 0.0:
                yield self._lo + i, float(c)

    def as_dict(self) -> dict[int, float]:
        return dict(self.items())

    def dense(self) -> tuple[int, np.ndarray]:
        """(min_exp, coefficient array) over the stored contiguous range."""
        return self._lo, self._c.copy()

    def __len__(self) -> int:
        return int(np.count_nonzero(self._c))

    def __repr__(self) -> str:
        body = ", ".join(f"{e}: {c:.6g}" for e, c in list(self.items())[:8])
        more = "" if len(self) <= 8 else f", ... ({len(self)} terms)"
        return f"LaurentPoly({{{body}{more}}})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __hash__(self) -> int:
        return hash(tuple(self.items()))

    def allclose(self, other: "LaurentPoly", atol: float = 1e-12) -> bool:
        exps = set(dict(self.items())) | set(dict(other.items()))
        return all(abs(self.coeff(e) - other.coeff(e)) <= atol for e in exps)

    # -- arithmetic ------------------------------------------------------

    def add(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.is_zero():
            return other._with_window(_narrower(self.window, other.window),
                                      extra_lost=self.lost_mass)
        if other.is_zero():
            return self._with_window(_narrower(self.window, other.window),
                                     extra_lost=other.lost_mass)
        lo = min(self._lo, other._lo)
        hi = max(self._lo + len(self._c), other._lo + len(other._c))
        arr = np.zeros(hi - lo, dtype=np.float64)
        arr[self._lo - lo:self._lo - lo + len(self._c)] += self._c
        arr[other._lo - lo:other._lo - lo + len(other._c)] += other._c
        return LaurentPoly._from_dense(lo, arr,
                                       self.lost_mass + other.lost_mass,
                                       _narrower(self.window, other.window))

    def scale(self, factor: float) -> "LaurentPoly":
        return LaurentPoly._from_dense(self._lo, self._c * factor,
                                       self.lost_mass * abs(factor), self.window)

    def mul(self, other: "LaurentPoly") -> "LaurentPoly":
        """Convolution product; truncates to the narrower window if any."""
        if self.is_zero() or other.is_zero():
            return LaurentPoly._from_dense(
                0, np.zeros(0), self.lost_mass + other.lost_mass,
                _narrower(self.window, other.window))
        arr = np.convolve(self._c, other._c)
        return LaurentPoly._from_dense(self._lo + other._lo, arr,
                                       self.lost_mass + other.lost_mass,
                                       _narrower(self.window, other.window))

    def power(self, e: int) -> "LaurentPoly":
        """e-fold convolution of the polynomial with itself (e >= 0)."""
        if e < 0:
            raise ValueError("negative convolution power")
        result = LaurentPoly._from_dense(0, np.ones(1), 0.0, self.window)
        base = self
        while e:
            if e & 1:
                result = result.mul(base)
            e >>= 1
            if e:
                base = base.mul(base)
        return result

    def mirror(self) -> "LaurentPoly":
        """Negate every exponent (reverse the distribution around 0)."""
        if self.is_zero():
            return self
        return LaurentPoly._from_dense(-(self._lo + len(self._c) - 1),
                                       self._c[::-1], self.lost_mass, self.window)

    def with_window(self, window: int | None) -> "LaurentPoly":
        """Copy confined to exponents [-window, +window]."""
        return self._with_window(window)

    def _with_window(self, window: int | None, extra_lost: float = 0.0) -> "LaurentPoly":
        return LaurentPoly._from_dense(self._lo, self._c,
                                       self.lost_mass + extra_lost, window)

    def __add__(self, other):
        if isinstance(other, LaurentPoly):
            return self.add(other)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            return self.mul(other)
        if isinstance(other, (int, float)):
            return self.scale(float(other))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return self.power(e)

    # -- moments and shape -----------------------------------------------

    def mass(self) -> float:
        return float(self._c.sum())

    def mean(self) -> float:
        m = self.mass()
        if m <= 0.0:
            raise ZeroMass("mean of a massless polynomial")
        return float((self._exps() * self._c).sum() / m)

    def variance(self) -> float:
        m = self.mass()
        if m <= 0.0:
            raise ZeroMass("variance of a massless polynomial")
        x = self._exps()
        mu = float((x * self._c).sum() / m)
        return float((((x - mu) ** 2) * self._c).sum() / m)

    def entropy(self, mass_tol: float = 1e-6) -> float:
        """Shannon entropy (bits) of the coefficients, renormalized to 1.

        The mass must already be within ``mass_tol`` of 1; the residual
        deficit is absorbed by the renormalization.
        """
        m = self.mass()
        if abs(m - 1.0) > mass_tol:
            raise ValueError(f"coefficient mass {m!r} not within {mass_tol} of 1")
        w = self._c[self._c > 0.0] / m
        return float(-(w * np.log2(w)).sum()) + 0.0

    def fold_mod(self, t: int) -> "LaurentPoly":
        """Project onto exponent residues modulo ``t`` (mass preserving)."""
        if t < 1:
            raise ValueError("modulus must be >= 1")
        if self.is_zero():
            return LaurentPoly._from_dense(0, np.zeros(0), self.lost_mass, None)
        res = np.bincount(self._exps() % t, weights=self._c, minlength=t)
        return LaurentPoly._from_dense(0, res, self.lost_mass, None)

    def pseudo_degree(self, eta: float) -> int:
        """Smallest d >= 1 with total coefficient mass at |exp| > d below eta.

        The tracked ``lost_mass`` counts toward the tail: a degree is only
        certified when window truncation cannot have hidden enough mass to
        break the bound.
        """
        if not 0.0 < eta < 1.0:
            raise ValueError("eta must lie in (0, 1)")
        if self.is_zero():
            if self.lost_mass >= eta:
                raise NotConverged("lost mass alone exceeds eta")
            return 1
        bins = np.bincount(np.abs(self._exps()), weights=self._c)
        suffix = np.cumsum(bins[::-1])[::-1]  # suffix[j] = sum over |exp| >= j
        max_abs = len(bins) - 1
        for d in range(1, max_abs + 2):
            tail = float(suffix[d + 1]) if d + 1 <= max_abs else 0.0
            if tail + self.lost_mass < eta:
                return d
        raise NotConverged("no finite pseudo-degree satisfies the bound")

    def dump(self) -> str:
        """Debug dump: one ``exponent<TAB>coefficient`` line per term."""
        return "\n".join(f"{e}\t{c!r}" for e, c in self.items())

    def _exps(self) -> np.ndarray:
        return np.arange(self._lo, self._lo + len(self._c))


def _narrower(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _normalize(lo: int, arr: np.ndarray, lost: float,
               window: int | None) -> tuple[int, np.ndarray, float]:
    if arr.ndim != 1:
        raise ValueError("coefficient array must be one-dimensional")
    arr = arr.copy()
    tiny = (np.abs(arr) < UNDERFLOW_EPS) & (arr != 0.0)
    if tiny.any():
        lost += float(np.abs(arr[tiny]).sum())
        arr[tiny] = 0.0
    if window is not None:
        if window < 0:
            raise ValueError("window must be >= 0")
        hi = lo + len(arr) - 1
        cut_lo = max(0, -window - lo)
        cut_hi = max(0, hi - window)
        if cut_lo or cut_hi:
            lost += float(np.abs(arr[:cut_lo]).sum())
            if cut_hi:
                lost += float(np.abs(arr[len(arr) - cut_hi:]).sum())
            arr = arr[cut_lo:len(arr) - cut_hi if cut_hi else len(arr)]
            lo += cut_lo
    nz = np.nonzero(arr)[0]
    if len(nz) == 0:
        return 0, np.zeros(0, dtype=np.float64), lost
    arr = arr[nz[0]:nz[-1] + 1]
    return lo + int(nz[0]), arr, lost
