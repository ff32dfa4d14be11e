"""Exact rational Raney numbers and binomial moments.

Everything here is computed with :class:`fractions.Fraction`; these values are
the reference that the floating-point pipelines are checked against.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Tuple

from .params import JacobiParams, RaneyParams

__all__ = ["gen_binomial", "raney_exact", "RaneySequence", "raney_sequence", "binomial_moment"]


def gen_binomial(top: Fraction, k: int) -> Fraction:
    """Generalised binomial ``C(top, k) = top (top-1) ... (top-k+1) / k!``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    top = Fraction(top)
    out = Fraction(1)
    for j in range(1, k + 1):
        out *= (top - k + j) / j
    return out


@lru_cache(maxsize=4096)
def _raney(p: Fraction, r: Fraction, k: int) -> Fraction:
    top = p * k + r
    return r / top * gen_binomial(top, k)


def raney_exact(params: RaneyParams, k: int) -> Fraction:
    """Raney number ``R_{p,r}(k) = r/(pk+r) C(pk+r, k)`` as an exact rational."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return _raney(params.p, params.r, int(k))


@dataclass(frozen=True)
class RaneySequence:
    params: RaneyParams
    values: Tuple[Fraction, ...]

    def __getitem__(self, k):
        return self.values[k]

    def __len__(self):
        return len(self.values)

    def as_floats(self):
        return [float(v) for v in self.values]


def raney_sequence(params: RaneyParams, kmax: int) -> RaneySequence:
    return RaneySequence(params, tuple(raney_exact(params, k) for k in range(kmax + 1)))


def binomial_moment(jp: JacobiParams, n: int) -> Tuple[Fraction, float]:
    """``C(pn + r, n)`` exactly and the moment ``A^{-n} C(pn + r, n)``.

    ``(p, r) = (theta/q + 1, 1/q - 1)`` and ``A = p^p (p-1)^{-(p-1)}``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    b = gen_binomial(jp.p * n + jp.r, n)
    return b, float(b) * jp.A ** (-n)
