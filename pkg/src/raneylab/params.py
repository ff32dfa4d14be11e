"""Parameter records for the Raney family and its binomial-moment variant."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

RationalLike = Union[int, str, Fraction]

__all__ = [
    "ParameterError",
    "RaneyParams",
    "JacobiParams",
    "as_fraction",
    "make_params",
    "from_family",
    "support_edge",
    "family_edge",
]


class ParameterError(ValueError):
    """Raised when a parameter pair lies outside the admissible region."""


def as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, float):
        raise ParameterError(f"floats are not accepted, pass an exact rational (got {x!r})")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParameterError(f"not a rational number: {x!r}") from exc


@dataclass(frozen=True)
class RaneyParams:
    """Validated pair ``(p, r)`` with optional family coordinates.

    When ``r = m + 1/q`` for integers ``m >= 0`` and ``q >= 1`` the record also
    carries ``q``, ``m`` and ``theta = q (p - 1)``, so that
    ``(p, r) = (theta/q + 1, m + 1/q)``. Otherwise these are ``None``.
    """

    p: Fraction
    r: Fraction
    theta: Optional[Fraction] = None
    q: Optional[int] = None
    m: Optional[int] = None

    @property
    def has_family(self) -> bool:
        return self.q is not None

    @property
    def L(self) -> float:
        return support_edge(self)

    def __str__(self) -> str:
        return f"({self.p}, {self.r})"


@dataclass(frozen=True)
class JacobiParams:
    """Binomial-moment family ``(p, r) = (theta/q + 1, 1/q - 1)``."""

    theta: Fraction
    q: int

    def __post_init__(self):
        if self.theta <= 0:
            raise ParameterError("theta must be positive")
        if self.q < 1:
            raise ParameterError("q must be a positive integer")
        if not (-1 < self.r <= self.p - 1):
            raise ParameterError(f"r = {self.r} outside (-1, p - 1]")

    @property
    def p(self) -> Fraction:
        return self.theta / self.q + 1

    @property
    def r(self) -> Fraction:
        return Fraction(1, self.q) - 1

    @property
    def A(self) -> float:
        return _edge(self.p)


def _family_coordinates(r: Fraction):
    """Return ``(q, m)`` with ``r = m + 1/q``, or ``None``."""
    m = math.floor(r)
    frac = r - m
    if frac == 0:
        # r = (m - 1) + 1/1
        return (1, m - 1) if m >= 1 else None
    if frac.numerator == 1:
        return frac.denominator, m
    return None


def make_params(p: RationalLike, r: RationalLike) -> RaneyParams:
    """Validate ``(p, r)`` and attach ``(theta, q, m)`` when they exist."""
    p = as_fraction(p)
    r = as_fraction(r)
    if p <= 1:
        raise ParameterError(f"p must exceed 1 (got p = {p})")
    if r <= 0 or r > p:
        raise ParameterError(f"r must satisfy 0 < r <= p (got r = {r}, p = {p})")
    coords = _family_coordinates(r)
    if coords is None:
        return RaneyParams(p, r)
    q, m = coords
    return RaneyParams(p, r, theta=q * (p - 1), q=q, m=m)


def from_family(theta: RationalLike, q: int = 1, m: int = 0) -> RaneyParams:
    """Build the record for ``(theta/q + 1, m + 1/q)``."""
    theta = as_fraction(theta)
    if theta <= 0:
        raise ParameterError("theta must be positive")
    if int(q) != q or q < 1:
        raise ParameterError("q must be a positive integer")
    if int(m) != m or m < 0:
        raise ParameterError("m must be a non-negative integer")
    params = make_params(theta / q + 1, m + Fraction(1, q))
    assert (params.theta, params.q, params.m) == (theta, q, m)
    return params


def _edge(p) -> float:
    p = float(p)
    if p <= 1:
        raise ParameterError("support edge needs p > 1")
    return math.exp(p * math.log(p) - (p - 1) * math.log(p - 1))


def support_edge(params: RaneyParams) -> float:
    """Right end ``L = p^p (p-1)^{-(p-1)}`` of the density's support.

    This is the branch point of the algebraic curve: the critical point
    ``u_c = p/(p-1)`` of ``z = u^p / (u - 1)`` (with ``u = w^{1/r}``) gives
    ``z_c = p u_c^(p-1)``. It does not depend on ``r``.
    """
    return _edge(params.p)


def family_edge(theta, q: int = 1) -> float:
    """Same edge written as ``(theta/q) (1 + q/theta)^(1 + theta/q)``."""
    b = float(theta) / q
    return b * (1.0 + 1.0 / b) ** (1.0 + b)
