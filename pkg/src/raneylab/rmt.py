"""Monte Carlo for squared singular values of products of complex Ginibre matrices.

The eigenvalues of ``W = P P^H`` with ``P = G_1 ... G_M`` are divided by
``N**M`` so that their global density converges to the Raney density with
parameters ``(M + 1, 1)`` on ``[0, (M+1)^(M+1) / M^M]``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from ._backend import hermitian_eigh
from .curve import CurveModel, sample_density
from .exact import raney_exact
from .params import make_params, support_edge
from .quad import graded_rule, map_power

__all__ = [
    "EmptyRunError",
    "MCRun",
    "MomentRow",
    "MCReport",
    "ginibre",
    "sample_product",
    "run_mc",
    "model_cdf",
    "ks_distance",
    "compare_to_density",
]


class EmptyRunError(ValueError):
    """A report was requested for a run without samples."""


def _generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def ginibre(n: int, rng: np.random.Generator) -> np.ndarray:
    """``n x n`` matrix of standard complex Gaussians, ``E|g|^2 = 1``."""
    re = rng.standard_normal((n, n))
    im = rng.standard_normal((n, n))
    return (re + 1j * im) * np.sqrt(0.5)


def sample_product(N: int, M: int, seed) -> np.ndarray:
    """Scaled squared singular values of one product of ``M`` Ginibre matrices.

    ``seed`` is anything :func:`numpy.random.default_rng` accepts (or a
    Generator). Returns ``N`` values sorted ascending.
    """
    if int(N) != N or N < 2:
        raise ValueError(f"matrix size N={N} must be an integer >= 2")
    if int(M) != M or M < 1:
        raise ValueError(f"number of factors M={M} must be an integer >= 1")
    rng = _generator(seed)
    prod = ginibre(N, rng)
    for _ in range(M - 1):
        prod = prod @ ginibre(N, rng)
    w = prod @ prod.conj().T
    vals, _ = hermitian_eigh(w)
    scale = float(np.max(np.abs(vals))) if vals.size else 0.0
    if np.any(vals < -1e-10 * scale):
        raise ArithmeticError("negative eigenvalue of a positive semidefinite matrix")
    return np.maximum(vals, 0.0) / float(N) ** M


@dataclass(frozen=True)
class MCRun:
    """Accumulated samples; ``scaled_values`` is trial-major (``trials x N``)."""

    N: int
    M: int
    trials: int
    seed: int
    scaled_values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.scaled_values.size != self.N * self.trials:
            raise ValueError("scaled_values must hold N values per trial")
        if np.any(self.scaled_values < 0):
            raise ValueError("scaled values must be non-negative")

    @property
    def per_trial(self) -> np.ndarray:
        return self.scaled_values.reshape(self.trials, self.N)

    @property
    def L(self) -> float:
        return support_edge(make_params(self.M + 1, 1))


def run_mc(N: int, M: int, trials: int, seed: int, workers: int = 1) -> MCRun:
    """Run ``trials`` independent products.

    Trial ``i`` draws from the ``i``-th child of ``SeedSequence(seed)``, so
    results do not depend on ``workers`` or on completion order.
    """
    if trials < 0:
        raise ValueError("trials must be non-negative")
    if N < 2 or M < 1:
        # validate before spawning work
        sample_product(N, M, 0)
    children = np.random.SeedSequence(seed).spawn(trials)
    out = np.empty((trials, N))
    if workers > 1 and trials > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for i, vals in enumerate(pool.map(lambda s: sample_product(N, M, s), children)):
                out[i] = vals
    else:
        for i, child in enumerate(children):
            out[i] = sample_product(N, M, child)
    return MCRun(N, M, trials, int(seed), out.ravel())


@dataclass(frozen=True)
class MomentRow:
    n: int
    empirical: float
    stderr: float
    exact: Fraction

    @property
    def rel_dev(self) -> float:
        return abs(self.empirical - float(self.exact)) / float(self.exact)


@dataclass
class MCReport:
    N: int
    M: int
    trials: int
    seed: int
    n_values: int
    L: float
    moments: List[MomentRow]
    bin_edges: np.ndarray
    counts: np.ndarray
    density_est: np.ndarray
    density_model: np.ndarray
    ks: float
    overflow: int = 0

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "M": self.M,
            "trials": self.trials,
            "seed": self.seed,
            "n_values": self.n_values,
            "L": self.L,
            "ks_distance": self.ks,
            "beyond_edge": self.overflow,
            "moments": [
                {
                    "n": r.n,
                    "empirical": r.empirical,
                    "stderr": r.stderr,
                    "exact": f"{r.exact.numerator}/{r.exact.denominator}",
                    "exact_float": float(r.exact),
                    "rel_dev": r.rel_dev,
                }
                for r in self.moments
            ],
        }


def model_cdf(model: CurveModel, npanels: int = 400, npoints: int = 400):
    """Distribution function of the curve density as a callable on ``[0, L]``.

    The density is sampled, interpolated and integrated panel by panel with
    Gauss-Legendre rules (power-mapped at the ends). Cumulative sums are
    joined by a cubic Hermite spline in ``t = (x/L)^(1/s)``, where ``s``
    removes the power behaviour at the origin, with slopes from the density.
    """
    prof = sample_density(model, npoints)
    L = prof.L
    sp = map_power(prof.map_exponents[0])
    t = np.linspace(0.0, 1.0, npanels + 1)
    edges = L * t ** sp
    nodes, wts = graded_rule(0.0, L, (), breakpoints=edges[1:-1],
                             endpoint_exponents=prof.map_exponents)
    nodes = nodes.reshape(npanels, -1)
    wts = wts.reshape(npanels, -1)
    cells = np.sum(prof.pdf(nodes.ravel()).reshape(nodes.shape) * wts, axis=1)
    cdf = np.concatenate([[0.0], np.cumsum(cells)])
    total = cdf[-1]
    # dF/dt = rho(x) dx/dt; the limits at both ends are finite for these maps
    with np.errstate(divide="ignore", invalid="ignore"):
        slope = prof.pdf(edges) * L * sp * t ** (sp - 1.0)
    slope[0] = cells[0] / (t[1] - t[0])
    slope[-1] = 0.0 if prof.map_exponents[1] > 0 else cells[-1] / (t[-1] - t[-2])
    spline = CubicHermiteSpline(t, cdf / total, slope / total)

    last = edges[-2]
    gb = prof.map_exponents[1]

    def F(x):
        x = np.clip(np.asarray(x, dtype=float), 0.0, L)
        out = spline((x / L) ** (1.0 / sp))
        # the spline cannot follow the root behaviour at L; integrate that cell directly
        tail = np.flatnonzero((x > last) & (x < L))
        for i in tail:
            tn, tw = graded_rule(x.flat[i], L, (), endpoint_exponents=(0.0, gb))
            out.flat[i] = 1.0 - np.sum(prof.pdf(tn) * tw) / total
        return np.clip(out, 0.0, 1.0)

    F.mass = total
    return F


def ks_distance(values: np.ndarray, cdf) -> float:
    """Kolmogorov-Smirnov statistic of ``values`` against ``cdf``."""
    x = np.sort(np.asarray(values, dtype=float))
    n = x.size
    if n == 0:
        raise EmptyRunError("no samples")
    F = cdf(x)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


def compare_to_density(run: MCRun, model: Optional[CurveModel] = None, nbins: int = 50,
                       max_moment: int = 4) -> MCReport:
    """Moments, histogram and KS distance of a run against the Raney ``(M+1, 1)`` law."""
    if run.scaled_values.size == 0:
        raise EmptyRunError("the Monte Carlo run holds no samples")
    if nbins < 1:
        raise ValueError("nbins must be positive")
    params = make_params(run.M + 1, 1)
    if model is None:
        model = CurveModel.from_params(params)
    vals = run.scaled_values
    per_trial = run.per_trial
    rows = []
    for n in range(1, max_moment + 1):
        emp = float(np.mean(vals ** n))
        if run.trials > 1:
            # eigenvalues within a trial are correlated; use trial means
            se = float(np.std(np.mean(per_trial ** n, axis=1), ddof=1) / np.sqrt(run.trials))
        else:
            se = float(np.std(vals ** n, ddof=1) / np.sqrt(vals.size)) if vals.size > 1 else float("nan")
        rows.append(MomentRow(n, emp, se, raney_exact(params, n)))
    L = model.L
    edges = np.linspace(0.0, L, nbins + 1)
    counts, _ = np.histogram(vals, bins=edges)
    overflow = int(np.count_nonzero(vals > L))
    width = np.diff(edges)
    est = counts / (vals.size * width)
    F = model_cdf(model)
    dens_model = np.diff(F(edges)) / width
    ks = ks_distance(vals, F)
    return MCReport(run.N, run.M, run.trials, run.seed, int(vals.size), L, rows, edges,
                    counts, est, dens_model, ks, overflow)
