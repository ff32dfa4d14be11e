"""Pure-numpy fallback for the compiled kernels.

Jacobi rotations are applied in round-robin order: each round rotates
``n/2`` disjoint index pairs at once, so a round is a handful of vectorised
row and column updates.
"""

from __future__ import annotations

import numpy as np

__all__ = ["hermitian_eigh"]


def _round_robin(n):
    """Pair schedules for one sweep (``n`` even): ``n - 1`` rounds of ``n/2`` pairs."""
    players = list(range(n))
    rounds = []
    for _ in range(n - 1):
        half = n // 2
        top, bottom = players[:half], players[half:][::-1]
        p = np.array([min(i, j) for i, j in zip(top, bottom)])
        q = np.array([max(i, j) for i, j in zip(top, bottom)])
        rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def hermitian_eigh(a, tol=1e-15, max_sweeps=60, vectors=False):
    """Eigenvalues (ascending) and optionally eigenvectors of a Hermitian matrix.

    Only the upper triangle of ``a`` is read. Returns ``(w, V)`` with
    ``V = None`` unless ``vectors`` is set.
    """
    a = np.array(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    n0 = a.shape[0]
    a = np.triu(a) + np.triu(a, 1).conj().T
    a[np.diag_indices(n0)] = a.diagonal().real
    n = n0 + (n0 % 2)
    if n != n0:
        # a decoupled zero row/column pads to an even size
        a = np.pad(a, ((0, 1), (0, 1)))
    v = np.eye(n, dtype=complex) if vectors else None
    rounds = _round_robin(n) if n > 1 else []
    iu = np.triu_indices(n, 1)
    for _ in range(max_sweeps):
        d = a.diagonal().real
        off = float(np.sum(np.abs(a[iu]) ** 2))
        if off == 0.0 or off <= tol * tol * float(np.sum(d * d)):
            break
        for p, q in rounds:
            apq = a[p, q]
            mag = np.abs(apq)
            active = mag > 0.0
            if not np.any(active):
                continue
            p, q, apq, mag = p[active], q[active], apq[active], mag[active]
            ph = apq / mag
            app = a[p, p].real
            aqq = a[q, q].real
            theta = (aqq - app) / (2.0 * mag)
            t = np.sign(theta) / (np.abs(theta) + np.hypot(1.0, theta))
            t[theta == 0] = 1.0
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            phc = ph.conj()
            # columns: A <- A G with G = [[c, s], [-s conj(ph), c conj(ph)]]
            cp, cq = a[:, p].copy(), a[:, q] * phc
            a[:, p] = c * cp - s * cq
            a[:, q] = s * cp + c * cq
            # rows: A <- G^H A
            rp, rq = a[p, :].copy(), a[q, :] * ph[:, None]
            a[p, :] = c[:, None] * rp - s[:, None] * rq
            a[q, :] = s[:, None] * rp + c[:, None] * rq
            a[p, p] = app - t * mag
            a[q, q] = aqq + t * mag
            a[p, q] = 0.0
            a[q, p] = 0.0
            if vectors:
                vp, vq = v[:, p].copy(), v[:, q] * phc
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        raise ArithmeticError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    vals = a.diagonal().real[:n0].copy()
    order = np.argsort(vals, kind="stable")
    if not vectors:
        return vals[order], None
    return vals[order], v[:n0, :n0][:, order]
