# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel: cyclic Jacobi rotations for dense Hermitian matrices."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, hypot

cnp.import_array()

ctypedef double complex cplx


cdef inline double cabs2(cplx z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef int _jacobi_sweeps(cplx[:, ::1] a, cplx[:, ::1] v, bint want_v,
                        double tol, int max_sweeps) nogil:
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q, k
    cdef int sweep
    cdef double off, diag, apq_abs, theta, t, c, s, app, aqq
    cdef cplx ph, phc, akp, bkq
    for sweep in range(max_sweeps):
        off = 0.0
        diag = 0.0
        for p in range(n):
            diag += a[p, p].real * a[p, p].real
            for q in range(p + 1, n):
                off += cabs2(a[p, q])
        if off <= tol * tol * diag or off == 0.0:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq_abs = sqrt(cabs2(a[p, q]))
                app = a[p, p].real
                aqq = a[q, q].real
                if apq_abs == 0.0:
                    continue
                if sweep > 3 and apq_abs < 1e-18 * (fabs(app) + fabs(aqq)):
                    a[p, q] = 0.0
                    continue
                # phase that makes the (p, q) entry real and positive
                ph = a[p, q] / apq_abs
                theta = (aqq - app) / (2.0 * apq_abs)
                if theta >= 0:
                    t = 1.0 / (theta + hypot(1.0, theta))
                else:
                    t = -1.0 / (-theta + hypot(1.0, theta))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                # only the upper triangle is stored and updated
                phc = ph.conjugate()
                for k in range(p):
                    akp = a[k, p]
                    bkq = a[k, q] * phc
                    a[k, p] = c * akp - s * bkq
                    a[k, q] = s * akp + c * bkq
                for k in range(p + 1, q):
                    akp = a[p, k].conjugate()
                    bkq = a[k, q] * phc
                    a[p, k] = (c * akp - s * bkq).conjugate()
                    a[k, q] = s * akp + c * bkq
                for k in range(q + 1, n):
                    akp = a[p, k].conjugate()
                    bkq = a[q, k].conjugate() * phc
                    a[p, k] = (c * akp - s * bkq).conjugate()
                    a[q, k] = (s * akp + c * bkq).conjugate()
                a[p, p] = app - t * apq_abs
                a[q, q] = aqq + t * apq_abs
                a[p, q] = 0.0
                if want_v:
                    for k in range(n):
                        akp = v[k, p]
                        bkq = v[k, q] * phc
                        v[k, p] = c * akp - s * bkq
                        v[k, q] = s * akp + c * bkq
    return -1


def hermitian_eigh(a, double tol=1e-15, int max_sweeps=60, bint vectors=False):
    """Eigenvalues (ascending) and optionally eigenvectors of a Hermitian matrix.

    Only the upper triangle of ``a`` is read. Returns ``(w, V)`` with
    ``V = None`` unless ``vectors`` is set.
    """
    w = np.array(a, dtype=np.complex128, order="C", copy=True)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError("expected a square matrix")
    w = np.ascontiguousarray(np.triu(w))
    w.imag[np.diag_indices(w.shape[0])] = 0.0
    vec = np.eye(w.shape[0], dtype=np.complex128) if vectors else np.zeros((1, 1), np.complex128)
    cdef cplx[:, ::1] view = w
    cdef cplx[:, ::1] vview = vec
    cdef int sweeps
    with nogil:
        sweeps = _jacobi_sweeps(view, vview, vectors, tol, max_sweeps)
    if sweeps < 0:
        raise ArithmeticError("Jacobi iteration did not converge in %d sweeps" % max_sweeps)
    vals = w.diagonal().real.copy()
    order = np.argsort(vals, kind="stable")
    return vals[order], (vec[:, order] if vectors else None)
