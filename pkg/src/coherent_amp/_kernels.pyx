# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops. Mirrors ``_purepy`` function for function."""

import numpy as np

from libc.math cimport sqrt, cos, fabs, NAN, INFINITY
from libc.string cimport memcpy
from cython.parallel cimport prange
from scipy.linalg.cython_lapack cimport zheev

ctypedef double complex cplx

cdef int FEASIBLE = 0
cdef int INFEASIBLE = 1
cdef int INCONCLUSIVE = 2


cdef class _Eig:
    """Scratch space for repeated Hermitian eigendecompositions of one size."""
    cdef int n, lwork
    cdef cplx[:, ::1] a
    cdef double[::1] w
    cdef cplx[::1] work
    cdef double[::1] rwork

    def __init__(self, int n):
        self.n = n
        self.lwork = max(1, 64 * n)
        self.a = np.empty((n, n), dtype=complex)
        self.w = np.empty(n, dtype=float)
        self.work = np.empty(self.lwork, dtype=complex)
        self.rwork = np.empty(max(1, 3 * n - 2), dtype=float)

    cdef int run(self, cplx[:, ::1] m, bint vectors) nogil:
        # LAPACK reads the row-major buffer as conj(m); eigenvalues are unchanged
        cdef char jobz = b'V' if vectors else b'N'
        cdef char uplo = b'L'
        cdef int info = 0
        cdef int n = self.n
        memcpy(&self.a[0, 0], &m[0, 0], n * n * sizeof(cplx))
        zheev(&jobz, &uplo, &n, &self.a[0, 0], &n, &self.w[0], &self.work[0],
              &self.lwork, &self.rwork[0], &info)
        return info

    cdef int clip(self, cplx[:, ::1] m, cplx[:, ::1] out) nogil:
        """out = projection of Hermitian m onto the PSD cone."""
        cdef int info = self.run(m, True)
        cdef int n = self.n
        cdef int j, r, c
        cdef double lam
        cdef cplx acc
        if info != 0:
            return info
        for r in range(n):
            for c in range(n):
                out[r, c] = 0
        for j in range(n):
            lam = self.w[j]
            if lam <= 0.0:
                continue
            # row j of a is an eigenvector of conj(m), i.e. conj of one of m
            for r in range(n):
                for c in range(n):
                    out[r, c] = out[r, c] + lam * self.a[j, r].conjugate() * self.a[j, c]
        return 0

    cdef double min_eig(self, cplx[:, ::1] m, double tol, double *threshold) nogil:
        cdef int info = self.run(m, False)
        cdef int n = self.n
        cdef double big
        if info != 0:
            threshold[0] = 0.0
            return -INFINITY
        big = fabs(self.w[0])
        if fabs(self.w[n - 1]) > big:
            big = fabs(self.w[n - 1])
        if big < 1.0:
            big = 1.0
        threshold[0] = tol * big
        return self.w[0]


def lifted_dykstra(ga, gb, p, scale, int max_iters, double tol, double stall_rtol,
                   int stall_window, bint correct=True):
    """See ``_purepy.lifted_dykstra``; identical contract."""
    cdef cplx[:, ::1] a = np.ascontiguousarray(ga, dtype=complex)
    cdef cplx[:, ::1] b = np.ascontiguousarray(gb, dtype=complex)
    cdef double[::1] pv = np.ascontiguousarray(p, dtype=float)
    cdef double[::1] s = np.ascontiguousarray(scale, dtype=float)
    cdef int n = a.shape[0]
    cdef _Eig eig = _Eig(n)

    x_pi_arr = np.zeros((n, n), dtype=complex)
    cdef cplx[:, ::1] x_pi = x_pi_arr
    cdef cplx[:, ::1] x_k = np.zeros((n, n), dtype=complex)
    cdef cplx[:, ::1] q_pi = np.zeros((n, n), dtype=complex)
    cdef cplx[:, ::1] q_k = np.zeros((n, n), dtype=complex)
    cdef cplx[:, ::1] z_pi = np.zeros((n, n), dtype=complex)
    cdef cplx[:, ::1] z_k = np.zeros((n, n), dtype=complex)
    cdef cplx[:, ::1] y_pi = np.zeros((n, n), dtype=complex)
    cdef cplx[:, ::1] y_k = np.zeros((n, n), dtype=complex)
    cdef cplx[:, ::1] tmp = np.zeros((n, n), dtype=complex)
    cdef double[:, ::1] ss = np.outer(s, s)
    cdef double[:, ::1] denom = np.empty((n, n), dtype=float)

    cdef int i, j, it
    cdef int status = INCONCLUSIVE
    cdef int stalled = 0
    cdef int iters = max_iters
    cdef double gap = INFINITY
    cdef double prev_gap = INFINITY
    cdef double lam_pi = -INFINITY
    cdef double lam_k = -INFINITY
    cdef double thr_pi, thr_k, w2, acc, d
    cdef cplx r, u, v

    for i in range(n):
        for j in range(n):
            w2 = ss[i, j] * ss[i, j]
            denom[i, j] = 1.0 / (w2 + b[i, j].real * b[i, j].real + b[i, j].imag * b[i, j].imag)
    for i in range(n):
        x_pi[i, i] = pv[i]
        for j in range(n):
            if i == j:
                x_k[i, j] = 1.0 - pv[i]
            else:
                x_k[i, j] = a[i, j]

    with nogil:
        for it in range(1, max_iters + 1):
            for i in range(n):
                for j in range(n):
                    if correct:
                        z_pi[i, j] = x_pi[i, j] + q_pi[i, j]
                        z_k[i, j] = x_k[i, j] + q_k[i, j]
                    else:
                        z_pi[i, j] = x_pi[i, j]
                        z_k[i, j] = x_k[i, j]
                    tmp[i, j] = z_pi[i, j] * ss[i, j]
            if eig.clip(tmp, y_pi) != 0 or eig.clip(z_k, y_k) != 0:
                iters = it
                break
            for i in range(n):
                for j in range(n):
                    y_pi[i, j] = y_pi[i, j] / ss[i, j]
                    q_pi[i, j] = z_pi[i, j] - y_pi[i, j]
                    q_k[i, j] = z_k[i, j] - y_k[i, j]

            acc = 0.0
            for i in range(n):
                for j in range(n):
                    if i == j:
                        x_pi[i, j] = pv[i]
                        x_k[i, j] = 1.0 - pv[i]
                    else:
                        r = (a[i, j] - b[i, j] * y_pi[i, j] - y_k[i, j]) * denom[i, j]
                        x_pi[i, j] = y_pi[i, j] + b[i, j].conjugate() * r
                        x_k[i, j] = y_k[i, j] + ss[i, j] * ss[i, j] * r
            for i in range(n):
                for j in range(i + 1, n):
                    u = 0.5 * (x_pi[i, j] + x_pi[j, i].conjugate())
                    x_pi[i, j] = u
                    x_pi[j, i] = u.conjugate()
                    v = 0.5 * (x_k[i, j] + x_k[j, i].conjugate())
                    x_k[i, j] = v
                    x_k[j, i] = v.conjugate()
            for i in range(n):
                for j in range(n):
                    u = (x_pi[i, j] - y_pi[i, j]) * ss[i, j]
                    v = x_k[i, j] - y_k[i, j]
                    acc = acc + u.real * u.real + u.imag * u.imag + v.real * v.real + v.imag * v.imag
                    tmp[i, j] = a[i, j] - x_pi[i, j] * b[i, j]
            gap = sqrt(acc)

            lam_pi = eig.min_eig(x_pi, tol, &thr_pi)
            lam_k = eig.min_eig(tmp, tol, &thr_k)
            if lam_pi >= -thr_pi and lam_k >= -thr_k:
                status = FEASIBLE
                iters = it
                break

            if gap > tol and fabs(prev_gap - gap) <= stall_rtol * gap:
                stalled += 1
                if stalled >= stall_window:
                    status = INFEASIBLE
                    iters = it
                    break
            else:
                stalled = 0
            prev_gap = gap

    return status, np.asarray(x_pi_arr), iters, gap, lam_pi, lam_k


def sweep_grid(alpha1, alpha2, eta, g1, g2, int num_threads=0):
    """See ``_purepy.sweep_grid``; identical contract, parallel over grid points."""
    cdef double[::1] ax1 = np.ascontiguousarray(alpha1, dtype=float)
    cdef double[::1] ax2 = np.ascontiguousarray(alpha2, dtype=float)
    cdef double[::1] axe = np.ascontiguousarray(eta, dtype=float)
    cdef double[::1] axg1 = np.ascontiguousarray(g1, dtype=float)
    cdef double[::1] axg2 = np.ascontiguousarray(g2, dtype=float)
    cdef Py_ssize_t n1 = ax1.shape[0], n2 = ax2.shape[0], ne = axe.shape[0]
    cdef Py_ssize_t ng1 = axg1.shape[0], ng2 = axg2.shape[0]
    cdef Py_ssize_t total = n1 * n2 * ne * ng1 * ng2
    margin_arr = np.empty(total, dtype=float)
    gmax_arr = np.empty(total, dtype=float)
    cdef double[::1] margin = margin_arr
    cdef double[::1] gmax = gmax_arr
    cdef double[::1] cos_eta = np.empty(ne, dtype=float)
    cdef Py_ssize_t idx, rem, i1, i2, ie, j1, j2
    cdef double a1, a2, c, x1, x2
    cdef int threads = num_threads if num_threads > 0 else 1
    cdef double lhs, rhs
    for ie in range(ne):
        cos_eta[ie] = cos(axe[ie])

    for idx in prange(total, nogil=True, num_threads=threads, schedule="static"):
        rem = idx
        j2 = rem % ng2
        rem = rem // ng2
        j1 = rem % ng1
        rem = rem // ng1
        ie = rem % ne
        rem = rem // ne
        i2 = rem % n2
        i1 = rem // n2
        a1 = ax1[i1]
        a2 = ax2[i2]
        c = cos_eta[ie]
        x1 = axg1[j1]
        x2 = axg2[j2]
        lhs = 2.0 * a1 * a2 * (x1 * x2 - 1.0) * c
        rhs = (x1 * x1 - 1.0) * a1 * a1 + (x2 * x2 - 1.0) * a2 * a2
        margin[idx] = lhs - rhs
        if axe[ie] > 0.0 and a1 > 0.0:
            gmax[idx] = sqrt((a1 * a1 + a2 * a2 - 2.0 * a1 * a2 * c) / (2.0 * a1 * a1 * (1.0 - c)))
        else:
            gmax[idx] = NAN

    return margin_arr, gmax_arr, (n1, n2, ne, ng1, ng2)
