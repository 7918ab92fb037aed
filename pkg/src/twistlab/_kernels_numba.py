"""numba kernels; see ``_kernels_numpy`` for the reference semantics."""

import numpy as np
from numba import njit

from ._kernels_numpy import NEGLIGIBLE


@njit(cache=True)
def _pnorm(a, p):
    n = a.shape[0]
    m = 0.0
    for j in range(n):
        if a[j] > m:
            m = a[j]
    if np.isinf(p) or m == 0.0:
        return m
    acc = 0.0
    if p == 2.0:
        for j in range(n):
            b = a[j] / m
            acc += b * b
        return m * np.sqrt(acc)
    for j in range(n):
        if a[j] > 0.0:
            acc += (a[j] / m) ** p
    return m * acc ** (1.0 / p)


@njit(cache=True)
def _abs_into(row, a):
    for j in range(row.shape[0]):
        a[j] = abs(row[j])


@njit(cache=True)
def row_pnorms(X, p):
    m, n = X.shape
    out = np.empty(m)
    a = np.empty(n)
    for i in range(m):
        _abs_into(X[i], a)
        out[i] = _pnorm(a, p)
    return out


@njit(cache=True)
def log_ratio_rows(X, p):
    m, n = X.shape
    out = np.zeros((m, n))
    a = np.empty(n)
    for i in range(m):
        _abs_into(X[i], a)
        lnorm = np.log(_pnorm(a, p))
        for j in range(n):
            if a[j] > 0.0:
                out[i, j] = lnorm - np.log(a[j])
    return out


@njit(cache=True)
def log_rank_rows(X):
    m, n = X.shape
    out = np.zeros((m, n))
    for i in range(m):
        a = np.abs(X[i])
        order = np.argsort(-a, kind="mergesort")
        for r in range(n):
            j = order[r]
            if a[j] > 0.0:
                out[i, j] = np.log(r + 1.0)
    return out


@njit(cache=True)
def kp_prefix_sq_norms(y_abs):
    n = y_abs.shape[0]
    out = np.empty(n)
    S = 0.0
    A = 0.0
    B = 0.0
    for k in range(n):
        w = y_abs[k] * y_abs[k]
        ly = np.log(y_abs[k])
        S += w
        A += w * ly
        B += w * ly * ly
        L = 0.5 * np.log(S)
        v = S * L * L - 2.0 * L * A + B
        out[k] = v if v > 0.0 else 0.0
    return out


@njit(cache=True)
def sign_average(L):
    N = L.shape[0]
    count = 1 << N
    C = np.zeros((N, N))
    v = np.empty(N)
    for code in range(count):
        for i in range(N):
            v[i] = 1.0 - 2.0 * ((code >> i) & 1)
        for i in range(N):
            for j in range(N):
                C[i, j] += v[i] * v[j]
    out = np.empty_like(L)
    for i in range(N):
        for j in range(N):
            out[i, j] = L[i, j] * (C[i, j] / count)
    return out


@njit(cache=True)
def jacobi_svd(A, tol, max_sweeps):
    W = A.astype(np.complex128).copy()
    m, n = W.shape
    V = np.eye(n, dtype=np.complex128)
    fro2 = 0.0
    for k in range(m):
        for j in range(n):
            fro2 += W[k, j].real * W[k, j].real + W[k, j].imag * W[k, j].imag
    negl = NEGLIGIBLE * fro2
    for sweep in range(1, max_sweeps + 1):
        off = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                alpha = 0.0
                beta = 0.0
                gamma = 0j
                for k in range(m):
                    wi = W[k, i]
                    wj = W[k, j]
                    alpha += wi.real * wi.real + wi.imag * wi.imag
                    beta += wj.real * wj.real + wj.imag * wj.imag
                    gamma += np.conj(wi) * wj
                g = abs(gamma)
                if alpha <= negl or beta <= negl or g == 0.0:
                    continue
                rel = g / np.sqrt(alpha * beta)
                if rel > off:
                    off = rel
                if rel <= tol:
                    continue
                phase = gamma / g
                cphase = np.conj(phase)
                zeta = (beta - alpha) / (2.0 * g)
                sgn = 1.0 if zeta >= 0.0 else -1.0
                t = sgn / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                for k in range(m):
                    wi = W[k, i]
                    bj = W[k, j] * cphase
                    W[k, i] = c * wi - s * bj
                    W[k, j] = (s * wi + c * bj) * phase
                for k in range(n):
                    vi = V[k, i]
                    vj = V[k, j] * cphase
                    V[k, i] = c * vi - s * vj
                    V[k, j] = (s * vi + c * vj) * phase
        if off <= tol:
            return W, V, sweep, True
    return W, V, max_sweeps, False
