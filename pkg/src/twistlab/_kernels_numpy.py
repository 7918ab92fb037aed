"""Pure-numpy kernels.

Same signatures and semantics as ``_kernels_numba``; this is the fallback
path selected with ``TWISTLAB_BACKEND=numpy`` and the reference the numba
kernels are tested against.

Row kernels take a dense complex matrix whose rows are finitely supported
sequences; exact zeros mark positions off the support.
"""

import numpy as np

# squared column norm, relative to ||A||_F^2, below which Jacobi treats a column as zero
NEGLIGIBLE = 1e-30


def row_pnorms(X, p):
    """Row-wise l_p norms, computed as m * ||x/m||_p with m = max |x|.

    The scaling makes the norm of a single-entry row exact and keeps
    intermediate powers in range.
    """
    A = np.abs(X)
    if A.shape[1] == 0:
        return np.zeros(A.shape[0])
    m = A.max(axis=1)
    if np.isinf(p):
        return m
    safe = np.where(m > 0, m, 1.0)[:, None]
    B = A / safe
    if p == 2.0:
        return m * np.sqrt((B * B).sum(axis=1))
    return m * (B**p).sum(axis=1) ** (1.0 / p)


def log_ratio_rows(X, p):
    """log(||x||_p / |x_j|) on the support of each row, 0 elsewhere."""
    A = np.abs(X)
    norms = row_pnorms(X, p)[:, None]
    out = np.zeros(A.shape)
    nz = A > 0
    np.log(np.broadcast_to(norms, A.shape), out=out, where=nz)
    out[nz] -= np.log(A[nz])
    return out


def log_rank_rows(X):
    """log of the rank sequence on the support of each row, 0 elsewhere.

    Ties are broken by column order, which is index order.
    """
    A = np.abs(X)
    m, n = A.shape
    order = np.argsort(-A, axis=1, kind="stable")
    ranks = np.empty((m, n), dtype=np.float64)
    rows = np.arange(m)[:, None]
    ranks[rows, order] = np.arange(1, n + 1, dtype=np.float64)[None, :]
    out = np.zeros((m, n))
    nz = A > 0
    out[nz] = np.log(ranks[nz])
    return out


def kp_prefix_sq_norms(y_abs):
    """||Omega(y[:n])||_2^2 at p=2 for every prefix length n.

    Uses the moment expansion sum w (L - log|y|)^2 = S L^2 - 2 L A + B with
    w = |y|^2, S = sum w, A = sum w log|y|, B = sum w log^2|y|, L = log(S)/2.
    """
    y = np.asarray(y_abs, dtype=np.float64)
    w = y * y
    ly = np.log(y)
    S = np.cumsum(w)
    A = np.cumsum(w * ly)
    B = np.cumsum(w * ly * ly)
    L = 0.5 * np.log(S)
    out = S * L * L - 2.0 * L * A + B
    return np.maximum(out, 0.0)


def sign_average(L):
    """Exact average of diag(v) L diag(v) over all v in {-1, 1}^N."""
    N = L.shape[0]
    count = 1 << N
    codes = np.arange(count, dtype=np.int64)
    V = 1.0 - 2.0 * ((codes[:, None] >> np.arange(N)[None, :]) & 1).astype(np.float64)
    # sum_v v_i v_j, accumulated as an integer-valued float matrix
    C = V.T @ V
    return L * (C / count)


def jacobi_svd(A, tol, max_sweeps):
    """One-sided (Hestenes) Jacobi on the columns of A, rows >= cols.

    Returns (W, V, sweeps, converged) with A V = W; column norms of W are
    the singular values, unsorted.  Columns whose squared norm falls below
    NEGLIGIBLE * ||A||_F^2 count as zero; without this a rank-deficient
    input keeps rotating round-off until it underflows.
    """
    W = np.array(A, dtype=np.complex128, copy=True)
    n = W.shape[1]
    V = np.eye(n, dtype=np.complex128)
    negl = NEGLIGIBLE * float((W.real**2 + W.imag**2).sum())
    for sweep in range(1, max_sweeps + 1):
        off = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                wi = W[:, i].copy()
                wj = W[:, j]
                alpha = np.vdot(wi, wi).real
                beta = np.vdot(wj, wj).real
                gamma = np.vdot(wi, wj)
                g = abs(gamma)
                if alpha <= negl or beta <= negl or g == 0.0:
                    continue
                rel = g / np.sqrt(alpha * beta)
                off = max(off, rel)
                if rel <= tol:
                    continue
                phase = gamma / g
                zeta = (beta - alpha) / (2.0 * g)
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                bj = wj * np.conj(phase)
                W[:, i] = c * wi - s * bj
                W[:, j] = (s * wi + c * bj) * phase
                vi = V[:, i].copy()
                vj = V[:, j] * np.conj(phase)
                V[:, i] = c * vi - s * vj
                V[:, j] = (s * vi + c * vj) * phase
        if off <= tol:
            return W, V, sweep, True
    return W, V, max_sweeps, False
