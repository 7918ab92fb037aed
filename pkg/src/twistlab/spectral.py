"""Singular values and operator-ideal norms on finite-dimensional Hilbert space.

Matrices are plain complex ndarrays.  The SVD is a one-sided Jacobi
iteration (see ``kernels.jacobi_svd``); no LAPACK call is involved.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from . import kernels
from .seq import CSeq, check_exponent, decreasing_rearrangement

__all__ = [
    "CriterionResult",
    "SVDConvergenceError",
    "liftability_criterion",
    "lorentz_log_norm",
    "macaev_norm",
    "matrix_from_json",
    "matrix_to_json",
    "parse_matrix",
    "rank_one",
    "schatten_norm",
    "schmidt_expansion",
    "singular_values",
    "spectrum_csv",
    "svd",
]

JACOBI_TOL = 1e-13
MAX_SWEEPS = 60


class SVDConvergenceError(ArithmeticError):
    pass


def _as_matrix(M):
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return np.ascontiguousarray(A)


def _jacobi_tall(A, tol, max_sweeps):
    W, V, sweeps, ok = kernels.jacobi_svd(A, tol, max_sweeps)
    if not ok:
        raise SVDConvergenceError(f"Jacobi SVD did not converge in {max_sweeps} sweeps")
    s = np.sqrt((W.real**2 + W.imag**2).sum(axis=0))
    order = np.argsort(-s, kind="stable")
    s = s[order]
    W = W[:, order]
    V = V[:, order]
    U = np.zeros_like(W)
    pos = s > 0
    U[:, pos] = W[:, pos] / s[pos]
    return U, s, V


def svd(M, tol=JACOBI_TOL, max_sweeps=MAX_SWEEPS):
    """Thin SVD M = U diag(s) Vh with s non-increasing.

    Columns of U belonging to exactly zero singular values are left zero.
    """
    A = _as_matrix(M)
    m, n = A.shape
    if m >= n:
        U, s, V = _jacobi_tall(A, tol, max_sweeps)
        return U, s, V.conj().T
    # wide: factor the adjoint and swap the roles of U and V
    U2, s, V2 = _jacobi_tall(np.ascontiguousarray(A.conj().T), tol, max_sweeps)
    return V2, s, U2.conj().T


def singular_values(M):
    """Non-increasing singular values, length min(rows, cols)."""
    A = _as_matrix(M)
    if A.size == 0:
        return np.zeros(0)
    return svd(A)[1]


def schatten_norm(M, p):
    s = singular_values(M)
    p = check_exponent(p, allow_inf=True)
    if s.size == 0:
        return 0.0
    if math.isinf(p):
        return float(s[0])
    return float((s**p).sum() ** (1.0 / p))


def macaev_norm(M):
    """sum_n s_n / n over the finite spectrum."""
    s = singular_values(M)
    return float((s / np.arange(1, s.size + 1)).sum())


def lorentz_log_norm(d):
    """sup_n d*_n log(n+1), d* the decreasing rearrangement of |d|."""
    ds = decreasing_rearrangement(d)
    if ds.size == 0:
        return 0.0
    return float((ds * np.log(np.arange(2, ds.size + 2))).max())


@dataclass
class CriterionResult:
    """Truncated test of sup_n d*_n log n <= cap.

    A finite truncation can only report a trend: ``head_max`` is the largest
    term for n <= N/10 and ``tail_max`` the largest over the last decade
    N/10 < n <= N.
    """

    bounded: bool
    max_term: float
    witness: Optional[int]
    truncation: int
    head_max: Optional[float]
    tail_max: Optional[float]
    trend: str
    cap: float
    lorentz_norm: float

    def to_json(self):
        return asdict(self)


def liftability_criterion(d, cap):
    """Check max_{2<=n<=N} d*_n log n <= cap at the truncation N = |supp d|.

    Returns a :class:`CriterionResult`; ``witness`` is the maximizing n.
    """
    cap = float(cap)
    if not cap > 0:
        raise ValueError("cap must be positive")
    ds = decreasing_rearrangement(d)
    N = int(ds.size)
    lorentz = lorentz_log_norm(d)
    if N < 2:
        return CriterionResult(True, 0.0, None, N, None, None, "n/a", cap, lorentz)
    n = np.arange(2, N + 1)
    terms = ds[1:] * np.log(n)
    k = int(np.argmax(terms))
    max_term = float(terms[k])
    cut = N // 10
    head = terms[n <= cut]
    tail = terms[n > cut]
    tail_max = float(tail.max())
    if head.size == 0:
        head_max, trend = None, "n/a"
    else:
        head_max = float(head.max())
        if tail_max > head_max:
            trend = "growing"
        elif tail_max < head_max:
            trend = "decaying"
        else:
            trend = "flat"
    return CriterionResult(max_term <= cap, max_term, int(n[k]), N, head_max, tail_max, trend, cap, lorentz)


def _dense(v):
    if isinstance(v, CSeq):
        return v.to_dense()
    return np.asarray(v, dtype=np.complex128).ravel()


def rank_one(y, x):
    """Matrix of v -> <v, x> y, i.e. y x^*."""
    return np.outer(_dense(y), np.conj(_dense(x)))


def schmidt_expansion(M, rtol=None):
    """Triples (s, x, y) with M = sum s * rank_one(y, x), s > 0.

    Singular values below ``rtol * s_max`` (default max(m, n) * eps) are
    dropped.
    """
    A = _as_matrix(M)
    U, s, Vh = svd(A)
    if s.size == 0 or s[0] == 0:
        return []
    if rtol is None:
        rtol = max(A.shape) * np.finfo(float).eps
    keep = s > rtol * s[0]
    V = Vh.conj().T
    return [(float(s[k]), V[:, k].copy(), U[:, k].copy()) for k in np.flatnonzero(keep)]


# file formats


def matrix_to_json(M):
    A = np.asarray(M, dtype=np.complex128)
    return {
        "rows": int(A.shape[0]),
        "cols": int(A.shape[1]),
        "re": A.real.ravel().tolist(),
        "im": A.imag.ravel().tolist(),
    }


def matrix_from_json(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    r, c = int(obj["rows"]), int(obj["cols"])
    re = np.asarray(obj["re"], dtype=np.float64)
    im = np.asarray(obj.get("im", np.zeros(r * c)), dtype=np.float64)
    if re.size != r * c or im.size != r * c:
        raise ValueError(f"matrix JSON: expected {r * c} entries")
    return (re + 1j * im).reshape(r, c)


def parse_matrix(text):
    """``diag:3,4`` or ``eye:N``; anything else is read as a JSON file path."""
    if text.startswith("diag:"):
        vals = [complex(t) for t in text[5:].split(",") if t.strip()]
        return np.diag(np.array(vals, dtype=np.complex128))
    if text.startswith("eye:"):
        return np.eye(int(text[4:]), dtype=np.complex128)
    with open(text) as fh:
        return matrix_from_json(json.load(fh))


def spectrum_csv(s):
    buf = io.StringIO()
    buf.write("n,s_n\n")
    for k, v in enumerate(np.asarray(s, dtype=float), start=1):
        buf.write(f"{k},{float(v)!r}\n")
    return buf.getvalue()
