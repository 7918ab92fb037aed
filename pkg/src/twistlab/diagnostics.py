"""Liftability diagnostics for multiplication operators.

Everything here produces lower bounds or truncation trends.  A small defect
on a finite family is evidence, never a certificate.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .centralizers import CentralizerSpec, shift_centralizer
from .seq import CSeq, conjugate_exponent, holder_split, lp_norm

logger = logging.getLogger(__name__)

__all__ = [
    "DefectReport",
    "UniformDefectEstimate",
    "cantor_average",
    "cantor_average_matrix",
    "centralizer_constant_lower",
    "divergence_closed_form",
    "divergence_curve",
    "estimate_uniform_defect",
    "lift_defect",
    "quasilinearity_constant_lower",
    "quasilinearity_defect",
    "rademacher_nonlinearity",
    "random_cseq",
    "random_pairs",
    "refine_witness",
    "shift_holder_sides",
    "sn_test_family",
    "witness_from_centralizer",
]

MAX_RADEMACHER_TERMS = 20
MAX_CANTOR_DIM = 12
_SIGN_CHUNK = 1 << 13


def _row_norms(R, p):
    return kernels.row_pnorms(np.ascontiguousarray(R, dtype=np.complex128), float(p))


def _stack(seqs, dim):
    X = np.zeros((len(seqs), dim), dtype=np.complex128)
    for k, s in enumerate(seqs):
        if s.dim != dim:
            raise ValueError(f"dimension mismatch: {s.dim} vs {dim}")
        X[k, s.idx - 1] = s.vals
    return X


def random_cseq(rng, dim, p=2.0):
    """Complex Gaussian vector normalized to unit l_p norm."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return CSeq.from_dense(v / lp_norm(v, p), dim)


def random_pairs(trials, dim, seed=0, p=2.0):
    """Seeded random pairs; trial t draws from ``default_rng(seed + t)``."""
    out = []
    for t in range(trials):
        rng = np.random.default_rng(seed + t)
        out.append((random_cseq(rng, dim, p), random_cseq(rng, dim, p)))
    return out


# quasilinearity and centralizer constants


def quasilinearity_defect(phi, pairs):
    """max ||phi(x+y) - phi(x) - phi(y)|| / (||x|| + ||y||) over the pairs.

    A lower bound for the quasilinearity constant Q(phi).  Pairs with
    x = y = 0 are skipped.
    """
    pairs = list(pairs)
    if not pairs:
        raise ValueError("need at least one pair")
    p = phi.scale
    dim = pairs[0][0].dim
    X = _stack([a for a, _ in pairs], dim)
    Y = _stack([b for _, b in pairs], dim)
    denom = _row_norms(X, p) + _row_norms(Y, p)
    keep = denom > 0
    if not keep.any():
        return 0.0
    X, Y, denom = X[keep], Y[keep], denom[keep]
    R = phi.rows(X + Y) - phi.rows(X) - phi.rows(Y)
    return float((_row_norms(R, p) / denom).max())


def quasilinearity_constant_lower(phi, trials=1000, dim=64, seed=0):
    return quasilinearity_defect(phi, random_pairs(trials, dim, seed, phi.scale))


def centralizer_constant_lower(phi, trials=10_000, dim=64, seed=0, p=None):
    """Max of ||phi(ax) - a phi(x)|| / (||a||_inf ||x||) over seeded random (a, x).

    A lower bound for the centralizer constant C(phi).  Trial t uses
    ``default_rng(seed + t)`` for both a and x.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    p = phi.scale if p is None else float(p)
    A = np.empty((trials, dim), dtype=np.complex128)
    X = np.empty((trials, dim), dtype=np.complex128)
    for t in range(trials):
        rng = np.random.default_rng(seed + t)
        a = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        x = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        A[t] = a / np.abs(a).max()
        X[t] = x / lp_norm(x, p)
    R = phi.rows(A * X) - A * phi.rows(X)
    ratios = _row_norms(R, p) / (np.abs(A).max(axis=1) * _row_norms(X, p))
    return float(ratios.max())


# linear map elimination


def _sign_block(k, start, stop):
    codes = np.arange(start, stop, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(k)[None, :]) & 1
    return 1.0 - 2.0 * bits.astype(np.float64)


def rademacher_nonlinearity(phi, xs):
    """Exact average over all sign patterns eps of
    ||phi(sum eps_i x_i) - sum eps_i phi(x_i)||.

    Requires at most 20 vectors and sum ||x_i||^2 <= 1.
    """
    xs = list(xs)
    k = len(xs)
    if k > MAX_RADEMACHER_TERMS:
        raise ValueError(f"at most {MAX_RADEMACHER_TERMS} vectors (2^k sign patterns are enumerated)")
    if k == 0:
        return 0.0
    p = phi.scale
    mass = sum(lp_norm(x, p) ** 2 for x in xs)
    if mass > 1.0 + 1e-12:
        raise ValueError(f"sum of squared norms is {mass}, must be <= 1")
    X = _stack(xs, xs[0].dim)
    PX = phi.rows(X)
    total = 1 << k
    acc = 0.0
    for start in range(0, total, _SIGN_CHUNK):
        E = _sign_block(k, start, min(total, start + _SIGN_CHUNK))
        R = phi.rows(E @ X) - E @ PX
        acc += float(_row_norms(R, p).sum())
    return acc / total


# Cantor-group averaging


def cantor_average_matrix(L):
    """Exact average of v^{-1} L v over all sign vectors v in {-1, 1}^N."""
    L = np.ascontiguousarray(L, dtype=np.complex128)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise ValueError("cantor_average needs a square matrix")
    if L.shape[0] > MAX_CANTOR_DIM:
        raise ValueError(f"dimension {L.shape[0]} exceeds {MAX_CANTOR_DIM} (2^N sign vectors are enumerated)")
    return kernels.sign_average(L)


def cantor_average(L):
    """Diagonal witness lambda from the averaged map."""
    avg = cantor_average_matrix(L)
    return CSeq.from_dense(np.diag(avg), avg.shape[0])


# witnesses and defects


def witness_from_centralizer(d, phi):
    """lambda(n) = (phi(d_n e_n))(n) on the support of d."""
    if getattr(phi, "local", False):
        vals = phi.rows(d.vals[:, None])[:, 0]
        return CSeq(d.idx, vals, d.dim)
    out = np.empty(d.idx.size, dtype=np.complex128)
    for k, (n, v) in enumerate(zip(d.idx, d.vals)):
        row = np.zeros((1, d.dim), dtype=np.complex128)
        row[0, n - 1] = v
        out[k] = phi.rows(row)[0, n - 1]
    return CSeq(d.idx, out, d.dim)


@dataclass
class DefectReport:
    """Per-test ratios ||L x - phi(d x)|| / ||x|| (lift) or
    ||L x - d phi(x)|| / ||x|| (extend), with their sup."""

    witness: Optional[CSeq]
    family: list
    ratios: np.ndarray
    sup_ratio: float
    mode: str
    skipped: int = 0
    meta: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "mode": self.mode,
            "sup": self.sup_ratio,
            "ratios": [float(r) for r in self.ratios],
            "witness": None if self.witness is None else self.witness.to_json(),
            "meta": dict(self.meta),
        }


def lift_defect(d, phi, witness, family, mode="lift", seed=None):
    """Defect of a candidate linear map against phi o d (lift) or d o phi (extend).

    ``witness`` is either a diagonal sequence lambda or a full square matrix L.
    Zero test vectors are skipped and counted.
    """
    if mode not in ("lift", "extend"):
        raise ValueError("mode must be 'lift' or 'extend'")
    family = list(family)
    if not family:
        raise ValueError("test family is empty")
    dim = d.dim
    p = phi.scale
    X = _stack(family, dim)
    xn = _row_norms(X, p)
    keep = xn > 0
    skipped = int((~keep).sum())
    if skipped:
        logger.warning("lift_defect: skipped %d zero test vectors", skipped)
    if not keep.any():
        raise ValueError("test family has no nonzero vectors")
    X, xn = X[keep], xn[keep]
    dd = d.to_dense()
    if isinstance(witness, CSeq):
        if witness.dim != dim:
            raise ValueError("witness dimension mismatch")
        LX = X * witness.to_dense()[None, :]
        wit = witness
    else:
        Lm = np.asarray(witness, dtype=np.complex128)
        if Lm.shape != (dim, dim):
            raise ValueError(f"witness matrix must be {dim}x{dim}")
        LX = X @ Lm.T
        wit = None
    if mode == "lift":
        R = LX - phi.rows(X * dd[None, :])
    else:
        R = LX - dd[None, :] * phi.rows(X)
    ratios = _row_norms(R, p) / xn
    meta = {"seed": seed, "dim": dim}
    return DefectReport(wit, [f for f, k in zip(family, keep) if k], ratios, float(ratios.max()), mode, skipped, meta)


def refine_witness(d, phi, base_witness, family):
    """Coordinatewise median, over the family, of the value of lambda(n) that
    zeroes coordinate n of lambda x - phi(d x).  Coordinates no test vector
    touches keep ``base_witness``."""
    X = _stack(family, d.dim)
    target = phi.rows(X * d.to_dense()[None, :])
    lam = base_witness.to_dense()
    for j in range(d.dim):
        col = X[:, j]
        nz = col != 0
        if not nz.any():
            continue
        r = target[nz, j] / col[nz]
        lam[j] = np.median(r.real) + 1j * np.median(r.imag)
    return CSeq.from_dense(lam, d.dim)


@dataclass
class UniformDefectEstimate:
    per_centralizer: dict
    sup: float
    witnesses: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "per_centralizer": {spec.name: v for spec, v in self.per_centralizer.items()},
            "sup": self.sup,
        }


def estimate_uniform_defect(d, catalog, family=None, seed=0, n_random=64):
    """Best diagonal-witness defect per catalog centralizer and the sup over the catalog.

    For each centralizer the diagonal candidate from
    :func:`witness_from_centralizer` is tried, then a coordinatewise median
    refinement over the family residuals; the smaller sup is kept.  Without an
    explicit family, ``n_random`` seeded Gaussian unit vectors are used.
    """
    catalog = list(catalog)
    if not catalog:
        raise ValueError("catalog is empty")
    if family is None:
        family = [random_cseq(np.random.default_rng(seed + i), d.dim) for i in range(n_random)]
    per, wits = {}, {}
    for phi in catalog:
        lam0 = witness_from_centralizer(d, phi)
        best = lift_defect(d, phi, lam0, family, seed=seed)
        lam1 = refine_witness(d, phi, lam0, best.family)
        refined = lift_defect(d, phi, lam1, family, seed=seed)
        if refined.sup_ratio < best.sup_ratio:
            best = refined
        per[phi] = best.sup_ratio
        wits[phi] = best.witness
    return UniformDefectEstimate(per, max(per.values()), wits)


# the s_n test vectors


def _positive_prefix(d, N):
    N = int(N)
    if N < 1 or N > d.dim:
        raise ValueError(f"N must lie in [1, {d.dim}]")
    dense = d.to_dense()[:N]
    if np.any(dense.imag != 0) or np.any(dense.real <= 0):
        raise ValueError("d must be strictly positive on [1, N]")
    return dense.real


def sn_test_family(d, N):
    """s_n = sum_{i<=n} d_i^{-1} e_i for n = 1..N."""
    dv = _positive_prefix(d, N)
    inv = 1.0 / dv
    expected = np.cumsum(inv**2)
    out = []
    for n in range(1, N + 1):
        s = CSeq(np.arange(1, n + 1), inv[:n], d.dim)
        if abs(lp_norm(s, 2.0) ** 2 - expected[n - 1]) > 1e-12 * expected[n - 1]:
            raise ArithmeticError(f"||s_{n}||^2 check failed")
        out.append(s)
    return out


def divergence_closed_form(d, N):
    """n log^2 n / (4 sum_{i<=n} d_i^{-2}) for n = 1..N."""
    dv = _positive_prefix(d, N)
    n = np.arange(1, N + 1, dtype=np.float64)
    return n * np.log(n) ** 2 / (4.0 * np.cumsum(dv**-2.0))


def divergence_curve(d, phi, N, ns=None):
    """Pairs (n, ||phi(d s_n)||^2 / ||s_n||^2) for n in ``ns`` (default 1..N).

    d must be positive and non-increasing on [1, N].  For the Kalton-Peck map
    on l_2 all prefixes are evaluated at once from running moments.
    """
    dv = _positive_prefix(d, N)
    if np.any(np.diff(dv) > 0):
        raise ValueError("d must be non-increasing on [1, N]")
    ns = np.arange(1, N + 1) if ns is None else np.asarray(ns, dtype=np.int64)
    if ns.size and (ns.min() < 1 or ns.max() > N):
        raise ValueError(f"requested n outside [1, {N}]")
    inv = 1.0 / dv
    y = dv * inv  # d s_N; d s_n is its length-n prefix
    p = phi.scale
    if p == 2.0:
        sn_sq = np.cumsum(inv * inv)
    else:
        sn_sq = np.cumsum(inv**p) ** (2.0 / p)
    if isinstance(phi, CentralizerSpec) and phi.kind == "kp" and p == 2.0:
        num = kernels.kp_prefix_sq_norms(np.abs(y))[ns - 1]
    else:
        num = np.empty(ns.size)
        for k, n in enumerate(ns):
            v = phi(CSeq(np.arange(1, n + 1), y[:n], d.dim))
            num[k] = lp_norm(v, p) ** 2
    ratios = num / sn_sq[ns - 1]
    return [(int(n), float(r)) for n, r in zip(ns, ratios)]


# shifting


def shift_holder_sides(x, base, q, witness=None, multiplier=None):
    """Both sides of the Hoelder bound behind shifting a centralizer from l_p to l_q.

    For nonnegative x = x^(q/s) x^(q/p):
        lhs = ||lambda x - a Phi_q(x)||_q
        rhs = ||x^(q/s)||_s * ||lambda x^(q/p) - a Phi(x^(q/p))||_p
    with lambda = ``witness`` (default 0) and a = ``multiplier`` (default 1).
    """
    p = base.p
    s = conjugate_exponent(p, q)
    head, tail = holder_split(x, p, q)
    dim = x.dim
    lam = np.zeros(dim, complex) if witness is None else witness.to_dense()
    a = np.ones(dim, complex) if multiplier is None else (
        multiplier.to_dense() if isinstance(multiplier, CSeq) else np.asarray(multiplier, complex)
    )
    phi_q = shift_centralizer(base, q)
    lhs = lp_norm(lam * x.to_dense() - a * phi_q(x).to_dense(), q)
    rhs = lp_norm(head, s) * lp_norm(lam * tail.to_dense() - a * base(tail).to_dense(), p)
    return lhs, rhs
