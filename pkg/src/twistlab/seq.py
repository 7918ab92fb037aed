"""Finitely supported complex sequences and their basic quasinorm tools.

Indices are 1-based.  A :class:`CSeq` stores only its nonzero entries, in
increasing index order, together with the ambient dimension that caps the
admissible indices.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import kernels

__all__ = [
    "CSeq",
    "check_exponent",
    "conjugate_exponent",
    "decreasing_rearrangement",
    "holder_split",
    "lp_norm",
    "polar_decomposition",
    "rank_sequence",
    "ranks",
]


def check_exponent(p, name="p", allow_inf=False):
    """Validate a scale exponent and return it as a float."""
    try:
        p = float(p)
    except (TypeError, ValueError):
        raise ValueError(f"{name} must be a real number, got {p!r}") from None
    if math.isnan(p) or p <= 0.0:
        raise ValueError(f"{name} must be strictly positive, got {p}")
    if math.isinf(p) and not allow_inf:
        raise ValueError(f"{name} must be finite")
    return p


def conjugate_exponent(p, q):
    """The s with 1/q = 1/p + 1/s, for 0 < q < p."""
    p = check_exponent(p, allow_inf=True)
    q = check_exponent(q, "q")
    if not q < p:
        raise ValueError(f"need q < p, got q={q}, p={p}")
    inv = 1.0 / q - 1.0 / p
    return 1.0 / inv


def _frozen(a):
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CSeq:
    """Finitely supported sequence x: {1..dim} -> C.

    ``idx`` holds the support in increasing order, ``vals`` the (nonzero)
    values there.  Use the classmethod constructors rather than building
    one directly; they drop zeros and enforce the invariants.
    """

    idx: np.ndarray
    vals: np.ndarray
    dim: int

    def __post_init__(self):
        idx = np.asarray(self.idx, dtype=np.int64)
        vals = np.asarray(self.vals, dtype=np.complex128)
        dim = int(self.dim)
        if dim < 1:
            raise ValueError("ambient dimension must be positive")
        if idx.ndim != 1 or vals.shape != idx.shape:
            raise ValueError("idx and vals must be 1-d arrays of equal length")
        if not np.all(np.isfinite(vals)):
            raise ValueError("sequence entries must be finite")
        if idx.size:
            if idx[0] < 1 or idx[-1] > dim:
                raise ValueError(f"indices must lie in [1, {dim}]")
            if np.any(np.diff(idx) <= 0):
                raise ValueError("indices must be strictly increasing")
        keep = vals != 0
        if not keep.all():
            idx, vals = idx[keep], vals[keep]
        object.__setattr__(self, "idx", _frozen(idx.copy()))
        object.__setattr__(self, "vals", _frozen(vals.copy()))
        object.__setattr__(self, "dim", dim)

    # construction

    @classmethod
    def zeros(cls, dim):
        return cls(np.empty(0, np.int64), np.empty(0, np.complex128), dim)

    @classmethod
    def from_dense(cls, values, dim=None):
        v = np.asarray(values, dtype=np.complex128).ravel()
        dim = v.size if dim is None else int(dim)
        if v.size > dim:
            raise ValueError("more values than the ambient dimension")
        nz = np.flatnonzero(v)
        return cls(nz + 1, v[nz], dim)

    @classmethod
    def from_entries(cls, entries, dim):
        """Build from a mapping or iterable of (index, value) pairs."""
        items = entries.items() if hasattr(entries, "items") else entries
        pairs = sorted(((int(k), complex(v)) for k, v in items), key=lambda kv: kv[0])
        for a, b in zip(pairs, pairs[1:]):
            if a[0] == b[0]:
                raise ValueError(f"duplicate index {a[0]}")
        if not pairs:
            return cls.zeros(dim)
        idx, vals = zip(*pairs)
        return cls(np.array(idx), np.array(vals), dim)

    @classmethod
    def unit(cls, k, dim):
        return cls(np.array([k]), np.array([1.0 + 0j]), dim)

    @classmethod
    def indicator(cls, n, dim=None, value=1.0):
        """value * 1_{[n]}."""
        dim = n if dim is None else dim
        return cls(np.arange(1, n + 1), np.full(n, value, dtype=np.complex128), dim)

    # views

    @property
    def support_size(self):
        return int(self.idx.size)

    def to_dense(self):
        out = np.zeros(self.dim, dtype=np.complex128)
        out[self.idx - 1] = self.vals
        return out

    def abs(self):
        return CSeq(self.idx, np.abs(self.vals), self.dim)

    def __getitem__(self, n):
        pos = np.searchsorted(self.idx, n)
        if pos < self.idx.size and self.idx[pos] == n:
            return complex(self.vals[pos])
        return 0j

    def __len__(self):
        return self.dim

    def __repr__(self):
        body = ", ".join(f"{i}: {v:.6g}" for i, v in zip(self.idx[:8], self.vals[:8]))
        more = ", ..." if self.idx.size > 8 else ""
        return f"CSeq(dim={self.dim}, {{{body}{more}}})"

    # arithmetic; everything returns a new sequence

    def _same_dim(self, other):
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        self._same_dim(other)
        return CSeq.from_dense(self.to_dense() + other.to_dense(), self.dim)

    def __sub__(self, other):
        self._same_dim(other)
        return CSeq.from_dense(self.to_dense() - other.to_dense(), self.dim)

    def __neg__(self):
        return CSeq(self.idx, -self.vals, self.dim)

    def __mul__(self, c):
        if isinstance(c, CSeq):
            return self.multiply(c)
        return CSeq(self.idx, self.vals * complex(c), self.dim)

    __rmul__ = __mul__

    def multiply(self, other):
        """Entrywise product with another sequence or a dense array."""
        if isinstance(other, CSeq):
            self._same_dim(other)
            other = other.to_dense()
        other = np.asarray(other, dtype=np.complex128)
        if other.shape != (self.dim,):
            raise ValueError("multiplier must have the ambient dimension")
        return CSeq(self.idx, self.vals * other[self.idx - 1], self.dim)

    def compose(self, sigma):
        """x o sigma, where sigma is a permutation of 1..dim given as an array.

        (x o sigma)(n) = x(sigma(n)).
        """
        sigma = np.asarray(sigma, dtype=np.int64)
        if sigma.shape != (self.dim,) or not np.array_equal(np.sort(sigma), np.arange(1, self.dim + 1)):
            raise ValueError("sigma must be a permutation of 1..dim")
        inv = np.empty(self.dim, dtype=np.int64)
        inv[sigma - 1] = np.arange(1, self.dim + 1)
        new_idx = inv[self.idx - 1]
        order = np.argsort(new_idx)
        return CSeq(new_idx[order], self.vals[order], self.dim)

    def allclose(self, other, atol=0.0, rtol=0.0):
        self._same_dim(other)
        return np.allclose(self.to_dense(), other.to_dense(), atol=atol, rtol=rtol)

    def __eq__(self, other):
        if not isinstance(other, CSeq):
            return NotImplemented
        return (
            self.dim == other.dim
            and np.array_equal(self.idx, other.idx)
            and np.array_equal(self.vals, other.vals)
        )

    __hash__ = None

    # serialization

    def to_json(self):
        return {
            "dim": self.dim,
            "entries": [[int(i), float(v.real), float(v.imag)] for i, v in zip(self.idx, self.vals)],
        }

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        if "dim" not in obj:
            raise ValueError("sequence JSON needs a 'dim' field")
        dim = int(obj["dim"])
        if "entries" in obj:
            pairs = {}
            for item in obj["entries"]:
                if len(item) == 2:
                    i, re_ = item
                    im = 0.0
                else:
                    i, re_, im = item
                pairs[int(i)] = complex(float(re_), float(im))
            if len(pairs) != len(obj["entries"]):
                raise ValueError("duplicate index in 'entries'")
            return cls.from_entries(pairs, dim)
        if "real" in obj:
            return cls.from_dense(np.asarray(obj["real"], dtype=np.float64), dim)
        raise ValueError("sequence JSON needs 'entries' or 'real'")


def _values(x):
    if isinstance(x, CSeq):
        return x.vals
    return np.asarray(x, dtype=np.complex128).ravel()


def lp_norm(x, p):
    """(sum |x_i|^p)^(1/p); p = inf gives the sup norm.

    Accepts a CSeq or any array of values.
    """
    p = check_exponent(p, allow_inf=True)
    v = _values(x)
    if not np.all(np.isfinite(v)):
        raise ValueError("lp_norm of a sequence with non-finite entries")
    if v.size == 0:
        return 0.0
    return float(kernels.row_pnorms(np.ascontiguousarray(v[None, :]), p)[0])


def decreasing_rearrangement(x):
    """|x| on its support, sorted non-increasingly."""
    a = np.abs(_values(x))
    a = a[a > 0]
    return -np.sort(-a)


def ranks(x):
    """Rank of each support entry, aligned with ``x.vals``.

    Rank 1 is the largest modulus; equal moduli are ordered by index.
    """
    a = np.abs(x.vals)
    order = np.argsort(-a, kind="stable")
    r = np.empty(a.size, dtype=np.int64)
    r[order] = np.arange(1, a.size + 1)
    return r


def rank_sequence(x):
    """Map each support index n to r_x(n), its place in the decreasing rearrangement."""
    return {int(i): int(r) for i, r in zip(x.idx, ranks(x))}


def polar_decomposition(x):
    """Return (u, m) with x = u*m, |u| = 1 everywhere and m = |x|.

    Off the support u is 1.
    """
    u = np.ones(x.dim, dtype=np.complex128)
    u[x.idx - 1] = x.vals / np.abs(x.vals)
    return CSeq.from_dense(u, x.dim), x.abs()


def holder_split(x, p, q):
    """Split a nonnegative x as a*b with a = x^(q/s), b = x^(q/p), 1/q = 1/p + 1/s.

    Then ||x||_q = ||a||_s ||b||_p.
    """
    p = check_exponent(p)
    q = check_exponent(q, "q")
    s = conjugate_exponent(p, q)
    v = x.vals
    if np.any(v.imag != 0) or np.any(v.real < 0):
        raise ValueError("holder_split needs a nonnegative real sequence")
    r = v.real
    a = CSeq(x.idx, r ** (q / s), x.dim)
    b = CSeq(x.idx, r ** (q / p), x.dim)
    return a, b
