"""Twisted sums Y (+)_phi X at finite dimension."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .centralizers import CentralizerSpec, QMap, minimal_extension_functional
from .seq import CSeq, lp_norm

__all__ = [
    "ScalarTwistedPoint",
    "TwistedPoint",
    "embed",
    "pullback_member",
    "pullback_quasinorm",
    "quotient",
    "scalar_twisted_norm",
    "twisted_quasinorm",
]


@dataclass(frozen=True, eq=False)
class TwistedPoint:
    """A pair (y, x) in Y (+)_phi X; the quasinorm is taken in l_p, p = phi.scale."""

    y: CSeq
    x: CSeq
    map: QMap

    def __post_init__(self):
        if self.y.dim != self.x.dim:
            raise ValueError("y and x must share the ambient dimension")

    @property
    def p(self):
        return self.map.scale

    def __add__(self, other):
        if other.map is not self.map and other.map != self.map:
            raise ValueError("cannot add points of different twisted sums")
        return TwistedPoint(self.y + other.y, self.x + other.x, self.map)

    def __mul__(self, c):
        return TwistedPoint(self.y * c, self.x * c, self.map)

    __rmul__ = __mul__

    def to_json(self):
        if not isinstance(self.map, CentralizerSpec):
            raise TypeError("only centralizer-generated twisted points are serializable")
        return {"y": self.y.to_json(), "x": self.x.to_json(), "map": self.map.to_json()}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(CSeq.from_json(obj["y"]), CSeq.from_json(obj["x"]), CentralizerSpec.from_json(obj["map"]))


@dataclass(frozen=True, eq=False)
class ScalarTwistedPoint:
    """A pair (t, x) in K (+)_phi l_1, phi the minimal-extension functional."""

    t: complex
    x: CSeq


def twisted_quasinorm(z):
    """||y - phi(x)||_p + ||x||_p."""
    p = z.p
    return lp_norm(z.y - z.map(z.x), p) + lp_norm(z.x, p)


def embed(y, phi):
    """y -> (y, 0); isometric."""
    return TwistedPoint(y, CSeq.zeros(y.dim), phi)


def quotient(z):
    """(y, x) -> x."""
    return z.x


def _matvec(a, x):
    A = np.asarray(a, dtype=np.complex128)
    if A.ndim != 2 or A.shape[1] != x.dim:
        raise ValueError(f"operator of shape {A.shape} cannot act on a sequence of dimension {x.dim}")
    return A @ x.to_dense()


def pullback_member(z, x, a, tol=1e-9):
    """Is (z, x) in the pullback {(z, x) : pi(z) = a(x)}?

    Membership is tested as ||quotient(z) - a x||_2 <= tol.
    """
    ax = _matvec(a, x)
    if ax.shape[0] != z.x.dim:
        raise ValueError("operator range does not match the twisted sum's quotient")
    return bool(np.linalg.norm(z.x.to_dense() - ax) <= tol)


def pullback_quasinorm(z, x):
    """||z||_phi + ||x||_2 for a member pair of the pullback."""
    return twisted_quasinorm(z) + lp_norm(x, 2.0)


def scalar_twisted_norm(w, base):
    """|t - phi(x)| + ||x||_1 with phi(x) = <1, Phi_1(x)> built from ``base``."""
    return abs(complex(w.t) - minimal_extension_functional(w.x, base)) + lp_norm(w.x, 1.0)
