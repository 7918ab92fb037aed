"""Centralizers on finitely supported sequences.

Every map here is homogeneous and acts on the support of its argument, so it
can be evaluated row-wise on a dense batch: ``phi.rows(X)`` applies the map to
each row of ``X`` (zeros off the support) and ``phi(x)`` applies it to a
single :class:`~twistlab.seq.CSeq`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import kernels
from .seq import CSeq, check_exponent, conjugate_exponent

__all__ = [
    "CentralizerSpec",
    "LIPSCHITZ_PRESETS",
    "LinearMap",
    "LipschitzFunction",
    "QMap",
    "eval_kalton_peck",
    "eval_kalton_rank",
    "eval_lipschitz_centralizer",
    "minimal_extension_functional",
    "parse_centralizer",
    "shift_centralizer",
]


def _as_rows(X):
    return np.ascontiguousarray(np.atleast_2d(X), dtype=np.complex128)


class QMap:
    """A homogeneous map between sequence spaces of a fixed dimension.

    Subclasses set ``scale`` (the exponent p of the ambient l_p) and
    implement :meth:`rows`.
    """

    scale: float
    #: True when the map only looks at the support of its argument.
    local: bool = False

    def rows(self, X):
        raise NotImplementedError

    def __call__(self, x):
        if self.local:
            out = self.rows(x.vals[None, :])[0]
            return CSeq(x.idx, out, x.dim)
        return CSeq.from_dense(self.rows(x.to_dense()[None, :])[0], x.dim)


class LinearMap(QMap):
    """x -> M x for a square matrix M.  Used as the linear baseline."""

    def __init__(self, matrix, scale=2.0):
        M = np.asarray(matrix, dtype=np.complex128)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("LinearMap needs a square matrix")
        self.matrix = M
        self.scale = check_exponent(scale)

    @classmethod
    def diagonal(cls, d, scale=2.0):
        d = d.to_dense() if isinstance(d, CSeq) else np.asarray(d)
        return cls(np.diag(d), scale)

    def rows(self, X):
        return _as_rows(X) @ self.matrix.T


@dataclass(frozen=True)
class LipschitzFunction:
    """A named Lipschitz function phi(s, t) on R^2_+ with phi(0, 0) = 0."""

    name: str
    func: Callable = None
    lipschitz: Optional[float] = None

    def __post_init__(self):
        if self.func is None:
            raise ValueError(f"Lipschitz function {self.name!r} has no callable")
        if self.lipschitz is None:
            raise ValueError(f"Lipschitz function {self.name!r} needs a declared Lipschitz constant")
        if not (self.lipschitz >= 0 and math.isfinite(self.lipschitz)):
            raise ValueError("Lipschitz constant must be finite and nonnegative")
        z = complex(np.asarray(self.func(np.zeros(1), np.zeros(1)))[0])
        if z != 0:
            raise ValueError(f"Lipschitz function {self.name!r} must vanish at the origin")

    def __hash__(self):
        return hash((self.name, self.lipschitz))

    def __eq__(self, other):
        if not isinstance(other, LipschitzFunction):
            return NotImplemented
        return self.name == other.name and self.lipschitz == other.lipschitz


# Constants are Euclidean Lipschitz constants on R^2_+.
LIPSCHITZ_PRESETS = {
    f.name: f
    for f in (
        LipschitzFunction("s", lambda s, t: s, 1.0),
        LipschitzFunction("t", lambda s, t: t, 1.0),
        LipschitzFunction("s+t", lambda s, t: s + t, math.sqrt(2.0)),
        LipschitzFunction("min", np.minimum, 1.0),
        LipschitzFunction("sin-damped", lambda s, t: np.sin(s) * np.exp(-t), math.sqrt(2.0)),
    )
}


@dataclass(frozen=True)
class CentralizerSpec(QMap):
    """A selectable centralizer acting on l_p.

    kind is one of ``"kp"`` (Kalton-Peck), ``"rank"``, ``"lipschitz"``,
    ``"shift"``.  For ``"shift"`` the scale ``p`` is the exponent q of the
    target space and ``base`` carries the original scale.
    """

    kind: str
    p: float
    lipschitz_fn: Optional[LipschitzFunction] = None
    base: Optional["CentralizerSpec"] = None

    local = True

    def __post_init__(self):
        object.__setattr__(self, "p", check_exponent(self.p))
        if self.kind not in ("kp", "rank", "lipschitz", "shift"):
            raise ValueError(f"unknown centralizer kind {self.kind!r}")
        if self.kind == "lipschitz" and self.lipschitz_fn is None:
            raise ValueError("lipschitz centralizer needs a LipschitzFunction")
        if self.kind == "shift":
            if self.base is None:
                raise ValueError("shifted centralizer needs a base")
            if not self.p < self.base.p:
                raise ValueError(f"shift needs q < p, got q={self.p}, p={self.base.p}")

    @classmethod
    def kalton_peck(cls, p=2.0):
        return cls("kp", p)

    @classmethod
    def kalton_rank(cls, p=2.0):
        return cls("rank", p)

    @classmethod
    def lipschitz(cls, fn, p=2.0):
        if isinstance(fn, str):
            try:
                fn = LIPSCHITZ_PRESETS[fn]
            except KeyError:
                raise ValueError(f"unknown Lipschitz preset {fn!r}; choose from {sorted(LIPSCHITZ_PRESETS)}") from None
        return cls("lipschitz", p, lipschitz_fn=fn)

    @property
    def scale(self):
        return self.p

    @property
    def q(self):
        return self.p if self.kind == "shift" else None

    @property
    def name(self):
        if self.kind == "lipschitz":
            return f"lipschitz:{self.lipschitz_fn.name}"
        if self.kind == "shift":
            return f"shift[{self.base.name},p={self.base.p:g}->q={self.p:g}]"
        return self.kind

    def rows(self, X):
        X = _as_rows(X)
        if self.kind == "kp":
            return X * kernels.log_ratio_rows(X, self.p)
        if self.kind == "rank":
            return X * kernels.log_rank_rows(X)
        if self.kind == "lipschitz":
            s = kernels.log_ratio_rows(X, self.p)
            t = kernels.log_rank_rows(X)
            return X * np.asarray(self.lipschitz_fn.func(s, t), dtype=np.complex128)
        return _shifted_rows(self.base, self.p, X)

    # serialization

    def to_json(self):
        if self.kind == "shift":
            return {"kind": "shift", "p": self.p, "q": self.p, "base": self.base.to_json()}
        kind = self.name if self.kind == "lipschitz" else self.kind
        return {"kind": kind, "p": self.p}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        kind = obj.get("kind")
        if kind == "shift":
            if "base" not in obj or "q" not in obj:
                raise ValueError("shift spec needs 'q' and 'base'")
            q = check_exponent(obj["q"], "q")
            if "p" in obj and float(obj["p"]) != q:
                raise ValueError("for a shift spec 'p' is the target scale and must equal 'q'")
            return shift_centralizer(cls.from_json(obj["base"]), q)
        p = obj.get("p", 2.0)
        if kind == "kp":
            return cls.kalton_peck(p)
        if kind == "rank":
            return cls.kalton_rank(p)
        if isinstance(kind, str) and kind.startswith("lipschitz:"):
            return cls.lipschitz(kind.split(":", 1)[1], p)
        raise ValueError(f"unknown centralizer kind {kind!r}")


def _shifted_rows(base, q, X):
    A = np.abs(X)
    pos = A > 0
    U = np.ones_like(X)
    U[pos] = X[pos] / A[pos]
    s = conjugate_exponent(base.p, q)
    inner = base.rows(A ** (q / base.p))
    return U * A ** (q / s) * inner


def shift_centralizer(base, q):
    """Move a centralizer on l_p to l_q, q < p.

    The result evaluates x -> u |x|^(q/s) base(|x|^(q/p)) where x = u|x| and
    1/q = 1/p + 1/s.
    """
    q = check_exponent(q, "q")
    if not q < base.p:
        raise ValueError(f"shift needs q < p, got q={q}, p={base.p}")
    return CentralizerSpec("shift", q, base=base)


def parse_centralizer(text, p=2.0, q=None):
    """Centralizer from a short CLI-style name.

    ``kp``, ``rank`` and ``lipschitz:<preset>`` are accepted; when ``q`` is
    given the result is shifted from ``p`` to ``q``.
    """
    text = text.strip()
    if text == "kp":
        spec = CentralizerSpec.kalton_peck(p)
    elif text == "rank":
        spec = CentralizerSpec.kalton_rank(p)
    elif text.startswith("lipschitz:"):
        spec = CentralizerSpec.lipschitz(text.split(":", 1)[1], p)
    else:
        raise ValueError(f"unknown centralizer {text!r}; use kp, rank or lipschitz:<preset>")
    return spec if q is None else shift_centralizer(spec, q)


def eval_kalton_peck(x, p=2.0):
    """Omega(x) = x log(||x||_p / |x|) on the support of x."""
    return CentralizerSpec.kalton_peck(p)(x)


def eval_kalton_rank(x, p=2.0):
    """Gamma(x) = x log r_x."""
    return CentralizerSpec.kalton_rank(p)(x)


def eval_lipschitz_centralizer(x, spec, p=None):
    if spec.kind != "lipschitz":
        raise ValueError("expected a lipschitz centralizer spec")
    if p is not None and check_exponent(p) != spec.p:
        spec = CentralizerSpec.lipschitz(spec.lipschitz_fn, p)
    return spec(x)


def minimal_extension_functional(x, base):
    """<1, Phi_1(x)>, the scalar quasilinear functional on l_1 built from a
    centralizer ``base`` on l_2."""
    if base.p != 2.0:
        raise ValueError("the minimal-extension functional is built from a centralizer on l_2")
    phi1 = shift_centralizer(base, 1.0)
    return complex(phi1(x).vals.sum())
