"""Named multiplier sequences d for the CLI and the experiments.

They straddle the two known conditions: Schatten-type decay (invsqrt, invn,
geometric) is sufficient for liftability, O(1/log n) decay (invlog) is
necessary, and ``ones`` (the identity) is not liftable.
"""

import json

import numpy as np

from .seq import CSeq

__all__ = ["PRESETS", "load_sequence", "preset"]


def _ones(n):
    return np.ones(n.size)


def _invlog(n):
    return 1.0 / np.log(n + 1.0)


def _invsqrt(n):
    return 1.0 / np.sqrt(n)


def _invn(n):
    return 1.0 / (n + 1.0)


PRESETS = {"ones": _ones, "invlog": _invlog, "invsqrt": _invsqrt, "invn": _invn}


def preset(name, dim):
    """Preset sequence on [1, dim]; ``geometric:r`` gives d_n = r^(n-1)."""
    n = np.arange(1, dim + 1, dtype=np.float64)
    if name.startswith("geometric:"):
        r = float(name.split(":", 1)[1])
        if not 0 < r <= 1:
            raise ValueError("geometric ratio must lie in (0, 1]")
        vals = r ** (n - 1)
    else:
        try:
            vals = PRESETS[name](n)
        except KeyError:
            raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)} or geometric:r") from None
    return CSeq(np.arange(1, dim + 1), vals, dim)


def load_sequence(source, dim=None):
    """``preset:<name>`` or the path of a sequence JSON file."""
    if source.startswith("preset:"):
        if dim is None:
            raise ValueError("a preset needs a dimension")
        return preset(source[len("preset:"):], dim)
    with open(source) as fh:
        return CSeq.from_json(json.load(fh))
