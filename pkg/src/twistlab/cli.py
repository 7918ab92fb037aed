"""twistlab command line.

Every subcommand writes one JSON object or one CSV table.  Exit codes:
0 success, 1 numerical failure, 2 bad configuration, 3 unreadable input file.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import diagnostics as dg
from ._backend import BACKEND, configure_threads
from .centralizers import CentralizerSpec, minimal_extension_functional, parse_centralizer
from .presets import load_sequence
from .seq import CSeq, lp_norm
from .spectral import (
    SVDConvergenceError,
    liftability_criterion,
    lorentz_log_norm,
    macaev_norm,
    parse_matrix,
    schatten_norm,
    singular_values,
)
from .twisted import ScalarTwistedPoint, TwistedPoint, scalar_twisted_norm, twisted_quasinorm

MAX_DIM = 1 << 20

SUBCOMMANDS = (
    "norm",
    "centralizer",
    "curve",
    "criterion",
    "defect",
    "constant",
    "rademacher",
    "average",
    "shift",
    "twisted-norm",
)


class ConfigError(Exception):
    pass


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    p: float = 2.0
    q: Optional[float] = None
    dim: int = 1000
    seed: int = 0
    trials: int = 1000
    centralizer: str = "kp"
    d_source: Optional[str] = None
    format: str = "json"
    out: Optional[str] = None
    options: dict = field(default_factory=dict)

    def validate(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigError(f"unknown subcommand {self.subcommand!r}")
        if not (self.p > 0):
            raise ConfigError("--p must be positive")
        if self.q is not None and not (0 < self.q < self.p):
            raise ConfigError("--q must satisfy 0 < q < p")
        if not 1 <= self.dim <= MAX_DIM:
            raise ConfigError(f"--dim must lie in [1, {MAX_DIM}]")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("--seed must be an unsigned 64-bit integer")
        if self.trials < 1:
            raise ConfigError("--trials must be positive")
        if self.format not in ("json", "csv"):
            raise ConfigError("--format must be json or csv")


# input helpers


def _read_json_file(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _sequence(text, dim=None):
    """Inline comma list (``3,4`` or ``1+2j,0,-1``) or a sequence JSON file."""
    if "," in text or _is_number(text):
        try:
            vals = [complex(t.strip()) for t in text.split(",") if t.strip()]
        except ValueError as exc:
            raise ConfigError(f"bad inline sequence {text!r}") from exc
        n = len(vals) if dim is None else max(dim, len(vals))
        return CSeq.from_dense(np.array(vals, dtype=np.complex128), n)
    obj = _read_json_file(text)
    try:
        return CSeq.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{text}: not a sequence file ({exc})") from exc


def _is_number(text):
    try:
        complex(text)
        return True
    except ValueError:
        return False


def _d_sequence(cfg):
    if not cfg.d_source:
        raise ConfigError("--d is required for this subcommand")
    if cfg.d_source.startswith("preset:"):
        try:
            return load_sequence(cfg.d_source, cfg.dim)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    obj = _read_json_file(cfg.d_source)
    try:
        return CSeq.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{cfg.d_source}: not a sequence file ({exc})") from exc


def _matrix(text):
    if text.startswith(("diag:", "eye:")):
        try:
            return parse_matrix(text)
        except ValueError as exc:
            raise ConfigError(f"bad matrix literal {text!r}") from exc
    if text.startswith("random:"):
        return None
    try:
        return parse_matrix(text)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        raise InputError(f"cannot read matrix {text}: {exc}") from exc


def _centralizer(cfg, q=None):
    text = cfg.centralizer
    if text.endswith(".json"):
        obj = _read_json_file(text)
        try:
            return CentralizerSpec.from_json(obj)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{text}: not a centralizer spec ({exc})") from exc
    try:
        return parse_centralizer(text, cfg.p, q)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


# output


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, CSeq):
        return obj.to_json()
    return obj


def _csv(header, rows):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_csv_cell(v) for v in row) + "\n")
    return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


# subcommands; each returns (json_obj, csv_header, csv_rows)


def cmd_norm(cfg):
    o = cfg.options
    if o.get("matrix"):
        M = _matrix(o["matrix"])
        if M is None:
            raise ConfigError("norm needs an explicit matrix")
        s = singular_values(M)
        if o.get("macaev"):
            res = {"norm": "macaev", "value": macaev_norm(M)}
        elif o.get("spectrum"):
            res = {"norm": "spectrum", "singular_values": s.tolist()}
            return res, ["n", "s_n"], [(k + 1, float(v)) for k, v in enumerate(s)]
        else:
            p = o.get("schatten") or 2.0
            res = {"norm": "schatten", "p": p, "value": schatten_norm(M, p)}
    elif o.get("lorentz"):
        d = _d_sequence(cfg) if cfg.d_source else _sequence(o["x"]) if o.get("x") else None
        if d is None:
            raise ConfigError("--lorentz needs --d or --x")
        res = {"norm": "lorentz", "value": lorentz_log_norm(d), "truncation": d.support_size}
    elif o.get("x"):
        x = _sequence(o["x"])
        p = o.get("lp") or cfg.p
        res = {"norm": "lp", "p": p, "value": lp_norm(x, p)}
    else:
        raise ConfigError("norm needs --x, --matrix or --lorentz")
    return res, ["quantity", "value"], [(res["norm"], res["value"])]


def _seq_rows(x):
    return [(int(i), float(v.real), float(v.imag)) for i, v in zip(x.idx, x.vals)]


def cmd_centralizer(cfg):
    if not cfg.options.get("x"):
        raise ConfigError("centralizer needs --x")
    x = _sequence(cfg.options["x"])
    phi = _centralizer(cfg, cfg.q)
    y = phi(x)
    res = {"centralizer": phi.to_json(), "input": x.to_json(), "output": y.to_json(), "norm": lp_norm(y, phi.scale)}
    return res, ["n", "re", "im"], _seq_rows(y)


def cmd_shift(cfg):
    if cfg.q is None:
        raise ConfigError("shift needs --q")
    if not cfg.options.get("x"):
        raise ConfigError("shift needs --x")
    x = _sequence(cfg.options["x"])
    phi = _centralizer(cfg, cfg.q)
    y = phi(x)
    res = {"centralizer": phi.to_json(), "input": x.to_json(), "output": y.to_json(), "coordinate_sum": complex(y.vals.sum())}
    if cfg.q == 1.0 and phi.base.p == 2.0:
        res["minimal_extension_functional"] = minimal_extension_functional(x, phi.base)
    return res, ["n", "re", "im"], _seq_rows(y)


def cmd_curve(cfg):
    d = _d_sequence(cfg)
    phi = _centralizer(cfg, cfg.q)
    N = min(cfg.dim, d.dim)
    every = cfg.options.get("every") or 1
    ns = np.arange(1, N + 1, every)
    curve = dg.divergence_curve(d, phi, N, ns)
    res = {"centralizer": phi.to_json(), "truncation": N, "curve": curve}
    if len(curve) >= 2:
        tenth = [r for n, r in curve if n <= max(1, N // 10)]
        res["trend"] = {"ratio_at_N": curve[-1][1], "ratio_at_N_over_10": tenth[-1] if tenth else None}
    return res, ["n", "ratio"], curve


def cmd_criterion(cfg):
    d = _d_sequence(cfg)
    cap = cfg.options.get("cap") or 1.0
    r = liftability_criterion(d, cap)
    return r.to_json(), ["quantity", "value"], [(k, v) for k, v in r.to_json().items()]


def cmd_defect(cfg):
    d = _d_sequence(cfg)
    phi = _centralizer(cfg, cfg.q)
    o = cfg.options
    family_kind = o.get("family") or "random"
    if family_kind == "sn":
        N = min(cfg.dim, d.dim, 2000)
        family = dg.sn_test_family(d, N)
    else:
        family = [dg.random_cseq(np.random.default_rng(cfg.seed + i), d.dim, phi.scale) for i in range(cfg.trials)]
    lam = dg.witness_from_centralizer(d, phi)
    report = dg.lift_defect(d, phi, lam, family, o.get("mode") or "lift", seed=cfg.seed)
    if o.get("refine"):
        lam2 = dg.refine_witness(d, phi, lam, report.family)
        refined = dg.lift_defect(d, phi, lam2, family, report.mode, seed=cfg.seed)
        if refined.sup_ratio < report.sup_ratio:
            report = refined
    out = report.to_json()
    out["meta"]["truncation"] = d.dim
    out["meta"]["family"] = family_kind
    return out, ["k", "ratio"], [(k + 1, float(r)) for k, r in enumerate(report.ratios)]


def cmd_constant(cfg):
    phi = _centralizer(cfg, cfg.q)
    dim = cfg.options.get("sample_dim") or min(cfg.dim, 64)
    res = {"centralizer": phi.to_json(), "trials": cfg.trials, "dim": dim, "seed": cfg.seed}
    if cfg.options.get("kind") == "quasilinear":
        res["quasilinearity_lower"] = dg.quasilinearity_constant_lower(phi, cfg.trials, dim, cfg.seed)
    else:
        res["centralizer_lower"] = dg.centralizer_constant_lower(phi, cfg.trials, dim, cfg.seed)
    rows = [(k, v) for k, v in res.items() if k.endswith("_lower")]
    return res, ["quantity", "value"], rows


def cmd_rademacher(cfg):
    phi = _centralizer(cfg, cfg.q)
    k = cfg.options.get("k") or 8
    if k > dg.MAX_RADEMACHER_TERMS:
        raise ConfigError(f"--k must be <= {dg.MAX_RADEMACHER_TERMS}")
    dim = max(cfg.dim if cfg.options.get("vectors") == "random" else k, k)
    if cfg.options.get("vectors") == "random":
        rng = np.random.default_rng(cfg.seed)
        xs = [dg.random_cseq(rng, dim, phi.scale) * (1 / math.sqrt(k)) for _ in range(k)]
    else:
        xs = [CSeq.unit(i, dim) * (1 / math.sqrt(k)) for i in range(1, k + 1)]
    val = dg.rademacher_nonlinearity(phi, xs)
    res = {"centralizer": phi.to_json(), "k": k, "dim": dim, "value": val}
    return res, ["quantity", "value"], [("rademacher", val)]


def cmd_average(cfg):
    text = cfg.options.get("matrix") or "random:8"
    M = _matrix(text)
    if M is None:
        try:
            n = int(text.split(":", 1)[1])
        except ValueError as exc:
            raise ConfigError(f"bad matrix literal {text!r}") from exc
        rng = np.random.default_rng(cfg.seed)
        M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    if M.shape[0] > dg.MAX_CANTOR_DIM or M.shape[0] != M.shape[1]:
        raise ConfigError(f"average needs a square matrix of size <= {dg.MAX_CANTOR_DIM}")
    avg = dg.cantor_average_matrix(M)
    off = avg - np.diag(np.diag(avg))
    lam = CSeq.from_dense(np.diag(avg), avg.shape[0])
    res = {"witness": lam.to_json(), "off_diagonal_max": float(np.abs(off).max()) if off.size else 0.0}
    return res, ["n", "re", "im"], [(k + 1, float(v.real), float(v.imag)) for k, v in enumerate(np.diag(avg))]


def cmd_twisted_norm(cfg):
    o = cfg.options
    if o.get("point"):
        obj = _read_json_file(o["point"])
        try:
            z = TwistedPoint.from_json(obj)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{o['point']}: not a twisted point ({exc})") from exc
        val = twisted_quasinorm(z)
        return {"quasinorm": val}, ["quantity", "value"], [("quasinorm", val)]
    if not o.get("x"):
        raise ConfigError("twisted-norm needs --point or --x")
    x = _sequence(o["x"])
    if o.get("t") is not None:
        base = _centralizer(cfg)
        val = scalar_twisted_norm(ScalarTwistedPoint(complex(o["t"]), x), base)
        return {"scalar_quasinorm": val}, ["quantity", "value"], [("scalar_quasinorm", val)]
    y = _sequence(o["y"], x.dim) if o.get("y") else CSeq.zeros(x.dim)
    if y.dim != x.dim:
        raise ConfigError("--x and --y must have the same dimension")
    val = twisted_quasinorm(TwistedPoint(y, x, _centralizer(cfg, cfg.q)))
    return {"quasinorm": val}, ["quantity", "value"], [("quasinorm", val)]


COMMANDS = {
    "norm": cmd_norm,
    "centralizer": cmd_centralizer,
    "curve": cmd_curve,
    "criterion": cmd_criterion,
    "defect": cmd_defect,
    "constant": cmd_constant,
    "rademacher": cmd_rademacher,
    "average": cmd_average,
    "shift": cmd_shift,
    "twisted-norm": cmd_twisted_norm,
}


def render(cfg, result):
    obj, header, rows = result
    if cfg.format == "csv":
        return _csv(header, rows)
    return json.dumps(_plain(obj), indent=2) + "\n"


def run(cfg):
    """Execute one configured subcommand; returns the process exit code."""
    try:
        cfg.validate()
        configure_threads()
        text = render(cfg, COMMANDS[cfg.subcommand](cfg))
    except ConfigError as exc:
        print(f"twistlab: {exc}", file=sys.stderr)
        return 2
    except InputError as exc:
        print(f"twistlab: {exc}", file=sys.stderr)
        return 3
    except (SVDConvergenceError, ArithmeticError, FloatingPointError) as exc:
        print(f"twistlab: numerical failure: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"twistlab: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=float, default=2.0, help="scale exponent of l_p (default 2)")
    common.add_argument("--q", type=float, default=None, help="target exponent when shifting, q < p")
    common.add_argument("--dim", type=int, default=1000, help="ambient dimension / truncation N")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=1000)
    common.add_argument("--centralizer", default="kp", help="kp, rank, lipschitz:<preset>, or a spec .json file")
    common.add_argument("--d", dest="d_source", default=None, help="preset:<name> or a sequence .json file")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="output file (default stdout)")

    parser = argparse.ArgumentParser(prog="twistlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"twistlab 0.1.0 ({BACKEND} kernels)")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("norm", parents=[common], help="l_p, Schatten, Macaev or Lorentz norms")
    s.add_argument("--x", help="sequence: inline list or .json file")
    s.add_argument("--lp", type=float)
    s.add_argument("--matrix", help="diag:a,b,..., eye:N, or a matrix .json file")
    s.add_argument("--schatten", type=float)
    s.add_argument("--macaev", action="store_true")
    s.add_argument("--spectrum", action="store_true", help="emit singular values (CSV header n,s_n)")
    s.add_argument("--lorentz", action="store_true")

    s = sub.add_parser("centralizer", parents=[common], help="evaluate a centralizer")
    s.add_argument("--x", required=False)

    sub.add_parser("curve", parents=[common], help="divergence curve along the s_n test vectors").add_argument(
        "--every", type=int, default=1, help="report every k-th n"
    )

    s = sub.add_parser("criterion", parents=[common], help="truncated d*_n log n boundedness test")
    s.add_argument("--cap", type=float, default=1.0)

    s = sub.add_parser("defect", parents=[common], help="lifting defect of the diagonal witness")
    s.add_argument("--mode", choices=("lift", "extend"), default="lift")
    s.add_argument("--family", choices=("random", "sn"), default="random")
    s.add_argument("--refine", action="store_true", help="try the coordinatewise median refinement")

    s = sub.add_parser("constant", parents=[common], help="empirical centralizer / quasilinearity constants")
    s.add_argument("--kind", choices=("centralizer", "quasilinear"), default="centralizer")
    s.add_argument("--sample-dim", dest="sample_dim", type=int, default=None)

    s = sub.add_parser("rademacher", parents=[common], help="exact sign-average nonlinearity")
    s.add_argument("--k", type=int, default=8)
    s.add_argument("--vectors", choices=("units", "random"), default="units")

    s = sub.add_parser("average", parents=[common], help="Cantor-group average of a matrix")
    s.add_argument("--matrix", default=None, help="random:N, diag:..., or a matrix .json file")

    s = sub.add_parser("shift", parents=[common], help="evaluate a centralizer shifted from l_p to l_q")
    s.add_argument("--x")

    s = sub.add_parser("twisted-norm", parents=[common], help="quasinorm in a twisted sum")
    s.add_argument("--point", help="twisted point .json file")
    s.add_argument("--x")
    s.add_argument("--y")
    s.add_argument("--t", help="scalar coordinate: use the minimal extension of l_1")
    return parser


_CORE = ("subcommand", "p", "q", "dim", "seed", "trials", "centralizer", "d_source", "format", "out")


def config_from_args(ns):
    kw = {k: getattr(ns, k) for k in _CORE}
    options = {k: v for k, v in vars(ns).items() if k not in _CORE}
    return RunConfig(options=options, **kw)


def main(argv=None):
    parser = build_parser()
    ns = parser.parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
