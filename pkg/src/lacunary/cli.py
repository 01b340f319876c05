"""Command-line front end.

Every subcommand reads and writes the JSON formats of the library objects.
Exit status: 0 success, 1 math-precondition failure, 2 I/O or config failure;
on failure an error object is printed to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import bohr, series as ds, stable_rank
from .arith import first_primes
from .errors import LacunaryError, SpecParseError
from .scalars import BACKENDS, RATIONAL
from .semigroup import MembershipSieve, atoms, sieve, verify_closure

SUBCOMMANDS = (
    "sieve", "atoms", "closure", "conv", "invert", "norms", "eval", "zeta-s",
    "lseries", "fejer", "lift", "drop", "homog", "bezout", "abscissa",
)


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    spec: str | None = None
    N: int | None = None
    backend: str = RATIONAL
    tol: float = 1e-9
    seed: int = 0
    inputs: list[str] = field(default_factory=list)
    out: str | None = None
    fmt: str = "json"
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.N is not None and self.N < 1:
            raise ConfigError("--n must be >= 1")
        if self.tol <= 0:
            raise ConfigError("--tol must be > 0")
        if self.backend not in BACKENDS:
            raise ConfigError(f"unknown backend {self.backend!r}")


# --- helpers -------------------------------------------------------------


def _read_json(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return json.loads(text)


def _inputs(cfg: RunConfig, count: int) -> list:
    if len(cfg.inputs) != count:
        raise ConfigError(f"{cfg.subcommand} needs {count} --in file(s), got {len(cfg.inputs)}")
    return [_read_json(p) for p in cfg.inputs]


def _series_in(cfg: RunConfig, count: int = 1) -> list[ds.DirichletSeries]:
    return [ds.DirichletSeries.from_json(obj) for obj in _inputs(cfg, count)]


def _need(value, flag: str):
    if value is None:
        raise ConfigError(f"missing {flag}")
    return value


def _sieve_from(cfg: RunConfig) -> MembershipSieve:
    if cfg.inputs:
        return MembershipSieve.from_json(_inputs(cfg, 1)[0])
    return sieve(_need(cfg.spec, "--spec"), _need(cfg.N, "--n"))


def _floats(text: str) -> list[float]:
    return [float(Fraction(x)) for x in text.split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _series_csv(f: ds.DirichletSeries) -> list[list]:
    return [["n", "abs_a_n"]] + [[n, abs(a)] for n, a in f.items()]


# --- subcommands -----------------------------------------------------------
# each returns (json_payload, csv_rows or None)


def _cmd_sieve(cfg):
    sv = _sieve_from(cfg)
    return sv.to_json(), [["n"]] + [[m] for m in sv.members]


def _cmd_closure(cfg):
    sv = _sieve_from(cfg)
    bad = verify_closure(sv)
    payload = {
        "spec": sv.source.canonical(),
        "N": sv.N,
        "closed": not bad,
        "violations": [list(v) for v in bad],
    }
    return payload, [["a", "b", "ab"]] + [list(v) for v in bad]


def _cmd_atoms(cfg):
    sv = _sieve_from(cfg)
    rep = atoms(sv)
    return {"spec": sv.source.canonical(), "N": sv.N, **rep.to_json()}, [["atom"]] + [[a] for a in rep.atoms]


def _series_out(f):
    return f.to_json(), _series_csv(f)


def _cmd_conv(cfg):
    f, g = _series_in(cfg, 2)
    return _series_out(ds.convolve(f, g))


def _cmd_invert(cfg):
    (f,) = _series_in(cfg)
    return _series_out(ds.invert(f))


def _cmd_norms(cfg):
    (f,) = _series_in(cfg)
    sq = ds.l2_norm_squared(f)
    l1 = ds.l1_norm(f)
    lower = ds.sup_norm_lower_bound(f)
    ratio = ds.multiplier_ratio_max(f, trials=cfg.options.get("trials", 32), seed=cfg.seed)
    payload = {
        "N": f.N,
        "l1": l1,
        "l2": ds.l2_norm(f),
        "l2_squared": str(sq) if isinstance(sq, Fraction) else sq,
        "sup_lower_bound": lower,
        "multiplier_ratio_max": ratio,
        "chain_ok": max(lower, ratio) <= l1 + cfg.tol,
    }
    return payload, [list(payload), list(payload.values())]


def _cmd_eval(cfg):
    (f,) = _series_in(cfg)
    sigmas = _floats(_need(cfg.options.get("sigma"), "--sigma"))
    ts = _floats(cfg.options.get("t") or "0")
    residual = cfg.options.get("residual")
    rows, points = [["sigma", "t", "abs_f"]], []
    for sg in sigmas:
        for t in ts:
            r = ds.evaluate(f, ds.HalfPlanePoint(sg, t), residual)
            points.append({"sigma": sg, "t": t, "re": r.value.real, "im": r.value.imag,
                           "abs": abs(r.value), "tail_bound": r.tail_bound})
            rows.append([sg, t, abs(r.value)])
    return {"N": f.N, "points": points}, rows


def _cmd_zeta_s(cfg):
    sv = sieve(_need(cfg.spec, "--spec"), _need(cfg.N, "--n"))
    return _series_out(ds.zeta_S(sv, backend=cfg.backend))


def _cmd_lseries(cfg):
    m = _need(cfg.options.get("m"), "--m")
    return _series_out(ds.l_series(int(m), _need(cfg.N, "--n"), cfg.backend))


def _cmd_fejer(cfg):
    (f,) = _series_in(cfg)
    return _series_out(ds.fejer_smooth(f, float(_need(cfg.options.get("m"), "--m"))))


def _basis(text: str | None) -> bohr.Basis:
    if not text or text == "primes":
        return bohr.Basis.primes()
    return bohr.Basis.generators(_ints(text))


def _cmd_lift(cfg):
    (f,) = _series_in(cfg)
    P = bohr.lift(f, _basis(cfg.options.get("basis")))
    return P.to_json(), None


def _cmd_drop(cfg):
    (obj,) = _inputs(cfg, 1)
    P = bohr.MultiPowerSeries.from_json(obj)
    return _series_out(bohr.drop(P, _need(cfg.N, "--n")))


def _cmd_homog(cfg):
    (obj,) = _inputs(cfg, 1)
    parts = bohr.homogeneous_parts(bohr.MultiPowerSeries.from_json(obj))
    return {"parts": {str(m): p.to_json() for m, p in parts.items()}}, None


def _cmd_bezout(cfg):
    n = cfg.options.get("tuple_n")
    gens = cfg.options.get("gens")
    if gens:
        q = _ints(gens)
    elif cfg.spec:
        q = stable_rank.first_atoms(cfg.spec, 2 * _need(n, "--n"))
    else:
        q = first_primes(2 * _need(n, "--n"))
    if n is not None and len(q) != 2 * n:
        raise ConfigError(f"--gens gives {len(q)} generators, --n {n} needs {2 * n}")
    system = stable_rank.unimodular_tuple(q, cfg.options.get("trunc"), cfg.backend, cfg.spec)
    check = stable_rank.verify_bezout(system)
    payload = {"system": system.to_json(), "verification": check.to_json()}
    return payload, [["ok"], [check.ok]]


def _cmd_abscissa(cfg):
    (f,) = _series_in(cfg)
    return ds.abscissa_report(f), None


_COMMANDS = {
    "sieve": _cmd_sieve, "atoms": _cmd_atoms, "closure": _cmd_closure,
    "conv": _cmd_conv, "invert": _cmd_invert, "norms": _cmd_norms, "eval": _cmd_eval,
    "zeta-s": _cmd_zeta_s, "lseries": _cmd_lseries, "fejer": _cmd_fejer,
    "lift": _cmd_lift, "drop": _cmd_drop, "homog": _cmd_homog,
    "bezout": _cmd_bezout, "abscissa": _cmd_abscissa,
}


def _emit(cfg: RunConfig, payload, rows) -> None:
    if cfg.fmt == "csv":
        if rows is None:
            raise ConfigError(f"{cfg.subcommand} has no CSV form")
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def run(cfg: RunConfig) -> int:
    try:
        payload, rows = _COMMANDS[cfg.subcommand](cfg)
        _emit(cfg, payload, rows)
        return 0
    except LacunaryError as exc:
        print(json.dumps(exc.to_json()), file=sys.stderr)
        return 1
    except (ConfigError, SpecParseError, OSError, json.JSONDecodeError, ValueError, KeyError) as exc:
        print(json.dumps({"error": "config", "message": str(exc)}), file=sys.stderr)
        return 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="semigroup expression, e.g. coprime(6), gen(2,3), sum2sq")
    common.add_argument("--backend", choices=BACKENDS, default=RATIONAL)
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--in", dest="inputs", action="append", default=[], help="input JSON ('-' for stdin)")
    common.add_argument("--out")
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")

    parser = argparse.ArgumentParser(prog="lacunary", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "bezout":
            p.add_argument("--n", dest="tuple_n", type=int, help="tuple size n (uses 2n generators)")
            p.add_argument("--gens", help="comma-separated generators q_1..q_2n")
            p.add_argument("--trunc", type=int, help="truncation N (default: prod q_j q_{n+j})")
        else:
            p.add_argument("--n", dest="N", type=int, help="truncation N")
        if name == "eval":
            p.add_argument("--sigma", help="comma-separated real parts")
            p.add_argument("--t", help="comma-separated imaginary parts")
            p.add_argument("--residual", type=float, help="l2 mass of coefficients beyond N")
        if name in ("lseries", "fejer"):
            p.add_argument("--m", type=float if name == "fejer" else int)
        if name == "lift":
            p.add_argument("--basis", help="'primes' or comma-separated generators")
        if name == "norms":
            p.add_argument("--trials", type=int, default=32)
    return parser


_OPTION_KEYS = ("tuple_n", "gens", "trunc", "sigma", "t", "residual", "m", "basis", "trials")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    opts = {k: getattr(ns, k) for k in _OPTION_KEYS if getattr(ns, k, None) is not None}
    try:
        cfg = RunConfig(ns.subcommand, ns.spec, getattr(ns, "N", None), ns.backend, ns.tol,
                        ns.seed, ns.inputs, ns.out, ns.fmt, opts)
    except ConfigError as exc:
        print(json.dumps({"error": "config", "message": str(exc)}), file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
