"""Command-line front end.

    freefid eval       --spec beta:2:3 --zlist "0.5+1j,2j"
    freefid density    --spec beta:1/2:1/2 --xmin 0.05 --xmax 0.95 --n 19 --format csv
    freefid fid        --spec gamma:1 --kmax 16
    freefid trace      --spec beta:9/2:6 --anchor AtZero --format csv
    freefid indicator  --spec gauss --t 0.9,1.5 --yrange -8,8
    freefid selftest   --suite all

JSON output is one object ``{"config", "results", "errors"}`` with sorted
keys; CSV follows RFC 4180 with 17 significant digits.  Exit codes: 0 ok,
1 usage, 2 numeric failure, 3 inconclusive under ``--strict``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import selftest
from .cumulants import _max_order, hankel_fid_test
from .distributions import Beta, BetaPrime, Gamma, Ultraspherical
from .errors import (AlphaOne, FreeFidError, MomentHorizonExceeded, SpecParseError,
                     UnsupportedFamily)
from .fid_analysis import (Anchor, TraceParams, classify_exponent, indicator_probe,
                           region_classifier, subordination_endpoint_test,
                           trace_real_level_curve, verify_condition)
from .specstr import parse_spec
from .transforms import cauchy_G_continued, eta_transform, stieltjes_density
from .verdict import Status

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_INCONCLUSIVE = 0, 1, 2, 3
PROBES = ("region", "exponent", "hankel", "endpoint", "condition")
DEFAULT_PROBES = ("region", "exponent", "hankel", "endpoint")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    spec: str | None = None
    options: dict = field(default_factory=dict)
    out: str | None = None
    format: str = "json"

    def __post_init__(self):
        if self.format not in ("json", "csv"):
            raise UsageError(f"unknown format {self.format!r}")
        tol = self.options.get("tol")
        if tol is not None and not tol > 0:
            raise UsageError("--tol must be positive")

    def to_dict(self) -> dict:
        return {"command": self.command, "spec": self.spec, "options": dict(self.options),
                "out": self.out, "format": self.format}

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        return cls(d["command"], d.get("spec"), dict(d.get("options", {})), d.get("out"),
                   d.get("format", "json"))


# --------------------------------------------------------------------------
# serialisation

def jsonable(x):
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [jsonable(float(x.real)), jsonable(float(x.imag))]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (np.integer,)):
        x = int(x)
    if isinstance(x, int):
        return str(x) if abs(x) > 2 ** 53 else x
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if hasattr(x, "value") and hasattr(x, "name"):  # enums
        return x.value
    return x


def dump_json(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if v is None:
        return ""
    return str(v)


def dump_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


def parse_complex(tok: str) -> complex:
    t = tok.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(t)
    except ValueError as e:
        raise UsageError(f"not a complex number: {tok!r}") from e


def _floats(text, what):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as e:
        raise UsageError(f"bad {what}: {text!r}") from e


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("FREEPROB_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn, items):
    n = _threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


def _err(where, e):
    return {"where": where, "type": type(e).__name__, "message": str(e)}


# --------------------------------------------------------------------------
# commands; each returns (results, errors, inconclusive, csv_table)

def cmd_eval(d, zs):
    def one(z):
        rec = {"z": z}
        try:
            tv = cauchy_G_continued(d, z)
            rec["G"], rec["side"] = tv.value, tv.side.value
            rec["F"] = 1 / tv.value if tv.value != 0 else None
        except (FreeFidError, ZeroDivisionError) as e:
            rec["error"] = f"{type(e).__name__}: {e}"
            return rec
        try:
            rec["eta"] = eta_transform(d, z)
        except FreeFidError as e:
            rec["eta"] = None
            rec["eta_error"] = f"{type(e).__name__}: {e}"
        return rec

    results = _pmap(one, zs)
    errors = [{"where": f"z[{i}]", "message": r["error"]} for i, r in enumerate(results) if "error" in r]
    rows = []
    for r in results:
        z, G, F, eta = r["z"], r.get("G"), r.get("F"), r.get("eta")
        part = lambda v: (None, None) if v is None else (v.real, v.imag)  # noqa: E731
        rows.append([z.real, z.imag, *part(G), *part(F), *part(eta), r.get("side"), r.get("error")])
    table = (["z_re", "z_im", "G_re", "G_im", "F_re", "F_im", "eta_re", "eta_im", "side", "error"], rows)
    return results, errors, False, table


def cmd_density(d, xs, tol):
    def one(x):
        try:
            v, e = stieltjes_density(d, x)
            rec = {"x": x, "density": v, "err_est": e}
            if e > tol:
                rec["warning"] = f"error estimate {e:.3g} above tol {tol:.3g}"
            return rec
        except FreeFidError as e:
            return {"x": x, "density": math.nan, "err_est": math.nan, "error": f"{type(e).__name__}: {e}"}

    results = _pmap(one, list(xs))
    errors = [{"where": f"x={r['x']!r}", "message": r["error"]} for r in results if "error" in r]
    table = (["x", "density", "err_est"], [[r["x"], r["density"], r["err_est"]] for r in results])
    return results, errors, False, table


def _edge_exponents(d):
    if isinstance(d, Beta):
        return {"0": d.p, "1": d.q}
    if isinstance(d, (BetaPrime, Gamma)):
        return {"0": d.p}
    if isinstance(d, Ultraspherical):
        a = Fraction(d.p) + Fraction(1, 2) if not isinstance(d.p, float) else d.p + 0.5
        return {"-1": a, "1": a}
    return {}


def cmd_fid(d, k_max, probes, seed):
    bundle, errors = {}, []
    if "region" in probes:
        bundle["region"] = region_classifier(d).to_dict()
    if "exponent" in probes:
        reps = {}
        for edge, a in _edge_exponents(d).items():
            try:
                r = classify_exponent(a)
                reps[edge] = {"alpha": a, "in_I": r.in_I, "theta": r.theta_alpha,
                              "interval": r.interval, "text": r.describe()}
            except AlphaOne as e:
                reps[edge] = {"alpha": a, "in_I": False, "text": str(e)}
        bundle["exponent"] = reps
    if "hankel" in probes:
        k = k_max
        lim = _max_order(d)
        note = None
        if lim is not None and lim < k:
            k, note = lim, f"moments exist only to order {2 * lim}; Hankel order capped at {lim}"
        try:
            if k < 1:
                raise MomentHorizonExceeded("not enough finite moments for any Hankel order")
            v = hankel_fid_test(d, k).to_dict()
            if note:
                v["note"] = note
            bundle["hankel"] = v
        except (UnsupportedFamily, MomentHorizonExceeded) as e:
            bundle["hankel"] = {"status": Status.Inconclusive.value, "skipped": str(e)}
    if "endpoint" in probes and isinstance(d, Beta) and d.p <= 1 and d.q <= 1:
        try:
            bundle["endpoint"] = subordination_endpoint_test(d).to_dict()
        except FreeFidError as e:
            errors.append(_err("endpoint", e))
    if "condition" in probes:
        try:
            which = "B" if "StudentT" in type(d).__name__ else "A"
            bundle["condition"] = verify_condition(d, which, seed=seed).to_dict()
        except FreeFidError as e:
            errors.append(_err("condition", e))

    statuses = {k: v["status"] for k, v in bundle.items() if isinstance(v, dict) and "status" in v}
    definite = sorted({s for s in statuses.values() if s != Status.Inconclusive.value})
    if len(definite) > 1:
        errors.append({"where": "summary", "type": "ConflictingVerdicts",
                       "message": f"probes disagree: {statuses}"})
        overall = Status.Inconclusive.value
    else:
        overall = definite[0] if definite else Status.Inconclusive.value
    results = {"spec": d.spec(), "verdict": overall, "probes": bundle}
    rows = [[k, v.get("status"), v.get("reason"), v.get("citation")]
            for k, v in bundle.items() if isinstance(v, dict) and "status" in v]
    rows.append(["summary", overall, None, None])
    return results, errors, overall == Status.Inconclusive.value, (["probe", "status", "reason", "citation"], rows)


def cmd_trace(d, anchor, tol):
    params = TraceParams(tol=tol) if tol is not None else TraceParams()
    tr = trace_real_level_curve(d, anchor, params)
    end = tr.end_state
    results = {"spec": d.spec(), "anchor": tr.start_anchor.value,
               "end_state": {"kind": end.kind, "radius": end.radius, "point": end.point, "note": end.note},
               "monotone": tr.monotone, "n_points": len(tr.points),
               "max_imag_residual": tr.max_imag_residual(d),
               "seed": {k: v for k, v in tr.seed.items()},
               "points": [[z.real, z.imag, g] for z, g in zip(tr.points, tr.g_values)]}
    errors = []
    if end.kind == "Stalled":
        errors.append({"where": "trace", "type": "Stalled", "message": f"stalled at {end.point}"})
    rows = [[z.real, z.imag, float(g)] for z, g in zip(tr.points, tr.g_values)]
    return results, errors, False, (["re_z", "im_z", "G"], rows)


def cmd_indicator(d, ts, y_range):
    def one(t):
        try:
            return indicator_probe(d, t, y_range).to_dict()
        except FreeFidError as e:
            return {"t": t, "error": f"{type(e).__name__}: {e}"}

    results = _pmap(one, list(ts))
    errors = [{"where": f"t={r['t']!r}", "message": r["error"]} for r in results if "error" in r]
    rows = [[r["t"], r.get("y0"), r.get("y1"), r.get("monotone")] for r in results]
    return results, errors, False, (["t", "y0", "y1", "monotone"], rows)


def cmd_selftest(suite):
    rep = selftest.run(suite)
    errors = [{"where": f"{s}:{c['name']}", "type": "CheckFailed",
               "message": f"value {c['value']:.3g} not below {c['limit']:.3g}"}
              for s, checks in rep.items() for c in checks if not c["pass"]]
    rows = [[s, c["name"], c["value"], c["limit"], c["pass"]] for s, checks in rep.items() for c in checks]
    return rep, errors, False, (["suite", "check", "value", "limit", "pass"], rows)


# --------------------------------------------------------------------------
# argument handling

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--strict", action="store_true", help="exit 3 on an inconclusive verdict")
    common.add_argument("--seed", type=int, default=None, help="jitter for Newton starts")

    p = _Parser(prog="freefid", description="Cauchy transforms and free infinite divisibility tests")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    e = sub.add_parser("eval", parents=[common], help="G, F and eta at points")
    e.add_argument("--spec", required=True)
    g = e.add_mutually_exclusive_group(required=True)
    g.add_argument("--zlist", help="comma separated complex numbers, e.g. 1+2j,0.5i")
    g.add_argument("--zfile", help="file with one complex number per line")

    s = sub.add_parser("density", parents=[common], help="density by Stieltjes inversion")
    s.add_argument("--spec", required=True)
    s.add_argument("--xmin", type=float, required=True)
    s.add_argument("--xmax", type=float, required=True)
    s.add_argument("--n", type=int, default=21)

    f = sub.add_parser("fid", parents=[common], help="free infinite divisibility verdicts")
    f.add_argument("--spec", required=True)
    f.add_argument("--kmax", type=int, default=16)
    f.add_argument("--probes", default=",".join(DEFAULT_PROBES),
                   help=f"comma separated subset of {','.join(PROBES)}")

    t = sub.add_parser("trace", parents=[common], help="curve on which the continued G is real")
    t.add_argument("--spec", required=True)
    t.add_argument("--anchor", default="AtZero", choices=[a.value for a in Anchor])

    i = sub.add_parser("indicator", parents=[common], help="Boolean power critical points")
    i.add_argument("--spec", required=True)
    i.add_argument("--t", default="0.5,1.0,1.1,1.5,2")
    i.add_argument("--yrange", default=None, help="lo,hi")

    st = sub.add_parser("selftest", parents=[common], help="run invariant suites")
    st.add_argument("--suite", default="all", choices=selftest.SUITES + ("all",))
    return p


def config_from_args(a) -> RunConfig:
    opts = {"tol": a.tol, "strict": a.strict, "seed": a.seed}
    if a.command == "eval":
        if a.zfile:
            try:
                with open(a.zfile) as fh:
                    toks = [ln for ln in fh.read().split() if ln.strip()]
            except OSError as e:
                raise UsageError(f"cannot read {a.zfile}: {e}") from e
            opts["zfile"] = a.zfile
        else:
            toks = [t for t in a.zlist.split(",") if t.strip()]
        opts["z"] = [[z.real, z.imag] for z in map(parse_complex, toks)]
    elif a.command == "density":
        if a.n < 1:
            raise UsageError("--n must be positive")
        opts.update(xmin=a.xmin, xmax=a.xmax, n=a.n)
    elif a.command == "fid":
        probes = [x.strip() for x in a.probes.split(",") if x.strip()]
        bad = [x for x in probes if x not in PROBES]
        if bad:
            raise UsageError(f"unknown probes {bad}")
        opts.update(kmax=a.kmax, probes=probes)
    elif a.command == "trace":
        opts["anchor"] = a.anchor
    elif a.command == "indicator":
        opts["t"] = _floats(a.t, "--t")
        if a.yrange:
            yr = _floats(a.yrange, "--yrange")
            if len(yr) != 2 or not yr[0] < yr[1]:
                raise UsageError("--yrange needs lo,hi with lo < hi")
            opts["yrange"] = yr
        else:
            opts["yrange"] = None
    elif a.command == "selftest":
        opts["suite"] = a.suite
    return RunConfig(a.command, getattr(a, "spec", None), opts, a.out, a.format)


def execute(cfg: RunConfig):
    o = cfg.options
    d = parse_spec(cfg.spec) if cfg.spec is not None else None
    if cfg.command == "eval":
        return cmd_eval(d, [complex(*z) for z in o["z"]])
    if cfg.command == "density":
        xs = np.linspace(o["xmin"], o["xmax"], o["n"]).tolist()
        return cmd_density(d, xs, o["tol"] or 1e-6)
    if cfg.command == "fid":
        return cmd_fid(d, o["kmax"], o["probes"], o["seed"])
    if cfg.command == "trace":
        return cmd_trace(d, o["anchor"], o["tol"])
    if cfg.command == "indicator":
        return cmd_indicator(d, o["t"], tuple(o["yrange"]) if o["yrange"] else None)
    if cfg.command == "selftest":
        return cmd_selftest(o["suite"])
    raise UsageError(f"unknown command {cfg.command!r}")


def _emit(text, path):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = config_from_args(args)
        parse_spec(cfg.spec) if cfg.spec is not None else None
    except (UsageError, SpecParseError) as e:
        print(f"freefid: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:  # --help
        return EXIT_OK if not e.code else EXIT_USAGE

    try:
        results, errors, inconclusive, table = execute(cfg)
    except FreeFidError as e:
        results, errors, inconclusive, table = None, [_err(cfg.command, e)], False, None
    except ValueError as e:
        print(f"freefid: {e}", file=sys.stderr)
        return EXIT_USAGE

    if cfg.format == "csv" and table is not None:
        _emit(dump_csv(*table), cfg.out)
        for e in errors:
            print(f"freefid: {e.get('where')}: {e.get('message')}", file=sys.stderr)
    else:
        _emit(dump_json({"config": cfg.to_dict(), "results": results, "errors": errors}), cfg.out)

    if errors:
        return EXIT_NUMERIC
    if inconclusive and cfg.options.get("strict"):
        return EXIT_INCONCLUSIVE
    return EXIT_OK
