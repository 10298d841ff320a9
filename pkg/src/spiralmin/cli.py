"""spiralmin command line.

Exit codes: 0 ok, 2 bad input or domain error, 3 empty/degenerate domain,
4 closure target out of range (or no root), 5 a verification failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .closure import (
    Symmetry,
    build_certificate,
    double_closure_solve,
    parse_rational,
    solve_for_target,
)
from .errors import (
    Degenerate,
    DomainError,
    EmptyDomain,
    InfeasibleRatio,
    LeftDomain,
    NonConvergence,
    NoRootFound,
    SpiralminError,
    TargetOutOfRange,
    UnsupportedCase,
)
from .geometry import (
    Equator,
    Point,
    ProductImmersion,
    ctotally_real_check,
    great_circle_check,
    legendrian_angle_variation,
    mean_curvature_fd,
    shape_traces,
    takahashi_residual,
)
from .pendulum import extend_reflect, integrate_basic, perturb_rates
from .profile import SpinParams, basic_domain, critical_point, profile_value, threshold
from .quadrature import angle_integrals
from .steady import NEG_INF, POS_INF, steady_curve, steady_ratio, steady_trace

EXIT_OK, EXIT_INPUT, EXIT_EMPTY, EXIT_TARGET, EXIT_VERIFY = 0, 2, 3, 4, 5

DEFAULTS = {
    "samples": 512,
    "rounds": 1,
    "format": "json",
    "trace_tol": 1e-8,
    "fd_tol": 1e-4,
    "fd_h": 1e-3,
    "legendrian_tol": 1e-8,
    "takahashi_tol": 1e-7,
    "check_every": 16,
}

COLUMNS = ("s", "t_arc", "a", "b", "s1", "s2")


# -- output ------------------------------------------------------------------------


def _num(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def dumps(obj, indent: int = 0) -> str:
    """JSON with insertion-ordered keys and 17-significant-digit floats."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent + 1) for v in obj) + "\n" + end + "]"
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, Fraction):
        return json.dumps(f"{obj.numerator}/{obj.denominator}")
    return _num(obj)


def _emit(obj, out: str | None) -> None:
    text = dumps(obj) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _pi(x: float) -> float:
    return x / math.pi


# -- argument helpers ----------------------------------------------------------------


def _ratio(text: str):
    t = text.strip().lower()
    if t in ("inf", "+inf"):
        return POS_INF
    if t == "-inf":
        return NEG_INF
    if "/" in t:
        return parse_rational(t)
    try:
        return float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _finite(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return v


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except DomainError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _add_k(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k1", type=int, required=True)
    p.add_argument("--k2", type=int, required=True)


def _add_params(p: argparse.ArgumentParser, ctilde: bool = True) -> None:
    _add_k(p)
    p.add_argument("--C", type=_finite, required=True)
    if ctilde:
        p.add_argument("--Ctilde", type=_finite, required=True)


def _add_curve_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rounds", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)


def _params(ns) -> SpinParams:
    return SpinParams(ns.k1, ns.k2, ns.C, ns.Ctilde)


def _curve(ns):
    c = integrate_basic(_params(ns), ns.samples)
    return extend_reflect(c, ns.rounds) if ns.rounds > 1 else c


def _curve_json(curve, params: SpinParams) -> dict:
    A = curve.arrays()
    return {
        "k1": params.k1,
        "k2": params.k2,
        "C": params.C,
        "Ctilde": params.Ctilde,
        "z_L": curve.domain.z_L,
        "z_R": curve.domain.z_R,
        "delta_s1": curve.delta_s1,
        "delta_s2": curve.delta_s2,
        "rounds": curve.rounds,
        "samples": [{k: float(A[k][i]) for k in COLUMNS} for i in range(len(A["s"]))],
    }


def _curve_csv(curve) -> str:
    A = curve.arrays()
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(COLUMNS)
    for i in range(len(A["s"])):
        w.writerow([_num(A[k][i]) for k in COLUMNS])
    return buf.getvalue()


# -- subcommands --------------------------------------------------------------------------


def cmd_profile(ns) -> int:
    s_c = critical_point(ns.k1, ns.k2, ns.C)
    m = threshold(ns.k1, ns.k2, ns.C)
    rows = [{"s": s, "s_over_pi": _pi(s), "P": profile_value(ns.k1, ns.k2, ns.C, s)} for s in ns.s or []]
    _emit(
        {"k1": ns.k1, "k2": ns.k2, "C": ns.C, "s_crit": s_c, "s_crit_over_pi": _pi(s_c), "threshold": m, "values": rows},
        ns.out,
    )
    return EXIT_OK


def cmd_domain(ns) -> int:
    d = basic_domain(_params(ns))
    _emit(
        {
            "k1": ns.k1, "k2": ns.k2, "C": ns.C, "Ctilde": ns.Ctilde,
            "z_L": d.z_L, "z_R": d.z_R, "s_crit": d.s_crit, "threshold": d.threshold,
            "z_L_over_pi": _pi(d.z_L), "z_R_over_pi": _pi(d.z_R),
        },
        ns.out,
    )  # fmt: skip
    return EXIT_OK


def cmd_integrals(ns) -> int:
    I = angle_integrals(_params(ns))
    _emit(
        {
            "k1": ns.k1, "k2": ns.k2, "C": ns.C, "Ctilde": ns.Ctilde,
            "J1": I.J1, "J2": I.J2, "J1_over_pi": _pi(I.J1), "J2_over_pi": _pi(I.J2),
            "s2_advance_over_pi": _pi(ns.C * I.J2) if ns.C != 0 else 0.0,
            "estimated_error": I.estimated_error,
        },
        ns.out,
    )  # fmt: skip
    return EXIT_OK


def cmd_solve_curve(ns) -> int:
    params = _params(ns)
    curve = _curve(ns)
    if ns.out:
        if ns.format == "csv":
            Path(ns.out).write_text(_curve_csv(curve))
        else:
            Path(ns.out).write_text(dumps(_curve_json(curve, params)) + "\n")
    I = angle_integrals(params)
    _emit(
        {
            "delta_s1": curve.delta_s1, "delta_s2": curve.delta_s2,
            "delta_s1_over_pi": _pi(curve.delta_s1), "delta_s2_over_pi": _pi(curve.delta_s2),
            "J1": I.J1, "J2": I.J2, "rounds": curve.rounds, "n_samples": len(curve.arrays()["s"]),
            "out": ns.out,
        },
        None,
    )  # fmt: skip
    return EXIT_OK


def cmd_steady(ns) -> int:
    a, b = steady_ratio(ns.k1, ns.k2, ns.c)
    info = {"k1": ns.k1, "k2": ns.k2, "c": repr(ns.c) if hasattr(ns.c, "sign") else ns.c, "a": a, "b": b}
    info["trace"] = steady_trace(ns.k1, ns.k2, a, b, ns.c)
    if not hasattr(ns.c, "sign"):
        sc = steady_curve(a, b, ns.c)
        info["t_period"] = sc.period
        info["closes"] = sc.closes
    _emit(info, ns.out)
    return EXIT_OK


def _search_one(job: tuple) -> dict:
    k1, k2, C, q, q2, seed, symmetry, pi_id = job
    if q2 is None:
        roots = solve_for_target(k1, k2, C, q)
        Ct = roots[0]
        if C == 0:
            q2 = Fraction(0)
        elif C == -1:
            # J2 = (k1+1)/(k2+1) J1 on this family, so C J2 / pi is exact
            q2 = -Fraction(k1 + 1, k2 + 1) * q
        else:
            raise UnsupportedCase("--q2 is required unless C is 0 or -1")
        extra = {"all_roots": list(roots)}
    else:
        C, Ct = double_closure_solve(k1, k2, q, q2, seed)
        extra = {}
    cert = build_certificate(k1, k2, C, Ct, q, q2, symmetry, pi_id).to_json()
    cert.update(extra)
    return cert


def _scan_targets(scan) -> list[Fraction]:
    if not scan:
        return []
    lo, hi = parse_rational(scan[0]), parse_rational(scan[1])
    try:
        dmax = int(scan[2])
    except ValueError:
        raise DomainError(f"DMAX must be an integer, got {scan[2]!r}") from None
    if dmax < 1 or lo > hi:
        raise DomainError("--scan needs LO <= HI and DMAX >= 1")
    found = {Fraction(n, d) for d in range(1, dmax + 1) for n in range(math.ceil(lo * d), math.floor(hi * d) + 1)}
    return sorted(found)


def cmd_search(ns) -> int:
    if ns.q2 is not None and (ns.seed_C is None or ns.seed_Ctilde is None):
        raise DomainError("--q2 needs --seed-C and --seed-Ctilde")
    seed = (ns.seed_C, ns.seed_Ctilde)
    C = ns.C if ns.C is not None else ns.seed_C
    if C is None:
        raise DomainError("--C is required for single-target search")
    targets = list(ns.q or []) + _scan_targets(ns.scan)
    if not targets:
        raise DomainError("give --q or --scan")
    jobs = [(ns.k1, ns.k2, C, q, ns.q2, seed, ns.symmetry, not ns.no_pi_identification) for q in targets]
    if len(jobs) > 1:
        cap = int(os.environ.get("SPIRALMIN_THREADS", "0") or 0) or (os.cpu_count() or 1)
        with ProcessPoolExecutor(max_workers=max(1, min(cap, len(jobs)))) as pool:
            certs = list(pool.map(_search_one, jobs))
    else:
        certs = [_search_one(jobs[0])]
    _emit(certs[0] if len(certs) == 1 else certs, ns.out)
    return EXIT_OK


def _factor(k: int):
    return Equator(k) if k else Point()


def _verify_curve(ns):
    if ns.curve:
        data = json.loads(Path(ns.curve).read_text())
        ns.k1, ns.k2, ns.C, ns.Ctilde = data["k1"], data["k2"], float(data["C"]), float(data["Ctilde"])
        ns.rounds = int(data.get("rounds", 1))
        ns.samples = len(data["samples"]) - 1
        if ns.rounds > 1:
            ns.samples = (len(data["samples"]) - 1) // ns.rounds
        curve = _curve(ns)
        A = curve.arrays()
        stored = np.array([[row[k] for k in COLUMNS] for row in data["samples"]])
        fresh = np.column_stack([A[k] for k in COLUMNS])
        if stored.shape != fresh.shape or np.max(np.abs(stored - fresh)) > 1e-12:
            raise DomainError("curve file does not match a re-integration of its parameters")
        return curve
    if ns.steady:
        a, b, c = ns.steady
        return steady_curve(float(a), float(b), c, ns.samples, ns.k1, ns.k2)
    for name in ("C", "Ctilde"):
        if getattr(ns, name) is None:
            raise DomainError(f"--{name} is required without --curve or --steady")
    return _curve(ns)


def cmd_verify(ns) -> int:
    curve = _verify_curve(ns)
    if ns.perturb:
        curve = perturb_rates(curve, ns.perturb)
    params = curve.sample_params()[:: ns.check_every]
    suites = ["traces", "legendrian", "takahashi", "fd", "great-circle"] if ns.suite == "all" else [ns.suite]
    report: dict = {"k1": curve.k1, "k2": curve.k2, "suites": {}}
    ok = True
    legendrian_curve = _is_legendrian(curve)
    for suite in suites:
        if ns.suite == "all" and suite == "legendrian" and not legendrian_curve:
            report["suites"][suite] = {"skipped": "curve is not C-totally real"}
            continue
        if ns.suite == "all" and suite == "great-circle" and (curve.k1 or curve.k2):
            report["suites"][suite] = {"skipped": "needs k1 = k2 = 0"}
            continue
        if suite == "traces":
            r = max(max(abs(v) for v in shape_traces(curve, float(x))) for x in params)
            res = {"max_residual": r, "tol": ns.trace_tol, "pass": r < ns.trace_tol}
        elif suite == "legendrian":
            r = legendrian_angle_variation(curve, params)
            res = {"variation": r, "tol": ns.legendrian_tol, "pass": r < ns.legendrian_tol}
        elif suite == "takahashi":
            r = max(max(takahashi_residual(curve, float(x))) for x in params)
            res = {"max_residual": r, "tol": ns.takahashi_tol, "pass": r < ns.takahashi_tol}
        elif suite == "fd":
            prod = ProductImmersion(curve, _factor(curve.k1), _factor(curve.k2))
            pts = params[:: max(1, len(params) // 8)]
            r = max(mean_curvature_fd(prod, [float(x)] + [0.1] * (prod.dim - 1), ns.fd_h) for x in pts)
            res = {"max_mean_curvature": r, "h": ns.fd_h, "tol": ns.fd_tol, "pass": r < ns.fd_tol}
        else:
            g = great_circle_check(curve)
            res = {"curvature_residual": g.curvature_residual, "speed_residual": g.speed_residual, "pass": g.passed}
        report["suites"][suite] = res
        ok &= bool(res["pass"])
    report["pass"] = ok
    _emit(report, ns.out)
    return EXIT_OK if ok else EXIT_VERIFY


def _is_legendrian(curve) -> bool:
    return ctotally_real_check(curve, 1e-8)


def cmd_export(ns) -> int:
    params = _params(ns)
    curve = _curve(ns)
    if ns.format == "csv":
        Path(ns.out).write_text(_curve_csv(curve))
        return EXIT_OK
    if ns.format == "json":
        Path(ns.out).write_text(dumps(_curve_json(curve, params)) + "\n")
        return EXIT_OK
    A = curve.arrays()
    g1 = A["a"] * np.exp(1j * A["s1"])
    g2 = A["b"] * np.exp(1j * A["s2"])
    lines = [
        f"# spiralmin {__version__} curve in S^3 as (Re g1, Im g1, Re g2, Im g2)",
        f"# k1={params.k1} k2={params.k2} C={_num(params.C)} Ctilde={_num(params.Ctilde)} rounds={curve.rounds}",
    ]
    lines += [f"v {_num(p.real)} {_num(p.imag)} {_num(q.real)} {_num(q.imag)}" for p, q in zip(g1, g2)]
    Path(ns.out).write_text("\n".join(lines) + "\n")
    sidecar = {
        "k1": params.k1, "k2": params.k2, "C": params.C, "Ctilde": params.Ctilde,
        "rounds": curve.rounds, "n_vertices": len(g1),
        "coordinates": ["Re gamma1", "Im gamma1", "Re gamma2", "Im gamma2"],
        "chart": "vertex i is sample i; t_arc below",
        "t_arc": [float(t) for t in A["t_arc"]],
    }  # fmt: skip
    Path(str(ns.out) + ".json").write_text(dumps(sidecar) + "\n")
    return EXIT_OK


# -- parser --------------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="spiralmin", description="Spiral minimal products: curves, closure search, checks.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--config", help="JSON file of option defaults; flags win")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    q = sub.add_parser("profile", help="critical point, threshold, profile values")
    _add_params(q, ctilde=False)
    q.add_argument("--s", type=_finite, nargs="*")
    q.add_argument("--out")
    q.set_defaults(func=cmd_profile)

    q = sub.add_parser("domain", help="basic domain endpoints")
    _add_params(q)
    q.add_argument("--out")
    q.set_defaults(func=cmd_domain)

    q = sub.add_parser("integrals", help="J1 and J2")
    _add_params(q)
    q.add_argument("--out")
    q.set_defaults(func=cmd_integrals)

    q = sub.add_parser("solve-curve", help="sample a generating curve")
    _add_params(q)
    _add_curve_opts(q)
    q.add_argument("--out")
    q.add_argument("--format", choices=("json", "csv"), default=None)
    q.set_defaults(func=cmd_solve_curve)

    q = sub.add_parser("steady", help="steady (a, b) for a phase ratio c")
    _add_k(q)
    q.add_argument("--c", type=_ratio, required=True, help="float, p/q, inf or -inf")
    q.add_argument("--out")
    q.set_defaults(func=cmd_steady)

    q = sub.add_parser("search", help="solve for rational closure and certify")
    _add_k(q)
    q.add_argument("--C", type=_finite)
    q.add_argument("--q", type=_rational, action="append", help="J1/pi as p/q; repeat for a sweep")
    q.add_argument(
        "--scan", nargs=3, metavar=("LO", "HI", "DMAX"), help="sweep every p/d in [LO, HI] with d <= DMAX"
    )
    q.add_argument("--q2", type=_rational, help="C J2/pi as p/q (two-target solve)")
    q.add_argument("--seed-C", type=_finite)
    q.add_argument("--seed-Ctilde", type=_finite)
    q.add_argument("--symmetry", choices=[s.value for s in Symmetry], default=Symmetry.ANTIPODAL.value)
    q.add_argument("--no-pi-identification", action="store_true")
    q.add_argument("--out")
    q.set_defaults(func=cmd_search)

    q = sub.add_parser("verify", help="run minimality checks")
    _add_k(q)
    q.add_argument("--C", type=_finite)
    q.add_argument("--Ctilde", type=_finite)
    q.add_argument("--curve", help="curve JSON written by solve-curve")
    q.add_argument("--steady", nargs=3, type=_ratio, metavar=("A", "B", "C"))
    q.add_argument("--perturb", type=_finite, default=0.0, help="relative C~ perturbation of the phase equations")
    q.add_argument(
        "--suite", choices=("traces", "legendrian", "takahashi", "fd", "great-circle", "all"), default="all"
    )
    _add_curve_opts(q)
    for name in ("trace_tol", "fd_tol", "fd_h", "legendrian_tol", "takahashi_tol"):
        q.add_argument("--" + name.replace("_", "-"), dest=name, type=_finite, default=None)
    q.add_argument("--check-every", type=int, default=None)
    q.add_argument("--out")
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("export", help="write a curve as json, csv or obj")
    _add_params(q)
    _add_curve_opts(q)
    q.add_argument("--format", choices=("json", "csv", "obj"), default=None)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_export)
    return p


def _apply_config(ns) -> None:
    conf = {}
    if ns.config:
        try:
            conf = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise DomainError(f"cannot read config: {e}") from None
        if not isinstance(conf, dict):
            raise DomainError("config must be a JSON object")
    for key, default in DEFAULTS.items():
        if hasattr(ns, key) and getattr(ns, key) is None:
            setattr(ns, key, conf.get(key, default))
    if getattr(ns, "samples", 16) < 16:
        raise DomainError("samples must be at least 16")
    if getattr(ns, "rounds", 1) < 1:
        raise DomainError("rounds must be positive")
    for key in ("trace_tol", "fd_tol", "legendrian_tol", "takahashi_tol"):
        if hasattr(ns, key) and not getattr(ns, key) > 0:
            raise DomainError(f"{key} must be positive")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        _apply_config(ns)
        return ns.func(ns)
    except (EmptyDomain, Degenerate) as e:
        print(f"spiralmin: {e}", file=sys.stderr)
        return EXIT_EMPTY
    except (TargetOutOfRange, NoRootFound) as e:
        print(f"spiralmin: {e}", file=sys.stderr)
        return EXIT_TARGET
    except (DomainError, UnsupportedCase, InfeasibleRatio, LeftDomain, NonConvergence, SpiralminError, ValueError) as e:
        print(f"spiralmin: {e}", file=sys.stderr)
        return EXIT_INPUT
