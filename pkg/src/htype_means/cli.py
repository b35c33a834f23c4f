"""Command-line front end: verify, table, zeros, group-check."""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from . import kernels, lab, special
from .group import InadmissiblePair, build_htype
from .means import BiSphere, VSphere
from .report import SCHEMA_VERSION, VerificationReport
from .suites import DEFAULT_TOLERANCES, SUITE_NAMES, QuadConfig, RunConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# suites that need an actual H-type group; the rest only use (n, m) as parameters
GROUP_SUITES = {"structure", "eigen", "counterexample", "lp-threshold"}

_TOP_KEYS = {"n", "m", "quad", "tolerances", "suites", "output_dir", "seed"}
_QUAD_KEYS = {"sphere_level", "halfline_points", "interval_points"}


class ConfigError(ValueError):
    pass


def _pos_int(value, name: str, upper: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f"{name} must be a positive integer, got {value!r}")
    if upper is not None and value > upper:
        raise ConfigError(f"{name} must be at most {upper}, got {value}")
    return value


def parse_config(data: dict) -> RunConfig:
    """Strict parse: unknown keys, bad types and unknown suite or tolerance names raise ConfigError."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    extra = set(data) - _TOP_KEYS
    if extra:
        raise ConfigError(f"unknown config keys: {sorted(extra)}")
    cfg = RunConfig()
    if "n" in data:
        cfg.n = _pos_int(data["n"], "n", 64)
    if "m" in data:
        cfg.m = _pos_int(data["m"], "m", 32)
    quad = data.get("quad", {})
    if not isinstance(quad, dict):
        raise ConfigError("quad must be an object")
    extra = set(quad) - _QUAD_KEYS
    if extra:
        raise ConfigError(f"unknown quad keys: {sorted(extra)}")
    cfg.quad = QuadConfig(
        _pos_int(quad.get("sphere_level", QuadConfig.sphere_level), "quad.sphere_level", 64),
        _pos_int(quad.get("halfline_points", QuadConfig.halfline_points), "quad.halfline_points", 512),
        _pos_int(quad.get("interval_points", QuadConfig.interval_points), "quad.interval_points", 512),
    )
    tols = data.get("tolerances", {})
    if not isinstance(tols, dict):
        raise ConfigError("tolerances must be an object")
    for name, value in tols.items():
        if name not in DEFAULT_TOLERANCES:
            raise ConfigError(f"unknown tolerance {name!r}")
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not value > 0:
            raise ConfigError(f"tolerance {name!r} must be a positive number")
    cfg.tolerances = {k: float(v) for k, v in tols.items()}
    if "suites" in data:
        suites = data["suites"]
        if not isinstance(suites, list) or not suites:
            raise ConfigError("suites must be a non-empty list")
        for s in suites:
            if s not in SUITE_NAMES:
                raise ConfigError(f"unknown suite {s!r}")
        cfg.suites = list(suites)
    if "output_dir" in data:
        if not isinstance(data["output_dir"], str):
            raise ConfigError("output_dir must be a string")
        cfg.output_dir = data["output_dir"]
    if "seed" in data:
        seed = data["seed"]
        if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
            raise ConfigError("seed must be an integer in [0, 2^64)")
        cfg.seed = seed
    return cfg


def load_config(path: str | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return parse_config(data)


def atomic_write(path: str | Path, text: str) -> None:
    """Write text (UTF-8, LF) to a temp file in the target directory, then rename over path."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def build_report(cfg: RunConfig, reports: list[VerificationReport], timing: bool = False, wall: float | None = None) -> dict:
    out = {
        "schema": SCHEMA_VERSION,
        "config": cfg.echo(),
        "suites": [r.to_dict(timing=timing) for r in reports],
        "pass": all(r.passed for r in reports),
    }
    if timing and wall is not None:
        out["wall_time"] = round(wall, 6)
    return out


def _json_text(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


# -- subcommands ------------------------------------------------------------------


def cmd_verify(args) -> int:
    try:
        cfg = load_config(args.config)
        if args.n is not None:
            cfg.n = _pos_int(args.n, "n", 64)
        if args.m is not None:
            cfg.m = _pos_int(args.m, "m", 32)
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise ConfigError("seed must be an integer in [0, 2^64)")
            cfg.seed = args.seed
        if args.suite:
            bad = [s for s in args.suite if s not in SUITE_NAMES]
            if bad:
                raise ConfigError(f"unknown suite(s): {bad}")
            cfg.suites = list(args.suite)
        if args.out is not None:
            cfg.output_dir = args.out
        if GROUP_SUITES.intersection(cfg.suites):
            build_htype(cfg.n, cfg.m)
    except (ConfigError, InadmissiblePair) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    start = time.perf_counter()
    reports = []
    for name in cfg.suites:
        rep = run_suite(name, cfg)
        reports.append(rep)
        status = "PASS" if rep.passed else "FAIL"
        print(f"{name:16s} {status}  ({len(rep.checks)} checks)")
        for chk in rep.failures():
            value = chk.rel_err if chk.metric == "rel" else chk.max_abs_err
            print(f"    {chk.name}: {chk.metric}={value:.3e} tol={chk.tol:.1e}")
    doc = build_report(cfg, reports, timing=args.timing, wall=time.perf_counter() - start)
    target = Path(cfg.output_dir) / "report.json"
    try:
        atomic_write(target, _json_text(doc))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"report: {target}")
    return EXIT_OK if doc["pass"] else EXIT_FAIL


def _json_arg(text: str, what: str) -> dict:
    """Inline JSON object or a path to a file holding one."""
    try:
        raw = text if text.lstrip().startswith("{") else Path(text).read_text(encoding="utf-8")
        data = json.loads(raw)
    except OSError as exc:
        raise ConfigError(f"cannot read {what} {text}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{what}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{what} must be a JSON object")
    return data


def _require(spec: dict, allowed: set, required: set, what: str) -> None:
    extra = set(spec) - allowed
    if extra:
        raise ConfigError(f"unknown {what} keys: {sorted(extra)}")
    missing = required - set(spec)
    if missing:
        raise ConfigError(f"{what} is missing {sorted(missing)}")


_KIND_ALIASES = {
    "component": "component",
    "series": "series",
    "closed": "closed",
    "closedform": "closed",
    "abel": "abel",
    "riesz": "riesz",
    "rieszabel": "riesz",
    "counterexample": "counterexample",
}


def make_evaluator(spec: dict):
    """(rz, rt) -> complex for a kernel or counterexample description.

    kind is case-insensitive; ClosedForm and RieszAbel are accepted for closed and riesz.
    """
    raw = spec.get("kind")
    kind = _KIND_ALIASES.get(raw.lower()) if isinstance(raw, str) else None
    common = {"kind", "n", "m"}
    if kind in ("component", "series", "closed", "abel", "riesz"):
        extra = {"component": {"j"}, "series": {"k"}, "closed": {"k"}, "abel": {"r"}, "riesz": {"r", "j"}}[kind]
        _require(spec, common | extra, common | extra, "kernel")
        n, m = _pos_int(spec["n"], "n", 64), _pos_int(spec["m"], "m", 32)
        if m < 2:
            raise ConfigError("kernels need m >= 2")
        if "r" in spec and not 0 < float(spec["r"]) < 1:
            raise ConfigError("r must lie in (0, 1)")
        axis = int(spec["j"]) if kind == "riesz" else 0
        if not 0 <= axis < m:
            raise ConfigError("component index out of range")

        def place(rz, rt):
            z = np.zeros(2 * n)
            z[0] = rz
            t = np.zeros(m)
            t[axis] = rt
            return z, t

        funcs = {
            "component": lambda z, t: kernels.ak_component(int(spec["j"]), n, m, z, t),
            "series": lambda z, t: kernels.ak_series(int(spec["k"]), n, m, z, t),
            "closed": lambda z, t: kernels.ak_closed_form(int(spec["k"]), n, m, z, t),
            "abel": lambda z, t: kernels.abel_kernel(float(spec["r"]), n, m, z, t),
            "riesz": lambda z, t: kernels.riesz_abel_kernel(float(spec["r"]), n, m, z, t, axis),
        }
        f = funcs[kind]
        return lambda rz, rt: complex(f(*place(rz, rt)))
    if kind == "counterexample":
        _require(spec, common | {"measure", "k", "r", "s", "choice"}, common | {"measure", "k", "r"}, "counterexample")
        g = build_htype(_pos_int(spec["n"], "n", 64), _pos_int(spec["m"], "m", 32))
        if spec["measure"] == "vsphere":
            mu = VSphere(float(spec["r"]))
        elif spec["measure"] == "bisphere":
            if "s" not in spec:
                raise ConfigError("bisphere counterexample needs s")
            mu = BiSphere(float(spec["r"]), float(spec["s"]))
        else:
            raise ConfigError("measure must be 'vsphere' or 'bisphere'")
        c = lab.make_counterexample(g, mu, int(spec["k"]), spec.get("choice", "bessel"))

        def ev(rz, rt):
            z = np.zeros(2 * g.n)
            z[0] = rz
            t = np.zeros(g.m)
            t[0] = rt
            return complex(c.field(z, t))

        return ev
    raise ConfigError(f"unknown kind {raw!r}")


def render_table(evaluate, rz_list, rt_list) -> str:
    lines = ["rz,rt,re,im"]
    for rz in rz_list:
        for rt in rt_list:
            v = evaluate(float(rz), float(rt))
            lines.append(f"{float(rz):.17g},{float(rt):.17g},{v.real:.17g},{v.imag:.17g}")
    return "\n".join(lines) + "\n"


def cmd_table(args) -> int:
    try:
        spec = _json_arg(args.kernel, "kernel spec")
        grid = _json_arg(args.grid, "grid")
        _require(grid, {"rz", "rt"}, {"rz", "rt"}, "grid")
        for key in ("rz", "rt"):
            vals = grid[key]
            if not isinstance(vals, list) or not vals or not all(isinstance(v, (int, float)) and not isinstance(v, bool) and v >= 0 for v in vals):
                raise ConfigError(f"grid.{key} must be a non-empty list of nonnegative numbers")
        evaluate = make_evaluator(spec)
        text = render_table(evaluate, grid["rz"], grid["rt"])
    except (ConfigError, InadmissiblePair, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        atomic_write(args.out, text)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"wrote {len(grid['rz']) * len(grid['rt'])} rows to {args.out}")
    return EXIT_OK


def cmd_zeros(args) -> int:
    try:
        if not 1 <= args.count <= 50:
            raise ConfigError("count must lie in 1..50")
        if args.family == "bessel":
            zeros = special.bessel_zeros(float(args.order), args.count)
        else:
            # without --k: all zeros of L_count^order
            k = args.count if args.k is None else args.k
            if not 1 <= k <= 60:
                raise ConfigError("k must lie in 1..60")
            if args.count > k:
                raise ConfigError(f"L_{k} has only {k} zeros")
            zeros = special.laguerre_zeros(k, float(args.order))[: args.count]
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for z in zeros:
        print(f"{z:.17g}")
    return EXIT_OK


def cmd_group_check(args) -> int:
    cfg = RunConfig(n=args.n, m=args.m, suites=["structure"])
    try:
        build_htype(args.n, args.m)
    except (InadmissiblePair, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rep = run_suite("structure", cfg)
    sys.stdout.write(_json_text(build_report(cfg, [rep])))
    return EXIT_OK if rep.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="htype-means", description="Spherical means and spectral kernels on H-type groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run verification suites and write report.json")
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--suite", action="extend", nargs="+", help=f"suite to run (repeatable): {', '.join(SUITE_NAMES)}")
    p.add_argument("--out", help="output directory for report.json")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--timing", action="store_true", help="include wall times (reports then differ run to run)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table", help="tabulate a kernel or counterexample on a radial grid as CSV")
    p.add_argument("--kernel", required=True, help="JSON object or path, e.g. '{\"kind\": \"abel\", \"r\": 0.3, \"n\": 1, \"m\": 2}'")
    p.add_argument("--grid", required=True, help="JSON object or path with lists rz and rt")
    p.add_argument("--out", required=True, help="CSV file to write")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("zeros", help="print positive zeros of J_order or L_k^order")
    p.add_argument("--family", choices=("bessel", "laguerre"), required=True)
    p.add_argument("--order", type=float, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--k", type=int, help="Laguerre degree (default: count)")
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("group-check", help="build the group and print its structure report")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_group_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
