"""Command-line interface: ``qbargmann {eval,kernel-grid,transform,verify,limits}``.

Every command writes a metadata comment line, a header row and data rows
(CSV by default, JSON on request).  Output is deterministic for a given
configuration and seed.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .cstates import (
    MAX_LEVEL,
    coeff_h,
    eigenfunction_phi,
    measure_density_mu,
    measure_density_nu,
    normalization_N,
    weight_omega,
)
from .errors import DomainError, QSeriesError
from .kernel import overlap_closed, sigma_terminating
from .qcore import QParam, TruncationPolicy
from .transform import (
    bargmann_transform,
    builtin_signal,
    kernel_pointwise_limit_check,
    load_signal_csv,
    rule_for_signal,
    transform_limit_check,
)
from .kernel import kernel_limit_check
from .verification import REPORT_COLUMNS, format_report, run_suite

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

EVAL_FUNCTIONS = ("coeff_h", "phi", "omega", "N", "mu", "nu", "sigma")
_EPS = np.finfo(float).eps


class ConfigError(Exception):
    """Invalid command-line configuration (exit code 2)."""


# --- parsing helpers --------------------------------------------------------

def parse_complex(text: str) -> complex:
    try:
        return complex(text.strip().replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise ConfigError(f"cannot parse complex number {text!r}") from exc


def _parse_range(text: str, what: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"{what} range must look like a:b:n, got {text!r}")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad {what} range {text!r}: {exc}") from exc
    if n < 1:
        raise ConfigError(f"{what} range needs n >= 1")
    return np.linspace(a, b, n)


def parse_grid(text: str) -> tuple[np.ndarray, np.ndarray]:
    """``"re0:re1:n,im0:im1:n"`` into the two axes."""
    halves = text.split(",")
    if len(halves) != 2:
        raise ConfigError(f"--grid must look like re0:re1:n,im0:im1:n, got {text!r}")
    return _parse_range(halves[0], "real"), _parse_range(halves[1], "imaginary")


def grid_points(re: np.ndarray, im: np.ndarray) -> np.ndarray:
    """Points ordered with the real part outermost."""
    return (re[:, None] + 1j * im[None, :]).ravel()


def _z_points(args) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if args.grid:
        re, im = parse_grid(args.grid)
    else:
        z = parse_complex(args.z) if args.z else 0j
        re, im = np.array([z.real]), np.array([z.imag])
    return grid_points(re, im), re, im


def _xi_points(args) -> np.ndarray:
    return _parse_range(args.xi, "xi") if args.xi else np.array([0.0])


def _signal(args, q: float):
    name = args.signal
    if name.endswith(".csv"):
        try:
            return load_signal_csv(name)
        except OSError as exc:
            raise ConfigError(f"cannot read signal file: {exc}") from exc
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    try:
        return builtin_signal(name, q)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


# --- output -----------------------------------------------------------------

def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (np.integer,)):
        return str(int(v))
    return str(v)


def _json_value(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else repr(v)
    if isinstance(v, np.integer):
        return int(v)
    return v


def render(columns: Sequence[str], rows: Sequence[Sequence], meta: dict, fmt: str) -> str:
    if fmt == "json":
        doc = {"metadata": meta, "columns": list(columns),
               "rows": [[_json_value(v) for v in r] for r in rows]}
        return json.dumps(doc, indent=1) + "\n"
    buf = io.StringIO()
    buf.write("# " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _emit(args, columns, rows, meta):
    text = render(columns, rows, meta, args.format)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _meta(args, **extra) -> dict:
    meta = {"library": f"qbargmann-{__version__}", "command": args.command}
    for key in ("q", "m"):
        if hasattr(args, key):
            meta[key] = getattr(args, key)
    meta["rel_tol"] = args.tol
    meta.update(extra)
    return meta


# --- commands ---------------------------------------------------------------

def cmd_eval(args, policy: TruncationPolicy) -> int:
    q, m, fn = args.q, args.m, args.function
    if fn in ("phi", "omega"):
        xi = _xi_points(args)
        vals = eigenfunction_phi(args.j, xi, q) if fn == "phi" else weight_omega(xi, q)
        vals = np.atleast_1d(vals)
        rows = [[x, float(v), 0.0, 16 * _EPS * abs(v)] for x, v in zip(xi, vals)]
        columns = ["xi", "value_re", "value_im", "est_error"]
    else:
        zs, _, _ = _z_points(args)
        columns = ["z_re", "z_im", "value_re", "value_im", "est_error"]
        rows = []
        w = parse_complex(args.w) if args.w else None
        if fn == "sigma":
            if w is None:
                raise ConfigError("--function sigma needs --w")
            columns = ["z_re", "z_im", "w_re", "w_im", "value_re", "value_im", "est_error"]
        for z in zs:
            if fn == "coeff_h":
                v, err = complex(coeff_h(args.j, m, z, q)), None
            elif fn == "N":
                v, err = normalization_N(m, abs(z) ** 2, q, policy), policy.rel_tol
            elif fn == "mu":
                v, err = measure_density_mu(z, q, policy), policy.rel_tol
            elif fn == "nu":
                v, err = measure_density_nu(z, m, q, policy), policy.rel_tol
            else:
                v, size = sigma_terminating(complex(z), w, m, q)
                rows.append([z.real, z.imag, w.real, w.imag, v.real, v.imag,
                             16 * (m + 1) * _EPS * size])
                continue
            v = complex(v)
            est = abs(v) * (err if err is not None else 16 * _EPS)
            rows.append([z.real, z.imag, v.real, v.imag, est])
    meta = _meta(args, function=fn, j=args.j)
    _emit(args, columns, rows, meta)
    return EXIT_OK


def cmd_kernel_grid(args, policy: TruncationPolicy) -> int:
    zs, _, _ = _z_points(args)
    n = len(zs)
    K = np.empty((n, n), dtype=complex)
    err = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            kv = overlap_closed(zs[i], zs[j], args.m, args.q, policy)
            K[i, j], err[i, j] = kv.value, kv.est_error
    N = np.atleast_1d(normalization_N(args.m, np.abs(zs) ** 2, args.q, policy))
    rows = []
    for i in range(n):
        for j in range(n):
            herm = abs(K[i, j] - np.conj(K[j, i]))
            rows.append([i, j, zs[i].real, zs[i].imag, zs[j].real, zs[j].imag,
                         K[i, j].real, K[i, j].imag, err[i, j], herm, N[i]])
    columns = ["i", "j", "z_re", "z_im", "w_re", "w_im", "K_re", "K_im", "est_error",
               "hermiticity_defect", "N_z"]
    _emit(args, columns, rows, _meta(args, points=n))
    if args.figure:
        from .plotting import kernel_figure
        kernel_figure(args.figure, K, title=f"q={args.q}, m={args.m}")
    return EXIT_OK


def cmd_transform(args, policy: TruncationPolicy) -> int:
    q = args.q
    f = _signal(args, q)
    zs, re, im = _z_points(args)
    rule = rule_for_signal(f, q, tol=args.tol, order=20)
    coarse = rule_for_signal(f, q, tol=args.tol, order=12)
    B = np.atleast_1d(bargmann_transform(f, zs, args.m, q, rule, policy))
    Bc = np.atleast_1d(bargmann_transform(f, zs, args.m, q, coarse, policy))
    rows = [[z.real, z.imag, b.real, b.imag, abs(b - c)] for z, b, c in zip(zs, B, Bc)]
    columns = ["z_re", "z_im", "B_re", "B_im", "quad_error_est"]
    _emit(args, columns, rows, _meta(args, signal=f.label, nodes=len(rule.nodes)))
    if args.figure:
        from .plotting import transform_figure
        transform_figure(args.figure, re, im, B, title=f"{f.label}, q={q}, m={args.m}")
    return EXIT_OK


def cmd_verify(args, policy: TruncationPolicy) -> int:
    results = run_suite(args.seed, inject_corruption=args.inject_corruption)
    ok = all(r.passed for r in results)
    meta = _meta(args, seed=args.seed, status="pass" if ok else "FAIL")
    meta.pop("q", None)
    meta.pop("m", None)
    _emit(args, REPORT_COLUMNS, format_report(results), meta)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_limits(args, policy: TruncationPolicy) -> int:
    if not 1 <= args.kmin <= args.kmax <= 40:
        raise ConfigError("need 1 <= --kmin <= --kmax <= 40")
    qs = [1.0 - 2.0 ** -k for k in range(args.kmin, args.kmax + 1)] + [1.0 - 1e-5]
    z = parse_complex(args.z) if args.z else 0j
    w = parse_complex(args.w) if args.w else z
    xi = float(args.xi_point)
    f = _signal(args, 0.5)
    sweeps = {
        "kernel": kernel_limit_check(z, w, args.m, qs, policy),
        "transform_kernel": kernel_pointwise_limit_check(z, xi, args.m, qs, policy),
        "transform": transform_limit_check(f, z, args.m, qs, policy=policy),
    }
    rows = [[name, qv, 1.0 - qv, e] for name, table in sweeps.items() for qv, e in table]
    meta = _meta(args, z=z, w=w, xi=xi, signal=f.label)
    meta.pop("q", None)
    _emit(args, ["sweep", "q", "one_minus_q", "error"], rows, meta)
    if args.figure:
        from .plotting import limits_figure
        limits_figure(args.figure, sweeps, title=f"m={args.m}, z={z}, w={w}")
    return EXIT_OK


COMMANDS = {"eval": cmd_eval, "kernel-grid": cmd_kernel_grid, "transform": cmd_transform,
            "verify": cmd_verify, "limits": cmd_limits}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qbargmann",
                                description="q-deformed true-polyanalytic Bargmann transform toolkit")
    p.add_argument("--version", action="version", version=f"qbargmann {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, q=True, m=True):
        if q:
            sp.add_argument("--q", type=float, default=0.5, help="deformation parameter, 0 < q < 1")
        if m:
            sp.add_argument("--m", type=int, default=0, help="level index m >= 0")
        sp.add_argument("--tol", type=float, default=1e-13, help="relative truncation tolerance")
        sp.add_argument("--out", default="-", help="output path (default: stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--seed", type=int, default=42)

    sp = sub.add_parser("eval", help="evaluate a single function on points or a grid")
    common(sp)
    sp.add_argument("--function", choices=EVAL_FUNCTIONS, required=True)
    sp.add_argument("--j", type=int, default=0, help="basis index for coeff_h and phi")
    sp.add_argument("--z", help="single complex point, e.g. 1+0.5j")
    sp.add_argument("--w", help="second complex point (sigma)")
    sp.add_argument("--grid", help="z grid re0:re1:n,im0:im1:n")
    sp.add_argument("--xi", help="xi range a:b:n (phi, omega)")

    sp = sub.add_parser("kernel-grid", help="reproducing kernel over all pairs of grid points")
    common(sp)
    sp.add_argument("--z", help="single complex point")
    sp.add_argument("--grid", help="z grid re0:re1:n,im0:im1:n")
    sp.add_argument("--figure", help="also render a PNG/PDF heat map to this path")

    sp = sub.add_parser("transform", help="apply the transform to a signal on a z grid")
    common(sp)
    sp.add_argument("--signal", default="gaussian",
                    help="hermite_q:J, hermite:J, gaussian, indicator, zero, or a CSV path")
    sp.add_argument("--z", help="single complex point")
    sp.add_argument("--grid", help="z grid re0:re1:n,im0:im1:n")
    sp.add_argument("--figure", help="also render |B f| to this path")

    sp = sub.add_parser("verify", help="run the full verification suite")
    common(sp, q=False, m=False)
    sp.add_argument("--inject-corruption", action="store_true", help=argparse.SUPPRESS)

    sp = sub.add_parser("limits", help="q -> 1 error sweeps for kernel and transform")
    common(sp, q=False)
    sp.add_argument("--z", help="first point (default 0)")
    sp.add_argument("--w", help="second kernel point (default: same as z)")
    sp.add_argument("--xi", dest="xi_point", default="0.7", help="xi for the pointwise kernel sweep")
    sp.add_argument("--signal", default="gaussian")
    sp.add_argument("--kmin", type=int, default=4)
    sp.add_argument("--kmax", type=int, default=16)
    sp.add_argument("--figure", help="also render the sweeps to this path")
    return p


def _validate(args):
    if hasattr(args, "q"):
        try:
            QParam(args.q)
        except DomainError:
            raise ConfigError(f"--q must satisfy 0 < q < 1 (got {args.q})") from None
    if hasattr(args, "m") and not 0 <= args.m <= MAX_LEVEL:
        raise ConfigError(f"--m must lie in [0, {MAX_LEVEL}] (got {args.m})")
    if getattr(args, "j", 0) < 0:
        raise ConfigError("--j must be nonnegative")
    if not 0 < args.tol < 1:
        raise ConfigError(f"--tol must lie in (0, 1) (got {args.tol})")
    try:
        float(getattr(args, "xi_point", 0.0))
    except ValueError:
        raise ConfigError("--xi must be a number for limits") from None


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        policy = TruncationPolicy(rel_tol=args.tol)
        return COMMANDS[args.command](args, policy)
    except ConfigError as exc:
        print(f"qbargmann {args.command}: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QSeriesError, OverflowError, FloatingPointError) as exc:
        print(f"qbargmann {args.command}: numerical failure in {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
