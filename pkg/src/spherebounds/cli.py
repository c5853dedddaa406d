"""Command-line entry point: ``spherebounds <command> [flags]``.

Exit status: 0 success, 1 a bound was violated, 2 usage or domain error,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .bounds import BoundFamily, verify_spectrum
from .capsolver import Boundary, CapSpec, cap_spectrum, cap_spectrum_at_least
from .conjugate import F_S2_conjugate_lower, conjugate_piecewise
from .emit import Panel, Series, Table, to_csv, to_json, to_svg
from .errors import NumericalFailure
from .harmonics import MAX_LEVEL, identity_residuals, random_points
from .riesz import F_prime_S2, build_F_piecewise, classical_gap, power_conjugate
from .spectrum import (
    DomainSpec,
    ball_volume,
    classical_constant,
    eigenvalue,
    f_closed,
    f_oracle,
    multiplicity,
    multiplicity_partial_sum,
    sphere_area,
)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3

NEUMANN_FAMILIES = (BoundFamily.NEUMANN_SUM_UPPER_S2, BoundFamily.NEUMANN_SUM_UPPER_GENERAL,
                    BoundFamily.NEUMANN_EIGENVALUE_UPPER)
DIRICHLET_FAMILIES = (BoundFamily.DIRICHLET_SUM_LOWER_S2, BoundFamily.DIRICHLET_EIGENVALUE_LOWER,
                      BoundFamily.DIRICHLET_LAMBDA1_LOWER)


class UsageError(Exception):
    pass


def _positive(kind):
    def parse(text):
        value = kind(text)
        if not value > 0:
            raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
        return value
    return parse


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _dimension(text):
    value = int(text)
    if value < 3:
        raise argparse.ArgumentTypeError(f"d must be >= 3, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    shared.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")
    shared.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="spherebounds",
                                     description="Eigenvalue bounds for domains on spheres.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ladder", parents=[shared], help="sphere eigenvalues and multiplicities")
    p.add_argument("--d", type=_dimension, default=3)
    p.add_argument("--n-max", type=_nonneg_int, default=10)

    p = sub.add_parser("curves", parents=[shared], help="Riesz-mean majorant and its conjugate")
    p.add_argument("--d", type=_dimension, default=3)
    p.add_argument("--area", type=_positive(float), default=None,
                   help="domain measure (default: the whole sphere)")
    p.add_argument("--lambda-max", type=float, required=True)
    p.add_argument("--samples", type=_positive(int), default=401)

    p = sub.add_parser("cap", parents=[shared], help="eigenvalues of a geodesic cap")
    p.add_argument("--theta0", type=float, required=True)
    p.add_argument("--bc", choices=[b.value for b in Boundary], required=True)
    p.add_argument("--lambda-max", type=_positive(float), required=True)

    p = sub.add_parser("verify", parents=[shared], help="check a spectrum against bound families")
    where = p.add_mutually_exclusive_group(required=True)
    where.add_argument("--whole-sphere", action="store_true")
    where.add_argument("--theta0", type=float)
    where.add_argument("--spectrum", type=Path, help="file of eigenvalues (one per line, or CSV "
                                                     "with an 'eigenvalue' column)")
    p.add_argument("--area", type=_positive(float), help="domain measure for --spectrum")
    p.add_argument("--bc", choices=[b.value for b in Boundary], default="dirichlet")
    p.add_argument("--family", action="append", choices=[f.value for f in BoundFamily])
    p.add_argument("--n-max", type=_positive(int), default=40)
    p.add_argument("--d", type=_dimension, default=3)
    p.add_argument("--strict", action="store_true",
                   help="use the solver's error bars instead of a relative tolerance")

    p = sub.add_parser("identities", parents=[shared], help="harmonic identity residuals")
    p.add_argument("--n-max", type=_nonneg_int, default=MAX_LEVEL)
    p.add_argument("--samples", type=_positive(int), default=200)

    p = sub.add_parser("constants", parents=[shared], help="sphere areas and Weyl constants")
    p.add_argument("--d-max", type=_dimension, default=10)
    p.add_argument("--sigma", type=float, default=1.0)
    return parser


def cmd_ladder(args) -> dict[str, Table]:
    d = args.d
    t = Table(["n", "lambda_n", "multiplicity", "cumulative", "f_closed", "f_oracle"])
    for n in range(args.n_max + 1):
        t.rows.append([n, eigenvalue(d, n), multiplicity(d, n), multiplicity_partial_sum(d, n),
                       f_closed(d, n), f_oracle(d, n)])
    return {"ladder": t}


def _curve_tables(d: int, area: float, lambda_max: float, samples: int):
    domain = DomainSpec(d, area)
    F = build_F_piecewise(domain, lambda_max)
    c = classical_constant(1, d - 1) * area
    a = (d + 1) / 2
    alpha = area / (8 * math.pi)
    breaks = [x for x in F.xs if x <= lambda_max]

    lams = sorted(set(np.linspace(0.0, lambda_max, samples).tolist()) | set(breaks))
    cols = ["lambda", "F", "parabola", "gap", "is_breakpoint"] + (["F_prime"] if d == 3 else [])
    riesz = Table(cols)
    for lam in lams:
        row = [lam, F(lam), c * lam ** a, classical_gap(domain, lam), lam in breaks]
        if d == 3:
            row.append(F_prime_S2(alpha, lam))
        riesz.rows.append(row)

    p_max = F.max_slope
    tangency = [2 * alpha * x for x in breaks] if d == 3 else []
    tangency = [p for p in tangency if p <= p_max]
    ps = sorted(set(np.linspace(0.0, p_max, samples).tolist()) | set(tangency))
    cols = ["p", "F_conj", "parabola_conj"] + (["lower", "is_tangency"] if d == 3 else [])
    conj = Table(cols)
    for p in ps:
        row = [p, conjugate_piecewise(F, p), power_conjugate(c, a, p)]
        if d == 3:
            row += [F_S2_conjugate_lower(alpha, p), p in tangency]
        conj.rows.append(row)
    return riesz, conj, breaks, tangency


def cmd_curves(args):
    if not args.lambda_max > 0:
        raise UsageError(f"--lambda-max must be > 0, got {args.lambda_max}")
    area = args.area if args.area is not None else sphere_area(args.d)
    riesz, conj, breaks, tangency = _curve_tables(args.d, area, args.lambda_max, args.samples)
    panels = [
        Panel("Riesz-mean majorant", "lambda", "value",
              [Series("F", riesz.column("lambda"), riesz.column("F")),
               Series("parabola", riesz.column("lambda"), riesz.column("parabola"), dashed=True)]
              + ([Series("F_prime", riesz.column("lambda"), riesz.column("F_prime"))]
                 if args.d == 3 else []),
              ticks=breaks,
              markers=[(x, y) for x, y, b in zip(riesz.column("lambda"), riesz.column("F"),
                                                  riesz.column("is_breakpoint")) if b]),
        Panel("Conjugate", "p", "value",
              [Series("F_conj", conj.column("p"), conj.column("F_conj")),
               Series("parabola_conj", conj.column("p"), conj.column("parabola_conj"), dashed=True)],
              ticks=tangency,
              markers=[(p, v) for p, v in zip(conj.column("p"), conj.column("F_conj")) if p in tangency]),
    ]
    return {"riesz": riesz, "conjugate": conj}, panels


def cmd_cap(args) -> dict[str, Table]:
    spec = cap_spectrum(CapSpec(args.theta0, args.bc), args.lambda_max)
    return {"cap": Table.from_records(
        spec.records(), ["index", "eigenvalue", "m", "radial_index", "error_bound"])}


def _read_spectrum(path: Path) -> tuple[list[float], Optional[list[float]]]:
    with open(path, newline="") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip() and not ln.startswith("#")]
    if lines and "eigenvalue" in lines[0]:
        rows = list(csv.DictReader(lines))
        values = [float(r["eigenvalue"]) for r in rows]
        errs = [float(r["error_bound"]) for r in rows] if "error_bound" in rows[0] else None
        return values, errs
    return [float(ln.split(",")[0]) for ln in lines], None


def _whole_sphere_ladder(d: int, count: int) -> list[float]:
    out, n = [], 0
    while len(out) < count:
        out += [float(eigenvalue(d, n))] * multiplicity(d, n)
        n += 1
    return out


def cmd_verify(args) -> tuple[dict[str, Table], bool]:
    errs = None
    if args.whole_sphere:
        domain = DomainSpec.whole_sphere(args.d)
        values = _whole_sphere_ladder(args.d, args.n_max)
    elif args.theta0 is not None:
        if args.d != 3:
            raise UsageError("caps are solved on S^2 only (d=3)")
        cap = CapSpec(args.theta0, args.bc)
        spec = cap_spectrum_at_least(cap, args.n_max)
        domain = DomainSpec(3, cap.area)
        values, errs = spec.eigenvalues, spec.error_bounds
    else:
        if args.area is None:
            raise UsageError("--spectrum needs --area")
        domain = DomainSpec(args.d, args.area)
        values, errs = _read_spectrum(args.spectrum)
    if args.strict and errs is None:
        errs = [0.0] * len(values)

    if args.family:
        families = [BoundFamily(f) for f in args.family]
    else:
        families = NEUMANN_FAMILIES if args.bc == "neumann" else DIRICHLET_FAMILIES
        if args.d != 3:
            families = [f for f in families if not f.s2_only]

    records = []
    ok = True
    for fam in families:
        report = verify_spectrum(fam, domain, values, n_max=args.n_max,
                                 error_bounds=errs if args.strict else None, strict=args.strict)
        records += report.records()
        ok = ok and report.all_satisfied
    cols = ["family", "d", "area", "n", "lhs", "rhs", "margin", "satisfied"]
    return {"verify": Table.from_records(records, cols)}, ok


def cmd_identities(args) -> dict[str, Table]:
    if args.n_max > MAX_LEVEL:
        raise UsageError(f"--n-max is limited to {MAX_LEVEL}")
    pts = random_points(args.samples, args.seed)
    t = Table(["n", "scalar", "gradient", "addition"])
    for n in range(args.n_max + 1):
        t.rows.append([n, *identity_residuals(n, pts)])
    return {"identities": t}


def cmd_constants(args) -> dict[str, Table]:
    t = Table(["d", "sigma", "sphere_area", "ball_volume", "classical_constant"])
    for d in range(3, args.d_max + 1):
        # the sphere S^{d-1} is a (d-1)-manifold
        t.rows.append([d, args.sigma, sphere_area(d), ball_volume(d - 1),
                       classical_constant(args.sigma, d - 1)])
    return {"constants": t}


def _companion(path: Path, name: str) -> Path:
    return path.with_name(f"{path.stem}_{name}{path.suffix}")


def _write(args, tables: dict[str, Table], panels: Optional[list] = None) -> None:
    if args.format == "svg":
        if panels is None:
            raise UsageError(f"--format svg is not available for '{args.command}'")
        outputs = [(args.out, to_svg(panels))]
    elif args.format == "json":
        outputs = [(args.out, to_json(tables))]
    else:
        names = list(tables)
        if args.out is None:
            outputs = [(None, "\n".join(to_csv(tables[n]) for n in names))]
        else:
            # the first table goes to --out, the others to <stem>_<name>.csv beside it
            outputs = [(args.out, to_csv(tables[names[0]]))]
            outputs += [(_companion(args.out, n), to_csv(tables[n])) for n in names[1:]]
    for path, text in outputs:
        if path is None:
            sys.stdout.write(text)
        else:
            with open(path, "w", newline="") as fh:
                fh.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    status = EXIT_OK
    try:
        panels = None
        if args.command == "ladder":
            tables = cmd_ladder(args)
        elif args.command == "curves":
            tables, panels = cmd_curves(args)
        elif args.command == "cap":
            tables = cmd_cap(args)
        elif args.command == "verify":
            tables, ok = cmd_verify(args)
            status = EXIT_OK if ok else EXIT_VIOLATION
        elif args.command == "identities":
            tables = cmd_identities(args)
        else:
            tables = cmd_constants(args)
        _write(args, tables, panels)
    except NumericalFailure as exc:
        print(f"spherebounds: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (UsageError, ValueError, OSError) as exc:
        print(f"spherebounds: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return status


if __name__ == "__main__":
    sys.exit(main())
