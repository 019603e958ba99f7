"""Command-line interface: ``fhk eval | eigenvalue | verify | table``.

Reports are JSON (canonical: sorted keys, 15 significant digits) or CSV.
Exit codes: 0 all rows pass, 1 some row failed its tolerance, 2 usage error,
3 domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import funk_hecke as fh
from . import suites
from .errors import FHKError, ParameterError
from .harmonics import harmonic_basis, laplacian_matrix, nullspace
from .literals import parse_complex
from .special_poly import (disk_poly, harmonic_dim, jacobi_normalized, ortho_constant,
                           sphere_area)

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3
SIG_DIGITS = 15


@dataclass
class ReportDocument:
    command: str
    parameters: dict
    rows: list = field(default_factory=list)
    quadrature: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    @property
    def passed(self):
        return all(r["passed"] is not False for r in self.rows)

    def to_dict(self):
        failed = sum(r["passed"] is False for r in self.rows)
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "parameters": self.parameters,
            "quadrature": self.quadrature,
            "tolerances": {k: {"tolerance": t, "mode": m} for k, (t, m) in suites.TOLERANCES.items()},
            "rows": self.rows,
            "summary": {"rows": len(self.rows), "failed": failed,
                        "status": "pass" if failed == 0 else "fail"},
        }

    def to_json(self):
        return canonical_json(self.to_dict())

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["label", "value_re", "value_im", "expected_re", "expected_im",
                         "residual", "tolerance", "passed"])
        for r in self.rows:
            v = r["value"]
            e = r["expected"] if r["expected"] is not None else ["", ""]
            writer.writerow([r["label"], _fmt(v[0]), _fmt(v[1]), _fmt(e[0]), _fmt(e[1]),
                             _fmt(r["residual"]), _fmt(r["tolerance"]),
                             "" if r["passed"] is None else str(r["passed"]).lower()])
        return buf.getvalue()


def _round(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            return str(x)
        y = float(f"{x:.{SIG_DIGITS}g}")
        return 0.0 if y == 0 else y
    if isinstance(x, dict):
        return {str(k): _round(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v) for v in x]
    if isinstance(x, (np.floating, np.integer)):
        return _round(x.item())
    if isinstance(x, (complex, np.complexfloating)):
        return [_round(float(x.real)), _round(float(x.imag))]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def canonical_json(doc):
    return json.dumps(_round(doc), sort_keys=True, indent=1) + "\n"


def _fmt(x):
    if x is None or x == "":
        return ""
    return f"{float(x):.{SIG_DIGITS}g}"


def _pair(z):
    z = complex(z)
    return [z.real, z.imag]


def make_row(label, value, expected=None, tolerance=None, mode="abs", residual=None, **extra):
    """A report row; residual and pass/fail are filled in when an oracle value exists."""
    value = complex(value)
    row = {"label": label, "value": _pair(value), "expected": None, "residual": residual,
           "tolerance": tolerance, "mode": mode, "passed": None}
    if expected is not None:
        expected = complex(expected)
        row["expected"] = _pair(expected)
        if residual is None:
            residual = abs(value - expected)
            if mode == "rel":
                residual /= 1 + abs(expected)
        row["residual"] = float(residual)
    if row["residual"] is not None and tolerance is not None:
        row["passed"] = bool(row["residual"] <= tolerance)
    row.update(extra)
    return row


def row_from_check(r):
    return make_row(r.label, r.value, r.expected, r.tolerance, r.mode, r.residual)


def quadrature_meta():
    return {
        "transcendental_nodes": fh.TRANSCENDENTAL_NODES,
        "convergence_tol": fh.CONVERGENCE_TOL,
        "max_nodes": fh.MAX_NODES,
        "transcendental_sphere_degree": {str(k): v for k, v in suites.TRANSCENDENTAL_DEGREE.items()},
        "ball_degree": {str(k): v for k, v in suites.BALL_DEGREE.items()},
    }


# -- subcommands -------------------------------------------------------------

def cmd_eval(args):
    rows = []
    if args.what == "disk":
        _need(args, "m", "n", "q", "z")
        z = parse_complex(args.z)
        rows.append(make_row(f"R_{args.m},{args.n}^{args.q - 2}({args.z})",
                             disk_poly(args.m, args.n, args.q, z)))
        params = {"what": "disk", "m": args.m, "n": args.n, "q": args.q, "z": _pair(z)}
    elif args.what == "jacobi":
        _need(args, "k", "alpha", "beta", "x")
        v = jacobi_normalized(args.k, args.alpha, args.beta, args.x)
        rows.append(make_row(f"P_{args.k}^({args.alpha},{args.beta})({args.x})", v))
        params = {"what": "jacobi", "k": args.k, "alpha": args.alpha, "beta": args.beta, "x": args.x}
    else:
        _need(args, "m", "n", "q", "point")
        point = np.array([parse_complex(t) for t in args.point.split(",")])
        if len(point) != args.q:
            raise ParameterError(f"--point has {len(point)} coordinates, expected {args.q}")
        basis = harmonic_basis(args.m, args.n, args.q)
        vals = basis.evaluate(point)
        idx = range(len(vals)) if args.j is None else [args.j]
        for j in idx:
            if not 0 <= j < len(vals):
                raise ParameterError(f"--j must lie in [0, {len(vals)})")
            rows.append(make_row(f"Y_{args.m},{args.n}#{j}", vals[j]))
        params = {"what": "harmonic", "m": args.m, "n": args.n, "q": args.q,
                  "point": [_pair(c) for c in point], "j": args.j}
    return ReportDocument("eval", params, rows)


def cmd_eigenvalue(args):
    kernel = fh.KernelSpec.parse(args.kernel)
    m, n, q = args.m, args.n, args.q
    rows = []
    lam = lam_c = None
    tol, mode = suites.TOLERANCES["routes"]
    if args.route in ("disk", "both"):
        lam = fh.eigenvalue_disk(kernel, m, n, q).value
        rows.append(make_row(f"lambda_{m},{n} disk K={kernel.token} q={q}", lam))
    if args.route in ("cylinder", "both"):
        lam_c = fh.eigenvalue_cylinder(kernel, m, n, q).value
        rows.append(make_row(f"Lambda_{m},{n} cylinder K={kernel.token} q={q}", lam_c))
    if args.route == "both":
        rows.append(make_row(f"route agreement m={m} n={n} q={q}", lam_c, lam, tol, mode))
    params = {"kernel": kernel.token, "m": m, "n": n, "q": q, "route": args.route}
    return ReportDocument("eigenvalue", params, rows, quadrature_meta())


def cmd_verify(args):
    if args.max_degree < 0:
        raise ParameterError("--max-degree must be nonnegative")
    checks = suites.build_suite(args.suite, args.q, args.max_degree)
    results = suites.run_checks(checks)
    rows = [row_from_check(r) for r in results]
    params = {"suite": args.suite, "q": args.q, "max_degree": args.max_degree}
    return ReportDocument("verify", params, rows, quadrature_meta())


def cmd_table(args):
    if args.max < 0 or not args.q:
        raise ParameterError("empty index range")
    if any(q < 1 for q in args.q):
        raise ParameterError("q must be at least 1")
    rows = []
    kernel = None
    if args.sweep == "eigenvalues":
        kernel = fh.KernelSpec.parse(args.kernel or "expre")
    tol, mode = suites.TOLERANCES["routes"]
    for q in args.q:
        for m in range(args.max + 1):
            for n in range(args.max + 1):
                idx = {"m": m, "n": n, "q": q}
                label = f"m={m} n={n} q={q}"
                if args.sweep == "dims":
                    mat, cols = laplacian_matrix(m, n, q)
                    null_dim = nullspace(mat, len(cols)).shape[1]
                    rows.append(make_row(f"d {label}", harmonic_dim(m, n, q), null_dim, 0.0, index=idx))
                elif args.sweep == "constants":
                    rows.append(make_row(f"c {label}", ortho_constant(m, n, q),
                                         sphere_area(q) / harmonic_dim(m, n, q), 1e-14, "rel", index=idx))
                else:
                    lam = fh.eigenvalue_disk(kernel, m, n, q).value
                    lam_c = fh.eigenvalue_cylinder(kernel, m, n, q).value
                    rows.append(make_row(f"lambda K={kernel.token} {label}", lam, lam_c, tol, mode, index=idx))
    params = {"sweep": args.sweep, "q": list(args.q), "max": args.max,
              "kernel": kernel.token if kernel else None}
    return ReportDocument("table", params, rows, quadrature_meta())


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise ParameterError(f"missing {' '.join(missing)}")


# -- parser ------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="fhk", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write the report here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate disk, Jacobi or harmonic values")
    p.add_argument("--what", choices=("disk", "jacobi", "harmonic"), required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--z", help="complex literal such as 0.3-0.4i")
    p.add_argument("--k", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--x", type=float)
    p.add_argument("--j", type=int, help="harmonic basis element (default: all)")
    p.add_argument("--point", help="comma-separated complex coordinates")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("eigenvalue", parents=[common], help="Funk-Hecke eigenvalue of a kernel")
    p.add_argument("--kernel", required=True,
                   help="const:<c> | mono:<a>,<b> | disk:<m>,<n> | expre | absp:<p>")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--route", choices=("disk", "cylinder", "both"), default="both")
    p.set_defaults(func=cmd_eigenvalue)

    p = sub.add_parser("verify", parents=[common], help="run an identity-verification suite")
    p.add_argument("--suite", choices=suites.SUITES + ("all",), required=True)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--max-degree", type=int, default=2)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table", parents=[common], help="sweep eigenvalues, dimensions or constants")
    p.add_argument("--sweep", choices=("eigenvalues", "dims", "constants"), required=True)
    p.add_argument("--q", type=int, nargs="+", default=[2])
    p.add_argument("--max", type=int, default=3, help="largest m and n")
    p.add_argument("--kernel", help="kernel for --sweep eigenvalues (default expre)")
    p.set_defaults(func=cmd_table)
    return parser


def _command_echo(args):
    skip = {"func", "command", "out", "format"}
    parts = ["fhk", args.command]
    for k, v in sorted(vars(args).items()):
        if k in skip or v is None:
            continue
        v = " ".join(map(str, v)) if isinstance(v, list) else v
        parts.append(f"--{k.replace('_', '-')} {v}")
    return " ".join(parts)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except ParameterError as exc:
        parser.error(str(exc))
    except (FHKError, ValueError, ArithmeticError) as exc:
        print(f"fhk: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    report.command = _command_echo(args)
    text = report.to_json() if args.format == "json" else report.to_csv()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh_out:
            fh_out.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
