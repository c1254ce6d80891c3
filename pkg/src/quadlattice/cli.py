"""Command-line front end: construction, verification and matrix pipelines
with JSON output.

Every report embeds the resolved exact parameter set and the coefficient
table version; all numbers are exact strings, never floats.  Exit codes:
0 all requested residuals are exactly zero and consistency diffs are empty,
2 degenerate parameters / bad usage, 3 a residual or oracle comparison
failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import families as fam
from . import pdeverify as pv
from . import ttrr
from .exactfield import field_str, rat
from .latticeops import SingularPointError

TABLES_VERSION = "tables-v1"

EXIT_OK = 0
EXIT_DEGENERATE = 2
EXIT_MISMATCH = 3

SECOND_ORDER_BY_FAMILY = {
    fam.RACAH: "racah-x",
    fam.WILSON: "wilson-x",
    fam.WILSON_BAR: "wilson-bar-y",
    fam.CDH: "cdh-x",
}

DIFFERENCE_FORM_BY_FAMILY = {
    fam.RACAH: "racah-gi",
    fam.RACAH_BAR: "racah-gi",
    fam.WILSON: "wilson-f",
    fam.WILSON_BAR: "wilson-f",
    fam.CH: "ch-f",
    fam.CH_BAR: "ch-f",
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="quadlattice",
        description="Exact construction and machine verification of the "
        "bivariate Racah/Wilson/continuous (dual) Hahn polynomial families "
        "on quadratic lattices.",
    )
    parser.add_argument("--out", help="write the JSON report to this path")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, family=True):
        if family:
            p.add_argument("--family", required=True, choices=fam.ALL_FAMILIES)
        p.add_argument(
            "--param",
            action="append",
            default=[],
            metavar="NAME=VALUE",
            help="exact parameter override, repeatable (e.g. --param beta0=1/5)",
        )
        p.add_argument("--seed", type=int, default=0, help="grid jitter seed")
        p.add_argument("--grid-size", type=int, default=None)

    p = sub.add_parser("eval", help="evaluate a family member at a point")
    common(p)
    p.add_argument("--label", required=True)
    p.add_argument("--point", required=True)

    p = sub.add_parser("verify-pde", help="fourth-order residual sweep")
    common(p)
    p.add_argument("--max-total-degree", type=int, default=3)

    p = sub.add_parser("verify-trivariate", help="six-order residual sweep")
    common(p, family=False)
    p.add_argument("--max-total-degree", type=int, default=2)
    p.set_defaults(grid_size=3)

    p = sub.add_parser("verify-ladder", help="difference-derivative identities")
    common(p)
    p.add_argument("--max-total-degree", type=int, default=2)

    p = sub.add_parser("verify-second-order", help="second-order equations")
    common(p)
    p.add_argument("--max-total-degree", type=int, default=3)

    p = sub.add_parser("verify-difference-form", help="nine-term stencil forms")
    common(p)
    p.add_argument("--max-total-degree", type=int, default=3)

    p = sub.add_parser(
        "recover-coeffs", help="re-derive the Racah table from the stencil form"
    )
    common(p)

    p = sub.add_parser("ttrr", help="dump recurrence matrices for one degree")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--monic", action="store_true")

    p = sub.add_parser("generate", help="generate polynomial vectors")
    common(p)
    p.add_argument("--upto", type=int, default=3)
    p.add_argument("--monic", action="store_true")

    p = sub.add_parser("connect", help="connection matrices between families")
    common(p)
    p.add_argument("--n", type=int, required=True)

    return parser


def _spec_from(args):
    overrides = {}
    for item in args.param:
        if "=" not in item:
            raise ValueError(f"bad --param {item!r}; expected NAME=VALUE")
        name, value = item.split("=", 1)
        overrides[name.strip()] = rat(value)
    family = getattr(args, "family", fam.CH_TRI)
    return fam.FamilySpec(family, params=overrides)


def _grid_offset(seed):
    return Fraction(1, 7) + Fraction(seed % 23, 101)


def _parse_tuple(text, n=None):
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if n is not None and len(parts) != n:
        raise ValueError(f"expected {n} comma-separated entries in {text!r}")
    return parts


def _report_base(args, spec):
    return {
        "command": args.command,
        "family": spec.family,
        "params": spec.to_json()["params"],
        "tables_version": TABLES_VERSION,
        "seed": getattr(args, "seed", 0),
    }


def _sweep_labels(spec, bound):
    return pv._labels_up_to(spec.nvars, bound)


def _run(args):
    spec = _spec_from(args)
    report = _report_base(args, spec)
    offset = _grid_offset(getattr(args, "seed", 0))
    status = EXIT_OK

    if args.command == "eval":
        label = tuple(int(v) for v in _parse_tuple(args.label))
        point = tuple(rat(v) for v in _parse_tuple(args.point, spec.nvars))
        value = fam.eval_family(spec, label, point)
        report["label"] = list(label)
        report["point"] = [field_str(v) for v in point]
        report["value"] = field_str(value)

    elif args.command == "verify-pde":
        results = pv.verify_table(
            spec, args.max_total_degree, grid_size=args.grid_size
        )
        report["results"] = results
        if not all(r["pass"] for r in results):
            status = EXIT_MISMATCH

    elif args.command == "verify-trivariate":
        results = pv.verify_table(spec, args.max_total_degree, grid_size=args.grid_size)
        report["results"] = results
        if not all(r["pass"] for r in results):
            status = EXIT_MISMATCH

    elif args.command == "verify-ladder":
        if spec.family not in fam.LADDER_DIRECTION:
            raise ValueError(f"no printed ladder for family {spec.family}")
        results = []
        axes = pv.residual_grid(spec, (1, 1), size=3, offset=offset)
        points = [(axes[0][i], axes[1][i]) for i in range(3)]
        for label in _sweep_labels(spec, args.max_total_degree):
            ok = True
            for pt in points:
                if fam.derivative_ladder_check(spec, label, pt):
                    ok = False
                    break
            results.append({"label": list(label), "pass": ok})
        report["results"] = results
        if not all(r["pass"] for r in results):
            status = EXIT_MISMATCH

    elif args.command == "verify-second-order":
        kind = SECOND_ORDER_BY_FAMILY.get(spec.family)
        if kind is None:
            raise ValueError(f"no printed second-order equation for {spec.family}")
        report["kind"] = kind
        results = []
        for label in _sweep_labels(spec, args.max_total_degree):
            axes = pv.residual_grid(spec, label, size=args.grid_size, offset=offset)
            ok = True
            for pt in pv._tensor_points(axes):
                if pv.second_order_residual(kind, spec, label, pt):
                    ok = False
                    break
            results.append({"label": list(label), "pass": ok})
        report["results"] = results
        if not all(r["pass"] for r in results):
            status = EXIT_MISMATCH

    elif args.command == "verify-difference-form":
        kind = DIFFERENCE_FORM_BY_FAMILY.get(spec.family)
        if kind is None:
            raise ValueError(f"no printed difference form for {spec.family}")
        report["kind"] = kind
        results = []
        for label in _sweep_labels(spec, args.max_total_degree):
            axes = pv.residual_grid(spec, label, size=args.grid_size, offset=offset)
            ok = True
            for pt in pv._tensor_points(axes):
                if pv.difference_form_residual(kind, spec, label, pt):
                    ok = False
                    break
            results.append({"label": list(label), "pass": ok})
        report["results"] = results
        if not all(r["pass"] for r in results):
            status = EXIT_MISMATCH

    elif args.command == "recover-coeffs":
        if spec.family != fam.RACAH:
            raise ValueError("coefficient recovery is defined for the racah family")
        recovered, eig = pv.recover_coefficients(spec.params)
        printed = pv.coefficients(spec)
        diffs = pv.compare_tables(recovered, printed)
        report["eigenvalue_1_1"] = field_str(eig)
        report["match"] = not diffs
        report["diffs"] = [
            {"coefficient": name, "delta": delta.to_json()} for name, delta in diffs
        ]
        expected_eig = printed.eigenvalue((1, 1))
        if diffs or eig != expected_eig:
            status = EXIT_MISMATCH

    elif args.command == "ttrr":
        n = args.n
        leading = "monic" if args.monic else "family"
        chain = ttrr.GChain(spec, n + 1, leading=leading)
        a1, b1, c1 = ttrr.abc_matrices(chain, n, 1)
        a2, b2, c2 = ttrr.abc_matrices(chain, n, 2)
        table = pv.coefficients(spec)
        out = {
            "n": n,
            "leading": leading,
            "entry_indexing": "1-based s_{k,k} lives at 0-based data[k-1][k-1]",
            "lambda_n": field_str(table.eigenvalue((n,) + (0,) * (spec.nvars - 1))),
            "A1": a1.to_json(),
            "A2": a2.to_json(),
            "B1": b1.to_json(),
            "B2": b2.to_json(),
            "Gnn": chain.g(n, n).to_json(),
        }
        if c1 is not None:
            out["C1"] = c1.to_json()
            out["C2"] = c2.to_json()
        if n >= 1:
            out["Gn,n-1"] = chain.g(n, n - 1).to_json()
            sn, tn = ttrr.sn_tn_derived(spec, n)
            out["Sn"] = sn.to_json()
            out["Tn"] = tn.to_json()
        if n >= 2:
            out["Gn,n-2"] = chain.g(n, n - 2).to_json()
        report["matrices"] = out

    elif args.command == "generate":
        leading = "monic" if args.monic else "family"
        vectors = ttrr.generate(spec, args.upto, leading=leading)
        report["leading"] = leading
        report["vectors"] = [
            {
                "degree": vec.degree,
                "entries": [p.to_json() for p in vec.entries],
            }
            for vec in vectors
        ]

    elif args.command == "connect":
        pair = {
            fam.RACAH: fam.RACAH_BAR,
            fam.RACAH_BAR: fam.RACAH,
            fam.WILSON: fam.WILSON_BAR,
            fam.WILSON_BAR: fam.WILSON,
            fam.CH: fam.CH_BAR,
            fam.CH_BAR: fam.CH,
        }.get(spec.family)
        if pair is None:
            raise ValueError(f"no second family to connect for {spec.family}")
        n = args.n
        g = ttrr.leading_matrix(spec.family, spec.params, n)
        gbar = ttrr.leading_matrix(pair, spec.params, n)
        c = ttrr.connection(g, gbar)
        c_back = ttrr.connection(gbar, g)
        from .matrix import ExactMatrix

        report["n"] = n
        report["other_family"] = pair
        report["connection"] = c.to_json()
        report["inverse_connection"] = c_back.to_json()
        if c * c_back != ExactMatrix.identity(n + 1):
            status = EXIT_MISMATCH

    else:  # pragma: no cover
        raise ValueError(args.command)

    return status, report


def run(argv=None):
    """Parse arguments, run the command, and return (exit_code, report)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status, report = _run(args)
    except (fam.DegenerateParameterError, SingularPointError) as exc:
        return EXIT_DEGENERATE, {
            "command": args.command,
            "error": str(exc),
            "tables_version": TABLES_VERSION,
        }
    except (ValueError, ZeroDivisionError) as exc:
        return EXIT_DEGENERATE, {
            "command": args.command,
            "error": str(exc),
            "tables_version": TABLES_VERSION,
        }
    return status, report


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    status, report = run(argv if argv is not None else sys.argv[1:])
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return status


if __name__ == "__main__":
    raise SystemExit(main())
