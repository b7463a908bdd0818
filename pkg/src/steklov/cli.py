"""Command-line interface: spectra, sweeps and verification.

Exit codes: 0 success, 2 invalid dimensions or arguments, 3 solver
failure, 4 a verification gate failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Optional, Sequence

import numpy as np

from . import box as B
from . import rect as R
from .rootfind import DEFAULT_TOL, RootFindingError
from .sweep import fmt_number
from .verify import GATE, DegenerateFunction, SingularSystem, fd_dtn_rect, residual_check

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_INVALID, EXIT_SOLVER, EXIT_GATE = 0, 2, 3, 4
ORACLE_GATE = 0.01
TAMPER_SHIFT = 0.1
HUMAN_DIGITS = 7


class InvalidInput(ValueError):
    pass


def _record(command: str, inputs: dict, results: dict, diagnostics=None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "results": results,
        "diagnostics": list(diagnostics or []),
    }


def _f(v: Optional[float]) -> str:
    return "-" if v is None else f"{v:.{HUMAN_DIGITS}f}"


def _csv(columns: Sequence[str], rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt_number(r.get(c)) for c in columns])
    return buf.getvalue()


# rect ----------------------------------------------------------------------

def _rect_domain(args) -> tuple[float, float]:
    if args.a is not None:
        if args.width is not None or args.height is not None:
            raise InvalidInput("give either --a or --width/--height, not both")
        if not 0 < args.a <= 1:
            raise InvalidInput(f"--a must lie in (0, 1], got {args.a}")
        return args.a, 1.0
    if args.width is None or args.height is None:
        raise InvalidInput("need --a or both --width and --height")
    dom, scale = R.RectDomain.from_sides(args.width, args.height)
    return dom.a, scale


def cmd_rect(args) -> tuple[dict, int]:
    a, scale = _rect_domain(args)
    spec = R.rect_spectrum(a, args.mult_tol, args.tol)
    cands = [{"family": c.tag, "label": c.cls.label, "nu": c.nu, "sigma": c.sigma,
              "residual": c.residual} for c in spec.candidates]
    results = {
        "a": a,
        "scale": scale,
        "candidates": cands,
        "sigma1": spec.sigma1,
        "sigma1_physical": spec.sigma1 / scale,
        "eigenspace": list(spec.eigenspace),
        "invariant": spec.invariant,
    }
    inputs = {"a": args.a, "width": args.width, "height": args.height,
              "tol": args.tol, "mult_tol": args.mult_tol}
    return _record("rect", inputs, results), EXIT_OK


def _rect_text(rec: dict) -> str:
    r = rec["results"]
    lines = [f"rectangle [-1,1] x [-{r['a']:.{HUMAN_DIGITS}g},{r['a']:.{HUMAN_DIGITS}g}]"
             f" (scale {r['scale']:.{HUMAN_DIGITS}g})",
             f"{'family':8} {'nu':>12} {'sigma':>12}  factors"]
    for c in r["candidates"]:
        lines.append(f"{c['family']:8} {_f(c['nu']):>12} {_f(c['sigma']):>12}  {c['label']}")
    lines += [f"sigma1     {_f(r['sigma1'])}",
              f"eigenspace {', '.join(r['eigenspace'])}",
              f"invariant  {_f(r['invariant'])}"]
    return "\n".join(lines) + "\n"


def _rect_csv(rec: dict) -> str:
    r = rec["results"]
    rows = [{"record": "candidate", **c} for c in r["candidates"]]
    rows.append({"record": "summary", "family": r["eigenspace"][0], "sigma": r["sigma1"],
                 "invariant": r["invariant"], "eigenspace": ";".join(r["eigenspace"])})
    return _csv(["record", "family", "nu", "sigma", "residual", "invariant", "eigenspace"], rows)


# box -----------------------------------------------------------------------

def _box_domain(dims: Sequence[float]) -> tuple[B.BoxDomain, float]:
    if len(dims) != 3:
        raise InvalidInput("--dims takes three half-lengths")
    if not all(math.isfinite(d) and d > 0 for d in dims):
        raise InvalidInput(f"dimensions must be positive and finite, got {list(dims)}")
    return B.BoxDomain(*dims).normalized()


def _box_cand(c: B.BoxCandidate) -> dict:
    return {"family": c.label, "parity": c.family.parity, "lambda1": c.lambda1,
            "lambda2": c.lambda2, "mu": c.mu, "sigma": c.sigma,
            "max_residual": c.max_residual}


def cmd_box(args) -> tuple[dict, int]:
    dom, scale = _box_domain(args.dims)
    spec = B.box_spectrum(dom, args.mult_tol)
    results = {
        "dims": list(dom.dims),
        "scale": scale,
        "candidates": [_box_cand(c) for c in spec.candidates],
        "sigma1": spec.sigma1,
        "sigma1_physical": spec.sigma1 / scale,
        "eigenspace": [c.label for c in spec.eigenspace],
        "multiplicity": len(spec.eigenspace),
        "attaining_family": spec.attaining.label,
        "invariant": spec.invariant,
    }
    inputs = {"dims": list(args.dims), "tol": args.tol, "mult_tol": args.mult_tol}
    return _record("box", inputs, results, spec.diagnostics), EXIT_OK


def _box_text(rec: dict) -> str:
    r = rec["results"]
    d = r["dims"]
    lines = [f"box half-lengths {d[0]:.{HUMAN_DIGITS}g} x {d[1]:.{HUMAN_DIGITS}g} x "
             f"{d[2]:.{HUMAN_DIGITS}g} (scale {r['scale']:.{HUMAN_DIGITS}g})",
             f"{'sigma':>12} {'lambda1':>12} {'lambda2':>12} {'mu':>12}  family"]
    for c in r["candidates"]:
        lines.append(f"{_f(c['sigma']):>12} {_f(c['lambda1']):>12} {_f(c['lambda2']):>12} "
                     f"{_f(c['mu']):>12}  {c['family']}")
    lines += [f"sigma1       {_f(r['sigma1'])}",
              f"multiplicity {r['multiplicity']}",
              f"eigenspace   {'; '.join(r['eigenspace'])}",
              f"invariant    {_f(r['invariant'])}"]
    lines += [f"note: {n}" for n in rec["diagnostics"]]
    return "\n".join(lines) + "\n"


def _box_csv(rec: dict) -> str:
    r = rec["results"]
    rows = [{"record": "candidate", **c} for c in r["candidates"]]
    rows.append({"record": "summary", "family": r["attaining_family"], "sigma": r["sigma1"],
                 "invariant": r["invariant"], "multiplicity": r["multiplicity"]})
    return _csv(["record", "family", "parity", "lambda1", "lambda2", "mu", "sigma",
                 "max_residual", "invariant", "multiplicity"], rows)


# sweep ---------------------------------------------------------------------

def _grid(lo: float, hi: float, steps: int) -> np.ndarray:
    if steps < 1:
        raise InvalidInput("--steps must be positive")
    if not 0 < lo <= hi <= 1:
        raise InvalidInput(f"need 0 < min <= max <= 1, got {lo}, {hi}")
    return np.linspace(lo, hi, steps)


def cmd_sweep(args) -> tuple[dict, int]:
    steps = args.steps
    if args.target == "rect":
        if len(steps) != 1:
            raise InvalidInput("sweep rect takes one --steps value")
        lo = 0.05 if args.min is None else args.min
        table = R.sweep_rect(_grid(lo, args.max, steps[0]), args.mult_tol)
    else:
        if len(steps) == 1:
            steps = steps * 2
        if len(steps) != 2:
            raise InvalidInput("sweep box takes one or two --steps values")
        lo = 0.1 if args.min is None else args.min
        table = B.sweep_box(_grid(lo, args.max, steps[0]), _grid(lo, args.max, steps[1]),
                            args.mult_tol)
    diags = [f"row {i}: {r['diagnostics']}" for i, r in enumerate(table.rows)
             if r.get("diagnostics")]
    results = {"columns": list(table.columns), "rows": table.rows, "n_rows": len(table)}
    inputs = {"target": args.target, "min": lo, "max": args.max, "steps": list(steps),
              "mult_tol": args.mult_tol}
    rec = _record("sweep", inputs, results, diags)
    rec["_csv"] = table.to_csv()
    return rec, EXIT_OK


def _sweep_text(rec: dict) -> str:
    r = rec["results"]
    cols = [c for c in r["columns"] if not c.startswith("sigma_") and c != "diagnostics"]
    lines = ["  ".join(f"{c:>12}" for c in cols)]
    for row in r["rows"]:
        cells = []
        for c in cols:
            v = row.get(c)
            cells.append(f"{_f(v) if isinstance(v, float) else str(v):>12}")
        lines.append("  ".join(cells))
    return "\n".join(lines) + "\n"


# verify --------------------------------------------------------------------

def _gate_row(name: str, sigma: float, rep) -> dict:
    return {"family": name, "sigma": sigma, **rep.as_dict(), "pass": rep.passes(GATE)}


def cmd_verify(args) -> tuple[dict, int]:
    shift = TAMPER_SHIFT if args.tamper else 0.0
    reports = []
    oracle = None
    if args.target == "rect":
        a, scale = _rect_domain(args)
        spec = R.rect_spectrum(a, args.mult_tol, args.tol)
        for c in spec.candidates:
            rep = residual_check(lambda x, y, c=c: R.rect_eigenfunction_eval(c, x, y, True),
                                 c.sigma + shift, (1.0, a), args.sample_density,
                                 factors=R.rect_eigenfunction_factors(c))
            reports.append(_gate_row(c.tag, c.sigma + shift, rep))
        if args.oracle_grid:
            res = fd_dtn_rect(a, args.oracle_grid)
            exact = R.rect_spectrum(res.a).sigma1
            delta = abs(res.sigma1_fd - exact)
            oracle = {"grid_n": res.grid_n, "a_grid": res.a, "sigma1_fd": res.sigma1_fd,
                      "sigma1": exact, "abs_diff": delta, "pass": delta < ORACLE_GATE}
        inputs = {"a": args.a, "width": args.width, "height": args.height}
    else:
        dom, scale = _box_domain(args.dims)
        spec = B.box_spectrum(dom, args.mult_tol)
        for c in spec.candidates:
            rep = residual_check(lambda x, y, z, c=c: B.box_eigenfunction_eval(c, x, y, z, True),
                                 c.sigma + shift, dom.dims, args.sample_density,
                                 factors=B.box_eigenfunction_factors(c))
            reports.append(_gate_row(c.label, c.sigma + shift, rep))
        inputs = {"dims": list(args.dims)}
    inputs.update(tamper=bool(args.tamper), oracle_grid=args.oracle_grid,
                  sample_density=args.sample_density)
    ok = all(r["pass"] for r in reports) and (oracle is None or oracle["pass"])
    results = {"gate": GATE, "residuals": reports, "oracle": oracle, "pass": ok}
    return _record("verify", inputs, results), EXIT_OK if ok else EXIT_GATE


def _verify_text(rec: dict) -> str:
    r = rec["results"]
    lines = [f"{'interior':>10} {'boundary':>10} {'rayleigh':>10}  ok  family"]
    for g in r["residuals"]:
        lines.append(f"{g['interior_residual']:10.2e} {g['boundary_residual']:10.2e} "
                     f"{g['rayleigh_gap']:10.2e}  {'y' if g['pass'] else 'n':>2}  {g['family']}")
    o = r["oracle"]
    if o:
        lines.append(f"oracle n={o['grid_n']} a={o['a_grid']:.{HUMAN_DIGITS}g}: "
                     f"fd {_f(o['sigma1_fd'])} vs {_f(o['sigma1'])} "
                     f"|diff| {o['abs_diff']:.2e} {'pass' if o['pass'] else 'FAIL'}")
    lines.append("PASS" if r["pass"] else "FAIL")
    return "\n".join(lines) + "\n"


def _verify_csv(rec: dict) -> str:
    return _csv(["family", "sigma", "interior_residual", "boundary_residual",
                 "rayleigh_gap", "rayleigh_quotient", "pass"], rec["results"]["residuals"])


# plumbing ------------------------------------------------------------------

_RENDER = {
    "rect": (_rect_text, _rect_csv),
    "box": (_box_text, _box_csv),
    "sweep": (_sweep_text, lambda rec: rec["_csv"]),
    "verify": (_verify_text, _verify_csv),
}


def render(rec: dict, fmt: str) -> str:
    if fmt == "json":
        body = {k: v for k, v in rec.items() if not k.startswith("_")}
        return json.dumps(body, indent=2, allow_nan=True) + "\n"
    text, as_csv = _RENDER[rec["command"]]
    return as_csv(rec) if fmt == "csv" else text(rec)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="root-finding tolerance")
    p.add_argument("--mult-tol", type=float, default=R.DEFAULT_MULT_TOL,
                   help="relative gap for grouping a multiple sigma_1")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--out", help="write output here instead of stdout")


def _rect_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--a", type=float, help="half-height of [-1,1] x [-a,a], 0 < a <= 1")
    p.add_argument("--width", type=float, help="side length (with --height)")
    p.add_argument("--height", type=float, help="side length (with --width)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steklov", description="Steklov eigenvalues of rectangles and boxes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rect", help="first eigenvalue of a rectangle")
    _rect_args(p)
    _common(p)

    p = sub.add_parser("box", help="first eigenvalue of a rectangular box")
    p.add_argument("--dims", type=float, nargs=3, required=True, metavar=("A", "B", "C"),
                   help="half-lengths")
    _common(p)

    p = sub.add_parser("sweep", help="sigma_1 and invariant over a grid")
    p.add_argument("target", choices=("rect", "box"))
    p.add_argument("--min", type=float)
    p.add_argument("--max", type=float, default=1.0)
    p.add_argument("--steps", type=int, nargs="+", default=[10])
    _common(p)

    p = sub.add_parser("verify", help="residual gates and finite-difference oracle")
    p.add_argument("target", choices=("rect", "box"))
    _rect_args(p)
    p.add_argument("--dims", type=float, nargs=3, metavar=("A", "B", "C"))
    p.add_argument("--oracle-grid", type=int, default=0,
                   help="cells per unit length for the rectangle oracle (0 = off)")
    p.add_argument("--sample-density", type=int, default=None,
                   help="samples per unit length (default 64 for rect, 16 for box)")
    p.add_argument("--tamper", action="store_true",
                   help="shift every sigma by 0.1 before checking (negative control)")
    _common(p)
    return parser


_COMMANDS = {"rect": cmd_rect, "box": cmd_box, "sweep": cmd_sweep, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        if args.target == "box" and args.dims is None:
            print("error: verify box needs --dims", file=sys.stderr)
            return EXIT_INVALID
        if args.sample_density is None:
            args.sample_density = 64 if args.target == "rect" else 16
    try:
        rec, code = _COMMANDS[args.command](args)
    except (InvalidInput, R.DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (RootFindingError, SingularSystem, DegenerateFunction, ArithmeticError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    out = render(rec, args.format)
    if args.command == "sweep" and args.out:
        # the sweep table always lands on disk as CSV; stdout keeps the record
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(rec["_csv"])
        sys.stdout.write(out)
    elif args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
