"""Command line front end.

Exit codes: 0 success, 1 a ``--verify`` check found a violation, 2 bad input
(parse or usage error), 3 the polynomial violates the simplex assumptions,
4 the solver failed or found no bound.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time

from .certify import circuit_number
from .constrained import ConstrainedProblem, constrained_bound
from .errors import AssumptionError, ParseError, SoncError, SolverError
from .gpbuild import lower_bound
from .mediated import maximal_mediated_set
from .oracle import approx_min, check_lower_bound
from .poly import parse_polynomial

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_PARSE = 2
EXIT_ASSUMPTION = 3
EXIT_SOLVER = 4


class _UsageError(Exception):
    pass


def _fmt(x) -> str:
    if x is None:
        return "none"
    if isinstance(x, float):
        return f"{x:.10g}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    return str(x)


def _read_polynomial(path: str, nvars: int | None):
    try:
        with open(path) as fh:
            lines = [ln.split("#", 1)[0] for ln in fh]
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror}") from exc
    text = " ".join(ln.strip() for ln in lines).strip()
    if nvars is None:
        indices = [int(m) for m in re.findall(r"x(\d+)", text)]
        nvars = max(indices, default=1)
    return parse_polynomial(text, nvars)


def _parse_vertices(spec: str):
    try:
        verts = [tuple(int(c) for c in part.split(",")) for part in spec.split(";") if part.strip()]
    except ValueError as exc:
        raise _UsageError(f"bad --vertices value {spec!r}") from exc
    if not verts or len({len(v) for v in verts}) != 1:
        raise _UsageError("vertices must be nonempty and of equal length")
    return verts


def _a_star_list(a_star):
    return [{"alpha": list(alpha), "j": j, "value": v} for (alpha, j), v in sorted(a_star.items())]


def _cmd_bound(args, certify=False):
    f = _read_polynomial(args.file, args.nvars)
    t0 = time.perf_counter()
    res = lower_bound(f, tol=args.tol, max_iter=args.max_iter, mediated=certify)
    elapsed = time.perf_counter() - t0
    if not res.ok:
        raise SolverError(f"no bound: solver status {res.status}")
    out = {
        "f_gp": res.f_gp,
        "m_star": res.m_star,
        "status": res.status,
        "a_star": _a_star_list(res.a_star),
        "iterations": res.solver.iterations if res.solver else 0,
        "time_s": elapsed,
    }
    if certify:
        cert = res.certificate
        out["certificate"] = cert.to_json()
        out["binomial_sos"] = cert.is_binomial_sos()
    code = EXIT_OK
    if args.verify:
        ok = check_lower_bound(f, res.f_gp, seed=args.seed)
        out["verified"] = ok
        code = EXIT_OK if ok else EXIT_VERIFY
    return out, code


def _cmd_mediated(args):
    ms = maximal_mediated_set(_parse_vertices(args.vertices))
    return {
        "points": [list(p) for p in ms.sorted_points()],
        "size": len(ms.pstar),
        "n_lattice_points": ms.n_lattice_points,
        "is_h_simplex": ms.is_h_simplex,
    }, EXIT_OK


def _cmd_constrained(args):
    f = _read_polynomial(args.file, args.nvars)
    nvars = f.nvars
    gs = [_read_polynomial(p, nvars) for p in args.g or []]
    res = constrained_bound(ConstrainedProblem(f, gs), tol=args.tol, max_iter=args.max_iter)
    if res.bound is None:
        raise SolverError(f"no bound: status {res.status}")
    return {
        "bound": res.bound,
        "mu": list(res.mu),
        "method": res.method,
        "status": res.status,
        "evaluations": res.evaluations,
    }, EXIT_OK


def _cmd_oracle(args):
    f = _read_polynomial(args.file, args.nvars)
    rep = approx_min(f, budget=args.budget, seed=args.seed)
    return {
        "best_value": rep.best_value,
        "best_point": [float(v) for v in rep.best_point],
        "evaluations": rep.evaluations,
        "method": rep.method,
        "seed": rep.seed,
    }, EXIT_OK


def _print_text(out, stream):
    for key, val in out.items():
        if key == "a_star":
            for item in val:
                stream.write(f"a[{','.join(map(str, item['alpha']))}; {item['j']}]: {_fmt(item['value'])}\n")
        elif key == "certificate":
            stream.write(f"certificate r: {_fmt(val['r'])}\n")
            for c in val["circuits"]:
                stream.write(
                    f"  circuit beta={c['beta']} c={_fmt(c['c'])} theta={_fmt(c['theta'])} "
                    f"vertices={c['vertices']} coeffs={_fmt(c['vertex_coeffs'])} status={c['status']}\n"
                )
            for t in val["remainder"]:
                stream.write(f"  square {t['exponent']}: {_fmt(t['coeff'])}\n")
        elif key == "points":
            stream.write("points: " + " ".join("(" + ",".join(map(str, p)) + ")" for p in val) + "\n")
        else:
            stream.write(f"{key}: {_fmt(val)}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="soncgp", description="SONC lower bounds via geometric programming")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--nvars", type=int, help="number of variables (inferred from the text if omitted)")
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--max-iter", type=int, default=200)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--verify", action="store_true", help="check the bound by sampling")
    common.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("bound", parents=[common], help="compute f_gp")
    p.add_argument("file")
    p = sub.add_parser("certify", parents=[common], help="f_gp plus the SONC certificate")
    p.add_argument("file")
    p = sub.add_parser("mediated", parents=[common], help="maximal mediated set of a simplex")
    p.add_argument("--vertices", required=True, help='e.g. "0,0;6,0;0,6"')
    p = sub.add_parser("constrained-bound", parents=[common], help="lower bound on {g_i >= 0}")
    p.add_argument("file")
    p.add_argument("--g", action="append", metavar="PATH", help="constraint polynomial file (repeatable)")
    p = sub.add_parser("oracle", parents=[common], help="numerical approximation of the minimum")
    p.add_argument("file")
    p.add_argument("--budget", type=int, default=20_000)
    return parser


_COMMANDS = {
    "bound": lambda a: _cmd_bound(a),
    "certify": lambda a: _cmd_bound(a, certify=True),
    "mediated": _cmd_mediated,
    "constrained-bound": _cmd_constrained,
    "oracle": _cmd_oracle,
}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.nvars is not None and args.nvars < 1:
        parser.print_usage(stderr)
        stderr.write("soncgp: error: --nvars must be positive\n")
        return EXIT_PARSE
    if not args.tol > 0:
        stderr.write("soncgp: error: --tol must be positive\n")
        return EXIT_PARSE

    try:
        out, code = _COMMANDS[args.command](args)
    except (ParseError, _UsageError) as exc:
        return _fail(args, stdout, stderr, EXIT_PARSE, "parse_error", exc)
    except AssumptionError as exc:
        return _fail(args, stdout, stderr, EXIT_ASSUMPTION, type(exc).__name__, exc)
    except (SolverError, SoncError) as exc:
        return _fail(args, stdout, stderr, EXIT_SOLVER, type(exc).__name__, exc)

    if args.format == "json":
        json.dump(out, stdout, indent=2)
        stdout.write("\n")
    else:
        _print_text(out, stdout)
    return code


def _fail(args, stdout, stderr, code, kind, exc):
    if args.format == "json":
        json.dump({"error": kind, "message": str(exc), "exit_code": code}, stdout)
        stdout.write("\n")
    else:
        stderr.write(f"soncgp: {kind}: {exc}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
