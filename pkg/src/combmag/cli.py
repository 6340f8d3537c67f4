"""Command line interface: ``combmag {det,moebius,magnitude,pseudoinverse,verify}``.

Exit codes: 0 ok, 1 usage/parse error, 2 singular zeta without ``--general``,
3 invariant violation, 4 size cap exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .category import (
    InvariantViolation,
    hall_moebius,
    leinster_moebius,
    oracle_moebius,
    check_vanishing,
    poset_to_category,
    zeta_matrix,
)
from .digraph import SizeCapError, connection_census, enumerate_connections
from .instances import (
    InstanceError,
    InstanceSpec,
    load_instance,
    serialize_instance,
    to_category,
    to_matrix,
    to_metric,
    to_poset,
)
from .linalg import (
    SingularMatrixError,
    SquareMatrix,
    bareiss_determinant,
    coates_determinant,
    combinatorial_inverse,
    count_linear_subdigraphs,
    gauss_inverse,
    permutation_determinant,
)
from .metric import (
    MetricExpansion,
    PathSumExpansion,
    oracle_magnitude,
    oracle_moebius_t,
    one_point_value,
)
from .pseudo import berg_pseudoinverse, factorization_pseudoinverse
from .scalars import DEFAULT_MERGE_TOL, to_jsonable
from .verify import builtin_suite, example_index_note, run_battery

EXIT_OK, EXIT_USAGE, EXIT_SINGULAR, EXIT_VIOLATION, EXIT_SIZE = 0, 1, 2, 3, 4


class CommandError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _matrix_json(M: SquareMatrix) -> dict:
    return {"index": [str(i) for i in M.index], "entries": [[to_jsonable(x) for x in r] for r in M.rows]}


def _diff(a: SquareMatrix, b: SquareMatrix):
    vals = [abs(x - y) for ra, rb in zip(a.rows, b.rows) for x, y in zip(ra, rb)]
    m = max(vals, default=0)
    return to_jsonable(m if isinstance(m, float) else Fraction(m))


def _zeta_of(spec: InstanceSpec) -> SquareMatrix:
    if spec.kind == "matrix":
        return to_matrix(spec)
    if spec.kind == "category":
        return zeta_matrix(to_category(spec))
    if spec.kind == "poset":
        return zeta_matrix(poset_to_category(to_poset(spec)))
    raise CommandError(f"{spec.kind} instances have no rational zeta matrix", EXIT_USAGE)


def _check_size(n, max_n):
    if max_n is not None and n > max_n:
        raise CommandError(f"instance has {n} vertices, above --max-n {max_n}", EXIT_SIZE)


# --- commands ------------------------------------------------------------------

def cmd_det(spec: InstanceSpec, *, max_n: int = 10, merge_tol: float = DEFAULT_MERGE_TOL,
            t_values=None) -> dict:
    report = {"command": "det", "instance": serialize_instance(spec)}
    if spec.kind == "metric":
        X = to_metric(spec)
        _check_size(X.n, max_n)
        exp = MetricExpansion(X, merge_tol)
        report["determinant_polynomial"] = exp.determinant.to_json()
        report["determinant_polynomial_text"] = str(exp.determinant)
        report["linear_subdigraph_count"] = count_linear_subdigraphs(exp.zeta)
        samples = []
        for t in t_values or []:
            comb = exp.determinant.evaluate(t)
            oracle = bareiss_determinant(exp.zeta.evaluate(t))
            samples.append({"t": t, "determinant": comb, "oracle_bareiss": oracle, "residual": abs(comb - oracle)})
        report["evaluations"] = samples
        return report
    M = _zeta_of(spec)
    _check_size(M.n, max_n)
    det = coates_determinant(M, max_vertices=max_n)
    bar = bareiss_determinant(M)
    report["determinant"] = to_jsonable(det)
    report["oracle_bareiss"] = to_jsonable(bar)
    report["residual_bareiss"] = to_jsonable(abs(det - bar))
    if M.n <= 9:
        perm = permutation_determinant(M)
        report["oracle_permutation"] = to_jsonable(perm)
        report["residual_permutation"] = to_jsonable(abs(det - perm))
    report["linear_subdigraph_count"] = count_linear_subdigraphs(M, max_vertices=max_n)
    return report


def _connection_table(M: SquareMatrix, max_n: int) -> dict:
    D = M.digraph()
    table = {}
    for a in M.index:
        for b in M.index:
            conns = list(enumerate_connections(D, a, b, max_vertices=max_n))
            pos = sum(c.weight for c in conns if c.signature > 0)
            neg = sum(c.weight for c in conns if c.signature < 0)
            table[f"{a}->{b}"] = {
                "structures": len(conns),
                "census_by_cycle_count": {str(k): v for k, v in connection_census(D, a, b).items()},
                "positive_weight": to_jsonable(Fraction(pos)) if not isinstance(pos, float) else pos,
                "negative_weight": to_jsonable(Fraction(neg)) if not isinstance(neg, float) else neg,
            }
    return table


def cmd_moebius(spec: InstanceSpec, *, general: bool = False, max_n: int = 10,
                merge_tol: float = DEFAULT_MERGE_TOL, t_values=None) -> dict:
    report = {"command": "moebius", "instance": serialize_instance(spec)}
    if spec.kind == "metric":
        X = to_metric(spec)
        _check_size(X.n, max_n)
        exp = MetricExpansion(X, merge_tol)
        rows = []
        for t in t_values or [1.0]:
            try:
                mu = exp.moebius(t)
            except SingularMatrixError:
                rows.append({"t": t, "singular": True})
                continue
            oracle = oracle_moebius_t(X, t)
            rows.append({
                "t": t,
                "moebius": _matrix_json(mu),
                "magnitude": exp.magnitude(t),
                "oracle_residual": max(abs(x - y) for ra, rb in zip(mu.rows, oracle.rows) for x, y in zip(ra, rb)),
            })
        report["samples"] = rows
        return report
    M = _zeta_of(spec)
    _check_size(M.n, max_n)
    det = coates_determinant(M, max_vertices=max_n)
    report["determinant"] = to_jsonable(det)
    report["linear_subdigraph_count"] = count_linear_subdigraphs(M, max_vertices=max_n)
    if det == 0:
        report["singular"] = True
        if not general:
            report["hint"] = "zeta is singular; rerun with --general for the pseudo-Möbius function"
            raise CommandError(json.dumps(report, sort_keys=True, indent=2), EXIT_SINGULAR)
        return _pseudo_section(M, report)
    mu = combinatorial_inverse(M, max_vertices=max_n)
    oracle = gauss_inverse(M)
    report["moebius"] = _matrix_json(mu)
    report["oracle_residual"] = _diff(mu, oracle)
    report["magnitude"] = to_jsonable(mu.total())
    report["connections"] = _connection_table(M, max_n)
    methods = {"combinatorial": True}
    if spec.kind in ("category", "poset"):
        C = to_category(spec) if spec.kind == "category" else poset_to_category(to_poset(spec))
        viol = check_vanishing(C, mu)
        report["vanishing_violations"] = [f"{a}->{b}" for a, b in viol]
        if C.skeletal and C.idempotents_trivial:
            methods["leinster_residual"] = _diff(leinster_moebius(C), mu)
        if spec.kind == "poset":
            methods["hall_residual"] = _diff(hall_moebius(to_poset(spec)), mu)
        methods["gauss_residual"] = _diff(oracle_moebius(C), mu)
    report["method_cross_checks"] = methods
    return report


def _pseudo_section(M: SquareMatrix, report: dict) -> dict:
    res = berg_pseudoinverse(M)
    oracle = factorization_pseudoinverse(M)
    report["rank"] = res.rank
    report["pseudo_moebius"] = _matrix_json(res.pseudoinverse)
    report["penrose_residuals"] = [to_jsonable(r if isinstance(r, float) else Fraction(r)) for r in res.penrose_residuals]
    report["oracle_residual"] = _diff(res.pseudoinverse, oracle)
    report["magnitude"] = to_jsonable(res.magnitude)
    report["berg_term_count"] = len(res.terms)
    return report


def cmd_pseudoinverse(spec: InstanceSpec, *, max_n: int = 8) -> dict:
    report = {"command": "pseudoinverse", "instance": serialize_instance(spec)}
    M = _zeta_of(spec)
    _check_size(M.n, max_n)
    return _pseudo_section(M, report)


def cmd_magnitude(spec: InstanceSpec, t_values, *, paths: bool = False, general: bool = False,
                  max_n: int = 10, merge_tol: float = DEFAULT_MERGE_TOL, threads: int = 1) -> dict:
    report = {"command": "magnitude", "instance": serialize_instance(spec)}
    if spec.kind != "metric":
        M = _zeta_of(spec)
        _check_size(M.n, max_n)
        det = coates_determinant(M, max_vertices=max_n)
        if det == 0:
            if not general:
                raise CommandError("zeta is singular; rerun with --general", EXIT_SINGULAR)
            return _pseudo_section(M, report)
        mu = combinatorial_inverse(M, max_vertices=max_n)
        report["magnitude"] = to_jsonable(mu.total())
        report["oracle_residual"] = to_jsonable(abs(mu.total() - gauss_inverse(M).total()))
        return report
    for t in t_values:
        if not t > 0:
            raise CommandError(f"t must be positive, got {t}", EXIT_USAGE)
    X = to_metric(spec)
    _check_size(X.n, max_n)
    exp = MetricExpansion(X, merge_tol)
    path_exp = PathSumExpansion(X, merge_tol) if paths else None

    def sample(t):
        row = {"t": t}
        try:
            value = exp.magnitude(t)
        except SingularMatrixError:
            row.update(magnitude=None, residual=None, singular=True)
            if general:
                # evaluate first, then numeric rank: the pseudoinverse works on the float matrix
                zeta = exp.zeta.evaluate(t)
                res = berg_pseudoinverse(zeta)
                gap = max(abs(a - b) for ra, rb in zip(res.pseudoinverse.rows, factorization_pseudoinverse(zeta).rows)
                          for a, b in zip(ra, rb))
                row.update(magnitude=res.magnitude, residual=gap, rank=res.rank, general=True)
            return row
        try:
            oracle = oracle_magnitude(X, t)
            row.update(magnitude=value, residual=abs(value - oracle))
        except SingularMatrixError:
            row.update(magnitude=value, residual=None)
        if path_exp is not None:
            pv = path_exp.magnitude(t)
            row.update(paths=pv, paths_discrepancy=abs(pv - value))
        return row

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        rows = list(pool.map(sample, t_values))
    report["determinant_polynomial"] = exp.determinant.to_json()
    report["curve"] = rows
    report["max_residual"] = max((r["residual"] for r in rows if r.get("residual") is not None), default=0.0)
    if paths:
        report["max_paths_discrepancy"] = max((r["paths_discrepancy"] for r in rows if "paths_discrepancy" in r),
                                              default=0.0)
    report["small_t_value"] = one_point_value(X)
    warnings = [f"singular at t={r['t']}" for r in rows if r.get("singular")]
    if warnings:
        report["warnings"] = warnings
    return report


def curve_csv(report: dict) -> str:
    buf = io.StringIO()
    paths = "max_paths_discrepancy" in report
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "magnitude", "residual"] + (["paths", "paths_discrepancy"] if paths else []))
    for r in report["curve"]:
        row = [repr(r["t"]), _csv_num(r["magnitude"]), _csv_num(r["residual"])]
        if paths:
            row += [_csv_num(r.get("paths")), _csv_num(r.get("paths_discrepancy"))]
        writer.writerow(row)
    return buf.getvalue()


def _csv_num(x):
    return "" if x is None else repr(x)


def cmd_verify(spec: InstanceSpec | None = None, *, seed: int | None = 0) -> tuple[int, dict]:
    if spec is not None:
        fixtures = [("instance", spec)]
    else:
        fixtures = builtin_suite(seed)
    checks = []
    for name, inst in fixtures:
        try:
            checks.extend(c.as_dict() for c in run_battery(inst, name))
        except InvariantViolation as exc:
            checks.append({"fixture": name, "check": "input_invariants", "passed": False, "residual": None,
                           "note": str(exc)})
    failed = [c for c in checks if not c["passed"]]
    report = {
        "command": "verify",
        "fixtures": [name for name, _ in fixtures],
        "checks": checks,
        "passed": len(checks) - len(failed),
        "failed": len(failed),
    }
    if spec is None:
        report["info"] = {"example_index": example_index_note()}
    return (EXIT_VIOLATION if failed else EXIT_OK), report


# --- argument handling -------------------------------------------------------------

def _t_values(args, spec: InstanceSpec | None) -> list[float]:
    if args.t:
        values = [float(x) for chunk in args.t for x in str(chunk).split(",") if x.strip()]
    elif args.t_min is not None or args.t_max is not None:
        if args.t_min is None or args.t_max is None:
            raise CommandError("--t-min and --t-max go together", EXIT_USAGE)
        steps = args.t_steps
        if steps < 1:
            raise CommandError("--t-steps must be at least 1", EXIT_USAGE)
        if steps == 1:
            values = [args.t_min]
        else:
            h = (args.t_max - args.t_min) / (steps - 1)
            values = [args.t_min + k * h for k in range(steps)]
    elif spec is not None and spec.options.get("t"):
        values = list(spec.options["t"])
    else:
        values = [1.0]
    for t in values:
        if not t > 0:
            raise CommandError(f"t must be positive, got {t}", EXIT_USAGE)
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="combmag", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-n", type=int, default=None, help="vertex cap for enumerations")
    common.add_argument("--merge-tol", type=float, default=DEFAULT_MERGE_TOL,
                        help="length polynomial exponent merge tolerance")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--out", choices=("json", "csv"), default="json")
    common.add_argument("-o", "--output", help="write the report here instead of stdout")
    common.add_argument("--t", action="append", help="t value(s); repeat or comma-separate")
    common.add_argument("--t-min", type=float)
    common.add_argument("--t-max", type=float)
    common.add_argument("--t-steps", type=int, default=20)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("det", "moebius", "magnitude", "pseudoinverse"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("instance")
        if name in ("moebius", "magnitude"):
            p.add_argument("--general", action="store_true", help="fall back to the pseudo-Möbius function")
        if name == "magnitude":
            p.add_argument("--paths", action="store_true", help="also evaluate the path-sum formula")
    p = sub.add_parser("verify", parents=[common])
    p.add_argument("instance", nargs="?")
    p.add_argument("--seed", type=int, default=0, help="seed for the random fixtures of the built-in suite")
    return parser


def _emit(text: str, args):
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        spec = load_instance(args.instance) if getattr(args, "instance", None) else None
        max_n = args.max_n
        if args.command == "det":
            report = cmd_det(spec, max_n=max_n or 10, merge_tol=args.merge_tol,
                             t_values=_t_values(args, spec) if (args.t or args.t_min) else None)
        elif args.command == "moebius":
            report = cmd_moebius(spec, general=args.general, max_n=max_n or 10, merge_tol=args.merge_tol,
                                 t_values=_t_values(args, spec))
        elif args.command == "magnitude":
            report = cmd_magnitude(spec, _t_values(args, spec), paths=args.paths, general=args.general,
                                   max_n=max_n or 10, merge_tol=args.merge_tol, threads=args.threads)
            if args.out == "csv" and "curve" in report:
                _emit(curve_csv(report), args)
                return EXIT_OK
        elif args.command == "pseudoinverse":
            report = cmd_pseudoinverse(spec, max_n=max_n or 8)
        else:
            code, report = cmd_verify(spec, seed=args.seed)
            _emit(_dump(report), args)
            return code
        _emit(_dump(report), args)
        return EXIT_OK
    except CommandError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except InstanceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except SizeCapError as exc:
        print(f"size cap: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except SingularMatrixError as exc:
        print(f"singular: {exc}", file=sys.stderr)
        return EXIT_SINGULAR


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
