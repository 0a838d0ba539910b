"""Command-line interface: ``bcf classify|solve|params|verify|sample FILE``.

Problem documents are JSON objects::

    {"x": "0", "a_neg1": "0", "a": ["0", "1", "1/2+1/3 i"],
     "tail": {"kind": "constant", "params": ["0"]},
     "tol": {"taylor_rel_tol": "1e-8"}}

Numbers are strings parsed exactly. Exit codes: 0 solvable / checks passed,
2 unsolvable / checks failed, 1 malformed input or internal error.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from fractions import Fraction
from typing import Sequence

from .errors import BCFError, ParametrizationUnsupported, ProblemFileError, TrivialProblem, Unsolvable
from .hankel import Tag
from .rational import Poly, RationalFunction, Tail, taylor_at
from .series import ProblemData, parse_number
from .solver import (
    check_solvable,
    compute_parameters,
    nevanlinna_t_formulas,
    numeric_solution_from_dict,
    parametrize,
    solve,
)
from .verify import DEFAULT, Check, ToleranceConfig, log_grid, evaluate, taylor_oracle, verify_solution

EXIT_OK, EXIT_ERROR, EXIT_UNSOLVABLE = 0, 1, 2


def _line_of(text: str, key: str) -> int | None:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _number(text: str, value, key: str):
    if not isinstance(value, str):
        raise ProblemFileError(f"expected a number string, got {value!r}", field=key, line=_line_of(text, key.split("[")[0]))
    try:
        return parse_number(value)
    except ValueError as exc:
        raise ProblemFileError(str(exc), field=key, line=_line_of(text, key.split("[")[0])) from exc


def parse_tail(source) -> Tail:
    """Tail from a document object or a ``kind:p1,p2[;t=val]`` string."""
    try:
        if isinstance(source, str):
            head, _, t_part = source.partition(";")
            kind, _, args = head.partition(":")
            params = [parse_number(v) for v in args.split(",") if v.strip()]
            t = parse_number(t_part.split("=", 1)[1]) if t_part else None
            return Tail(kind.strip(), tuple(params), t)
        params = tuple(parse_number(v) for v in source.get("params", []))
        t = parse_number(source["t"]) if source.get("t") is not None else None
        return Tail(source["kind"], params, t)
    except (KeyError, ValueError, IndexError, TypeError) as exc:
        raise ProblemFileError(f"malformed tail {source!r}: {exc}", field="tail") from exc


def load_problem(path: str) -> tuple[ProblemData, dict]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(exc.msg, line=exc.lineno) from exc
    if not isinstance(doc, dict):
        raise ProblemFileError("top level must be an object", line=1)
    for key in ("x", "a"):
        if key not in doc:
            raise ProblemFileError("missing required field", field=key)
    x = _number(text, doc["x"], "x")
    if not isinstance(x, Fraction):
        raise ProblemFileError("node must be real", field="x", line=_line_of(text, "x"))
    if not isinstance(doc["a"], list) or not doc["a"]:
        raise ProblemFileError("expected a non-empty array", field="a", line=_line_of(text, "a"))
    a = [_number(text, v, f"a[{k}]") for k, v in enumerate(doc["a"])]
    a_neg1 = _number(text, doc["a_neg1"], "a_neg1") if doc.get("a_neg1") is not None else None
    return ProblemData(x, a, a_neg1), doc


def load_solution(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ProblemFileError(exc.msg, line=exc.lineno) from exc
    sol = doc.get("solution", doc)
    try:
        if sol.get("kind") == "numeric":
            return numeric_solution_from_dict(sol)
        return RationalFunction(
            Poly([parse_number(v) for v in sol["num"]]),
            Poly([parse_number(v) for v in sol["den"]]),
            parse_number(sol.get("pole_node", "0")),
            parse_number(sol.get("pole_residue", "0")),
        )
    except (KeyError, ValueError, TypeError, AttributeError) as exc:
        raise ProblemFileError(f"malformed solution document: {exc}", field="solution") from exc


def _config(doc: dict, overrides: Sequence[str]) -> ToleranceConfig:
    values = {k: str(v) for k, v in (doc.get("tol") or {}).items()}
    for item in overrides or ():
        key, sep, val = item.partition("=")
        if not sep:
            raise ProblemFileError(f"--tol expects key=val, got {item!r}")
        values[key.strip()] = val.strip()
    try:
        return DEFAULT.with_overrides(values)
    except (KeyError, ValueError) as exc:
        raise ProblemFileError(str(exc), field="tol") from exc


def _tail(args, doc):
    if args.tail:
        return parse_tail(args.tail)
    if doc.get("tail") is not None:
        return parse_tail(doc["tail"])
    return None


def _verdict_doc(p: ProblemData):
    try:
        verdict = check_solvable(p)
    except TrivialProblem:
        return None, {"status": "solvable_indeterminate", "reason": "trivial_problem", "rho": None, "m": 0,
                      "rank": 0, "classification": None, "leading_minors": [], "determinacy_basis": "cited"}
    return verdict, verdict.to_dict()


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _solution_doc(p: ProblemData, f) -> dict:
    if isinstance(f, RationalFunction):
        out = {"kind": "rational", **f.to_dict()}
        out_extra = {"degree": f.degree, "taylor": [str(v) for v in taylor_at(f, p.x, p.n).coeffs]}
        return {"solution": out, **out_extra}
    approx = taylor_oracle(lambda z: f(z) - _pole(p, z), p.x, p.n, radius=f.safe_radius, precision=DEFAULT.taylor_precision)
    return {"solution": f.to_dict(), "taylor_numeric": [[c.real, c.imag] for c in approx]}


def _pole(p: ProblemData, z):
    res = p.residue
    if res == 0:
        return 0
    from .rational import numeric_value

    return numeric_value(res, z) / (z - numeric_value(p.x, z))


def cmd_classify(args) -> int:
    p, _ = load_problem(args.file)
    verdict, doc = _verdict_doc(p)
    _emit({"n": p.n, "x": str(p.x), **doc})
    return EXIT_OK if doc["status"] != "unsolvable" else EXIT_UNSOLVABLE


def cmd_solve(args) -> int:
    p, doc = load_problem(args.file)
    config = _config(doc, args.tol)
    try:
        f = solve(p, _tail(args, doc), config=config)
    except Unsolvable as exc:
        _emit({"n": p.n, "x": str(p.x), **exc.verdict.to_dict()})
        return EXIT_UNSOLVABLE
    verdict, vdoc = _verdict_doc(p)
    _emit({"n": p.n, "x": str(p.x), "status": vdoc["status"], "reason": vdoc["reason"], **_solution_doc(p, f)})
    return EXIT_OK


def cmd_params(args) -> int:
    p, _ = load_problem(args.file)
    verdict, vdoc = _verdict_doc(p)
    out = {"n": p.n, "x": str(p.x), "status": vdoc["status"], "reason": vdoc["reason"]}
    if verdict is None:
        out["note"] = "trivial_problem"
        _emit(out)
        return EXIT_OK
    if not verdict.solvable:
        _emit(out)
        return EXIT_UNSOLVABLE
    if verdict.rho != math.inf:
        out["note"] = ParametrizationUnsupported.code
        _emit(out)
        return EXIT_OK
    if verdict.classification.tag is Tag.POSITIVE_DEFINITE:
        out.update(parametrize(p, verdict).to_dict())
    else:
        out.update(compute_parameters(p, verdict).to_dict())
    _emit(out)
    return EXIT_OK


def cmd_verify(args) -> int:
    p, doc = load_problem(args.file)
    config = _config(doc, args.tol)
    verdict, vdoc = _verdict_doc(p)
    if args.solution:
        f = load_solution(args.solution)
    else:
        try:
            f = solve(p, _tail(args, doc), config=config)
        except Unsolvable as exc:
            _emit({"passed": False, **exc.verdict.to_dict()})
            return EXIT_UNSOLVABLE
    report = verify_solution(p, f, config, seed=args.seed)
    if verdict is not None and verdict.rho == math.inf and verdict.solvable and verdict.classification.tag is Tag.POSITIVE_DEFINITE:
        pr = parametrize(p, verdict)
        D = verdict.classification.leading_minors
        report.add(Check("nevanlinna_identities", nevanlinna_t_formulas(D, pr.table.t)))
        expected = Poly.linear(p.x) ** (2 * len(pr.table.t)) * pr.K
        report.add(Check("lft_determinant", pr.matrix.det() == expected))
    _emit({"status": vdoc["status"], **report.to_dict()})
    return EXIT_OK if report.passed else EXIT_UNSOLVABLE


def cmd_sample(args) -> int:
    p, doc = load_problem(args.file)
    if args.solution:
        f = load_solution(args.solution)
    else:
        try:
            f = solve(p, _tail(args, doc), config=_config(doc, args.tol))
        except Unsolvable as exc:
            _emit(exc.verdict.to_dict())
            return EXIT_UNSOLVABLE
    z = log_grid(args.grid, center=float(p.x))
    values = evaluate(f, z)
    lines = ["# re_z im_z re_f im_f"]
    lines += [f"{zj.real:.17g} {zj.imag:.17g} {fj.real:.17g} {fj.imag:.17g}" for zj, fj in zip(z, values)]
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bcf", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    tol_help = "override a tolerance, e.g. taylor_rel_tol=1e-8; defaults: " + ", ".join(
        f"{k}={v}" for k, v in vars(DEFAULT).items()
    )
    for name, func in (("classify", cmd_classify), ("solve", cmd_solve), ("params", cmd_params),
                       ("verify", cmd_verify), ("sample", cmd_sample)):
        sp = sub.add_parser(name)
        sp.add_argument("file")
        sp.add_argument("--tail", help="kind:params[;t=val], kinds constant|affine|mobius")
        sp.add_argument("--grid", type=int, default=DEFAULT.sample_grid, help="number of sample points")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--tol", action="append", default=[], metavar="KEY=VAL", help=tol_help)
        sp.add_argument("--solution", help="solution document produced by 'bcf solve'")
        sp.set_defaults(func=func)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BCFError as exc:
        sys.stderr.write(f"bcf: error [{exc.code}]: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
