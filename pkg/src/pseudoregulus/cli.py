"""Command-line front end.

Verbs::

    pseudoregulus moore check   --q 3 --n 7 --set 0,1,3
    pseudoregulus moore search  --q 2 --n 5 --k 2
    pseudoregulus code mrd      --q 2 --n 3 --set 0,1
    pseudoregulus code adjoint  --q 2 --n 4 --poly "1*X + 3*X^q"
    pseudoregulus code idealisers --q 2 --n 3 --set 0,1
    pseudoregulus code equiv    --n 7 --set1 0,1,3 --set2 0,4,5
    pseudoregulus linset build  --q 2 --n 3 --t 2 --exponents 0,1
    pseudoregulus linset analyze --spec spec.json --offp
    pseudoregulus linset project --q 2 --n 3 --t 2 --index-set 0,1
    pseudoregulus linset equiv  --q 3 --n 7 --t 2 --exponents1 0,1,3 --exponents2 0,4,5
    pseudoregulus linset classify --q 2 --n 5 --t 2 --exponents 0,2

Exit codes: 0 analysis completed (whatever the verdict), 2 usage error,
3 enumeration cap exceeded, 4 internal cross-check disagreement.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from . import __version__
from .config import default_cap, set_default_cap
from .errors import CrossCheckError, NotMaximumHScattered, SizeCapExceeded
from .fields import tower as make_tower
from .linpoly import format_qpoly, parse_qpoly
from .linsets import (
    DEFAULT_SEED,
    LinearSetSpec,
    axis_change_check,
    asymp_classify,
    build_from_spec,
    build_subgeometry_frame,
    detect_pseudoregulus,
    equivalent_pseudoregulus_type,
    invariant_profile,
    is_h_scattered,
    max_weight_offpseudoregulus,
    project_subgeometry,
    recover_spread_from_linset,
)
from .moore import ExponentSet, is_moore, search_all
from .rankcodes import (
    RankCode,
    adjoint_code,
    left_idealiser,
    monomial_code,
    monomial_equivalent,
    mrd_check,
    right_idealiser,
)

EXIT_USAGE, EXIT_CAP, EXIT_CROSSCHECK = 2, 3, 4


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


class _Progress:
    """Reports sweep progress to stderr at every tenth of the work."""

    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.last = -1

    def __call__(self, done: int, total: int) -> None:
        if not self.enabled or total <= 0:
            return
        step = 10 * done // total
        if step > self.last:
            self.last = step
            print(f"progress: {10 * step}%", file=sys.stderr)


# -- reports -------------------------------------------------------------------


def _code_from_args(a) -> RankCode:
    T = make_tower(a.q, a.n)
    if a.set is not None:
        return monomial_code(T, a.set)
    if not a.poly:
        raise UsageError("give --set or at least one --poly")
    return RankCode(T, tuple(parse_qpoly(T, p) for p in a.poly))


def _spec_from_args(a, suffix: str = "") -> LinearSetSpec:
    path = getattr(a, "spec" + suffix, None)
    if path:
        with open(path) as fh:
            return LinearSetSpec.from_dict(json.load(fh))
    exps = getattr(a, "exponents" + suffix, None)
    if exps is None or a.q is None or a.n is None or a.t is None:
        raise UsageError("give --spec or --q/--n/--t with --exponents")
    return LinearSetSpec.from_exponents(a.q, a.n, a.t, exps)


def cmd_moore_check(a) -> dict:
    T = make_tower(a.q, a.n)
    I = ExponentSet(a.n, tuple(a.set))
    return is_moore(I, T, a.method, jobs=a.jobs, use_complement=a.complement,
                    progress=_Progress(a.progress)).to_dict()


def cmd_moore_search(a) -> dict:
    T = make_tower(a.q, a.n)
    res = search_all(T, a.k, up_to_shift=not a.all_sets, method=a.method, jobs=a.jobs)
    return {"q": a.q, "n": a.n, "k": a.k, "up_to_shift": not a.all_sets,
            "results": [v.to_dict() for v in res]}


def cmd_code_mrd(a) -> dict:
    code = _code_from_args(a)
    rep = mrd_check(code, jobs=a.jobs, progress=_Progress(a.progress)).to_dict()
    rep["generators"] = [format_qpoly(g) for g in code.generators]
    return rep


def cmd_code_adjoint(a) -> dict:
    code = _code_from_args(a)
    adj = adjoint_code(code)
    return {"generators": [format_qpoly(g) for g in code.generators],
            "adjoint": [format_qpoly(g) for g in adj.generators],
            "exponents": adj.exponent_support()}


def cmd_code_idealisers(a) -> dict:
    code = _code_from_args(a)
    ld, lb = left_idealiser(code)
    rd, rb = right_idealiser(code)
    return {"generators": [format_qpoly(g) for g in code.generators],
            "left": {"dim": ld, "basis": [format_qpoly(g) for g in lb]},
            "right": {"dim": rd, "basis": [format_qpoly(g) for g in rb]}}


def cmd_code_equiv(a) -> dict:
    ok, s = monomial_equivalent(a.set1, a.set2, a.n)
    return {"n": a.n, "set1": sorted(a.set1), "set2": sorted(a.set2), "equivalent": ok, "shift": s}


def _linset_report(spec: LinearSetSpec, a, analyze: bool) -> tuple[dict, list]:
    ls = build_from_spec(spec)
    rep = detect_pseudoregulus(ls, strict=False)
    out = {
        "spec": spec.to_dict(),
        "exponents": list(spec.exponents),
        "rank": ls.rank,
        "points": ls.size,
        "weights": {str(k): v for k, v in sorted(ls.weight_spectrum().items())},
        "pseudoregulus": len(rep.elements),
        "transversals": len(rep.transversals),
        "branch": rep.branch,
        "def_check": rep.def_check,
    }
    if analyze:
        out["scattered"] = is_h_scattered(ls).to_dict()
        out["transversal_bases"] = [x.basis.tolist() for x in rep.transversals]
        if a.offp:
            out["off_pseudoregulus"] = max_weight_offpseudoregulus(ls, elements=rep.elements or None).to_dict()
    P, w = ls.point_data()
    rows = [list(map(int, p)) + [int(x)] for p, x in zip(P, w)]
    return out, rows


def cmd_linset_build(a):
    return _linset_report(_spec_from_args(a), a, False)


def cmd_linset_analyze(a):
    return _linset_report(_spec_from_args(a), a, True)


def cmd_linset_project(a) -> dict:
    T = make_tower(a.q, a.n, a.t)
    frame = build_subgeometry_frame(T, a.index_set, seed=a.seed)
    proj = project_subgeometry(frame)
    ls = proj.linear_set
    rep = detect_pseudoregulus(ls, strict=False)
    out = {
        "q": a.q, "n": a.n, "t": a.t, "index_set": list(frame.I), "seed": frame.seed,
        "theta_source": frame.theta_source,
        "cross_checked": proj.cross_checked,
        "profile": invariant_profile(ls),
        "axis_immaterial": axis_change_check(frame, seed=a.seed)[0],
    }
    if rep.def_check.get("a") and rep.def_check.get("b"):
        out["spread"] = recover_spread_from_linset(ls, frame, rep).to_dict()
    return out


def cmd_linset_equiv(a) -> dict:
    s1, s2 = _spec_from_args(a, "1"), _spec_from_args(a, "2")
    try:
        ok, s = equivalent_pseudoregulus_type(s1, s2)
    except NotMaximumHScattered as exc:
        return {"applicable": False, "reason": str(exc), "equivalent": None, "shift": None}
    return {"applicable": True, "reason": None, "equivalent": ok, "shift": s}


def cmd_linset_classify(a) -> dict:
    spec = _spec_from_args(a)
    try:
        rec = asymp_classify(spec)
    except NotMaximumHScattered as exc:
        return {"applicable": False, "reason": str(exc), "exps": list(spec.exponents)}
    rec["applicable"] = True
    return rec


# -- parser ------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cap", type=int, help="enumeration cap (default 2^26 or $PSEUDOREGULUS_CAP)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    p.add_argument("--jobs", type=int, default=1, help="worker threads for codeword sweeps")
    p.add_argument("--progress", action="store_true", help="report sweep progress on stderr")


def _code_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--set", type=_int_list, help="monomial code exponents")
    p.add_argument("--poly", action="append", help="generator q-polynomial, e.g. '1*X + 3*X^q2'")


def _linset_args(p: argparse.ArgumentParser, suffix: str = "") -> None:
    p.add_argument("--spec" + suffix, help="JSON spec file")
    p.add_argument("--exponents" + suffix, type=_int_list)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pseudoregulus", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=__version__)
    top = ap.add_subparsers(dest="group", required=True)

    moore = top.add_parser("moore").add_subparsers(dest="verb", required=True)
    p = moore.add_parser("check")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--set", type=_int_list, required=True)
    p.add_argument("--method", choices=("auto", "det", "mrd", "both"), default="auto")
    p.add_argument("--complement", action="store_true", help="allow the complement fast path")
    _common(p)
    p.set_defaults(func=cmd_moore_check)
    p = moore.add_parser("search")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--method", choices=("auto", "det", "mrd", "both"), default="auto")
    p.add_argument("--all-sets", action="store_true", help="every set containing 0, not one per shift class")
    _common(p)
    p.set_defaults(func=cmd_moore_search)

    code = top.add_parser("code").add_subparsers(dest="verb", required=True)
    for name, func in (("mrd", cmd_code_mrd), ("adjoint", cmd_code_adjoint),
                       ("idealisers", cmd_code_idealisers)):
        p = code.add_parser(name)
        _code_args(p)
        _common(p)
        p.set_defaults(func=func)
    p = code.add_parser("equiv")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--set1", type=_int_list, required=True)
    p.add_argument("--set2", type=_int_list, required=True)
    _common(p)
    p.set_defaults(func=cmd_code_equiv)

    lin = top.add_parser("linset").add_subparsers(dest="verb", required=True)
    for name, func in (("build", cmd_linset_build), ("analyze", cmd_linset_analyze),
                       ("classify", cmd_linset_classify)):
        p = lin.add_parser(name)
        p.add_argument("--q", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--t", type=int)
        _linset_args(p)
        if name == "analyze":
            p.add_argument("--offp", action="store_true", help="sweep every h-subspace for off-pseudoregulus weights")
        _common(p)
        p.set_defaults(func=func)
    p = lin.add_parser("project")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--index-set", type=_int_list, required=True)
    _common(p)
    p.set_defaults(func=cmd_linset_project)
    p = lin.add_parser("equiv")
    p.add_argument("--q", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--t", type=int)
    _linset_args(p, "1")
    _linset_args(p, "2")
    _common(p)
    p.set_defaults(func=cmd_linset_equiv)
    return ap


# -- output ------------------------------------------------------------------


def _flatten(d: dict, prefix: str = "") -> list[tuple[str, str]]:
    out = []
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out += _flatten(v, key + ".")
        else:
            out.append((key, json.dumps(v, sort_keys=True) if isinstance(v, list) else str(v)))
    return out


def render(report: dict, fmt: str, rows: list | None = None) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True) + "\n"
    if fmt == "pretty":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if "results" in report:
        w.writerow(["exps", "is_moore", "method", "is_progression", "d", "shift"])
        for r in report["results"]:
            pr = r["progression"]
            w.writerow([" ".join(map(str, r["exps"])), r["is_moore"], r["method"],
                        pr["is_progression"], pr["d"], pr["shift"]])
    elif rows is not None:
        width = len(rows[0]) - 1 if rows else 0
        w.writerow([f"x{i}" for i in range(width)] + ["weight"])
        w.writerows(rows)
    else:
        w.writerow(["key", "value"])
        w.writerows(_flatten(report))
    return buf.getvalue()


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    saved = default_cap()
    if a.cap is not None:
        set_default_cap(a.cap)
    try:
        res = a.func(a)
    except SizeCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except CrossCheckError as exc:
        print(f"internal cross-check failed: {exc}", file=sys.stderr)
        return EXIT_CROSSCHECK
    except (UsageError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        set_default_cap(saved)
    report, rows = res if isinstance(res, tuple) else (res, None)
    sys.stdout.write(render(report, a.format, rows))
    return 0


def main() -> None:
    sys.exit(run())
