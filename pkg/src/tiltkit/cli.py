"""Command-line front end.

Every command prints (or writes with ``--out``) a canonical JSON report:
sorted keys, two-space indentation, exact field elements as integers or
``"p/q"`` strings. Reports are byte-identical for identical inputs and seed;
wall-clock timing is included only with ``--timing``.

Exit codes: 0 success, 1 usage or parse error, 2 assertion failure,
3 truncated search.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import __version__
from .algebra import AlgebraBasis, cartan_coxeter, parse_algebra
from .complexes import PerfectComplex
from .criteria import (check_all_conditions, check_wd_conditions, corner_delete, extremal_kind, findim_probe,
                       is_weakly_directed)
from .field import Field
from .search import (SearchBounds, conclusions_report, endo_algebra, enumerate_exceptional, enumerate_tilting,
                     k0_class, recollement_witness_search)

SCHEMA = 1
EXIT_OK, EXIT_USAGE, EXIT_ASSERT, EXIT_TRUNCATED = 0, 1, 2, 3
VERBS = ("basis", "check", "enumerate-exceptional", "enumerate-tilting", "endo", "witnesses", "conclusions",
         "probe-findim", "corner-delete", "coxeter")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tiltkit", description="Exact computations with quiver algebras and perfect complexes.")
    p.add_argument("--version", action="version", version=f"tiltkit {__version__}")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    for verb in VERBS:
        s = sub.add_parser(verb)
        s.add_argument("--algebra", required=True, help="algebra file, or the name of a bundled example")
        s.add_argument("--field", help="override the field: F:<p> or Q")
        s.add_argument("--out", help="write the JSON report here instead of standard output")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--timing", action="store_true", help="include wall-clock time (breaks byte-identity)")
        if verb in ("enumerate-exceptional", "enumerate-tilting", "endo", "witnesses", "conclusions"):
            s.add_argument("--max-length", type=int)
            s.add_argument("--max-mult", type=int, default=2)
            s.add_argument("--max-summands", type=int)
            s.add_argument("--depth", type=int, default=3)
            s.add_argument("--cap", type=int, default=10_000_000, help="global candidate cap")
        if verb == "endo":
            s.add_argument("--complex", help="JSON file with a complex; default: every enumerated tilting complex")
        if verb == "probe-findim":
            s.add_argument("--dim-bound", type=int, default=6)
            s.add_argument("--cutoff", type=int, default=20)
            s.add_argument("--samples", type=int, default=200)
        if verb == "corner-delete":
            s.add_argument("--vertex", help="vertex to delete; default: every extremal vertex")
    return p


def corpus_path(name: str) -> Path | None:
    base = resources.files("tiltkit") / "corpus"
    for cand in (name, f"{name}.alg"):
        f = base / cand
        if f.is_file():
            return Path(str(f))
    return None


def load_algebra(spec: str, field: str | None) -> tuple[AlgebraBasis, bytes, str]:
    path = Path(spec)
    if not path.is_file():
        found = corpus_path(spec)
        if found is None:
            raise FileNotFoundError(f"algebra file not found: {spec}")
        path = found
    data = path.read_bytes()
    F = Field.parse(field) if field else None
    A = parse_algebra(data.decode("utf-8"), field=F, name=path.stem)
    return A, data, path.name


def _jsonable(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):
        return x.item()
    return x


def emit_report(report: dict, path: str | None) -> str:
    text = json.dumps(_jsonable(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return text


def _bounds(args) -> SearchBounds:
    return SearchBounds(max_length=args.max_length, max_mult=args.max_mult, max_summands=args.max_summands,
                        depth=args.depth, global_cap=args.cap, seed=args.seed)


def _complex_entry(C: PerfectComplex) -> dict:
    return {"describe": C.describe(), "complex": C.to_json(), "length": C.support_length(), "k0": list(k0_class(C))}


# -- verbs -------------------------------------------------------------------------

def _cmd_basis(A, args):
    return A.to_json(), EXIT_OK, False


def _cmd_check(A, args):
    rep = check_all_conditions(A)
    out = rep.to_json()
    order = is_weakly_directed(A)
    out["weakly_directed"] = order.to_json()
    if order.found:
        out["weakly_directed_conditions"] = [r.to_json() for r in check_wd_conditions(A)]
    return out, EXIT_OK, False


def _cmd_enum_exc(A, args):
    b = _bounds(args)
    ex = enumerate_exceptional(A, b)
    out = {"bounds": b.to_json(), "count": len(ex), "objects": [_complex_entry(C) for C in ex],
           "candidates": ex.candidates, "profiles": ex.profiles, "profiles_pruned": ex.profiles_pruned,
           "truncated": ex.truncated, "note": ex.note}
    return out, EXIT_TRUNCATED if ex.truncated else EXIT_OK, ex.truncated


def _cmd_enum_tilt(A, args):
    b = _bounds(args)
    til = enumerate_tilting(A, b)
    objs = []
    for T, v in zip(til.objects, til.verdicts):
        e = _complex_entry(T)
        e["generation"] = {"kind": v.kind, "tier": v.tier, "steps": len(v.certificate)}
        objs.append(e)
    out = {"bounds": b.to_json(), "count": len(til), "objects": objs, "unknown_excluded": til.unknown_excluded,
           "not_generating": til.not_generating, "subsets_examined": til.candidates, "truncated": til.truncated,
           "note": til.note}
    return out, EXIT_TRUNCATED if til.truncated else EXIT_OK, til.truncated


def _cmd_endo(A, args):
    if args.complex:
        data = json.loads(Path(args.complex).read_text(encoding="utf-8"))
        complexes, truncated = [PerfectComplex.from_json(A, data)], False
    else:
        til = enumerate_tilting(A, _bounds(args))
        complexes, truncated = list(til.objects), til.truncated
    out = []
    for T in complexes:
        e = endo_algebra(T, seed=args.seed)
        out.append({"complex": T.describe(), "endomorphism_algebra": e.to_json()})
    return {"algebras": out, "truncated": truncated}, EXIT_TRUNCATED if truncated else EXIT_OK, truncated


def _cmd_witnesses(A, args):
    b = _bounds(args)
    w = recollement_witness_search(A, b)
    cond = check_all_conditions(A)
    out = {"bounds": b.to_json(), "count": len(w), "pairs": [p.to_json() for p in w], "candidates": w.candidates,
           "truncated": w.truncated, "note": w.note, "conditions_hold": cond.all_pass}
    return out, EXIT_TRUNCATED if w.truncated else EXIT_OK, w.truncated


def _cmd_conclusions(A, args):
    b = _bounds(args)
    rep = conclusions_report(A, b)
    out = dict(rep.to_json(), bounds=b.to_json())
    if rep.truncated:
        return out, EXIT_TRUNCATED, True
    return out, EXIT_OK if rep.all_pass else EXIT_ASSERT, False


def _cmd_probe(A, args):
    rep = findim_probe(A, dim_bound=args.dim_bound, random_samples=args.samples, cutoff=args.cutoff, seed=args.seed)
    return rep.to_json(), EXIT_OK, False


def _cmd_corner(A, args):
    V = A.quiver.vertices
    targets = [args.vertex] if args.vertex else [v for v in V if extremal_kind(A, v)]
    out = []
    for v in targets:
        B = corner_delete(A, v)
        out.append({"vertex": v, "kind": extremal_kind(A, v), "dimension": B.dim, "vertices": B.quiver.vertices,
                    "relations": B.relation_strings(), "conditions": check_all_conditions(B).to_json()})
    return {"deletions": out}, EXIT_OK, False


def _cmd_coxeter(A, args):
    c = cartan_coxeter(A)
    return {"cartan": c.cartan, "coxeter": c.coxeter, "charpoly": c.charpoly,
            "charpoly_string": c.charpoly_string()}, EXIT_OK, False


COMMANDS = {"basis": _cmd_basis, "check": _cmd_check, "enumerate-exceptional": _cmd_enum_exc,
            "enumerate-tilting": _cmd_enum_tilt, "endo": _cmd_endo, "witnesses": _cmd_witnesses,
            "conclusions": _cmd_conclusions, "probe-findim": _cmd_probe, "corner-delete": _cmd_corner,
            "coxeter": _cmd_coxeter}


def run(argv: list[str] | None = None) -> tuple[int, dict | None]:
    """Run one command; returns ``(exit code, report)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as err:
        sys.stderr.write(str(err))
        return EXIT_USAGE, None
    except SystemExit as err:  # --help / --version
        return int(err.code or 0), None
    try:
        A, data, name = load_algebra(args.algebra, args.field)
    except (OSError, ValueError) as err:
        sys.stderr.write(f"tiltkit: {err}\n")
        return EXIT_USAGE, None
    t0 = time.perf_counter()
    payload, code, truncated = COMMANDS[args.verb](A, args)
    echo = {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "timing")}
    report = {
        "schema": SCHEMA,
        "tool": "tiltkit",
        "version": __version__,
        "input": {"name": name, "sha256": hashlib.sha256(data).hexdigest()},
        "field": str(A.field),
        "command": echo,
        "truncated": truncated,
        "result": payload,
    }
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - t0, 3)
    emit_report(report, args.out)
    return code, report


def main(argv: list[str] | None = None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
