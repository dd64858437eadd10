"""Command-line front end.

Exit codes: 0 success, 1 a check failed (a witness is printed), 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction

from . import catalog
from .centralext import build_extension, h2_summary
from .exactfield import ScalarSyntaxError, parse_scalar, render_scalar
from .loopmodules import (
    ModuleError, Reducible, Simple, central_annihilation, describe_witness, f_components,
    graded_simplicity, load_module, loop_window, module_axiom_check, omega_check,
    verify_witness,
)
from .loopreal import jacobi_check, oracle_h2, truncate
from .superalgebra import SchemaError, ValidationError, build_algebra

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def _algebra(path):
    return build_algebra(_read_json(path))


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _atomic_write(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --- verbs -------------------------------------------------------------------------

def cmd_validate(args, out):
    raw = _read_json(args.algebra)
    try:
        g = build_algebra(raw)
    except ValidationError as exc:
        if args.json:
            out.append(_dump({"valid": False, "violations": [
                {"kind": v.kind, "witness": list(v.witness), "detail": v.detail}
                for v in exc.violations]}))
        else:
            out.append("invalid")
            out.extend(f"  {v}" for v in exc.violations)
        return EXIT_FAIL
    info = {"valid": True, "name": g.name, "dim": g.dim, "sigma_order": g.sigma_order,
            "field_order": g.field_order}
    out.append(_dump(info) if args.json else f"valid: {g.name or '<unnamed>'} (dim {g.dim}, "
               f"sigma order {g.sigma_order})")
    return EXIT_OK


def cmd_h2(args, out):
    t = h2_summary(_algebra(args.algebra))
    out.append(_dump(t.to_dict()) if args.json else t.to_text())
    return EXIT_OK


def cmd_extend(args, out):
    ext = build_extension(_algebra(args.algebra))
    text = ext.to_json() + "\n"
    if args.out:
        _atomic_write(args.out, text)
        if args.json:
            out.append(_dump({"written": args.out, "central": len(ext.labels)}))
        else:
            out.append(f"wrote {len(ext.labels)} central labels to {args.out}")
    else:
        out.append(text.rstrip("\n"))
    return EXIT_OK


def cmd_jacobi(args, out):
    T = truncate(build_extension(_algebra(args.algebra)), args.window)
    rep = jacobi_check(T)
    d = rep.to_dict(T)
    if args.json:
        out.append(_dump(d))
    else:
        c = d["basis"]
        out.append(f"window {args.window}: {c['virasoro']} virasoro, {c['loop']} loop, "
                   f"{c['central']} central labels")
        out.append(f"admissible triples checked: {d['admissible_triples']} "
                   f"(plus {d['central_triples']} with a central entry, zero by construction)")
        out.append(f"super-skew pairs checked: {d['skew_pairs']}")
        out.append("jacobi: pass" if rep.passed else f"jacobi: FAIL ({d['witness_count']} witnesses)")
        for w in d["witnesses"]:
            res = ", ".join(f"{k}: {v}" for k, v in w["residual"].items())
            out.append(f"  {w['kind']} ({', '.join(w['labels'])}): residual {{{res}}}")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_oracle(args, out):
    g = _algebra(args.algebra)
    if args.inner > args.window - 2:
        raise InputError("--inner must be at most --window minus 2")
    rep = oracle_h2(g, args.window, args.inner)
    theorem = h2_summary(g).total
    agree = rep.projected_dim == theorem
    if args.json:
        d = rep.to_dict()
        d.update(theorem=theorem, agree=agree)
        out.append(_dump(d))
    else:
        out.append(f"window={rep.window} inner={rep.inner} unknowns={rep.unknowns} "
                   f"equations={rep.equations} raw={rep.raw_dim}")
        out.append(f"oracle={rep.projected_dim} theorem={theorem} "
                   f"{'agree' if agree else 'DISAGREE'}")
    return EXIT_OK if agree else EXIT_FAIL


def _window(args):
    g = _algebra(args.algebra)
    V = load_module(args.module, g)
    try:
        lam = parse_scalar(args.lam if args.lam is not None else "0", g.field_order)
    except ScalarSyntaxError as exc:
        raise InputError(f"--lambda: {exc}") from exc
    mode = getattr(args, "loop", None) or getattr(args, "mode", "gamma")
    try:
        return loop_window(V, lam, args.window, mode)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def cmd_module_check(args, out):
    L = _window(args)
    rep = module_axiom_check(L)
    zero = central_annihilation(L)
    ok = rep.passed and zero
    if args.json:
        out.append(_dump({"checked": rep.checked, "pass": ok, "central_acts_as_zero": zero,
                          "witnesses": [describe_witness(L, w) for w in rep.witnesses[:10]]}))
    else:
        out.append(f"module axioms on {rep.checked} configurations: "
                   f"{'pass' if rep.passed else 'FAIL'}")
        out.append(f"central labels act as zero: {'yes' if zero else 'no'}")
        out.extend("  " + describe_witness(L, w) for w in rep.witnesses[:10])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_simple(args, out):
    g = _algebra(args.algebra)
    V = load_module(args.module, g)
    res = graded_simplicity(V, graded=not args.ungraded)
    if isinstance(res, Simple):
        d = {"result": "simple", "algebra_dim": res.algebra_dim, "target": V.dim ** 2}
    elif isinstance(res, Reducible):
        d = {"result": "reducible", "verified": verify_witness(V, res.witness, not args.ungraded),
             "witness": [[render_scalar(x) for x in w] for w in res.witness]}
    else:
        d = {"result": "unknown", "algebra_dim": res.algebra_dim, "target": V.dim ** 2}
    if args.json:
        out.append(_dump(d))
    else:
        out.append(d["result"])
        if "witness" in d:
            out.append("invariant subspace spanned by:")
            out.extend("  [" + ", ".join(w) + "]" for w in d["witness"])
        else:
            out.append(f"generated algebra dimension {d['algebra_dim']} of {d['target']}")
    return EXIT_OK if d["result"] == "simple" else EXIT_FAIL


def cmd_omega(args, out):
    L = _window(args)
    rep = omega_check(L, args.m, args.mode)
    if args.json:
        out.append(_dump({"checked": rep.checked, "pass": rep.passed, "m": args.m,
                          "mode": args.mode,
                          "witnesses": [describe_witness(L, w) for w in rep.witnesses[:10]]}))
    else:
        out.append(f"omega ({args.mode}, m={args.m}) on {rep.checked} evaluations: "
                   f"{'pass' if rep.passed else 'FAIL'}")
        out.extend("  " + describe_witness(L, w) for w in rep.witnesses[:10])
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_f_components(args, out):
    L = _window(args)
    try:
        comps = f_components(L)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    ok = all(c.closed for c in comps)
    rows = [{"index": c.index, "vectors": len(c.vectors), "closed": c.closed,
             "max_weight_multiplicity": max(c.multiplicities.values(), default=0)}
            for c in comps]
    if args.json:
        out.append(_dump({"components": rows, "pass": ok}))
    else:
        for r in rows:
            out.append(f"M_{r['index']}: {r['vectors']} vectors, "
                       f"{'closed' if r['closed'] else 'NOT closed'}, "
                       f"max weight multiplicity {r['max_weight_multiplicity']}")
    return EXIT_OK if ok else EXIT_FAIL


def _example_id(args):
    beta = None
    if args.beta is not None:
        try:
            beta = Fraction(args.beta)
        except ValueError as exc:
            raise InputError(f"--beta: {exc}") from exc
    return catalog.ExampleId(args.name, beta, args.n, args.i, args.p, args.m)


def cmd_example(args, out):
    try:
        raw = catalog.example_raw(_example_id(args))
    except catalog.CatalogError as exc:
        raise InputError(str(exc)) from exc
    text = _dump(raw) + "\n"
    if args.emit:
        _atomic_write(args.emit, text)
        out.append(f"wrote {raw['name']} to {args.emit}")
    else:
        out.append(text.rstrip("\n"))
    return EXIT_OK


MISPRINT_CASES = (catalog.ExampleId("jordan", Fraction(-1), 1, 0),
                  catalog.ExampleId("jordan", Fraction(1, 2), 1, 0),
                  catalog.ExampleId("jordan", Fraction(1, 2), 2, 1))


def cmd_example_verify(args, out):
    rows, bad = [], 0
    for eid in catalog.regression_grid():
        t = h2_summary(catalog.make_example(eid))
        e = catalog.expected_h2(eid)
        ok = e.matches(t) and e.total == t.total
        bad += not ok
        rows.append({"example": eid.label(), "expected": e.total, "computed": t.total,
                     "pass": ok})
    checks = []
    if not args.skip_oracle:
        for eid in MISPRINT_CASES:
            g = catalog.make_example(eid)
            o = oracle_h2(g, args.window, args.inner).projected_dim
            th = h2_summary(g).total
            ex = catalog.expected_h2(eid).total
            ok = o == th == ex
            bad += not ok
            checks.append({"example": eid.label(), "printed_total": catalog.jordan_printed_total(eid),
                           "corrected": ex, "theorem": th, "oracle": o, "pass": ok})
    if args.json:
        out.append(_dump({"grid": rows, "misprint_checks": checks, "failures": bad}))
    else:
        w = max(len(r["example"]) for r in rows)
        out.append(f"{'example':<{w}}  expected  computed  result")
        for r in rows:
            out.append(f"{r['example']:<{w}}  {r['expected']:>8}  {r['computed']:>8}  "
                       f"{'pass' if r['pass'] else 'FAIL'}")
        if checks:
            out.append("")
            out.append("jordan table: literal closed form vs corrected rows vs oracle")
            for c in checks:
                out.append(f"{c['example']:<{w}}  printed={c['printed_total']} "
                           f"corrected={c['corrected']} theorem={c['theorem']} "
                           f"oracle={c['oracle']}  {'pass' if c['pass'] else 'FAIL'}")
        out.append(f"{len(rows)} grid entries, {bad} failures")
    return EXIT_OK if bad == 0 else EXIT_FAIL


# --- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twistvir", description="Central extensions and loop "
                                "modules of twisted affine-Virasoro superalgebras.")
    sub = p.add_subparsers(dest="verb", required=True, metavar="verb")

    def verb(name, fn, help_, algebra=True, module=False):
        sp = sub.add_parser(name, help=help_)
        if algebra:
            sp.add_argument("algebra", help="algebra JSON file")
        if module:
            sp.add_argument("module", help="module JSON file")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(fn=fn)
        return sp

    verb("validate", cmd_validate, "check an algebra file")
    verb("h2", cmd_h2, "dimension table of H^2")
    sp = verb("extend", cmd_extend, "export the universal central extension data")
    sp.add_argument("--out", help="write the JSON document here")
    sp = verb("jacobi", cmd_jacobi, "exhaustive super-Jacobi check on a window")
    sp.add_argument("--window", type=int, default=6)
    sp = verb("oracle-h2", cmd_oracle, "brute-force H^2 on a window")
    sp.add_argument("--window", type=int, default=6)
    sp.add_argument("--inner", type=int, default=3)

    def module_flags(sp, mode=True):
        sp.add_argument("--lambda", dest="lam", default=None, help="scalar lambda")
        sp.add_argument("--window", type=int, default=5)
        if mode:
            sp.add_argument("--mode", choices=("gamma", "f"), default="gamma")

    module_flags(verb("module-check", cmd_module_check, "loop-module axioms", module=True))
    sp = verb("simple-check", cmd_simple, "graded simplicity of a module", module=True)
    sp.add_argument("--ungraded", action="store_true", help="ignore the module grading")
    sp = verb("omega-check", cmd_omega, "differentiator annihilation", module=True)
    module_flags(sp, mode=False)
    sp.add_argument("--m", type=int, default=3)
    sp.add_argument("--mode", choices=("vir", "mixed"), default="vir")
    sp.add_argument("--loop", choices=("gamma", "f"), default="gamma")
    module_flags(verb("f-components", cmd_f_components, "graded components of Gamma",
                      module=True), mode=False)
    sp = verb("example", cmd_example, "emit a catalog algebra", algebra=False)
    sp.add_argument("name", choices=catalog.NAMES)
    sp.add_argument("--beta")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--i", type=int, default=0)
    sp.add_argument("--p", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--emit", help="write the algebra file here")
    sp = verb("example-verify", cmd_example_verify, "run the catalog regression grid",
              algebra=False)
    sp.add_argument("--window", type=int, default=6)
    sp.add_argument("--inner", type=int, default=3)
    sp.add_argument("--skip-oracle", action="store_true")
    return p


def run(argv=None) -> tuple[int, str]:
    parser = build_parser()
    args = parser.parse_args(argv)
    out: list[str] = []
    try:
        code = args.fn(args, out)
    except (InputError, SchemaError, ScalarSyntaxError) as exc:
        return EXIT_INPUT, f"error: {exc}\n"
    except ModuleError as exc:
        lines = ["invalid module"] + [f"  {p}" for p in exc.problems]
        return EXIT_FAIL, "\n".join(lines) + "\n"
    except ValidationError as exc:
        lines = ["invalid algebra"] + [f"  {v}" for v in exc.violations]
        return EXIT_FAIL, "\n".join(lines) + "\n"
    return code, "\n".join(out) + "\n"


def main(argv=None) -> int:
    code, text = run(argv)
    stream = sys.stderr if code == EXIT_INPUT else sys.stdout
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
