"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 malformed input.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import random
import sys
from fractions import Fraction

from . import chains as ch
from . import cs_calculus as cs
from . import local_flow as lf
from .definiteness import is_negative_definite, leading_minors
from .divisor_graph import GraphError, DecoratedGraph, dumps, intersection_matrix, is_tree, load_graph
from .generator import random_decorated_graph
from .tree_order_h import DivisionByZeroH, NotATree, UnknownRoot, compute_h, root_order, verify_h_negative

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def parse_number(text: str):
    """Decimal, ``sqrt:N``, exact ``p/q`` or a Python complex literal like ``-1+0.3j``."""
    s = text.strip()
    try:
        if s.startswith("sqrt:"):
            return math.sqrt(float(s[5:]))
        if "j" in s:
            return complex(s.replace(" ", ""))
        if "/" in s:
            return Fraction(s)
        return float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _real(text: str) -> float:
    v = parse_number(text)
    if isinstance(v, complex):
        if v.imag != 0:
            raise argparse.ArgumentTypeError(f"expected a real number, got {text!r}")
        v = v.real
    return float(v)


def _cplx(text: str) -> complex:
    return complex(parse_number(text))


def _c(z: complex) -> list[float]:
    return [z.real, z.imag]


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _load(args) -> DecoratedGraph:
    try:
        return load_graph(args.graph, tolerance=args.tolerance)
    except (OSError, GraphError) as exc:
        raise InputError(f"{type(exc).__name__}: {exc}") from exc


# -- graph commands -------------------------------------------------------------

def cmd_check_definite(args) -> int:
    g = _load(args)
    m = intersection_matrix(g)
    minors = leading_minors(m)
    verdict = is_negative_definite(m)
    _emit_json({"components": list(m.ids), "minors": list(minors), "negative_definite": verdict})
    return EXIT_OK if verdict else EXIT_FAIL


def cmd_compute_h(args) -> int:
    g = _load(args)
    try:
        order = root_order(g, args.root)
    except UnknownRoot:
        raise InputError(f"unknown root {args.root!r}") from None
    except NotATree as exc:
        print(f"not a tree: {exc}", file=sys.stderr)
        return EXIT_FAIL
    try:
        h = compute_h(g, order)
    except DivisionByZeroH as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FAIL
    width = max(len(v) for v in h)
    print(f"{'vertex':<{width}}  level  h")
    for v in sorted(h, key=lambda v: (order.level(v), v)):
        print(f"{v:<{width}}  {order.level(v):>5}  {h[v]}")
    ok, bad = verify_h_negative(h)
    if not ok:
        print(f"non-negative h at: {', '.join(bad)}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify_cs(args) -> int:
    g = _load(args)
    rep = cs.verify_cs(g, partial=args.partial)
    _emit_json({
        "mode": "partial" if args.partial else "complete",
        "tolerance": g.tolerance,
        "residuals": {k: _c(v) for k, v in rep.residuals.items()},
        "failing_components": rep.failing_components,
        "reciprocity_error": rep.reciprocity,
        "failing_corners": rep.failing_corners,
        "ok": rep.ok,
    })
    return EXIT_OK if rep.ok else EXIT_FAIL


def _witness_records(g: DecoratedGraph, partial: bool) -> list[dict]:
    records = []
    for piece in cs.d_star_components(g):
        entry = {"piece": piece.as_dict()}
        try:
            w = cs.find_negative_index_tail(g, piece.components, partial=partial)
            entry.update(w.as_dict())
            entry["verdict"] = "pass" if w.witness is not None else "skip"
            if w.witness is None:
                entry["reason"] = "closure is not negative definite"
        except cs.InconsistentDecoration as exc:
            entry.update(verdict="fail", reason=str(exc))
        except (NotATree, cs.DicriticalComponent) as exc:
            entry.update(verdict="skip", reason=f"closure is not an invariant tree: {exc}")
        records.append(entry)
    return records


def cmd_witnesses(args) -> int:
    g = _load(args)
    records = _witness_records(g, args.partial)
    _emit_json({"witnesses": records})
    return EXIT_FAIL if any(r["verdict"] == "fail" for r in records) else EXIT_OK


def cmd_census(args) -> int:
    g = _load(args)
    census = cs.strong_separatrix_count_check(g)
    _emit_json(census.as_dict())
    return EXIT_OK if census.holds else EXIT_FAIL


def cmd_chains(args) -> int:
    g = _load(args)
    if args.all:
        starts = [c.id for c in g.components if c.invariant and not c.dicritical]
    elif args.start:
        starts = [args.start]
    else:
        raise InputError("chains needs --start ID or --all")
    out, failed = [], False
    for start in starts:
        try:
            chain = ch.find_approximation_chain(g, start)
        except ch.UnknownId:
            raise InputError(f"unknown component {start!r}") from None
        except ch.DicriticalStart as exc:
            raise InputError(str(exc)) from None
        except ch.NoChainFound as exc:
            out.append({"start": start, "verdict": "fail", "reason": str(exc)})
            failed = True
            continue
        verdict = ch.verify_chain(g, chain)
        failed |= not verdict.ok
        out.append({"start": start, **chain.as_dict(), "verdict": "pass" if verdict.ok else verdict.label})
    _emit_json(out[0] if args.start and not args.all else out)
    return EXIT_FAIL if failed else EXIT_OK


def analyze(g: DecoratedGraph, partial: bool = False) -> dict:
    """Full pipeline; every record has a verdict in {pass, fail, skip, info}."""
    records = [{"check": "validate", "verdict": "pass", "details": {"components": len(g.components)}}]

    m = intersection_matrix(g)
    minors = leading_minors(m)
    nd = is_negative_definite(m)
    records.append({
        "check": "negative_definite", "verdict": "pass" if nd else "fail",
        "details": {"minors": list(minors)},
    })

    tree = is_tree(g)
    if tree:
        h_by_root, bad, err = {}, {}, None
        for root in g.component_ids:
            order = root_order(g, root)
            try:
                h = compute_h(g, order)
            except DivisionByZeroH as exc:
                err = str(exc)
                continue
            h_by_root[root] = {v: str(val) for v, val in h.items()}
            ok, viol = verify_h_negative(h)
            if not ok:
                bad[root] = viol
        verdict = "pass" if not bad and err is None else "fail"
        details = {"h": h_by_root}
        if bad:
            details["non_negative"] = bad
        if err:
            details["error"] = err
        records.append({"check": "h_values", "verdict": verdict, "details": details})
    else:
        records.append({"check": "h_values", "verdict": "skip", "details": {"reason": "graph is not a tree"}})

    rep = cs.verify_cs(g, partial=partial)
    records.append({
        "check": "cs_residuals", "verdict": "pass" if rep.ok else "fail",
        "details": {
            "residuals": {k: _c(v) for k, v in rep.residuals.items()},
            "failing_components": rep.failing_components,
            "failing_corners": rep.failing_corners,
        },
    })

    all_invariant = all(c.invariant for c in g.components)
    if tree and all_invariant:
        try:
            w = cs.find_negative_index_tail(g, partial=partial)
            records.append({
                "check": "negative_index_witness",
                "verdict": "pass" if w.witness else "skip",
                "details": {} if w.witness else {"reason": "not negative definite"},
                "witnesses": [w.as_dict()] if w.witness else [],
            })
        except cs.InconsistentDecoration as exc:
            records.append({"check": "negative_index_witness", "verdict": "fail", "details": {"reason": str(exc)}})
        root = g.component_ids[0]
        order = root_order(g, root)
        try:
            diag = cs.proof_bound_diagnostic(g, order, compute_h(g, order))
            records.append({
                "check": "propagation_bounds", "verdict": "info",
                "details": {"root": root, "entries": [e.as_dict() for e in diag.entries], "flagged": diag.flagged},
            })
        except DivisionByZeroH:
            pass
    else:
        records.append({
            "check": "negative_index_witness", "verdict": "skip",
            "details": {"reason": "needs an invariant tree"},
        })

    pieces = _witness_records(g, partial)
    records.append({
        "check": "d_star_witnesses",
        "verdict": "fail" if any(p["verdict"] == "fail" for p in pieces) else "pass",
        "details": {"pieces": len(pieces)},
        "witnesses": pieces,
    })

    census = cs.strong_separatrix_count_check(g)
    records.append({"check": "separatrix_count", "verdict": "pass" if census.holds else "fail",
                    "details": census.as_dict()})

    chain_out, chain_fail = [], False
    try:
        ch.maximal_classes(ch.chain_order(g))
        cycle = None
    except ch.CycleDetected as exc:
        cycle = str(exc)
    for c in g.components:
        if not c.invariant:
            continue
        try:
            chain = ch.find_approximation_chain(g, c.id)
        except ch.NoChainFound as exc:
            chain_out.append({"start": c.id, "verdict": "fail", "reason": str(exc)})
            chain_fail = True
            continue
        v = ch.verify_chain(g, chain)
        chain_fail |= not v.ok
        chain_out.append({"start": c.id, **chain.as_dict(), "verdict": "pass" if v.ok else v.label})
    details = {"chains": chain_out}
    if cycle:
        details["cycle"] = cycle
    records.append({"check": "approximation_chains", "verdict": "fail" if chain_fail or cycle else "pass",
                    "details": details})

    overall = "fail" if any(r["verdict"] == "fail" for r in records) else "pass"
    return {"records": records, "overall": overall}


def cmd_analyze(args) -> int:
    g = _load(args)
    report = analyze(g, partial=args.partial)
    _emit_json(report)
    return EXIT_OK if report["overall"] == "pass" else EXIT_FAIL


def cmd_gen_fixture(args) -> int:
    g = random_decorated_graph(args.seed, n=args.size, dicritical_prob=args.dicritical_prob)
    sys.stdout.write(dumps(g) + "\n")
    return EXIT_OK


# -- flow commands ----------------------------------------------------------------

class _CsvOut:
    def __init__(self, path):
        self.path = path

    def __enter__(self):
        self.fh = open(self.path, "w", newline="") if self.path else sys.stdout
        return csv.writer(self.fh, lineterminator="\n")

    def __exit__(self, *exc):
        if self.path:
            self.fh.close()


def _traj_rows(w, traj):
    w.writerow(["t", "x_re", "x_im", "y_re", "y_im", "abs_x", "abs_y"])
    for t, x, y in traj.rows():
        w.writerow([repr(t), repr(x.real), repr(x.imag), repr(y.real), repr(y.imag), repr(abs(x)), repr(abs(y))])


def cmd_flow_monotone(args) -> int:
    if args.random_specs:
        rng = random.Random(args.seed)
        failed = 0
        with _CsvOut(args.out) as w:
            w.writerow(["spec", "start", "lam1", "lam2", "samples", "max_x_decrease", "max_y_increase", "passed"])
            for i in range(args.random_specs):
                spec = lf.random_saddle_spec(rng, box=args.box)
                for j in range(args.starts):
                    p0 = lf.random_start(rng, args.box)
                    rep = lf.monotonicity_check(lf.integrate(spec, p0, (0.0, args.t_max), rtol=args.rtol))
                    failed += not rep.passed
                    w.writerow([i, j, repr(spec.lam1), repr(spec.lam2), rep.samples,
                                repr(rep.max_x_decrease), repr(rep.max_y_increase), int(rep.passed)])
        print(f"violations: {failed}", file=sys.stderr)
        return EXIT_FAIL if failed else EXIT_OK
    spec = lf.FlowSpec.linear(args.lambda1, args.lambda2, args.box, args.box)
    traj = lf.integrate(spec, (args.x0, args.y0), (0.0, args.t_max), rtol=args.rtol)
    rep = lf.monotonicity_check(traj)
    with _CsvOut(args.out) as w:
        _traj_rows(w, traj)
    print(f"max |x| decrease {rep.max_x_decrease:.3e}, max |y| increase {rep.max_y_increase:.3e}, "
          f"{'pass' if rep.passed else 'FAIL'}", file=sys.stderr)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_flow_crossing(args) -> int:
    spec = lf.FlowSpec.linear(args.lambda1, args.lambda2, args.a, args.box_b)
    cr = lf.crossing_point(spec, (args.x0, args.y0), args.a, rtol=args.rtol)
    with _CsvOut(args.out) as w:
        _traj_rows(w, cr.trajectory)
    print(f"crossing t={cr.t!r} x={cr.x!r} y={cr.y!r}", file=sys.stderr)
    return EXIT_OK


def cmd_flow_separator(args) -> int:
    spec = lf.FlowSpec.linear(1.0, args.lam)
    rep = lf.nodal_separator_residual(spec, (args.x0, args.y0), (args.t0, args.t1), rtol=args.rtol)
    with _CsvOut(args.out) as w:
        w.writerow(["t", "abs_x", "abs_y", "drift"])
        for (t, x, y), d in zip(rep.trajectory.rows(), rep.drift):
            w.writerow([repr(t), repr(abs(x)), repr(abs(y)), repr(float(d))])
    ok = rep.max_drift <= args.max_drift
    print(f"c={rep.c!r} max drift {rep.max_drift:.3e} {'pass' if ok else 'FAIL'}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_flow_saddle_node(args) -> int:
    prev, ok = math.inf, True
    with _CsvOut(args.out) as w:
        w.writerow(["y0", "t", "abs_x", "closed_form"])
        for y0 in args.y0:
            cr = lf.saddle_node_approach((args.x0, y0), args.b, rtol=args.rtol)
            if cr.central_manifold:
                w.writerow([repr(y0), "", "", ""])
                continue
            x0 = abs(args.x0)
            closed = x0 / (1 + x0 * math.log(args.b / abs(y0))) if args.x0 < 0 else float("nan")
            w.writerow([repr(y0), repr(cr.t), repr(cr.abs_x), repr(closed)])
            ok &= cr.abs_x < prev
            prev = cr.abs_x
    return EXIT_OK if ok else EXIT_FAIL


def cmd_flow_saturate(args) -> int:
    sigma = lf.TransversalSpec(args.a, args.delta, args.K)
    moduli = [args.grid_min + (args.grid_max - args.grid_min) * k / max(1, args.grid_n - 1)
              for k in range(args.grid_n)]
    angles = [2 * math.pi * k / args.args_n for k in range(args.args_n)]
    pts = lf.grid(moduli, angles)
    rep = lf.saturation_coverage(args.lam, sigma, pts, pts)
    with _CsvOut(args.out) as w:
        w.writerow(["x_re", "x_im", "y_re", "y_im", "covered", "branch"])
        for x, y, c, k in zip(rep.xs, rep.ys, rep.covered, rep.branch):
            w.writerow([repr(x.real), repr(x.imag), repr(y.real), repr(y.imag), int(c), int(k)])
    print(f"coverage {rep.fraction!r}", file=sys.stderr)
    return EXIT_OK if rep.fraction == 1.0 else EXIT_FAIL


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="folsing", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def graph_cmd(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("graph", help="graph JSON file")
        sp.add_argument("--tolerance", type=_real, default=1e-9)
        sp.add_argument("--partial", action="store_true", help="one-sided index-sum check")
        sp.set_defaults(func=func)
        return sp

    graph_cmd("analyze", cmd_analyze, "run every graph check and print one JSON report")
    graph_cmd("check-definite", cmd_check_definite, "leading minors and negative-definiteness verdict")
    graph_cmd("compute-h", cmd_compute_h, "exact h-values for a root").add_argument("--root", required=True)
    graph_cmd("verify-cs", cmd_verify_cs, "index-sum residuals and reciprocity")
    graph_cmd("witnesses", cmd_witnesses, "negative-index witnesses per D_* piece")
    graph_cmd("census", cmd_census, "separatrix count against nodal corners")
    chp = graph_cmd("chains", cmd_chains, "approximation chains")
    chp.add_argument("--start")
    chp.add_argument("--all", action="store_true")

    gp = sub.add_parser("gen-fixture", help="random consistent decoration")
    gp.add_argument("--seed", type=int, default=0)
    gp.add_argument("--size", type=int, default=None)
    gp.add_argument("--dicritical-prob", type=float, default=0.0)
    gp.set_defaults(func=cmd_gen_fixture)

    fp = sub.add_parser("flow", help="local flow experiments (CSV output)")
    fsub = fp.add_subparsers(dest="experiment", required=True)

    def flow_cmd(name, func, help_):
        sp = fsub.add_parser(name, help=help_)
        sp.add_argument("--rtol", type=_real, default=lf.DEFAULT_RTOL)
        sp.add_argument("--out", default=None, help="CSV path (default stdout)")
        sp.set_defaults(func=func)
        return sp

    m = flow_cmd("monotone", cmd_flow_monotone, "moduli monotonicity near a saddle")
    m.add_argument("--lambda1", type=_cplx, default=1.0)
    m.add_argument("--lambda2", type=_cplx, default=-1.0)
    m.add_argument("--x0", type=_cplx, default=0.25)
    m.add_argument("--y0", type=_cplx, default=0.25)
    m.add_argument("--box", type=_real, default=0.5)
    m.add_argument("--t-max", type=_real, default=100.0)
    m.add_argument("--random-specs", type=int, default=0)
    m.add_argument("--starts", type=int, default=10)
    m.add_argument("--seed", type=int, default=0)

    c = flow_cmd("crossing", cmd_flow_crossing, "first crossing of |x| = a")
    c.add_argument("--lambda1", type=_cplx, default=1.0)
    c.add_argument("--lambda2", type=_cplx, default=-1.0)
    c.add_argument("--x0", type=_cplx, default=0.5)
    c.add_argument("--y0", type=_cplx, default=0.5)
    c.add_argument("--a", type=_real, default=1.0)
    c.add_argument("--box-b", type=_real, default=1.0)

    s = flow_cmd("separator", cmd_flow_separator, "nodal separator conservation")
    s.add_argument("--lambda", dest="lam", type=_real, required=True)
    s.add_argument("--x0", type=_cplx, default=0.5)
    s.add_argument("--y0", type=_cplx, default=0.5)
    s.add_argument("--t0", type=_real, default=-2.0)
    s.add_argument("--t1", type=_real, default=2.0)
    s.add_argument("--max-drift", type=_real, default=1e-6)

    sn = flow_cmd("saddle-node", cmd_flow_saddle_node, "approach to the strong manifold")
    sn.add_argument("--x0", type=_real, default=-0.2)
    sn.add_argument("--y0", type=_cplx, nargs="+", default=[1e-3])
    sn.add_argument("--b", type=_real, default=0.5)

    st = flow_cmd("saturate", cmd_flow_saturate, "saturation coverage of a transversal disc")
    st.add_argument("--lambda", dest="lam", type=parse_number, required=True)
    st.add_argument("--a", type=_real, default=0.5)
    st.add_argument("--delta", type=_real, default=0.5)
    st.add_argument("--K", type=int, default=50)
    st.add_argument("--grid-min", type=_real, default=0.01)
    st.add_argument("--grid-max", type=_real, default=0.3)
    st.add_argument("--grid-n", type=int, default=12)
    st.add_argument("--args-n", type=int, default=4)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (lf.PreconditionError, lf.LeftDomainImmediately, lf.OnAxis, lf.GridOnAxis) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except lf.FlowError as exc:
        print(f"check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
