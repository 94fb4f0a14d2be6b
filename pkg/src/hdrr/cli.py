"""Command-line interface: `hdrr <command> ...`.

Exit codes: 0 YES / success, 1 NO / failed check, 2 usage or input error,
3 budget or timeout exceeded.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import catalog  # noqa: F401  (fills the catalog)
from . import io
from .catalog.qae import reduce_qae_multistage
from .catalog.ustcon import reduce_uhc_to_robust_ustcon
from .corpus import removable, sample_sources, sat_corpus, source_corpus
from .distance import Measure
from .errors import BudgetExceeded, HdrrError
from .framework import (CATALOG, apply_reduction, check_modularity, check_preimage_uniqueness,
                        get_entry, lift_to_robust)
from .instance import Instance, brute_solve, remove_element
from .problems.graphs import graph
from .qbf import QaeFormula, eval_qbf, formula_of, random_qae
from .robust import RobustInstance, solve_robust
from .scenarios import EXPANSION_CAP, count_scenarios, expand

YES, NO, USAGE, BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def load(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    suffix = Path(path).suffix.lower()
    if suffix in (".cnf", ".dimacs"):
        return io.parse_dimacs_cnf(text)
    if suffix == ".qdimacs":
        return io.parse_qdimacs(text)
    return io.loads(text)


def emit(text: str, out=None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _options(pairs):
    opts = {}
    for p in pairs or ():
        key, sep, value = p.partition("=")
        if not sep:
            raise UsageError(f"option {p!r} is not key=value")
        opts[key] = int(value) if value.lstrip("-").isdigit() else value
    return opts


def _robust(obj) -> RobustInstance:
    if isinstance(obj, RobustInstance):
        return obj
    if isinstance(obj, Instance):
        return RobustInstance(obj, (), ())
    raise UsageError(f"expected an instance document, got {type(obj).__name__}")


def _formula(obj) -> QaeFormula:
    if isinstance(obj, QaeFormula):
        return obj
    if isinstance(obj, Instance) and obj.problem == "QaeThreeSat":
        return formula_of(obj)
    raise UsageError("expected a QAE formula (document or QDIMACS file)")


# -- commands

def cmd_solve(a):
    ri = _robust(load(a.file))
    res = solve_robust(ri, timeout=a.timeout, cap=a.cap)
    print("YES" if res.decision else "NO")
    if a.witness and res.witness is not None:
        Path(a.witness).write_text(io.dumps(res.witness) + "\n")
    return YES if res.decision else NO


def cmd_reduce(a):
    src = load(a.file)
    if not isinstance(src, Instance):
        raise UsageError("reduce expects a plain instance")
    res = apply_reduction(a.entry, src, **_options(a.option))
    emit(io.dumps(res.target), a.output)
    if a.table_output:
        Path(a.table_output).write_text(io.dumps(res.table) + "\n")
    return YES


def cmd_lift(a):
    ri = _robust(load(a.file))
    emit(io.dumps(lift_to_robust(a.entry, ri, cap=a.cap, **_options(a.option))), a.output)
    return YES


def cmd_scenarios(a):
    ri = _robust(load(a.file))
    for i, st in enumerate(ri.stages, 1):
        if a.action == "count":
            print(f"stage {i}: {count_scenarios(st.scenarios)}")
        else:
            for s in expand(st.scenarios, a.cap):
                print(f"stage {i}: " + json.dumps(io.encode(s), sort_keys=True))
    return YES


def _check_corpus(e, cap, limit=None):
    if e.source == "ThreeSat":
        items = list(sat_corpus(cap, cap))
    else:
        items = list(source_corpus(e.source, cap))
    if limit is not None and len(items) > limit:
        items = random.Random(0).sample(items, limit)
    return items


def cmd_check(a):
    e = get_entry(a.entry)
    cap = a.exhaustive_cap
    fails = total = 0
    if a.what == "modularity":
        items = (_check_corpus(e, cap, a.samples) if e.source == "ThreeSat"
                 else sample_sources(e.source, a.samples, cap=cap))
        for src in items:
            for r in removable(src):
                total += 1
                fails += not check_modularity(e, src, r)
    else:
        for src in _check_corpus(e, cap):
            total += 1
            if a.what == "preimage":
                res = apply_reduction(e, src)
                fails += not check_preimage_uniqueness(res.table, res.target)
            else:
                target = apply_reduction(e, src).target
                fails += (brute_solve(src) is None) != (brute_solve(target) is None)
    print(f"{a.what} {e.name}: {total} checks, {fails} failures")
    return YES if fails == 0 else NO


def cmd_qae(a):
    f = _formula(load(a.file))
    if a.action == "eval":
        value = eval_qbf(f)
        print("TRUE" if value else "FALSE")
        return YES if value else NO
    m = a.stages if a.stages is not None else f.m
    emit(io.dumps(reduce_qae_multistage(f, m, a.encoding, a.measure)), a.output)
    return YES


def cmd_export(a):
    obj = load(a.file)
    if a.format == "json":
        emit(io.dumps(obj, indent=2), a.output)
    elif a.format == "qdimacs":
        emit(io.emit_qdimacs(_formula(obj)), a.output)
    elif a.format == "dimacs":
        if not isinstance(obj, Instance) or obj.problem != "ThreeSat":
            raise UsageError("dimacs export needs a ThreeSat instance")
        emit(io.emit_dimacs_cnf(obj), a.output)
    else:
        table = None
        if isinstance(obj, RobustInstance):
            obj = obj.instance
        if a.entry:
            res = apply_reduction(a.entry, obj, **_options(a.option))
            obj, table = res.target, res.table
        emit(io.emit_dot(obj, table), a.output)
    return YES


def _size(text, n):
    try:
        vals = [int(v) for v in text.split(",")] if text else []
    except ValueError:
        raise UsageError(f"--size expects comma separated integers, got {text!r}") from None
    if len(vals) < n:
        raise UsageError(f"--size needs at least {n} values")
    return vals


_GRAPHS = ("VertexCover", "DominatingSet", "FeedbackVertexSet", "IndependentSet", "Clique",
           "KColoring", "CliqueCover", "UndirectedHamCycle", "UndirectedHamPath", "TravelingSalesman")
_DIGRAPHS = ("DirectedHamCycle", "DirectedHamPath", "KDisjointDirectedPath")
_NUMBERS = ("SubsetSum", "Partition", "Knapsack", "TwoMachineScheduling")


def generate(problem, seed, size, measure=Measure.SYMMETRIC, shape=None):
    rng = random.Random(seed)
    if problem == "ThreeSat":
        n, m = _size(size, 2)[:2]
        return io.random_3sat(rng, n, m)
    if problem == "Robust3Sat":
        vals = _size(size, 1) + [3, 3]
        return io.random_robust_sat(rng, vals[0], vals[1], vals[2], measure)
    if problem == "QaeThreeSat":
        vals = _size(size, 2)
        return random_qae(rng, vals[:-1], vals[-1])
    if problem == "UstCon":
        n = _size(size, 1)[0]
        verts = [f"v{i}" for i in range(n)]
        if shape == "cycle":
            edges = [(verts[i], verts[(i + 1) % n]) for i in range(n)]
            g = graph(verts, edges, "UndirectedHamCycle")
        else:
            g = io.random_graph(rng, n, 0.5, "UndirectedHamCycle")
        return reduce_uhc_to_robust_ustcon(g, measure)
    if problem in _GRAPHS or problem in _DIGRAPHS:
        vals = _size(size, 1)
        params = {"k": vals[1]} if len(vals) > 1 else {}
        return io.random_graph(rng, vals[0], 0.5, problem, directed=problem in _DIGRAPHS, **params)
    if problem in _NUMBERS:
        vals = _size(size, 1) + [9]
        return io.random_numbers(rng, vals[0], vals[1], problem)
    raise UsageError(f"no generator for {problem!r}")


def cmd_gen(a):
    emit(io.dumps(generate(a.problem, a.seed, a.size, a.measure, a.shape)), a.output)
    return YES


# -- parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--measure", choices=[m.value for m in Measure], default=argparse.SUPPRESS,
                        help="distance measure (default symmetric)")
    common.add_argument("--timeout", type=float, default=argparse.SUPPRESS, help="seconds")
    common.add_argument("--cap", type=int, default=argparse.SUPPRESS,
                        help=f"scenario expansion cap (default {EXPANSION_CAP})")
    p = argparse.ArgumentParser(prog="hdrr", parents=[common],
                                description="Hamming distance recoverable robust problems")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("solve", cmd_solve, "decide a robust instance")
    sp.add_argument("file")
    sp.add_argument("--witness", help="write the witness tree here")

    for name, fn, help in (("reduce", cmd_reduce, "apply a catalog entry"),
                           ("lift", cmd_lift, "lift an entry to a robust 3SAT instance")):
        sp = add(name, fn, help)
        sp.add_argument("--entry", required=True, choices=sorted(CATALOG))
        sp.add_argument("--option", action="append", metavar="KEY=VALUE")
        sp.add_argument("file")
        sp.add_argument("-o", "--output")
        if name == "reduce":
            sp.add_argument("--table-output", help="write the gadget table here")

    sp = add("scenarios", cmd_scenarios, "count or expand scenario sets")
    sp.add_argument("action", choices=["expand", "count"])
    sp.add_argument("file")

    sp = add("check", cmd_check, "run a property check over small instances")
    sp.add_argument("what", choices=["preimage", "modularity", "soundness"])
    sp.add_argument("--entry", required=True, choices=sorted(CATALOG))
    sp.add_argument("--exhaustive-cap", type=int, default=2)
    sp.add_argument("--samples", type=int, default=50)

    sp = add("qae", cmd_qae, "evaluate or reduce a quantified formula")
    sp.add_argument("action", choices=["eval", "reduce"])
    sp.add_argument("file")
    sp.add_argument("--encoding", choices=["xor", "gamma"], default="xor")
    sp.add_argument("--stages", type=int)
    sp.add_argument("-o", "--output")

    sp = add("export", cmd_export, "convert to dot, qdimacs, dimacs or json")
    sp.add_argument("--format", required=True, choices=["dot", "qdimacs", "dimacs", "json"])
    sp.add_argument("--entry", choices=sorted(CATALOG), help="dot: reduce first and cluster gadgets")
    sp.add_argument("--option", action="append", metavar="KEY=VALUE")
    sp.add_argument("file")
    sp.add_argument("-o", "--output")

    sp = add("gen", cmd_gen, "seeded instance generator")
    sp.add_argument("--problem", required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--size", default="")
    sp.add_argument("--shape", choices=["random", "cycle"], default="random")
    sp.add_argument("-o", "--output")
    return p


def cli_dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else YES
    a.measure = Measure.parse(getattr(a, "measure", "symmetric"))
    a.timeout = getattr(a, "timeout", None)
    a.cap = getattr(a, "cap", EXPANSION_CAP)
    try:
        return a.fn(a)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET
    except (UsageError, HdrrError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


def main():
    sys.exit(cli_dispatch())


if __name__ == "__main__":
    main()
