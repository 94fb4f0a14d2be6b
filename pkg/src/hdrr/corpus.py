"""Exhaustive and sampled source instances for the catalog checks."""
from __future__ import annotations

import random
from itertools import combinations, permutations, product

from .elements import atom, mark
from .instance import Instance, family
from .io import random_graph
from .problems.graphs import graph
from .problems.numbers import numbers_instance
from .problems.paths import terminal_labels
from .problems.sat import sat_instance


def clause_pool(n_vars: int):
    """Every set of 1 to 3 distinct literals over n variables."""
    lits = [s + f"x{i}" for i in range(1, n_vars + 1) for s in ("", "~")]
    return [list(c) for w in (1, 2, 3) for c in combinations(lits, w)]


def sat_corpus(n_vars: int = 2, max_clauses: int = 2):
    names = [f"x{i}" for i in range(1, n_vars + 1)]
    pool = clause_pool(n_vars)
    for k in range(max_clauses + 1):
        for cs in combinations(pool, k):
            yield sat_instance(names, cs)


def _graphs(n, directed=False):
    verts = [f"v{i}" for i in range(n)]
    pairs = list(permutations(verts, 2)) if directed else list(combinations(verts, 2))
    for mask in range(1 << len(pairs)):
        yield verts, [p for i, p in enumerate(pairs) if mask >> i & 1]


def _with_marks(inst, labels, verts):
    rels = dict(inst.relations)
    for label, v in zip(labels, verts):
        rels[label] = {mark(label, atom(v))}
    return inst.replace(relations=rels)


def _threshold_graphs(problem, cap):
    for n in range(cap + 1):
        for verts, es in _graphs(n):
            for k in range(n + 1):
                yield graph(verts, es, problem, params={"k": k})


def _colour_graphs(cap, colours=(2, 3)):
    for n in range(cap + 1):
        for verts, es in _graphs(n):
            for k in colours:
                yield graph(verts, es, "KColoring", params={"k": k})


def _ham_digraphs(problem, cap, marks, rng, samples):
    small = min(cap, 4)
    for n in range(1, small + 1):
        for verts, arcs in _graphs(n, directed=True):
            g = graph(verts, arcs, problem, "arc")
            if not marks:
                yield g
                continue
            for s, t in permutations(verts, 2):
                yield _with_marks(g, ("s", "t"), (s, t))
    # above four vertices the raw enumeration explodes; sample instead
    for _ in range(samples if cap > small else 0):
        g = random_graph(rng, cap, rng.choice((0.3, 0.5, 0.7)), problem, directed=True)
        if marks:
            s, t = rng.sample(sorted(v.label for v in g.universe), 2)
            g = _with_marks(g, ("s", "t"), (s, t))
        yield g


def _kddp(cap, rng, samples):
    labels = terminal_labels(2)
    for verts, arcs in _graphs(4, directed=True):
        yield _with_marks(graph(verts, arcs, "KDisjointDirectedPath", "arc", {"k": 2}), labels, verts)
    for _ in range(samples if cap > 4 else 0):
        g = random_graph(rng, 5, rng.choice((0.3, 0.5)), "KDisjointDirectedPath", directed=True, k=2)
        order = rng.sample([f"v{i}" for i in range(5)], 4)
        yield _with_marks(g, labels, order)


def _numbers(problem, cap):
    for n in range(cap + 1):
        top = 3 if n <= 4 else 2
        for values in product(range(top + 1), repeat=n):
            if problem == "SubsetSum":
                for target in range(sum(values) + 2):
                    yield numbers_instance(problem, list(values), {"target": target})
            else:
                yield numbers_instance(problem, list(values))


def source_corpus(problem: str, cap: int = 5, samples: int = 200, seed: int = 0):
    """All instances of `problem` with at most `cap` universe elements, where
    that is affordable; sampled instances at the cap otherwise."""
    rng = random.Random(seed)
    if problem == "ThreeSat":
        yield from sat_corpus(2, 2)
    elif problem in ("VertexCover", "IndependentSet"):
        yield from _threshold_graphs(problem, cap)
    elif problem == "KColoring":
        yield from _colour_graphs(cap)
    elif problem == "UndirectedHamCycle":
        for n in range(cap + 1):
            for verts, es in _graphs(n):
                yield graph(verts, es, problem)
    elif problem == "DirectedHamPath":
        yield from _ham_digraphs(problem, cap, True, rng, samples)
    elif problem == "DirectedHamCycle":
        yield from _ham_digraphs(problem, cap, False, rng, samples)
    elif problem == "KDisjointDirectedPath":
        yield from _kddp(cap, rng, samples)
    elif problem in ("SubsetSum", "Partition"):
        yield from _numbers(problem, cap)
    else:
        raise ValueError(f"no corpus for {problem}")


def sample_sources(problem: str, count: int, seed: int = 0, cap: int = 5):
    """`count` instances drawn from the corpus with a fixed seed."""
    items = list(source_corpus(problem, cap, samples=count, seed=seed))
    rng = random.Random(seed)
    return items if len(items) <= count else rng.sample(items, count)


def removable(inst: Instance):
    """Elements whose removal the family accepts."""
    fam = family(inst)
    out = []
    for e in sorted(inst.elements()):
        try:
            fam.removal_set(inst, e)
        except ValueError:
            continue
        out.append(e)
    return out
