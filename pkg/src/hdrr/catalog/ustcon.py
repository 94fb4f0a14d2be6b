"""Hamiltonian cycle to two-stage robust s-t connectivity.

Every vertex becomes a path; in the base scenario the paths are joined into
one long cycle (cut open between s and t on the first path).  The single
recovery scenario swaps the joining edges for four parallel copies per
original edge, so a cheap recovery has to walk the paths in the order of a
Hamiltonian cycle.
"""
from __future__ import annotations

from ..distance import Measure
from ..elements import edge, gadget, mark
from ..errors import GraphTooSmall, NotAGraph
from ..instance import Instance
from ..problems.paths import tagged_edge
from ..robust import RobustInstance, Stage
from ..scenarios import Explicit


def reduce_uhc_to_robust_ustcon(graph: Instance, measure=Measure.SYMMETRIC) -> RobustInstance:
    measure = Measure.parse(measure)
    if "edge" not in graph.relations and graph.all_relation_elements():
        raise NotAGraph(f"{graph.problem} instance has no edge relation")
    verts = sorted(graph.universe)
    n = len(verts)
    if n < 3:
        raise GraphTooSmall(f"need at least 3 vertices, got {n}")
    length = n + 3
    mid = (n + 2) // 2
    universe, edges = set(), set()
    ends = {}
    s = t = None
    for i, v in enumerate(verts):
        path = [gadget(v, str(k)) for k in range(length)]
        universe |= set(path)
        ends[v] = (path[0], path[-1])
        for k in range(length - 1):
            if i == 0 and k == mid:
                s, t = path[k], path[k + 1]
                continue
            edges.add(edge(path[k], path[k + 1]))
    joins = {edge(ends[verts[i]][1], ends[verts[(i + 1) % n]][0]) for i in range(n)}
    quads = set()
    for e in sorted(graph.rel("edge")):
        u, v = e.members[:2]
        for k, (x, y) in enumerate((x, y) for x in ends[u] for y in ends[v]):
            quads.add(tagged_edge(x, y, gadget(e, str(k))))
    inst = Instance("UstCon", universe, {"edge": edges | joins | quads,
                                         "s": {mark("s", s)}, "t": {mark("t", t)}})
    kappa = 2 * n if measure is Measure.SYMMETRIC else n
    stage = Stage(Explicit([frozenset(quads)]), kappa, measure)
    return RobustInstance(inst, frozenset(joins | quads), frozenset(joins), [stage])
