"""Vertex-selection and colouring families over undirected/directed graphs."""
from __future__ import annotations

from ..elements import Rel, const, edge
from ..instance import Instance, Problem, Solution, register


def vertex_index(inst: Instance):
    verts = sorted(inst.universe)
    return verts, {v: i for i, v in enumerate(verts)}


def adjacency(inst: Instance, label="edge", directed=False):
    verts, idx = vertex_index(inst)
    adj = [0] * len(verts)
    for r in inst.rel(label):
        u, v = idx[r.members[0]], idx[r.members[1]]
        adj[u] |= 1 << v
        if not directed:
            adj[v] |= 1 << u
    return verts, idx, adj


def graph(vertices, edges, problem="VertexCover", label="edge", params=None, **extra):
    from ..elements import atom
    vs = [v if not isinstance(v, str) else atom(v) for v in vertices]
    es = []
    for u, v in edges:
        u = atom(u) if isinstance(u, str) else u
        v = atom(v) if isinstance(v, str) else v
        es.append(edge(u, v, label) if label in ("edge", "non-edge") else Rel(label, (u, v)))
    return Instance(problem, vs, {label: es}, params, **extra)


def _subset(verts, mask):
    return frozenset(v for i, v in enumerate(verts) if mask >> i & 1)


class _Threshold(Problem):
    ground = "vertices"
    fixed_marks = ()

    def k(self, inst):
        return inst.param("k", 0)


@register
class VertexCover(_Threshold):
    tag = "VertexCover"
    labels = ("edge",)

    def verify(self, inst, cand):
        s = cand.elements
        return len(s) <= self.k(inst) and all(set(e.members) & s for e in inst.rel("edge"))

    def solutions(self, inst):
        verts, _, adj = adjacency(inst)
        n, k = len(verts), self.k(inst)
        self.guard(inst, n)

        # forced vertices are added ahead of time, so skip them when reached
        def walk(i, inc, exc, size):
            while i < n and inc >> i & 1:
                i += 1
            if i == n:
                yield Solution(_subset(verts, inc))
                return
            if size < k:
                yield from walk(i + 1, inc | 1 << i, exc, size + 1)
            if not adj[i] & exc:
                forced = adj[i] & ~inc & ~((1 << (i + 1)) - 1)
                cnt = bin(forced).count("1")
                if size + cnt <= k:
                    yield from walk(i + 1, inc | forced, exc | 1 << i, size + cnt)

        yield from walk(0, 0, 0, 0)


@register
class DominatingSet(_Threshold):
    tag = "DominatingSet"
    labels = ("edge",)

    def verify(self, inst, cand):
        s = cand.elements
        if len(s) > self.k(inst):
            return False
        verts, idx, adj = adjacency(inst)
        mask = sum(1 << idx[v] for v in s)
        return all((mask >> i & 1) or adj[i] & mask for i in range(len(verts)))

    def solutions(self, inst):
        verts, _, adj = adjacency(inst)
        n, k = len(verts), self.k(inst)
        self.guard(inst, n)
        closed = [adj[i] | 1 << i for i in range(n)]
        due = [[] for _ in range(n)]  # vertices whose neighbourhood is decided at i
        for j in range(n):
            due[closed[j].bit_length() - 1].append(j)

        def rec(i, inc, size):
            if i == n:
                yield Solution(_subset(verts, inc))
                return
            options = ((True, False) if size < k else (False,))
            for take in options:
                nxt = inc | (1 << i) if take else inc
                if all(closed[j] & nxt for j in due[i]):
                    yield from rec(i + 1, nxt, size + take)

        yield from rec(0, 0, 0)


@register
class HittingSet(_Threshold):
    tag = "HittingSet"
    ground = "ground-set"
    labels = ("set",)

    def verify(self, inst, cand):
        s = cand.elements
        return len(s) <= self.k(inst) and all(set(m.members) & s for m in inst.rel("set"))

    def solutions(self, inst):
        verts, idx = vertex_index(inst)
        n, k = len(verts), self.k(inst)
        self.guard(inst, n)
        sets = [sum(1 << idx[m] for m in r.members) for r in inst.rel("set")]
        if any(s == 0 for s in sets):
            return
        due = [[] for _ in range(n)]
        for s in sets:
            due[s.bit_length() - 1].append(s)

        def rec(i, inc, size):
            if i == n:
                yield Solution(_subset(verts, inc))
                return
            for take in ((True, False) if size < k else (False,)):
                nxt = inc | (1 << i) if take else inc
                if all(s & nxt for s in due[i]):
                    yield from rec(i + 1, nxt, size + take)

        yield from rec(0, 0, 0)


def _reaches(adj, src, dst, allowed):
    seen, stack = 0, [src]
    while stack:
        u = stack.pop()
        nb = adj[u] & allowed & ~seen
        if nb >> dst & 1:
            return True
        seen |= nb
        while nb:
            low = nb & -nb
            stack.append(low.bit_length() - 1)
            nb ^= low
    return False


@register
class FeedbackVertexSet(_Threshold):
    tag = "FeedbackVertexSet"
    labels = ("arc",)

    def verify(self, inst, cand):
        s = cand.elements
        if len(s) > self.k(inst):
            return False
        verts, idx, adj = adjacency(inst, "arc", directed=True)
        keep = sum(1 << i for i, v in enumerate(verts) if v not in s)
        return not any(keep >> i & 1 and _reaches(adj, i, i, keep) for i in range(len(verts)))

    def solutions(self, inst):
        verts, _, adj = adjacency(inst, "arc", directed=True)
        n, k = len(verts), self.k(inst)
        self.guard(inst, n)

        def rec(i, kept, size):
            if i == n:
                yield Solution(_subset(verts, ((1 << n) - 1) & ~kept))
                return
            if size < k:
                yield from rec(i + 1, kept, size + 1)
            nxt = kept | 1 << i
            if not _reaches(adj, i, i, nxt):
                yield from rec(i + 1, nxt, size)

        yield from rec(0, 0, 0)


class _Independent(_Threshold):
    """Independent vertex sets of exactly k vertices."""
    conflict = "edge"

    def verify(self, inst, cand):
        s = cand.elements
        if len(s) != self.k(inst):
            return False
        return not any(set(e.members) <= s for e in inst.rel(self.conflict))

    def solutions(self, inst):
        verts, _, adj = adjacency(inst, self.conflict)
        n, k = len(verts), self.k(inst)
        self.guard(inst, n)

        def rec(i, inc, size):
            if size + (n - i) < k:
                return
            if i == n:
                yield Solution(_subset(verts, inc))
                return
            if size < k and not adj[i] & inc:
                yield from rec(i + 1, inc | 1 << i, size + 1)
            yield from rec(i + 1, inc, size)

        yield from rec(0, 0, 0)


@register
class IndependentSet(_Independent):
    tag = "IndependentSet"
    labels = ("edge",)


@register
class Clique(_Independent):
    """Clique described by its non-edges: a vertex set with no non-edge inside."""
    tag = "Clique"
    labels = ("non-edge",)
    conflict = "non-edge"


def colour_item(v, c, label="color"):
    return Rel(label, (v, const(str(c))))


class _Colouring(Problem):
    ground = "vertices"
    conflict = "edge"
    item = "color"

    def colours(self, inst):
        return inst.param("k", 3)

    def ground_items(self, inst):
        return {colour_item(v, c, self.item) for v in inst.universe for c in range(self.colours(inst))}

    def verify(self, inst, cand):
        col = {}
        for r in cand.elements:
            v, c = r.members
            if v in col:
                return False
            col[v] = c
        if set(col) != set(inst.universe):
            return False
        return all(col[e.members[0]] != col[e.members[1]] for e in inst.rel(self.conflict))

    def solutions(self, inst):
        verts, _, adj = adjacency(inst, self.conflict)
        n, k = len(verts), self.colours(inst)
        self.guard(inst, n)
        colour = [None] * n

        def rec(i):
            if i == n:
                yield Solution(frozenset(colour_item(verts[j], colour[j], self.item) for j in range(n)),
                               tuple(colour))
                return
            for c in range(k):
                nb = adj[i] & ((1 << i) - 1)
                if any(nb >> j & 1 and colour[j] == c for j in range(i)):
                    continue
                colour[i] = c
                yield from rec(i + 1)
            colour[i] = None

        yield from rec(0)


@register
class KColoring(_Colouring):
    tag = "KColoring"
    labels = ("edge",)


@register
class CliqueCover(_Colouring):
    """Partition into at most k cliques; non-edges may not share a clique."""
    tag = "CliqueCover"
    labels = ("non-edge",)
    conflict = "non-edge"
    item = "clique"
