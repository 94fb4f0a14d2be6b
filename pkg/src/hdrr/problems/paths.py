"""Path, Hamiltonicity and disjoint-path families."""
from __future__ import annotations

from ..distance import Measure, hamming
from ..elements import Rel, arc, edge
from ..errors import NotRemovable
from ..instance import Instance, Problem, Solution, register
from .graphs import adjacency


def marked(inst: Instance, label):
    items = sorted(inst.rel(label))
    return items[0].members[0] if items else None


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _link(directed):
    return arc if directed else edge


def _walk_items(verts, seq, directed, closed=False):
    mk = _link(directed)
    pairs = list(zip(seq, seq[1:]))
    if closed:
        pairs.append((seq[-1], seq[0]))
    return frozenset(mk(verts[a], verts[b]) for a, b in pairs)


def hamiltonian_walks(n, adj, start, end=None, cycle=False):
    """Vertex sequences visiting all n vertices, from start (to end)."""
    full = (1 << n) - 1
    inn = [0] * n
    for u in range(n):
        for v in _bits(adj[u]):
            inn[v] |= 1 << u
    path = [start]

    def feasible(u, visited):
        rest = full & ~visited
        open_ = rest | 1 << u
        closing = 1 << start if cycle else 0
        only_after_u = sinks = 0
        for v in _bits(rest):
            pred = inn[v] & open_
            if not pred:
                return False
            if pred == 1 << u:
                # u has a single successor
                only_after_u += 1
                if only_after_u > 1:
                    return False
            if v == end:
                continue
            succ = adj[v] & (rest | closing)
            # predecessor and successor are distinct vertices
            if not succ or (pred | succ) & ((pred | succ) - 1) == 0:
                # with a free end, one vertex may close the path
                if end is not None or cycle or sinks:
                    return False
                sinks += 1
        return True

    def rec(u, visited):
        if visited == full:
            if end is None or u == end:
                if not cycle or adj[u] >> start & 1:
                    yield list(path)
            return
        nb = adj[u] & ~visited
        if end is not None and (visited | 1 << end) != full:
            nb &= ~(1 << end)
        if n > 10 and not feasible(u, visited):
            return
        for v in _bits(nb):
            path.append(v)
            yield from rec(v, visited | 1 << v)
            path.pop()

    if n == 0:
        return
    yield from rec(start, 1 << start)


class _Marked(Problem):
    directed = False
    fixed_marks = ("s", "t")

    @property
    def link_label(self):
        return "arc" if self.directed else "edge"

    def ground_items(self, inst):
        return set(inst.rel(self.link_label))

    def graph(self, inst):
        return adjacency(inst, self.link_label, self.directed)

    def walk_ok(self, inst, cand, seq, closed=False):
        """Check that cand's footprint is exactly the link set of seq."""
        if seq is None:
            return False
        links = set(inst.rel(self.link_label))
        mk = _link(self.directed)
        pairs = list(zip(seq, seq[1:])) + ([(seq[-1], seq[0])] if closed else [])
        items = {mk(a, b) for a, b in pairs}
        return items <= links and items == set(cand.elements) and len(items) == len(pairs)

    def sequence(self, inst, cand, start):
        """Recover the vertex sequence from a footprint starting at `start`."""
        succ = {}
        for r in cand.elements:
            a, b = r.members
            succ.setdefault(a, []).append(b)
            if not self.directed:
                succ.setdefault(b, []).append(a)
        seq, prev, seen = [start], None, {start}
        while True:
            nxt = [v for v in succ.get(seq[-1], []) if v != prev and v not in seen]
            if not nxt:
                return seq
            if len(nxt) > 1 and self.directed:
                return None
            prev = seq[-1]
            seq.append(nxt[0])
            seen.add(nxt[0])


def tagged_edge(u, v, tag) -> Rel:
    """Edge with an extra identity member, so parallel edges stay distinct."""
    a, b = sorted((u, v))
    return Rel("edge", (a, b, tag))


@register
class UstCon(_Marked):
    """s-t connectivity; feasible solutions are simple s-t paths (edge sets).

    Edges may carry a third identity member (see tagged_edge), which makes
    parallel edges possible.
    """
    tag = "UstCon"
    ground = "edges"
    labels = ("edge", "s", "t")

    @staticmethod
    def incidence(inst):
        verts = sorted(inst.universe)
        idx = {v: i for i, v in enumerate(verts)}
        inc = [[] for _ in verts]
        for r in sorted(inst.rel("edge")):
            a, b = r.members[:2]
            if a != b and a in idx and b in idx:
                inc[idx[a]].append((idx[b], r))
                inc[idx[b]].append((idx[a], r))
        return verts, idx, inc

    def verify(self, inst, cand):
        s, t = marked(inst, "s"), marked(inst, "t")
        if s is None or t is None:
            return False
        if s == t:
            return not cand.elements
        chosen = set(cand.elements)
        if not chosen <= set(inst.rel("edge")):
            return False
        nbrs = {}
        for r in chosen:
            a, b = r.members[:2]
            nbrs.setdefault(a, []).append((b, r))
            nbrs.setdefault(b, []).append((a, r))
        cur, used, seen = s, set(), {s}
        while cur != t:
            nxt = [(v, r) for v, r in nbrs.get(cur, []) if r not in used]
            if len(nxt) != 1 or nxt[0][0] in seen:
                return False
            cur, r = nxt[0]
            used.add(r)
            seen.add(cur)
        return used == chosen

    def _paths(self, inst, ref=None, measure=None, budget=None):
        verts, idx, inc = self.incidence(inst)
        self.guard(inst, len(verts) + len(inst.rel("edge")))
        s, t = marked(inst, "s"), marked(inst, "t")
        if s is None or t is None:
            return
        si, ti = idx[s], idx[t]
        if si == ti:
            yield Solution(frozenset(), (s,))
            return
        limit = None
        if ref is not None:
            ref = set(ref)
            fixed = len(ref - set(inst.rel("edge"))) if measure is Measure.SYMMETRIC else 0
            limit = budget - fixed
            if limit < 0:
                return
        path, used = [si], []

        def rec(u, visited, cost):
            if u == ti:
                sol = Solution(frozenset(used), tuple(verts[i] for i in path))
                if ref is None or hamming(ref, sol.elements, measure) <= budget:
                    yield sol
                return
            for v, r in inc[u]:
                if visited >> v & 1:
                    continue
                step = 0
                if limit is not None:
                    step = r not in ref
                    if cost + step > limit:
                        continue
                path.append(v)
                used.append(r)
                yield from rec(v, visited | 1 << v, cost + step)
                used.pop()
                path.pop()

        yield from rec(si, 1 << si, 0)

    def solutions(self, inst):
        yield from self._paths(inst)

    def near(self, inst, ref, measure, budget, keep=None):
        yield from self._paths(inst, ref, Measure.parse(measure), budget)


class _HamPath(_Marked):
    def verify(self, inst, cand):
        s, t = marked(inst, "s"), marked(inst, "t")
        if s is None or t is None:
            return False
        seq = self.sequence(inst, cand, s)
        return (seq is not None and seq[-1] == t and set(seq) == set(inst.universe)
                and self.walk_ok(inst, cand, seq))

    def solutions(self, inst):
        verts, idx, adj = self.graph(inst)
        self.guard(inst, len(verts))
        s, t = marked(inst, "s"), marked(inst, "t")
        if s is None or t is None:
            return
        for seq in hamiltonian_walks(len(verts), adj, idx[s], idx[t]):
            yield Solution(_walk_items(verts, seq, self.directed), tuple(verts[i] for i in seq))


@register
class DirectedHamPath(_HamPath):
    tag = "DirectedHamPath"
    ground = "arcs"
    directed = True
    labels = ("arc", "s", "t")


@register
class UndirectedHamPath(_HamPath):
    tag = "UndirectedHamPath"
    ground = "edges"
    labels = ("edge", "s", "t")


class _HamCycle(_Marked):
    fixed_marks = ()
    min_order = 2

    def accept(self, inst, cand):
        return True

    def verify(self, inst, cand):
        verts = sorted(inst.universe)
        if len(verts) < self.min_order:
            return False
        seq = self.sequence(inst, cand, verts[0])
        return (seq is not None and set(seq) == set(verts)
                and self.walk_ok(inst, cand, seq, closed=True) and self.accept(inst, cand))

    def solutions(self, inst):
        verts, _, adj = self.graph(inst)
        n = len(verts)
        self.guard(inst, n)
        if n < self.min_order:
            return
        for seq in hamiltonian_walks(n, adj, 0, cycle=True):
            if not self.directed and seq[1] > seq[-1]:
                continue  # reflection of an already listed cycle
            sol = Solution(_walk_items(verts, seq, self.directed, closed=True),
                           tuple(verts[i] for i in seq))
            if self.accept(inst, sol):
                yield sol


@register
class DirectedHamCycle(_HamCycle):
    tag = "DirectedHamCycle"
    ground = "arcs"
    directed = True
    labels = ("arc",)


@register
class UndirectedHamCycle(_HamCycle):
    tag = "UndirectedHamCycle"
    ground = "edges"
    labels = ("edge",)
    min_order = 3


@register
class TravelingSalesman(_HamCycle):
    """Tour of weight at most `threshold` (default |V|); weights in values."""
    tag = "TravelingSalesman"
    ground = "edges"
    labels = ("edge",)
    min_order = 3

    def accept(self, inst, cand):
        limit = inst.param("threshold")
        if limit is None:
            limit = len(inst.universe)
        return sum(inst.values.get(e, 1) for e in cand.elements) <= limit


def terminal_labels(k):
    return [f"s{i}" for i in range(1, k + 1)] + [f"t{i}" for i in range(1, k + 1)]


@register
class KDisjointDirectedPath(_Marked):
    """k vertex-disjoint directed paths s_i -> t_i; footprint = their arcs."""
    tag = "KDisjointDirectedPath"
    ground = "arcs"
    directed = True
    labels = ("arc",)

    def k(self, inst):
        return inst.param("k", 2)

    def removal_set(self, inst, r):
        doomed = Problem.removal_set(self, inst, r)
        for label in terminal_labels(self.k(inst)):
            for m in inst.rel(label):
                if r == m or r in m.members:
                    raise NotRemovable(f"{r!r} is a terminal")
        return doomed

    def terminals(self, inst):
        k = self.k(inst)
        return [(marked(inst, f"s{i}"), marked(inst, f"t{i}")) for i in range(1, k + 1)]

    def verify(self, inst, cand):
        terms = self.terminals(inst)
        if any(s is None or t is None for s, t in terms):
            return False
        used, covered = set(), set()
        for s, t in terms:
            sub = Solution(frozenset(r for r in cand.elements if self._on_path(cand, r, s)))
            seq = self.sequence(inst, sub, s)
            if seq is None or seq[-1] != t or used & set(seq):
                return False
            items = {arc(a, b) for a, b in zip(seq, seq[1:])}
            if not items <= set(inst.rel("arc")):
                return False
            used |= set(seq)
            covered |= items
        return covered == set(cand.elements)

    @staticmethod
    def _on_path(cand, r, s):
        # follow successors from s; arcs of other paths are unreachable from s
        succ = {}
        for a in cand.elements:
            succ.setdefault(a.members[0], []).append(a.members[1])
        seen, todo = set(), [s]
        while todo:
            u = todo.pop()
            if u in seen:
                continue
            seen.add(u)
            todo.extend(succ.get(u, []))
        return r.members[0] in seen

    def solutions(self, inst):
        verts, idx, adj = self.graph(inst)
        self.guard(inst, len(verts))
        terms = self.terminals(inst)
        if any(s is None or t is None for s, t in terms):
            return
        pairs = [(idx[s], idx[t]) for s, t in terms]
        reserved = 0
        for s, t in pairs:
            reserved |= 1 << s | 1 << t
        if bin(reserved).count("1") != 2 * len(pairs):
            return  # terminals must be distinct

        def paths(s, t, blocked):
            path = [s]

            def rec(u, visited):
                if u == t:
                    yield list(path)
                    return
                for v in _bits(adj[u] & ~visited & ~blocked):
                    path.append(v)
                    yield from rec(v, visited | 1 << v)
                    path.pop()

            yield from rec(s, 1 << s)

        def rec(i, used, chosen):
            if i == len(pairs):
                items = frozenset().union(*[_walk_items(verts, p, True) for p in chosen])
                yield Solution(items, tuple(tuple(verts[j] for j in p) for p in chosen))
                return
            s, t = pairs[i]
            others = reserved & ~(1 << s | 1 << t)
            for p in paths(s, t, used | others):
                mask = sum(1 << j for j in p)
                chosen.append(p)
                yield from rec(i + 1, used | mask, chosen)
                chosen.pop()

        yield from rec(0, 0, [])
