"""Catalog entries into the path, Hamiltonicity and disjoint-path families."""
from __future__ import annotations

from ..elements import Rel, arc, const, edge, gadget, mark
from ..framework import CatalogEntry, SizeFunction, TargetBuilder, register_entry
from ..problems.paths import marked, terminal_labels
from ..problems.sat import LIT_CLAUSE, layout, lit, negate_text, variables

# chain positions a clause taps: 4j-2 and 4j-1 for the j-th clause (1-based)


def _tap(j):
    return 4 * j - 2


def _present(src):
    return {p for p, _ in variables(src)}, set(src.rel("clause"))


def _negative(p):
    return lit(negate_text(p.label))


def sat_to_dhp(src, **_):
    """Variable chains traversed left to right (true) or right to left (false);
    clause vertices hang off two chain positions per clause."""
    lits, all_clauses = layout(src)
    vars_, present_clauses = _present(src)
    m = 4 * len(all_clauses)
    tb = TargetBuilder("DirectedHamPath")
    s, t = const("s"), const("t")
    tb.add(None, s, t, mark("s", s), mark("t", t))
    ends = [(gadget(p, "x"), gadget(p, "x'")) for p in lits]
    if ends:
        tb.add(None, arc(s, ends[0][0]), arc(s, ends[0][1]))
    else:
        tb.add(None, arc(s, t))
    chain = {}
    for i, p in enumerate(lits):
        x, xp = ends[i]
        nxt = ends[i + 1] if i + 1 < len(ends) else (t,)
        out = [arc(u, v) for u in (x, xp) for v in nxt]
        if p not in vars_:
            tb.add(p, x, xp, arc(x, xp), arc(xp, x), *out, removed=True)
            continue
        cells = [gadget(p, f"v{k}") for k in range(1, m + 1)]
        chain[p] = cells
        seq = [x] + cells + [xp]
        tb.add(p, x, xp, *cells)
        tb.add(p, *[a for u, v in zip(seq, seq[1:]) for a in (arc(u, v), arc(v, u))], *out)
    for j, c in enumerate(all_clauses, 1):
        if c not in present_clauses:
            continue
        cv = tb.add(c, gadget(c, "c"))
        a = _tap(j) - 1  # 0-based index into the chain
        for l in sorted(set(c.members)):
            owner = Rel(LIT_CLAUSE, (l, c))
            positive = l in chain
            cells = chain[l] if positive else chain[_negative(l)]
            lo, hi = cells[a], cells[a + 1]
            if positive:
                tb.add(owner, arc(lo, cv), arc(cv, hi))
            else:
                tb.add(owner, arc(hi, cv), arc(cv, lo))
    return tb.finish(src)


def dhp_to_dhc(src, **_):
    s, t = marked(src, "s"), marked(src, "t")
    if s is None or t is None or s == t:
        raise ValueError("dhp-dhc needs distinct marked s and t")
    tb = TargetBuilder("DirectedHamCycle")
    for v in sorted(src.universe):
        tb.add(v, v)
    for a in sorted(src.rel("arc")):
        u, v = a.members
        if v != s and u != t:
            tb.add(a, a)
    tb.add(None, arc(t, s))
    return tb.finish(src)


def _triple(tb, src):
    ends = {}
    for v in sorted(src.universe):
        i, mid, o = gadget(v, "in"), gadget(v, "mid"), gadget(v, "out")
        tb.add(v, i, mid, o, edge(i, mid), edge(mid, o))
        ends[v] = (i, o)
    for a in sorted(src.rel("arc")):
        u, v = a.members
        tb.add(a, edge(ends[u][1], ends[v][0]))
    return ends


def dhp_to_uhp(src, **_):
    tb = TargetBuilder("UndirectedHamPath")
    ends = _triple(tb, src)
    for r in sorted(src.rel("s")):
        tb.add(r, mark("s", ends[r.members[0]][0]))
    for r in sorted(src.rel("t")):
        tb.add(r, mark("t", ends[r.members[0]][1]))
    return tb.finish(src)


def dhc_to_uhc(src, **_):
    tb = TargetBuilder("UndirectedHamCycle")
    _triple(tb, src)
    return tb.finish(src)


def uhc_to_tsp(src, **_):
    tb = TargetBuilder("TravelingSalesman", {"threshold": len(src.universe)})
    for v in sorted(src.universe):
        tb.add(v, v)
    for e in sorted(src.rel("edge")):
        tb.add(e, e, value=1)
    return tb.finish(src)


def sat_to_2ddp(src, **_):
    """Path one walks the variable gadgets and picks one chain per variable;
    path two visits the clauses in reverse order through the unused chains."""
    lits, all_clauses = layout(src)
    vars_, present_clauses = _present(src)
    m = 4 * len(all_clauses)
    tb = TargetBuilder("KDisjointDirectedPath", {"k": 2})
    term = {name: const(name) for name in terminal_labels(2)}
    tb.add(None, *term.values(), *[mark(n, v) for n, v in term.items()])
    starts = [(gadget(p, "start"), gadget(p, "end")) for p in lits]
    tb.add(None, arc(term["s1"], starts[0][0] if starts else term["t1"]))
    chain = {}
    for i, p in enumerate(lits):
        a, b = starts[i]
        nxt = arc(b, starts[i + 1][0] if i + 1 < len(starts) else term["t1"])
        if p not in vars_:
            tb.add(p, a, b, arc(a, b), nxt, removed=True)
            continue
        tb.add(p, a, b, nxt)
        for l in (p, _negative(p)):
            cells = [gadget(l, f"c{k}") for k in range(1, m + 1)]
            chain[l] = cells
            if not cells and l != p:
                continue  # no clauses: both chains are the one arc start -> end
            seq = [a] + cells + [b]
            tb.add(l, *cells, *[arc(u, v) for u, v in zip(seq, seq[1:])])
    clause_ends = [(gadget(c, "1"), gadget(c, "2")) for c in all_clauses]
    tb.add(None, arc(term["s2"], clause_ends[-1][0] if clause_ends else term["t2"]))
    for j, c in enumerate(all_clauses, 1):
        c1, c2 = clause_ends[j - 1]
        conn = arc(c2, clause_ends[j - 2][0] if j > 1 else term["t2"])
        if c not in present_clauses:
            tb.add(c, c1, c2, arc(c1, c2), conn, removed=True)
            continue
        tb.add(c, c1, c2, conn)
        k = _tap(j) - 1
        for l in sorted(set(c.members)):
            cells = chain[l]
            tb.add(Rel(LIT_CLAUSE, (l, c)), arc(c1, cells[k]), arc(cells[k + 1], c2))
    return tb.finish(src)


def kddp_widen(src, k=3, **_):
    src_k = src.param("k", 2)
    if k < src_k:
        raise ValueError(f"cannot narrow {src_k} disjoint paths to {k}")
    tb = TargetBuilder("KDisjointDirectedPath", {"k": k})
    for v in sorted(src.universe):
        tb.add(v, v)
    for a in sorted(src.rel("arc")):
        tb.add(a, a)
    for label in terminal_labels(src_k):
        for r in sorted(src.rel(label)):
            tb.add(r, r)
    for j in range(src_k + 1, k + 1):
        s, t = const(f"s{j}"), const(f"t{j}")
        tb.add(None, s, t, mark(f"s{j}", s), mark(f"t{j}", t), arc(s, t))
    return tb.finish(src)


def _same(s, **_):
    return s


def _plus(n):
    def f(s, **_):
        return s + n
    return f


def _triple_size(extra):
    def f(s, **_):
        return 3 * s + extra
    return f


def _widen_size(s, k=3, src_k=2, **_):
    return s + k - src_k


for _entry in (
    CatalogEntry("3sat-dhp", "ThreeSat", "DirectedHamPath", sat_to_dhp,
                 size=SizeFunction(constant=1, variable=(2, 4), clause=(1, 0),
                                   removed_variable=(2, 0))),
    CatalogEntry("dhp-dhc", "DirectedHamPath", "DirectedHamCycle", dhp_to_dhc, size_map=_plus(1),
                 base="3sat-dhp"),
    CatalogEntry("dhp-uhp", "DirectedHamPath", "UndirectedHamPath", dhp_to_uhp,
                 size_map=_triple_size(2), base="3sat-dhp"),
    CatalogEntry("dhc-uhc", "DirectedHamCycle", "UndirectedHamCycle", dhc_to_uhc,
                 size_map=_triple_size(0), base="dhp-dhc"),
    CatalogEntry("uhc-tsp", "UndirectedHamCycle", "TravelingSalesman", uhc_to_tsp, size_map=_same,
                 base="dhc-uhc", threshold="threshold"),
    CatalogEntry("3sat-2ddp", "ThreeSat", "KDisjointDirectedPath", sat_to_2ddp,
                 size=SizeFunction(constant=2, variable=(2, 4), clause=(4, 0),
                                   removed_variable=(2, 0), removed_clause=(2, 0))),
    CatalogEntry("2ddp-kddp", "KDisjointDirectedPath", "KDisjointDirectedPath", kddp_widen,
                 size_map=_widen_size, base="3sat-2ddp", options={"k": 3}),
):
    register_entry(_entry)
