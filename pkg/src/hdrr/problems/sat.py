"""3-Satisfiability over literal atoms with negation/clause/literal-clause relations."""
from __future__ import annotations

from typing import Iterable, Iterator

from ..distance import Measure
from ..elements import ElementId, Rel, atom
from ..errors import NotRemovable, UnknownElement
from ..instance import Instance, Problem, Solution, register

NEG = "negation"
CLAUSE = "clause"
LIT_CLAUSE = "literal-clause"


def lit(text: str) -> ElementId:
    """'x' -> positive literal of x, '~x' -> negative literal."""
    return atom(text)


def negate_text(text: str) -> str:
    return text[1:] if text.startswith("~") else "~" + text


def make_clause(lits: Iterable) -> Rel:
    lits = [lit(l) if isinstance(l, str) else l for l in lits]
    if not 1 <= len(lits) <= 3:
        raise ValueError(f"clause width {len(lits)} outside 1..3")
    while len(lits) < 3:
        lits.append(lits[-1])
    return Rel(CLAUSE, lits)


def sat_instance(variables: Iterable[str], clauses: Iterable[Iterable] = ()) -> Instance:
    """Build a ThreeSat instance; literals are 'x' / '~x' strings."""
    names = list(dict.fromkeys(variables))
    clause_rels = [make_clause(c) for c in clauses]
    for c in clause_rels:
        for l in c.members:
            name = l.label.lstrip("~")
            if name not in names:
                names.append(name)
    universe, negs = set(), set()
    for name in names:
        if name.startswith("~"):
            raise ValueError("variable names may not start with '~'")
        p, n = lit(name), lit("~" + name)
        universe |= {p, n}
        negs.add(Rel(NEG, (p, n)))
    lc = {Rel(LIT_CLAUSE, (l, c)) for c in clause_rels for l in set(c.members)}
    return Instance("ThreeSat", universe, {NEG: negs, CLAUSE: clause_rels, LIT_CLAUSE: lc})


def variables(inst: Instance) -> list:
    """Sorted (positive, negative) literal pairs."""
    return sorted(r.members for r in inst.rel(NEG))


def clauses(inst: Instance) -> list:
    return sorted(inst.rel(CLAUSE))


def layout(inst: Instance):
    """(positive literals, clauses) of the originating full formula."""
    lay = inst.param("layout")
    if lay is None:
        lay = (tuple(p for p, _ in variables(inst)), tuple(clauses(inst)))
    return lay


def negation_map(inst: Instance) -> dict:
    out = {}
    for p, n in variables(inst):
        out[p], out[n] = n, p
    return out


class _Compiled:
    """Index form: variables 0..n-1, literal -> (var, polarity)."""

    def __init__(self, inst: Instance):
        self.vars = variables(inst)
        self.index = {}
        for i, (p, n) in enumerate(self.vars):
            self.index[p] = (i, True)
            self.index[n] = (i, False)
        self.clauses = []
        self.by_last = [[] for _ in self.vars]
        for c in clauses(inst):
            lits = tuple(sorted({self.index[l] for l in c.members}))
            self.clauses.append(lits)
            self.by_last[max(v for v, _ in lits)].append(lits)
        self.in_clause = set(v for c in self.clauses for v, _ in c)

        self.touching = [[] for _ in self.vars]
        for c in self.clauses:
            for v in {v for v, _ in c}:
                self.touching[v].append(c)

    def footprint(self, values) -> frozenset:
        return frozenset(p if val else n for (p, n), val in zip(self.vars, values))


def _search(comp: _Compiled, costs, budget, order_hint=None) -> Iterator[list]:
    """DFS with unit propagation; costs[i] = (cost if true, cost if false).

    A cost of None forbids that value.  Yields every total assignment that
    satisfies all clauses with total cost at most `budget`.
    """
    n = len(comp.vars)
    values = [None] * n
    prefer = order_hint or [True] * n
    floor = [min(c for c in pair if c is not None) if pair != (None, None) else None
             for pair in costs]
    if any(f is None for f in floor):
        return
    state = {"spent": 0, "floor": sum(floor)}
    trail = []

    def assign(v, val):
        extra = costs[v][0 if val else 1]
        if extra is None:
            return False
        values[v] = val
        trail.append(v)
        state["spent"] += extra
        state["floor"] -= floor[v]
        return state["spent"] + state["floor"] <= budget

    def undo(mark):
        while len(trail) > mark:
            v = trail.pop()
            state["spent"] -= costs[v][0 if values[v] else 1]
            state["floor"] += floor[v]
            values[v] = None

    def propagate(start):
        queue = trail[start:]
        while queue:
            v = queue.pop()
            for c in comp.touching[v]:
                free = None
                for u, pol in c:
                    val = values[u]
                    if val is None:
                        if free is not None and free[0] != u:
                            free = False
                            break
                        if free is None:
                            free = (u, pol)
                        elif free[1] != pol:
                            free = False  # u and ~u both open: satisfiable
                            break
                    elif val == pol:
                        free = False
                        break
                if free is None:
                    return False
                if free:
                    if not assign(*free):
                        return False
                    queue.append(free[0])
        return True

    def rec(i):
        while i < n and values[i] is not None:
            i += 1
        if i == n:
            yield list(values)
            return
        first = prefer[i]
        for val in (first, not first):
            mark = len(trail)
            if assign(i, val) and propagate(mark):
                yield from rec(i + 1)
            undo(mark)

    mark = len(trail)
    # unit clauses before any decision
    ok = True
    for c in comp.clauses:
        if len({u for u, _ in c}) == 1 and len({pol for _, pol in c}) == 1:
            u, pol = c[0]
            if values[u] is None:
                if not assign(u, pol):
                    ok = False
                    break
            elif values[u] != pol:
                ok = False
                break
    if ok and propagate(mark):
        yield from rec(0)
    undo(mark)


@register
class ThreeSat(Problem):
    tag = "ThreeSat"
    ground = "literals"
    labels = (NEG, CLAUSE, LIT_CLAUSE)

    def removal_set(self, inst, r):
        if isinstance(r, Rel):
            if r not in inst.rel(r.label):
                raise UnknownElement(r)
            if r.label == NEG:
                return set(r.members)
            if r.label == LIT_CLAUSE:
                raise NotRemovable("literal-clause relation elements go with their clause")
            return {r}
        neg = negation_map(inst)
        if r not in neg:
            raise UnknownElement(r)
        return {r, neg[r]}

    def after_removal(self, before, after):
        if "layout" not in before.params:
            after.params["layout"] = layout(before)
        return after

    def verify(self, inst, cand):
        comp = _Compiled(inst)
        chosen = set(cand.elements)
        values = []
        for p, n in comp.vars:
            if (p in chosen) == (n in chosen):
                return False
            values.append(p in chosen)
        return all(any(values[v] == pol for v, pol in c) for c in comp.clauses)

    def solutions(self, inst):
        comp = _Compiled(inst)
        self.guard(inst, len(comp.vars))
        zero = [(0, 0)] * len(comp.vars)
        for values in _search(comp, zero, 0):
            yield Solution(comp.footprint(values))

    def near(self, inst, ref, measure, budget, keep=None):
        comp = _Compiled(inst)
        self.guard(inst, len(comp.vars))
        ref = set(ref)
        measure = Measure.parse(measure)
        lits = set(comp.index)
        base = len(ref - lits) if measure is Measure.SYMMETRIC else 0
        if base > budget:
            return
        keep = None if keep is None else set(keep)
        costs, prefer = [], []
        for i, (p, n) in enumerate(comp.vars):
            cost = []
            for mine, other in ((p, n), (n, p)):
                c = 0 if mine in ref else 1
                if measure is Measure.SYMMETRIC and other in ref:
                    c += 1
                cost.append(c)
            free = keep is not None and i not in comp.in_clause and p not in keep and n not in keep
            if free:
                # value of a free variable only moves the distance; keep the cheaper one
                if cost[0] <= cost[1]:
                    cost[1] = None
                else:
                    cost[0] = None
            costs.append(tuple(cost))
            prefer.append(cost[0] is not None and (cost[1] is None or cost[0] <= cost[1]))
        for values in _search(comp, costs, budget - base, prefer):
            yield Solution(comp.footprint(values))


def satisfiable_under(inst: Instance, fixed: dict) -> bool:
    """Is the formula satisfiable with the given var-literal -> bool fixings?"""
    comp = _Compiled(inst)
    costs = []
    for p, _ in comp.vars:
        if p in fixed:
            costs.append((0, None) if fixed[p] else (None, 0))
        else:
            costs.append((0, 0))
    return next(_search(comp, costs, 0), None) is not None
