"""Number families: values live in Instance.values keyed by the number element."""
from __future__ import annotations

from ..elements import atom
from ..instance import Instance, Problem, Solution, register


def numbers_instance(problem, values, params=None, prefix="a"):
    """values: list of ints (or (weight, price) tuples for Knapsack)."""
    elems = [atom(f"{prefix}{i}") for i in range(len(values))]
    return Instance(problem, elems, {}, params, dict(zip(elems, values)))


def _subsets(items, weights, accept, prune=None, dims=1):
    """DFS over include/exclude of sorted items; weights are int tuples."""
    # large values first: with digit-encoded numbers the interval check then
    # settles the high columns before the low ones are explored
    order = sorted(range(len(items)), key=lambda i: -max((abs(w) for w in weights[i]), default=0))
    items = [items[i] for i in order]
    weights = [weights[i] for i in order]
    n = len(items)
    dims = len(weights[0]) if weights else dims
    lo = [[0] * dims for _ in range(n + 1)]
    hi = [[0] * dims for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        for d in range(dims):
            w = weights[i][d]
            lo[i][d] = lo[i + 1][d] + min(w, 0)
            hi[i][d] = hi[i + 1][d] + max(w, 0)

    # the outcome only depends on (i, acc): remember states with no completion
    dead = set()

    def rec(i, chosen, acc):
        if (i, acc) in dead or (prune is not None and prune(acc, lo[i], hi[i])):
            return
        found = False
        if i == n:
            if accept(acc):
                yield Solution(frozenset(chosen))
                found = True
        else:
            chosen.append(items[i])
            for sol in rec(i + 1, chosen, tuple(a + w for a, w in zip(acc, weights[i]))):
                found = True
                yield sol
            chosen.pop()
            for sol in rec(i + 1, chosen, acc):
                found = True
                yield sol
        if not found:
            dead.add((i, acc))

    yield from rec(0, [], (0,) * dims)


class _Numbers(Problem):
    ground = "numbers"

    def items(self, inst):
        items = sorted(inst.universe)
        self.guard(inst, len(items))
        return items


@register
class SubsetSum(_Numbers):
    tag = "SubsetSum"

    def verify(self, inst, cand):
        return sum(inst.values[e] for e in cand.elements) == inst.param("target")

    def solutions(self, inst):
        items = self.items(inst)
        t = inst.param("target")
        ws = [(inst.values[e],) for e in items]
        yield from _subsets(items, ws, lambda acc: acc[0] == t,
                            lambda acc, lo, hi: not acc[0] + lo[0] <= t <= acc[0] + hi[0])


@register
class Partition(_Numbers):
    tag = "Partition"

    def verify(self, inst, cand):
        total = sum(inst.values.values())
        return 2 * sum(inst.values[e] for e in cand.elements) == total

    def solutions(self, inst):
        items = self.items(inst)
        total = sum(inst.values[e] for e in items)
        ws = [(2 * inst.values[e],) for e in items]
        yield from _subsets(items, ws, lambda acc: acc[0] == total,
                            lambda acc, lo, hi: not acc[0] + lo[0] <= total <= acc[0] + hi[0])


@register
class Knapsack(_Numbers):
    """values[obj] = (weight, price); params capacity and threshold."""
    tag = "Knapsack"
    ground = "objects"

    def verify(self, inst, cand):
        w = sum(inst.values[e][0] for e in cand.elements)
        p = sum(inst.values[e][1] for e in cand.elements)
        return w <= inst.param("capacity") and p >= inst.param("threshold")

    def solutions(self, inst):
        items = self.items(inst)
        cap, thr = inst.param("capacity"), inst.param("threshold")
        ws = [tuple(inst.values[e]) for e in items]
        yield from _subsets(items, ws, lambda acc: acc[0] <= cap and acc[1] >= thr,
                            lambda acc, lo, hi: acc[0] + lo[0] > cap or acc[1] + hi[1] < thr, dims=2)


@register
class TwoMachineScheduling(_Numbers):
    """Jobs with processing times; footprint = jobs on machine one.

    Feasible iff the makespan is at most `deadline` (default ceil(total/2)).
    """
    tag = "TwoMachineScheduling"
    ground = "jobs"

    def deadline(self, inst):
        d = inst.param("deadline")
        if d is None:
            d = -(-sum(inst.values.values()) // 2)
        return d

    def verify(self, inst, cand):
        total = sum(inst.values.values())
        one = sum(inst.values[e] for e in cand.elements)
        return max(one, total - one) <= self.deadline(inst)

    def solutions(self, inst):
        items = self.items(inst)
        total = sum(inst.values[e] for e in items)
        d = self.deadline(inst)
        ws = [(inst.values[e],) for e in items]
        yield from _subsets(items, ws, lambda acc: max(acc[0], total - acc[0]) <= d,
                            lambda acc, lo, hi: acc[0] + lo[0] > d or total - acc[0] - hi[0] > d)
