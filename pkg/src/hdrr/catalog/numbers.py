"""Catalog entries into the number families."""
from __future__ import annotations

from itertools import combinations

from ..elements import const, gadget, removal
from ..framework import CatalogEntry, SizeFunction, TargetBuilder, register_entry
from ..problems.sat import layout, lit, negate_text, negation_map, variables

CLAUSE_DIGIT = 14


def _occurrences(lits, all_clauses, neg):
    occ = {}
    for p in lits:
        for l in (p, neg[p]):
            occ[l] = sum(1 for c in all_clauses if l in c.members)
    return occ


def _layout_negations(src, lits):
    neg = negation_map(src)
    # removed variables are not in the instance any more; rebuild their negation
    for p in lits:
        if p not in neg:
            n = lit(negate_text(p.label))
            neg[p], neg[n] = n, p
    return neg


def sat_to_ss(src, **_):
    """Digit columns per variable (choice, filler, two literal counters) and
    per clause; every column must add up exactly, carries are impossible."""
    lits, all_clauses = layout(src)
    neg = _layout_negations(src, lits)
    occ = _occurrences(lits, all_clauses, neg)
    cols, targets = {}, []

    def col(key, target):
        cols[key] = len(targets)
        targets.append(target)

    for p in lits:
        col(("X", p), 1)
        col(("F", p), 1)
        col(("P", p), occ[p])
        col(("P", neg[p]), occ[neg[p]])
    for c in all_clauses:
        col(("C", c), CLAUSE_DIGIT)

    # per-column totals of every number that can ever exist bound the digit sums
    totals = [0] * len(targets)
    for p in lits:
        n = neg[p]
        totals[cols[("X", p)]] = 3
        totals[cols[("F", p)]] = occ[p] + occ[n] + 3
        for l in (p, n):
            totals[cols[("P", l)]] = 2 * occ[l] + occ[l] * (occ[l] + 1) // 2 + 4 * occ[l]
    for c in all_clauses:
        totals[cols[("C", c)]] = 8 * CLAUSE_DIGIT
    base = 10
    while base <= max(totals, default=0):
        base *= 10

    def number(digits):
        return sum(d * base ** cols[k] for k, d in digits.items())

    tb = TargetBuilder("SubsetSum", {"target": number({k: t for k, t in zip(cols, targets)})})
    present = {p for p, _ in variables(src)}
    for p in lits:
        n = neg[p]
        if p not in present:
            tb.add(p, removal(p, "R"), removed=True,
                   value=number({("X", p): 1, ("F", p): 1, ("P", p): occ[p], ("P", n): occ[n]}))
            continue
        tb.add(p, gadget(p, "T"), value=number({("X", p): 1, ("P", n): occ[n]}))
        tb.add(n, gadget(n, "T"), value=number({("X", p): 1, ("P", p): occ[p]}))
        for l in (p, n):
            for m in range(occ[l] + 1):
                tb.add(l, gadget(l, f"G{m}"), value=number({("F", p): 1, ("P", l): m}))
    present_clauses = set(src.rel("clause"))
    for c in all_clauses:
        if c not in present_clauses:
            tb.add(c, removal(c, "Q"), removed=True, value=number({("C", c): CLAUSE_DIGIT}))
            continue
        distinct = sorted(set(c.members))
        for r in range(1, len(distinct) + 1):
            for sub in combinations(distinct, r):
                digits = {("C", c): CLAUSE_DIGIT}
                for l in sub:
                    digits[("P", l)] = 1
                tag = "S" + "".join(str(distinct.index(l)) for l in sub)
                tb.add(c, gadget(c, tag), value=number(digits))
    return tb.finish(src)


def ss_to_partition(src, **_):
    total = sum(src.values.values())
    k = src.param("target", 0)
    tb = TargetBuilder("Partition")
    for x in sorted(src.universe):
        tb.add(x, x, value=src.values[x])
    tb.add(None, const("pad-low"), value=k + 1)
    tb.add(None, const("pad-high"), value=total + 1 - k)
    return tb.finish(src)


def ss_to_knapsack(src, **_):
    k = src.param("target", 0)
    tb = TargetBuilder("Knapsack", {"capacity": k, "threshold": k})
    for x in sorted(src.universe):
        tb.add(x, x, value=(src.values[x], src.values[x]))
    return tb.finish(src)


def partition_to_scheduling(src, **_):
    total = sum(src.values.values())
    tb = TargetBuilder("TwoMachineScheduling", {"deadline": total // 2})
    for x in sorted(src.universe):
        tb.add(x, x, value=src.values[x])
    return tb.finish(src)


def _same(s, **_):
    return s


def _plus_one(s, **_):
    return s + 1


for _entry in (
    CatalogEntry("3sat-ss", "ThreeSat", "SubsetSum", sat_to_ss,
                 size=SizeFunction(variable=(2, 0), clause=(1, 0), removed_variable=(1, 0),
                                   removed_clause=(1, 0))),
    CatalogEntry("ss-partition", "SubsetSum", "Partition", ss_to_partition, size_map=_plus_one,
                 base="3sat-ss"),
    CatalogEntry("ss-knapsack", "SubsetSum", "Knapsack", ss_to_knapsack, size_map=_same,
                 base="3sat-ss"),
    CatalogEntry("partition-scheduling", "Partition", "TwoMachineScheduling",
                 partition_to_scheduling, size_map=_same, base="ss-partition"),
):
    register_entry(_entry)
