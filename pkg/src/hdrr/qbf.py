"""Quantified 3-CNF formulas of shape (EA)^m E and their brute-force evaluation."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Tuple

from .elements import atom
from .errors import BudgetExceeded
from .instance import Instance, Problem, Solution, register
from .problems.sat import CLAUSE, ThreeSat, make_clause, negate_text, sat_instance

QBF_VAR_CAP = 24


def _pad(clause):
    clause = tuple(clause)
    if not 1 <= len(clause) <= 3:
        raise ValueError(f"clause width {len(clause)} outside 1..3")
    return clause + (clause[-1],) * (3 - len(clause))


@dataclass(frozen=True)
class QaeFormula:
    """blocks[0] existential, blocks[1] universal, ... ending existential."""
    blocks: Tuple[Tuple[str, ...], ...]
    clauses: Tuple[Tuple[str, str, str], ...]

    def __init__(self, blocks, clauses=()):
        blocks = tuple(tuple(b) for b in blocks)
        if len(blocks) % 2 == 0:
            raise ValueError("a QAE formula needs an odd number of blocks (E first and last)")
        names = [v for b in blocks for v in b]
        if len(set(names)) != len(names):
            raise ValueError("quantifier blocks must be disjoint")
        clauses = tuple(_pad(c) for c in clauses)
        for c in clauses:
            for l in c:
                if l.lstrip("~") not in names:
                    raise ValueError(f"literal {l!r} not bound by any block")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "clauses", clauses)

    @property
    def m(self) -> int:
        return len(self.blocks) // 2

    def variables(self):
        return [v for b in self.blocks for v in b]


def eval_qbf(f: QaeFormula, cap: int = QBF_VAR_CAP) -> bool:
    order = f.variables()
    if len(order) > cap:
        raise BudgetExceeded(f"{len(order)} variables above cap {cap}")
    pos = {v: i for i, v in enumerate(order)}
    universal = set()
    for bi, b in enumerate(f.blocks):
        if bi % 2:
            universal |= set(b)
    clauses = [tuple({(pos[l.lstrip("~")], not l.startswith("~")) for l in c}) for c in f.clauses]
    due = [[] for _ in range(len(order) + 1)]
    for c in clauses:
        due[max(v for v, _ in c) + 1].append(c)
    values = [None] * len(order)

    def ok(i):
        return all(any(values[v] == p for v, p in c) for c in due[i])

    def rec(i):
        if not ok(i):
            return False
        if i == len(order):
            return True
        results = []
        for val in (True, False):
            values[i] = val
            results.append(rec(i + 1))
            if order[i] in universal and not results[-1]:
                break
            if order[i] not in universal and results[-1]:
                break
        values[i] = None
        return all(results) if order[i] in universal else any(results)

    return rec(0)


def random_qae(rng: random.Random, sizes, n_clauses, width=3) -> QaeFormula:
    """Random formula; block j gets sizes[j] variables named by block."""
    blocks, names = [], []
    for j, size in enumerate(sizes):
        tag = "x" if j % 2 == 0 else "y"
        block = tuple(f"{tag}{j // 2 + 1}_{k}" for k in range(size))
        blocks.append(block)
        names.extend(block)
    clauses = []
    if names:
        for _ in range(n_clauses):
            picks = rng.sample(names, min(width, len(names)))
            clauses.append(tuple(v if rng.random() < 0.5 else "~" + v for v in picks))
    return QaeFormula(blocks, clauses)


def qae_instance(f: QaeFormula) -> Instance:
    base = sat_instance(f.variables(), f.clauses)
    blocks = tuple(tuple(atom(v) for v in b) for b in f.blocks)
    return base.replace(problem="QaeThreeSat", params={"blocks": blocks})


def formula_of(inst: Instance) -> QaeFormula:
    blocks = [[p.label for p in b] for b in inst.param("blocks", ())]
    clauses = [tuple(l.label for l in c.members) for c in sorted(inst.rel(CLAUSE))]
    return QaeFormula(blocks, clauses)


def f_first(inst):
    return inst.param("blocks", ((),))[0]


@register
class QaeThreeSat(ThreeSat):
    """Solutions are first-block assignments from which the formula is won."""
    tag = "QaeThreeSat"

    def removal_set(self, inst, r):
        raise NotImplementedError("QAE formulas do not support element removal")

    def ground_items(self, inst):
        first = inst.param("blocks", ((),))[0]
        return {atom(l) for p in first for l in (p.label, negate_text(p.label))}

    def _wins(self, inst, chosen):
        f = formula_of(inst)
        units = tuple(_pad((p.label if p in chosen else "~" + p.label,)) for p in f_first(inst))
        # first block is pinned by unit clauses and moved into the innermost block
        if len(f.blocks) == 1:
            blocks = f.blocks
        else:
            blocks = ((),) + f.blocks[1:-1] + (f.blocks[-1] + f.blocks[0],)
        return eval_qbf(QaeFormula(blocks, f.clauses + units))

    def verify(self, inst, cand):
        first = inst.param("blocks")[0]
        chosen = set(cand.elements)
        for p in first:
            n = atom(negate_text(p.label))
            if (p in chosen) == (n in chosen):
                return False
        return self._wins(inst, chosen)

    def solutions(self, inst):
        first = list(inst.param("blocks")[0])
        for mask in range(2 ** len(first)):
            chosen = set()
            for i, p in enumerate(first):
                chosen.add(p if not mask >> i & 1 else atom(negate_text(p.label)))
            if self._wins(inst, chosen):
                yield Solution(frozenset(chosen))

    def near(self, inst, ref, measure, budget, keep=None):
        yield from Problem.near(self, inst, ref, measure, budget, keep)


__all__ = ["QaeFormula", "eval_qbf", "random_qae", "qae_instance", "formula_of", "make_clause"]
