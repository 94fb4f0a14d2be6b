"""Reductions from quantified 3-CNF formulas to (multi-stage) robust 3SAT.

Stage i answers universal block Y_i.  Every y in Y_i becomes a pair of
scenario variables y't / y'f plus four persistent helpers y't1, y't0, y'f0,
y'f1 that carry the chosen value into the original clauses.
"""
from __future__ import annotations

from itertools import product

from ..distance import Measure
from ..errors import BlockCountMismatch
from ..problems.sat import lit, negate_text, sat_instance
from ..qbf import QaeFormula
from ..robust import RobustInstance, Stage
from ..scenarios import GammaSets, XorDependencies


def _neg(l):
    return negate_text(l)


def _iff(a, b):
    """a <-> b as two padded 2-clauses."""
    return [(_neg(a), b), (a, _neg(b))]


class _Builder:
    def __init__(self, f: QaeFormula, m: int, encoding: str):
        if len(f.blocks) != 2 * m + 1:
            raise BlockCountMismatch(f"expected {2 * m + 1} blocks, got {len(f.blocks)}")
        if encoding not in ("xor", "gamma"):
            raise ValueError(f"unknown encoding {encoding!r}")
        self.f, self.m, self.encoding = f, m, encoding
        self.taken = set(f.variables())
        self.level = {}      # persistent variable -> stage where it appears
        self.pairs = {}      # stage -> [(y't, y'f)]
        self.dummies = {}    # stage i -> dummy variables active at stage i-1 only
        self.clauses = []
        self.chain = 0
        for j, block in enumerate(f.blocks):
            if j % 2 == 0:
                for v in block:
                    self.level[v] = j // 2

    def fresh(self, name, level=None):
        if name in self.taken:
            raise ValueError(f"variable name clash on {name!r}")
        self.taken.add(name)
        if level is not None:
            self.level[name] = level
        return name

    def var_level(self, v):
        for i, pair in self.pairs.items():
            if any(v in p for p in pair):
                return i
        return self.level[v]

    def emit(self, lits):
        lits = list(dict.fromkeys(lits)) if len(lits) > 3 else list(lits)
        if len(lits) <= 3:
            self.clauses.append(tuple(lits))
            return
        lev = max(self.var_level(l.lstrip("~")) for l in lits)
        prev = None
        rest = list(lits)
        while len(rest) > 3 - (prev is not None):
            self.chain += 1
            a = self.fresh(f"'c{self.chain}", lev)
            head = [] if prev is None else [_neg(prev)]
            take = 2 if prev is None else 1
            self.clauses.append(tuple(head + rest[:take] + [a]))
            rest = rest[take:]
            prev = a
        self.clauses.append(tuple([_neg(prev)] + rest))

    def build(self, measure):
        f, m = self.f, self.m
        escapes = {}
        for i in range(1, m + 1):
            ys = f.blocks[2 * i - 1]
            self.pairs[i] = []
            for y in ys:
                t, fl = self.fresh(f"{y}'t"), self.fresh(f"{y}'f")
                self.pairs[i].append((t, fl))
                for tag in ("t1", "t0", "f0", "f1"):
                    self.fresh(f"{y}'{tag}", i)
            if self.encoding == "gamma":
                s = self.fresh(f"'s{i}", i)
                links = [self.fresh(f"'s{i}.{y}", i) for y in ys]
                escapes[i] = (s, links)
        # helper clauses for each universal variable
        for i in range(1, m + 1):
            for (t, fl), y in zip(self.pairs[i], f.blocks[2 * i - 1]):
                self.emit([t])
                self.emit([_neg(fl)])
                for c in _iff(t, f"{y}'t1") + _iff(t, _neg(f"{y}'t0")):
                    self.emit(list(c))
                for c in _iff(fl, f"{y}'f0") + _iff(fl, _neg(f"{y}'f1")):
                    self.emit(list(c))
            if self.encoding == "gamma":
                s, links = escapes[i]
                for (t, fl), si in zip(self.pairs[i], links):
                    for c in _iff(t, si) + _iff(fl, _neg(si)):
                        self.emit(list(c))
                self.emit([s] + [_neg(si) for si in links])
        # original clauses with universal literals substituted
        ylevel = {y: i for i in range(1, m + 1) for y in f.blocks[2 * i - 1]}
        for clause in f.clauses:
            ylits = sorted({l for l in clause if l.lstrip("~") in ylevel})
            options = []
            for l in ylits:
                y = l.lstrip("~")
                options.append([f"{y}'t0", f"{y}'f1"] if l.startswith("~") else [f"{y}'t1", f"{y}'f0"])
            for pick in product(*options):
                sub = dict(zip(ylits, pick))
                lits = [sub.get(l, l) for l in clause]
                lev = max(self.var_level(l.lstrip("~")) for l in lits)
                if self.encoding == "gamma":
                    lits = list(dict.fromkeys(lits)) + [_neg(escapes[j][0]) for j in range(1, lev + 1)]
                self.emit(lits)
        # dummies: the base of stage i carries |added at stage i| inert variables
        added = {}
        for i in range(m, 0, -1):
            persistent = [v for v, lv in self.level.items() if lv == i]
            added[i] = len(self.pairs[i]) + len(persistent) + len(self.dummies.get(i + 1, []))
            self.dummies[i] = [self.fresh(f"'d{i}.{k}") for k in range(added[i])]
        return self._robust(measure, added)

    def _lits(self, names):
        return {lit(v) for v in names} | {lit("~" + v) for v in names}

    def _robust(self, measure, added):
        m = self.m
        measure = Measure.parse(measure)
        names = sorted(self.taken)
        full = sat_instance(names, self.clauses)
        pool = self._lits(names)
        base = [v for v, lv in self.level.items() if lv == 0] + self.dummies.get(1, [])
        stages, zsizes = [], {}
        for i in range(1, m + 1):
            persistent = [v for v, lv in self.level.items() if lv <= i]
            fixed = persistent + self.dummies.get(i + 1, [])
            zsizes[i] = len([v for v, lv in self.level.items() if lv == i]) + len(self.dummies.get(i + 1, []))
            pairs = [(self._lits([t]), self._lits([fl])) for t, fl in self.pairs[i]]
            if self.encoding == "xor":
                scen = XorDependencies(self._lits(fixed), pairs)
            else:
                groups = [g for pair in pairs for g in pair]
                scen = GammaSets(self._lits(fixed), groups, len(pairs))
            kappa = added[i]
            if measure is Measure.SYMMETRIC:
                kappa = 2 * added[i] + (len(self.pairs[i - 1]) if i > 1 else 0)
            stages.append(Stage(scen, kappa, measure))
        ri = RobustInstance(full, pool, self._lits(base), stages)
        ri.meta = {
            "Z'": zsizes,
            "X'": {i: len(v) for i, v in self.dummies.items()},
            "kappa_additions": added,
            "clauses": len(self.clauses),
        }
        return ri


def reduce_qae_multistage(f: QaeFormula, m: int, encoding: str = "xor",
                          measure=Measure.ADDITIONS) -> RobustInstance:
    return _Builder(f, m, encoding).build(measure)


def reduce_qae_xor(f: QaeFormula, measure=Measure.ADDITIONS) -> RobustInstance:
    return reduce_qae_multistage(f, 1, "xor", measure)


def reduce_qae_gamma(f: QaeFormula, measure=Measure.ADDITIONS) -> RobustInstance:
    return reduce_qae_multistage(f, 1, "gamma", measure)


def deficient(ri: RobustInstance, active, stage=0) -> bool:
    """Gamma scenario with fewer than gamma groups, or both members of a pair."""
    scen = ri.stages[stage].scenarios
    groups = [g for g in scen.groups if g <= active]
    if len(groups) < scen.gamma:
        return True
    pairs = [scen.groups[k:k + 2] for k in range(0, len(scen.groups), 2)]
    return any(a <= active and b <= active for a, b in pairs)
