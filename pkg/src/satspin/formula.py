"""Positive NAE-3SAT formulas: parsing, brute-force witness counting,
connectedness and the replication plan.

File format::

    c optional comment lines
    p pnae3 N M
    i j k        # M lines, variables in 1..N, repeats allowed
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "FormulaError",
    "BadHeader",
    "WrongArity",
    "VariableOutOfRange",
    "UnusedVariable",
    "TooLarge",
    "PnaeFormula",
    "ReductionPlan",
    "parse",
    "load",
    "format_formula",
    "count_nae_witnesses",
    "is_connected",
    "split_components",
    "connectify",
    "replication_depth",
    "replication_plan",
    "WITNESS_LIMIT",
]

WITNESS_LIMIT = 30


class FormulaError(ValueError):
    pass


class BadHeader(FormulaError):
    pass


class WrongArity(FormulaError):
    pass


class VariableOutOfRange(FormulaError):
    pass


class UnusedVariable(FormulaError):
    pass


class TooLarge(FormulaError):
    pass


@dataclass(frozen=True)
class PnaeFormula:
    n: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.n < 1 or not self.clauses:
            raise BadHeader("a formula needs at least one variable and one clause")
        used = set()
        for c in self.clauses:
            if len(c) != 3:
                raise WrongArity(f"clause {c} does not have three literals")
            for x in c:
                if not 1 <= x <= self.n:
                    raise VariableOutOfRange(f"variable {x} outside 1..{self.n}")
                used.add(x)
        missing = sorted(set(range(1, self.n + 1)) - used)
        if missing:
            raise UnusedVariable(f"variable {missing[0]} occurs in no clause")

    @property
    def m(self) -> int:
        return len(self.clauses)

    @classmethod
    def of(cls, *clauses) -> PnaeFormula:
        """Formula over the variables 1..max mentioned in ``clauses``."""
        cl = tuple(tuple(c) for c in clauses)
        return cls(max(max(c) for c in cl), cl)


def parse(text: str) -> PnaeFormula:
    header = None
    clauses = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("c ") or line == "c":
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 4 or parts[:2] != ["p", "pnae3"] or not all(p.isdigit() for p in parts[2:]):
                raise BadHeader(f"line {lineno}: expected 'p pnae3 N M'")
            header = int(parts[2]), int(parts[3])
            continue
        if parts[0] == "p":
            raise BadHeader(f"line {lineno}: second header")
        if len(parts) != 3:
            raise WrongArity(f"line {lineno}: clause has {len(parts)} literals, expected 3")
        try:
            lits = tuple(int(p) for p in parts)
        except ValueError:
            raise WrongArity(f"line {lineno}: non-integer literal") from None
        for x in lits:
            if not 1 <= x <= header[0]:
                raise VariableOutOfRange(f"line {lineno}: variable {x} outside 1..{header[0]}")
        clauses.append(lits)
    if header is None:
        raise BadHeader("missing 'p pnae3 N M' header")
    n, m = header
    if m == 0 or n == 0:
        raise BadHeader("formula must have at least one variable and one clause")
    if len(clauses) != m:
        raise BadHeader(f"header announces {m} clauses, found {len(clauses)}")
    return PnaeFormula(n, tuple(clauses))


def load(path: str | Path) -> PnaeFormula:
    return parse(Path(path).read_text())


def format_formula(phi: PnaeFormula) -> str:
    lines = [f"p pnae3 {phi.n} {phi.m}"] + [" ".join(map(str, c)) for c in phi.clauses]
    return "\n".join(lines) + "\n"


def count_nae_witnesses(phi: PnaeFormula, limit: int = WITNESS_LIMIT) -> int:
    """Truth assignments under which no clause has three equal literals."""
    if phi.n > limit:
        raise TooLarge(f"{phi.n} variables exceeds the brute-force limit {limit}")
    total = 0
    chunk = 1 << min(phi.n, 22)
    for start in range(0, 1 << phi.n, chunk):
        x = np.arange(start, start + chunk, dtype=np.uint64)
        ok = np.ones(chunk, dtype=bool)
        for c in phi.clauses:
            bits = [(x >> np.uint64(v - 1)) & np.uint64(1) for v in c]
            s = bits[0] + bits[1] + bits[2]
            ok &= (s != 0) & (s != 3)
        total += int(np.count_nonzero(ok))
    return total


def _var_components(phi: PnaeFormula) -> list[list[int]]:
    parent = list(range(phi.n + 1))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b, c in phi.clauses:
        for y in (b, c):
            ra, ry = find(a), find(y)
            if ra != ry:
                parent[ry] = ra
    groups: dict[int, list[int]] = {}
    for v in range(1, phi.n + 1):
        groups.setdefault(find(v), []).append(v)
    return list(groups.values())


def is_connected(phi: PnaeFormula) -> bool:
    return len(_var_components(phi)) == 1


def split_components(phi: PnaeFormula) -> list[PnaeFormula]:
    """Variable-disjoint parts of phi, each renumbered from 1."""
    out = []
    for group in _var_components(phi):
        new = {v: i for i, v in enumerate(group, 1)}
        cl = tuple(tuple(new[x] for x in c) for c in phi.clauses if c[0] in new)
        out.append(PnaeFormula(len(group), cl))
    return out


def connectify(phi: PnaeFormula) -> PnaeFormula:
    """Add two variables y, z and a clause (x_i, y, z) for every variable."""
    y, z = phi.n + 1, phi.n + 2
    return PnaeFormula(phi.n + 2, phi.clauses + tuple((i, y, z) for i in range(1, phi.n + 1)))


def replication_depth(t: int) -> int:
    """Smallest even k >= 2 with 2^k >= t."""
    if t < 1:
        raise ValueError("occurrence count must be positive")
    k = 2
    while (1 << k) < t:
        k += 2
    return k


@dataclass(frozen=True)
class ReductionPlan:
    """Per variable (index i-1): occurrences, replicator depth, caps, slots.

    ``slots[i-1]`` lists the (clause, position) pairs of variable i in
    clause-major order, both 1-based; the l-th slot takes end cycle l.
    """

    t: tuple[int, ...]
    k: tuple[int, ...]
    caps: tuple[int, ...]
    slots: tuple[tuple[tuple[int, int], ...], ...]

    @property
    def blocks(self) -> int:
        return sum(2**k - 1 for k in self.k)


def replication_plan(phi: PnaeFormula) -> ReductionPlan:
    slots: list[list[tuple[int, int]]] = [[] for _ in range(phi.n)]
    for j, c in enumerate(phi.clauses, 1):
        for p, x in enumerate(c, 1):
            slots[x - 1].append((j, p))
    t = tuple(len(s) for s in slots)
    k = tuple(replication_depth(x) for x in t)
    caps = tuple(2**ki - ti for ki, ti in zip(k, t))
    return ReductionPlan(t, k, caps, tuple(tuple(s) for s in slots))
