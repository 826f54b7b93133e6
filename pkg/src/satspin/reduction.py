"""Compiling a formula into a closed triangulation and checking the counts.

For each variable i: a choice gadget ``x{i}`` glued to the starting cycle
of a k_i-replicator ``r{i}``.  For each clause j: a clause gadget ``c{j}``
whose p-th literal cycle is glued to the next unused end cycle of the
replicator of its p-th variable.  Leftover end cycles are capped
(``cap{i}.{l}`` seals end cycle l of ``r{i}``).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache

from .assembler import GlueSpec, build_k_replicator, disjoint_union, glue, instantiate
from .formula import (
    PnaeFormula,
    ReductionPlan,
    connectify,
    count_nae_witnesses,
    is_connected,
    replication_plan,
)
from .gadgets import GadgetTemplate, load_fixture, verify_contract
from .spins import count_satisfying
from .surface import RotationSystem, TopologySummary, topology, trace_faces

__all__ = [
    "ArityMismatch",
    "CompiledTriangulation",
    "VerifyReport",
    "clause_literal_wiring",
    "build",
    "verify",
    "stats",
    "closed_form_genus",
    "format_report",
]


class ArityMismatch(ValueError):
    pass


@dataclass(frozen=True)
class CompiledTriangulation:
    surface: RotationSystem
    formula: PnaeFormula
    plan: ReductionPlan
    topology: TopologySummary
    piece_chi: int
    pieces: dict[str, int]
    log: tuple[str, ...] = ()

    def provenance(self, vertex: str) -> str:
        """Piece a vertex name comes from (merged vertices keep one name)."""
        return vertex.split("/", 1)[0]


@lru_cache(maxsize=None)
def _fixtures() -> dict[str, GadgetTemplate]:
    out = {}
    for kind in ("choice", "block-replicator", "clause", "cap"):
        G = load_fixture(kind)
        verify_contract(G)
        out[kind] = G
    return out


@lru_cache(maxsize=None)
def _replicator(k: int) -> RotationSystem:
    return build_k_replicator(k, _fixtures()["block-replicator"].surface)


def clause_literal_wiring(phi: PnaeFormula, plan: ReductionPlan | None = None) -> list[tuple[int, int, int, int]]:
    """Glue schedule ``(clause j, position p, variable i, end cycle l)``.

    Clause-major, then position; variable i hands out its end cycles in
    leaf order.
    """
    plan = plan or replication_plan(phi)
    used = [0] * phi.n
    out = []
    for j, c in enumerate(phi.clauses, 1):
        for p, x in enumerate(c, 1):
            used[x - 1] += 1
            out.append((j, p, x, used[x - 1]))
    for i in range(phi.n):
        if used[i] != plan.t[i] or used[i] > 2 ** plan.k[i]:
            raise ArityMismatch(f"variable {i + 1}: {used[i]} occurrences, plan says {plan.t[i]}")
    if len(out) != 3 * phi.m:
        raise ArityMismatch("every clause must contribute three slots")
    return out


def build(phi: PnaeFormula, *, keep_log: bool = False) -> CompiledTriangulation:
    fx = _fixtures()
    plan = replication_plan(phi)
    wiring = clause_literal_wiring(phi, plan)
    choice, clause, cap = fx["choice"], fx["clause"], fx["cap"]
    (var_hole,) = choice.by_role("variable")
    lit_holes = [c.hole for c in clause.by_role("literal")]
    (outer,) = cap.by_role("outer")

    pieces: list[RotationSystem] = []
    for i in range(1, phi.n + 1):
        pieces.append(instantiate(choice.surface, f"x{i}"))
        pieces.append(instantiate(_replicator(plan.k[i - 1]), f"r{i}"))
    for j in range(1, phi.m + 1):
        pieces.append(instantiate(clause.surface, f"c{j}"))
    caps = []
    for i in range(1, phi.n + 1):
        for leaf in range(plan.t[i - 1] + 1, 2 ** plan.k[i - 1] + 1):
            caps.append((i, leaf))
            pieces.append(instantiate(cap.surface, f"cap{i}.{leaf}"))
    piece_chi = sum(topology(P).euler_characteristic for P in pieces)

    T = pieces[0]
    for P in pieces[1:]:
        T = disjoint_union(T, P, name="T")
    log: list[str] | None = [] if keep_log else None
    for i in range(1, phi.n + 1):
        T = glue(T, GlueSpec(f"x{i}/{var_hole.hole}", f"r{i}/start"), log=log)
    for j, p, i, leaf in wiring:
        T = glue(T, GlueSpec(f"r{i}/end{leaf}", f"c{j}/{lit_holes[p - 1]}"), log=log)
    for i, leaf in caps:
        T = glue(T, GlueSpec(f"r{i}/end{leaf}", f"cap{i}.{leaf}/{outer.hole}"), log=log)
    T = RotationSystem("T", T.origin, T.rotation, T.holes, T.funds)
    trace_faces(T, triangulation=True)
    counts = {"choice": phi.n, "block": plan.blocks, "clause": phi.m, "cap": len(caps)}
    return CompiledTriangulation(T, phi, plan, topology(T), piece_chi, counts, tuple(log or ()))


def closed_form_genus(phi: PnaeFormula, plan: ReductionPlan | None = None) -> int:
    """Closed-form genus m + n + 4 * sum(2^k_i - 1)."""
    plan = plan or replication_plan(phi)
    return phi.m + phi.n + 4 * plan.blocks


def stats(C: CompiledTriangulation) -> dict[str, object]:
    top = C.topology
    closed_form = closed_form_genus(C.formula, C.plan)
    return {
        "V": top.V,
        "E": top.E,
        "F": top.F,
        "holes": top.holes,
        "chi": top.euler_characteristic,
        "piece_chi_sum": C.piece_chi,
        "genus": top.genus,
        "components": top.components,
        "formula_connected": is_connected(C.formula),
        **{f"pieces_{k}": v for k, v in C.pieces.items()},
        "closed_form_genus": closed_form,
        "genus_discrepancy": top.genus != closed_form,
    }


@dataclass
class VerifyReport:
    formula: PnaeFormula
    witnesses: int
    connected: bool
    direct: int | None = None
    connectified: int | None = None
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def direct_ok(self) -> bool | None:
        return None if self.direct is None else self.direct == 2 * self.witnesses

    @property
    def connectified_ok(self) -> bool:
        return self.connectified == 4 * self.witnesses

    @property
    def ok(self) -> bool:
        return self.connectified_ok and self.direct_ok is not False

    def as_dict(self) -> dict[str, object]:
        d: dict[str, object] = {
            "n": self.formula.n,
            "m": self.formula.m,
            "connected": self.connected,
            "nae_witnesses": self.witnesses,
        }
        if self.direct is not None:
            d["direct_count"] = self.direct
            d["direct_expected"] = 2 * self.witnesses
        d["connectified_count"] = self.connectified
        d["connectified_expected"] = 4 * self.witnesses
        d.update((f"seconds_{k}", round(v, 3)) for k, v in self.timings.items())
        d["result"] = "PASS" if self.ok else "FAIL"
        return d


def verify(phi: PnaeFormula, *, threads: int = 1) -> VerifyReport:
    t0 = time.perf_counter()
    A = count_nae_witnesses(phi)
    rep = VerifyReport(phi, A, is_connected(phi))
    rep.timings["witnesses"] = time.perf_counter() - t0
    if rep.connected:
        t0 = time.perf_counter()
        rep.direct = count_satisfying(build(phi).surface, threads=threads).satisfying_count
        rep.timings["direct"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    rep.connectified = count_satisfying(build(connectify(phi)).surface, threads=threads).satisfying_count
    rep.timings["connectified"] = time.perf_counter() - t0
    return rep


def format_report(d: dict[str, object]) -> str:
    def fmt(v):
        if isinstance(v, bool):
            return "yes" if v else "no"
        return str(v)

    return "".join(f"{k}: {fmt(v)}\n" for k, v in d.items())
