"""Gadget templates and their extension-count contracts.

A gadget is a triangulation with holes.  Each hole is bounded by a 3-cycle
with a role, and most cycles carry a fundamental edge.  A cycle whose
fundamental edge is monochromatic encodes two bits: its sign (the spin on
the fundamental edge) and its chromaticity (whether the third vertex, the
apex, agrees).
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Mapping
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

from ..assembler import glue_pair, instantiate, relabel
from ..rotfile import dump_rot, load_rot
from ..spins import count_satisfying, enumerate_satisfying, sign
from ..surface import RotationSystem, SurfaceError, topology, trace_faces

__all__ = [
    "GadgetError",
    "TopologyMismatch",
    "MissingFundamentalEdge",
    "BadBoundaryRole",
    "PartialBoundary",
    "ContractViolation",
    "BoundaryCycle",
    "GadgetTemplate",
    "ContractReport",
    "FIXTURE_DIR",
    "FIXTURE_FILES",
    "load_gadget",
    "load_fixture",
    "count_extensions",
    "verify_choice_contract",
    "verify_cap_contract",
    "verify_clause_contract",
    "verify_block_replicator_contract",
    "verify_replicator_contract",
    "verify_contract",
    "validate_gadget_dir",
    "assemble_block_replicator",
]

FIXTURE_DIR = Path(__file__).parent
FIXTURE_FILES = {
    "choice": "choice.rot",
    "block-replicator": "block_replicator.rot",
    "cap": "cap.rot",
    "clause": "clause.rot",
}

# kind -> (genus, holes, role counts)
KINDS: dict[str, tuple[int, int, dict[str, int]]] = {
    "choice": (1, 1, {"variable": 1}),
    "block-replicator": (4, 3, {"incoming": 1, "outgoing": 2}),
    "block-core": (1, 6, {"incoming": 1, "outgoing": 2, "none": 3}),
    "cap": (0, 1, {"outer": 1}),
    "clause": (1, 3, {"literal": 3}),
}

# roles whose cycles must carry a fundamental edge
_FUND_ROLES = {"variable", "incoming", "outgoing", "literal"}

# the equalizer holes of the block core share edges with the outgoing cycles
_CORE_FUNDS = {"eq1": "zq", "eq2": "xy", "eq3": "ru'"}


class GadgetError(SurfaceError):
    pass


class TopologyMismatch(GadgetError):
    pass


class MissingFundamentalEdge(GadgetError):
    pass


class BadBoundaryRole(GadgetError):
    pass


class PartialBoundary(GadgetError):
    pass


class ContractViolation(GadgetError):
    def __init__(self, message: str, report: ContractReport | None = None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class BoundaryCycle:
    """Hole boundary; with a fundamental edge, ``verts`` is (f0, f1, apex)."""

    hole: str
    role: str
    verts: tuple[str, str, str]
    fund: str | None

    @property
    def apex(self) -> str:
        return self.verts[2]


@dataclass(frozen=True)
class GadgetTemplate:
    kind: str
    surface: RotationSystem
    cycles: tuple[BoundaryCycle, ...]
    depth: int | None = None

    def cycle(self, hole: str) -> BoundaryCycle:
        for c in self.cycles:
            if c.hole == hole:
                return c
        raise KeyError(hole)

    def by_role(self, role: str) -> list[BoundaryCycle]:
        return [c for c in self.cycles if c.role == role]

    @property
    def boundary_vertices(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for c in self.cycles:
            seen.update(dict.fromkeys(c.verts))
        return tuple(seen)


@dataclass
class ContractReport:
    kind: str
    lines: list[str] = field(default_factory=list)
    ok: bool = True

    def check(self, what: str, got, expected) -> None:
        good = got == expected
        self.ok &= good
        self.lines.append(f"{what}: got {got}, expected {expected} {'ok' if good else 'FAIL'}")

    def __str__(self) -> str:
        head = f"{self.kind}: {'PASS' if self.ok else 'FAIL'}"
        return "\n".join([head] + ["  " + x for x in self.lines])


def _expected_shape(kind: str, depth: int | None) -> tuple[int, int, dict[str, int]]:
    if kind == "replicator":
        if not depth or depth < 1:
            raise GadgetError("replicator kind needs a positive depth")
        return 4 * (2**depth - 1), 2**depth + 1, {"incoming": 1, "outgoing": 2**depth}
    if kind not in KINDS:
        raise GadgetError(f"unknown gadget kind {kind!r}")
    return KINDS[kind]


def load_gadget(source: str | Path | RotationSystem, kind: str, *, depth: int | None = None) -> GadgetTemplate:
    """Load a gadget and check its kind-specific shape."""
    T = source if isinstance(source, RotationSystem) else load_rot(source)
    genus, nholes, roles = _expected_shape(kind, depth)
    got_roles = Counter(h.role for h in T.holes)
    if dict(got_roles) != roles:
        raise BadBoundaryRole(f"{kind}: hole roles {dict(got_roles)}, expected {roles}")
    for f in trace_faces(T):
        if len(f.darts) != 3:
            raise TopologyMismatch(f"{kind}: face {f.id} has length {len(f.darts)}")
    top = topology(T)
    if top.components != 1 or top.genus != genus or top.holes != nholes:
        raise TopologyMismatch(
            f"{kind}: genus {top.genus} with {top.holes} holes in {top.components} component(s), "
            f"expected genus {genus} with {nholes} holes"
        )
    cycles = []
    for h in T.holes:
        orbit = T.orbit(h.dart)
        fund = _fund_for(T, h.name, kind)
        if fund is None:
            if h.role in _FUND_ROLES:
                raise MissingFundamentalEdge(f"{kind}: hole {h.name} has no fundamental edge")
            verts = tuple(T.origin[d] for d in orbit)
        else:
            e = T.fund(fund).dart >> 1
            k = next(i for i, d in enumerate(orbit) if d >> 1 == e)
            verts = tuple(T.origin[orbit[(k + i) % 3]] for i in range(3))
        cycles.append(BoundaryCycle(h.name, h.role, verts, fund))
    G = GadgetTemplate(kind, T, tuple(cycles), depth)
    if kind in ("block-replicator", "replicator", "block-core"):
        (inc,) = G.by_role("incoming")
        for out in G.by_role("outgoing"):
            if set(inc.verts) & set(out.verts):
                raise TopologyMismatch(f"{kind}: incoming cycle shares vertices with {out.hole}")
    return G


def _fund_for(T: RotationSystem, hole: str, kind: str) -> str | None:
    if kind == "block-core" and hole in _CORE_FUNDS:
        return _CORE_FUNDS[hole]
    edges = {d >> 1 for d in T.orbit(T.hole(hole).dart)}
    on: dict[int, str] = {}
    for f in T.funds:
        if f.dart >> 1 in edges:
            on.setdefault(f.dart >> 1, f.name)
    if len(on) > 1:
        raise MissingFundamentalEdge(f"hole {hole} carries {len(on)} fundamental edges")
    return next(iter(on.values()), None)


def load_fixture(kind: str, directory: str | Path | None = None) -> GadgetTemplate:
    name = FIXTURE_FILES.get(kind, f"{kind.replace('-', '_')}.rot")
    return load_gadget(Path(directory or FIXTURE_DIR) / name, kind)


def count_extensions(
    G: GadgetTemplate,
    bc: Mapping[str, int],
    *,
    cycles: list[str] | None = None,
) -> int:
    """Satisfying assignments of G that extend the boundary condition ``bc``.

    ``cycles`` lists the holes that must be fully assigned (all of them by
    default).  The boundary is pinned, so nothing is doubled.
    """
    chosen = G.cycles if cycles is None else [G.cycle(h) for h in cycles]
    for c in chosen:
        missing = [v for v in c.verts if v not in bc]
        if missing:
            raise PartialBoundary(f"{G.kind}: no spin for {', '.join(missing)} on {c.hole}")
    return count_satisfying(G.surface, fixed=bc).satisfying_count


def _cycle_bits(c: BoundaryCycle, s: Mapping[str, int]) -> tuple[int, bool]:
    spins = [s[v] for v in c.verts]
    return sign(spins), len(set(spins)) == 1


def _fmt(spins) -> str:
    return "(" + ",".join("+" if x > 0 else "-" for x in spins) + ")"


def _finish(report: ContractReport) -> ContractReport:
    if not report.ok:
        bad = next(x for x in report.lines if x.endswith("FAIL"))
        raise ContractViolation(f"{report.kind} contract violated: {bad}", report)
    return report


def verify_choice_contract(G: GadgetTemplate) -> ContractReport:
    """Fundamental edge serious; unique extension whenever it is monochromatic."""
    (var,) = G.by_role("variable")
    r = ContractReport("choice")
    u, w, v = var.verts
    for su, sv, sw in product((1, -1), repeat=3):
        got = count_extensions(G, {u: su, v: sv, w: sw})
        r.check(f"(u,v,w)={_fmt((su, sv, sw))}", got, 1 if su == sw else 0)
    r.check("standalone count", count_satisfying(G.surface).satisfying_count, 4)
    return _finish(r)


def verify_cap_contract(G: GadgetTemplate) -> ContractReport:
    (outer,) = G.by_role("outer")
    r = ContractReport("cap")
    for spins in product((1, -1), repeat=3):
        r.check(f"outer={_fmt(spins)}", count_extensions(G, dict(zip(outer.verts, spins))), 1)
    r.check("standalone count", count_satisfying(G.surface).satisfying_count, 8)
    return _finish(r)


def verify_clause_contract(G: GadgetTemplate) -> ContractReport:
    """With all fundamental edges monochromatic: NAE on the chromaticities."""
    lits = G.by_role("literal")
    r = ContractReport("clause")
    fund_verts = sorted({v for c in lits for v in c.verts[:2]})
    apexes = [c.apex for c in lits]
    if set(fund_verts) & set(apexes) or len(fund_verts) != 3:
        raise TopologyMismatch("clause: fundamental edges must form a triangle away from the apexes")
    for s in (1, -1):
        for ap in product((1, -1), repeat=3):
            bc = dict.fromkeys(fund_verts, s)
            bc.update(zip(apexes, ap))
            mono = [_cycle_bits(c, bc)[1] for c in lits]
            expected = 1 if 0 < sum(mono) < 3 else 0
            got = count_extensions(G, bc)
            r.check(f"sign {'+' if s > 0 else '-'} apexes={_fmt(ap)} mono={sum(mono)}", got, expected)
            if got:
                signs = {_cycle_bits(c, bc)[0] for c in lits}
                r.check("literal cycles share a sign", len(signs), 1)
    return _finish(r)


def verify_replicator_contract(G: GadgetTemplate, depth: int = 1) -> ContractReport:
    """Incoming cycle fixed: unique extension iff its fundamental edge is
    monochromatic; every outgoing cycle then keeps the chromaticity and has
    sign multiplied by (-1)^depth.
    """
    (inc,) = G.by_role("incoming")
    outs = G.by_role("outgoing")
    r = ContractReport("block-replicator" if G.kind == "block-replicator" else f"replicator(k={depth})")
    for c in outs:
        r.check(f"{inc.hole} disjoint from {c.hole}", not set(inc.verts) & set(c.verts), True)
    f0, f1, apex = inc.verts
    flip = (-1) ** depth
    for spins in product((1, -1), repeat=3):
        bc = dict(zip(inc.verts, spins))
        sols = enumerate_satisfying(G.surface, fixed=bc)
        label = f"incoming ({f0},{f1},{apex})={_fmt(spins)}"
        if bc[f0] != bc[f1]:
            r.check(label, len(sols), 0)
            continue
        r.check(label, len(sols), 1)
        in_sign, in_mono = _cycle_bits(inc, bc)
        for s in sols:
            for c in outs:
                r.check(f"  {c.hole} (sign, mono)", _cycle_bits(c, s), (flip * in_sign, in_mono))
    return _finish(r)


def verify_block_replicator_contract(G: GadgetTemplate) -> ContractReport:
    return verify_replicator_contract(G, 1)


_VERIFIERS = {
    "choice": verify_choice_contract,
    "cap": verify_cap_contract,
    "clause": verify_clause_contract,
    "block-replicator": verify_block_replicator_contract,
}


def verify_contract(G: GadgetTemplate) -> ContractReport:
    if G.kind == "replicator":
        return verify_replicator_contract(G, G.depth or 1)
    return _VERIFIERS[G.kind](G)


def validate_gadget_dir(directory: str | Path) -> list[ContractReport]:
    """Load and verify the four fixtures; raises on the first failure."""
    directory = Path(directory)
    reports = []
    for kind, fname in FIXTURE_FILES.items():
        path = directory / fname
        if not path.exists():
            raise TopologyMismatch(f"missing fixture {path}")
        reports.append(verify_contract(load_gadget(path, kind)))
    return reports


def assemble_block_replicator(
    core: RotationSystem | None = None, choice: RotationSystem | None = None
) -> RotationSystem:
    """Glue a choice gadget onto each equalizer hole of the block core.

    Merged vertices keep the core's labels.
    """
    core = core or load_fixture("block-core").surface
    choice = choice or load_fixture("choice").surface
    (var,) = [h.name for h in choice.holes]
    T = core
    current = {v: v for v in core.vertices}
    for hole, edge in _CORE_FUNDS.items():
        renamed: dict[str, str] = {}
        T = glue_pair(T, hole, instantiate(choice, hole), f"{hole}/{var}", edge_a=edge, renamed=renamed)
        current = {v: renamed.get(c, c) for v, c in current.items()}
    T = relabel(T, {c: v for v, c in current.items()})
    T = RotationSystem("block_replicator", T.origin, T.rotation, T.holes, T.funds)
    return T


def _write_block_replicator(path: str | Path | None = None) -> str:
    text = dump_rot(assemble_block_replicator())
    Path(path or FIXTURE_DIR / FIXTURE_FILES["block-replicator"]).write_text(text)
    return text
