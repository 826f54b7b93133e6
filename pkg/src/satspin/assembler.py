"""Gluing triangulations with holes along their boundary 3-cycles.

Two hole faces are identified with opposite traversal directions, which is
what keeps the result orientable.  Pairing one edge of each cycle (normally
the fundamental edges) then fixes the whole vertex correspondence.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .surface import Fundamental, Hole, RotationSystem, SurfaceError, topology, validate

__all__ = [
    "GlueError",
    "CycleLengthMismatch",
    "AmbiguousAlignment",
    "EdgeNotOnCycle",
    "GlueSpec",
    "instantiate",
    "disjoint_union",
    "boundary_edge",
    "glue",
    "glue_pair",
    "cap_hole",
    "build_k_replicator",
    "rename_holes",
    "relabel",
]


class GlueError(SurfaceError):
    pass


class CycleLengthMismatch(GlueError):
    pass


class AmbiguousAlignment(GlueError):
    pass


class EdgeNotOnCycle(GlueError):
    pass


@dataclass(frozen=True)
class GlueSpec:
    """Holes to identify; each edge is a fundamental-edge name or None.

    ``None`` picks the unique fundamental edge on the cycle, or the edge of
    the hole's own dart when the cycle carries none.
    """

    hole_a: str
    hole_b: str
    edge_a: str | None = None
    edge_b: str | None = None


def instantiate(T: RotationSystem, prefix: str) -> RotationSystem:
    """Copy of T with vertex, hole and fundamental names under ``prefix/``."""
    return RotationSystem(
        T.name,
        tuple(f"{prefix}/{v}" for v in T.origin),
        {f"{prefix}/{v}": d for v, d in T.rotation.items()},
        tuple(Hole(f"{prefix}/{h.name}", h.role, h.dart) for h in T.holes),
        tuple(Fundamental(f"{prefix}/{f.name}", f.dart) for f in T.funds),
    )


def disjoint_union(A: RotationSystem, B: RotationSystem, name: str | None = None) -> RotationSystem:
    clash = set(A.rotation) & set(B.rotation)
    if clash:
        raise GlueError(f"vertex names shared by both surfaces: {sorted(clash)[:3]}")
    if {h.name for h in A.holes} & {h.name for h in B.holes}:
        raise GlueError("hole names shared by both surfaces")
    k = A.dart_count
    rotation = dict(A.rotation)
    rotation.update((v, tuple(d + k for d in ds)) for v, ds in B.rotation.items())
    return RotationSystem(
        name or A.name,
        A.origin + B.origin,
        rotation,
        A.holes + tuple(Hole(h.name, h.role, h.dart + k) for h in B.holes),
        A.funds + tuple(Fundamental(f.name, f.dart + k) for f in B.funds),
    )


def boundary_edge(T: RotationSystem, hole: str, fund: str | None = None) -> int:
    """Edge id (dart >> 1) used to align the given hole."""
    orbit = T.orbit(T.hole(hole).dart)
    edges = {d >> 1 for d in orbit}
    if fund is not None:
        try:
            e = T.fund(fund).dart >> 1
        except KeyError:
            raise EdgeNotOnCycle(f"no fundamental edge named {fund}") from None
        if e not in edges:
            raise EdgeNotOnCycle(f"fundamental edge {fund} is not on hole {hole}")
        return e
    on = sorted({f.dart >> 1 for f in T.funds} & edges)
    if len(on) > 1:
        raise AmbiguousAlignment(f"hole {hole} carries several fundamental edges; name one")
    return on[0] if on else orbit[0] >> 1


def glue(
    T: RotationSystem,
    spec: GlueSpec,
    *,
    name: str | None = None,
    log: list[str] | None = None,
    renamed: dict[str, str] | None = None,
) -> RotationSystem:
    """Identify two hole cycles of T (possibly in one component).

    Each merged vertex takes the lexicographically smaller of its two names;
    ``renamed`` (if given) receives ``old name -> merged name``.
    """
    ha, hb = spec.hole_a, spec.hole_b
    if ha == hb:
        raise GlueError("cannot glue a hole to itself")
    try:
        A = T.orbit(T.hole(ha).dart)
        B = T.orbit(T.hole(hb).dart)
    except KeyError as exc:
        raise EdgeNotOnCycle(f"no hole named {exc.args[0]}") from None
    if len(A) != 3 or len(B) != 3:
        raise CycleLengthMismatch(f"hole lengths {len(A)} and {len(B)}; both must be 3")
    ea = boundary_edge(T, ha, spec.edge_a)
    eb = boundary_edge(T, hb, spec.edge_b)
    i = next(k for k in range(3) if A[k] >> 1 == ea)
    j = next(k for k in range(3) if B[k] >> 1 == eb)
    # a_{i+k} runs x -> y and is matched with b_{j-k} running y -> x
    pairs = [(A[(i + k) % 3], B[(j - k) % 3]) for k in range(3)]
    o = T.origin
    ident = [(o[a], o[b ^ 1]) for a, b in pairs]
    involved = [v for p in ident for v in p]
    if len(set(involved)) != 6:
        raise AmbiguousAlignment(f"gluing {ha} to {hb} would pinch a vertex")
    merged = {p: min(p) for p in ident}
    rename = {}
    for (x, y), keep in merged.items():
        rename[x] = rename[y] = keep
    removed = set(A) | set(B)

    rotation: dict[str, list[int]] = {}
    for k, (a, b) in enumerate(pairs):
        x, x2 = ident[k]
        ra, rb = T.rotation[x], T.rotation[x2]
        p = ra.index(a)
        q = rb.index(B[(j - k + 1) % 3])
        side_a = [ra[(p + t) % len(ra)] for t in range(1, len(ra))]
        side_b = [rb[(q + t) % len(rb)] for t in range(1, len(rb))]
        rotation[merged[ident[k]]] = side_a + side_b
    order = []
    for v in T.rotation:
        keep = rename.get(v, v)
        if keep == v:
            order.append(v)
    new_rot = {}
    for v in order:
        ds = rotation[v] if v in rotation else list(T.rotation[v])
        new_rot[v] = ds

    twin = {d: d ^ 1 for d in range(T.dart_count) if d not in removed}
    for a, b in pairs:
        twin[a ^ 1] = b ^ 1
        twin[b ^ 1] = a ^ 1
    for d in twin:
        if o[d] in rename and o[twin[d]] in rename and rename[o[d]] == rename[o[twin[d]]]:
            raise AmbiguousAlignment(f"gluing {ha} to {hb} would create a loop")

    dense = {d: k for k, d in enumerate(sorted(twin))}
    rot_dense = {v: [dense[d] for d in ds] for v, ds in new_rot.items()}
    twin_dense = [0] * len(dense)
    for d, t in twin.items():
        twin_dense[dense[d]] = dense[t]
    holes = [Hole(h.name, h.role, dense[h.dart]) for h in T.holes if h.name not in (ha, hb)]
    funds = [Fundamental(f.name, dense[f.dart if f.dart not in removed else f.dart ^ 1]) for f in T.funds]
    try:
        out = validate(rot_dense, twin_dense, name=name or T.name, holes=holes, funds=funds)
    except SurfaceError as exc:
        raise AmbiguousAlignment(f"gluing {ha} to {hb}: {exc}") from exc
    if log is not None:
        before = topology(T).euler_characteristic
        after = topology(out).euler_characteristic
        pairs_txt = ",".join(f"{x}={y}" for x, y in ident)
        log.append(f"glue {ha} {hb} align {pairs_txt} chi {before} -> {after}")
    if renamed is not None:
        renamed.update((v, k) for v, k in rename.items())
    return out


def glue_pair(
    A: RotationSystem,
    hole_a: str,
    B: RotationSystem,
    hole_b: str,
    *,
    edge_a: str | None = None,
    edge_b: str | None = None,
    name: str | None = None,
    log: list[str] | None = None,
    renamed: dict[str, str] | None = None,
) -> RotationSystem:
    spec = GlueSpec(hole_a, hole_b, edge_a, edge_b)
    return glue(disjoint_union(A, B), spec, name=name, log=log, renamed=renamed)


def rename_holes(T: RotationSystem, names: dict[str, tuple[str, str]]) -> RotationSystem:
    """Rename holes: ``old -> (new name, new role)``; others are kept."""
    holes = tuple(Hole(*names.get(h.name, (h.name, h.role)), h.dart) for h in T.holes)
    return RotationSystem(T.name, T.origin, T.rotation, holes, T.funds)


def relabel(T: RotationSystem, mapping: dict[str, str]) -> RotationSystem:
    """Rename vertices; names not in ``mapping`` are kept."""
    rotation = {mapping.get(v, v): d for v, d in T.rotation.items()}
    if len(rotation) != len(T.rotation):
        raise GlueError("relabelling merges two vertices")
    origin = tuple(mapping.get(v, v) for v in T.origin)
    return validate(rotation, name=T.name, holes=T.holes, funds=T.funds, dart_count=len(origin))


def cap_hole(
    T: RotationSystem,
    hole: str,
    cap: RotationSystem,
    *,
    prefix: str | None = None,
    log: list[str] | None = None,
) -> RotationSystem:
    """Seal a hole with a fresh copy of ``cap`` (a disk with one outer hole)."""
    if len(cap.holes) != 1:
        raise GlueError("a cap has exactly one hole")
    prefix = prefix or f"{hole}/cap"
    C = instantiate(cap, prefix)
    return glue_pair(T, hole, C, C.holes[0].name, name=T.name, log=log)


def build_k_replicator(
    k: int,
    block: RotationSystem,
    *,
    prefix: str = "",
    log: list[str] | None = None,
) -> RotationSystem:
    """Binary tree of ``2^k - 1`` block replicators.

    Block ``j`` feeds blocks ``2j`` (first outgoing cycle) and ``2j+1``.
    The result has holes ``start`` and ``end1 .. end{2^k}`` in leaf order.
    """
    if k < 1:
        raise ValueError("replicator depth must be positive")
    pre = f"{prefix}/" if prefix else ""
    roles = {h.role: [] for h in block.holes}
    for h in block.holes:
        roles[h.role].append(h.name)
    (inc,) = roles.get("incoming", [None])
    outs = roles.get("outgoing", [])
    if inc is None or len(outs) != 2:
        raise GlueError("block replicator needs one incoming and two outgoing holes")
    T = instantiate(block, f"{pre}b1")
    for j in range(2, 2 ** k):
        parent = j // 2
        B = instantiate(block, f"{pre}b{j}")
        T = glue_pair(T, f"{pre}b{parent}/{outs[j % 2]}", B, f"{pre}b{j}/{inc}", name=f"replicator{k}", log=log)
    names = {f"{pre}b1/{inc}": (f"{pre}start", "incoming")}
    leaf = 1
    for j in range(2 ** (k - 1), 2 ** k):
        for o in outs:
            names[f"{pre}b{j}/{o}"] = (f"{pre}end{leaf}", "outgoing")
            leaf += 1
    T = rename_holes(T, names)
    return RotationSystem(f"replicator{k}", T.origin, T.rotation, _order_holes(T.holes, names), T.funds)


def _order_holes(holes: Sequence[Hole], names: dict[str, tuple[str, str]]) -> tuple[Hole, ...]:
    rank = {new: i for i, (new, _r) in enumerate(names.values())}
    return tuple(sorted(holes, key=lambda h: rank.get(h.name, len(rank))))
