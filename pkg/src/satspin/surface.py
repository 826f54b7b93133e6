"""Rotation systems: validation, face tracing, topology and the geometric dual.

Darts are the integers ``0 .. 2E-1`` and the two darts of an edge are
``d`` and ``d ^ 1``.  Every vertex carries the clockwise cyclic order of the
darts leaving it.  Faces are the orbits of the face-successor permutation

    face_next(d) = rotation-successor of twin(d) around the origin of twin(d)

which walks each face boundary head to tail.  Some face orbits may be marked
as holes; holes are never constrained by spin semantics and are excluded
from the face count ``F`` (so that ``V - E + F = 2 - 2g - h``).
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

__all__ = [
    "SurfaceError",
    "NotInvolution",
    "LoopEdge",
    "DanglingDart",
    "DuplicateDart",
    "NotATriangulation",
    "NonIntegerGenus",
    "HasHoles",
    "BadHole",
    "Hole",
    "Fundamental",
    "RotationSystem",
    "FaceOrbit",
    "TopologySummary",
    "DualGraph",
    "validate",
    "from_faces",
    "trace_faces",
    "topology",
    "connected_components",
    "dual_graph",
    "canonical_form",
    "HOLE_ROLES",
]

HOLE_ROLES = ("variable", "incoming", "outgoing", "literal", "outer", "none")

# names end up in line-oriented files
_NAME_RE = re.compile(r"^[^\s:,=()#]+$")


class SurfaceError(ValueError):
    """Base class for malformed rotation data."""


class NotInvolution(SurfaceError):
    pass


class LoopEdge(SurfaceError):
    pass


class DanglingDart(SurfaceError):
    pass


class DuplicateDart(SurfaceError):
    pass


class NotATriangulation(SurfaceError):
    pass


class NonIntegerGenus(SurfaceError):
    pass


class HasHoles(SurfaceError):
    pass


class BadHole(SurfaceError):
    pass


@dataclass(frozen=True)
class Hole:
    """A face orbit flagged as a hole; ``dart`` is any dart of that orbit."""

    name: str
    role: str
    dart: int


@dataclass(frozen=True)
class Fundamental:
    """A designated (fundamental) edge, named by one of its darts."""

    name: str
    dart: int


@dataclass(frozen=True, eq=False)
class RotationSystem:
    """An embedded multigraph without loops, given by vertex rotations.

    Instances are produced by :func:`validate` (or helpers built on it) and
    are treated as immutable.
    """

    name: str
    origin: tuple[str, ...]
    rotation: Mapping[str, tuple[int, ...]]
    holes: tuple[Hole, ...] = ()
    funds: tuple[Fundamental, ...] = ()

    @property
    def dart_count(self) -> int:
        return len(self.origin)

    @property
    def edge_count(self) -> int:
        return len(self.origin) // 2

    @cached_property
    def vertices(self) -> tuple[str, ...]:
        return tuple(self.rotation)

    @cached_property
    def rot_next(self) -> tuple[int, ...]:
        nxt = [0] * len(self.origin)
        for darts in self.rotation.values():
            for i, d in enumerate(darts):
                nxt[d] = darts[(i + 1) % len(darts)]
        return tuple(nxt)

    def face_next(self, d: int) -> int:
        return self.rot_next[d ^ 1]

    def head(self, d: int) -> str:
        return self.origin[d ^ 1]

    def edge(self, e: int) -> tuple[str, str]:
        """Endpoints of edge ``e`` (darts ``2e`` and ``2e+1``)."""
        return self.origin[2 * e], self.origin[2 * e + 1]

    def orbit(self, d: int) -> tuple[int, ...]:
        out = [d]
        x = self.face_next(d)
        while x != d:
            out.append(x)
            x = self.face_next(x)
        return tuple(out)

    def hole(self, name: str) -> Hole:
        for h in self.holes:
            if h.name == name:
                return h
        raise KeyError(name)

    def fund(self, name: str) -> Fundamental:
        for f in self.funds:
            if f.name == name:
                return f
        raise KeyError(name)

    @cached_property
    def _face_index(self) -> tuple[tuple[int, ...], ...]:
        """Face id of every dart, computed once."""
        fid = [-1] * len(self.origin)
        k = 0
        for d in range(len(self.origin)):
            if fid[d] < 0:
                for x in self.orbit(d):
                    fid[x] = k
                k += 1
        return tuple(fid), k

    def face_of(self, d: int) -> int:
        return self._face_index[0][d]

    def hole_cycle(self, name: str) -> tuple[str, ...]:
        """Vertices of a hole in orbit order, starting at the hole's dart."""
        return tuple(self.origin[d] for d in self.orbit(self.hole(name).dart))

    @cached_property
    def hole_faces(self) -> frozenset[int]:
        return frozenset(self.face_of(h.dart) for h in self.holes)

    def triangles(self) -> list[tuple[str, str, str]]:
        """Vertex triples of every non-hole face (triangulations only)."""
        return [tuple(self.origin[d] for d in f.darts) for f in trace_faces(self, triangulation=True) if not f.is_hole]


@dataclass(frozen=True)
class FaceOrbit:
    id: int
    darts: tuple[int, ...]
    is_hole: bool


@dataclass(frozen=True)
class TopologySummary:
    V: int
    E: int
    F: int
    holes: int
    euler_characteristic: int
    components: int
    genus: int
    component_genera: tuple[int, ...] = field(default=())

    @property
    def closed(self) -> bool:
        return self.holes == 0


@dataclass(frozen=True)
class DualGraph:
    """Dual multigraph: node per face, one edge per primal edge."""

    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]  # indexed by primal edge
    degree: Mapping[int, int]
    bridges: tuple[int, ...]

    @property
    def cubic(self) -> bool:
        return all(v == 3 for v in self.degree.values())

    @property
    def bridgeless(self) -> bool:
        return not self.bridges


def _check_name(kind: str, name: str) -> None:
    if not _NAME_RE.match(name):
        raise SurfaceError(f"invalid {kind} name {name!r}")


def validate(
    rotation: Mapping[str, Sequence[int]],
    twin: Sequence[int] | None = None,
    *,
    name: str = "surface",
    holes: Iterable[Hole | tuple[str, str, Sequence[str]]] = (),
    funds: Iterable[Fundamental | tuple[str, int]] = (),
    dart_count: int | None = None,
) -> RotationSystem:
    """Check raw rotation data and return a :class:`RotationSystem`.

    ``twin`` defaults to ``d ^ 1``.  When an explicit twin map is given the
    darts are renumbered edge by edge so that the result uses the ``d ^ 1``
    convention; hole and fundamental darts are translated accordingly.
    Holes may be given either with a dart or by their vertex cycle
    ``(name, role, verts)``.
    """
    seen: dict[int, str] = {}
    for v, darts in rotation.items():
        _check_name("vertex", v)
        for d in darts:
            if not isinstance(d, int) or d < 0:
                raise DanglingDart(f"bad dart {d!r} at vertex {v}")
            if d in seen:
                raise DuplicateDart(f"dart {d} appears at {seen[d]} and {v}")
            seen[d] = v
    n = dart_count if dart_count is not None else (len(twin) if twin is not None else max(seen, default=-1) + 1)
    if twin is None:
        if n % 2:
            raise NotInvolution(f"odd dart count {n}")
        twin = [d ^ 1 for d in range(n)]
    if len(twin) != n:
        raise NotInvolution("twin map does not cover the dart set")
    for d in range(n):
        t = twin[d]
        if not 0 <= t < n or t == d or twin[t] != d:
            raise NotInvolution(f"twin is not a fixed-point-free involution at dart {d}")
    for d in range(n):
        if d not in seen:
            raise DanglingDart(f"dart {d} is in no rotation")
    if len(seen) != n:
        raise DanglingDart("rotation mentions darts outside the dart set")
    for d in range(n):
        if seen[d] == seen[twin[d]]:
            raise LoopEdge(f"edge {{{d},{twin[d]}}} is a loop at {seen[d]}")

    if all(twin[d] == d ^ 1 for d in range(n)):
        remap = list(range(n))
    else:
        remap = [-1] * n
        k = 0
        for d in range(n):
            if remap[d] < 0:
                remap[d], remap[twin[d]] = k, k + 1
                k += 2
    origin = [""] * n
    for d in range(n):
        origin[remap[d]] = seen[d]
    rot = {v: tuple(remap[d] for d in darts) for v, darts in rotation.items()}
    for v, darts in rot.items():
        if not darts:
            raise DanglingDart(f"vertex {v} has an empty rotation")

    base = RotationSystem(name, tuple(origin), rot)
    fund_list = []
    for f in funds:
        fname, fd = (f.name, f.dart) if isinstance(f, Fundamental) else f
        _check_name("fundamental edge", fname)
        if not 0 <= fd < n:
            raise SurfaceError(f"fundamental edge {fname} names unknown dart {fd}")
        fund_list.append(Fundamental(fname, remap[fd]))
    hole_list = []
    for h in holes:
        if isinstance(h, Hole):
            hole_list.append(Hole(h.name, h.role, remap[h.dart]))
        else:
            hname, role, verts = h
            hole_list.append(Hole(hname, role, _find_orbit(base, hname, tuple(verts))))
    used: dict[int, str] = {}
    names = set()
    for h in hole_list:
        _check_name("hole", h.name)
        if h.role not in HOLE_ROLES:
            raise BadHole(f"hole {h.name} has unknown role {h.role!r}")
        if h.name in names:
            raise BadHole(f"duplicate hole name {h.name}")
        names.add(h.name)
        fid = base.face_of(h.dart)
        if fid in used:
            raise BadHole(f"holes {used[fid]} and {h.name} mark the same face")
        used[fid] = h.name
    return RotationSystem(name, tuple(origin), rot, tuple(hole_list), tuple(fund_list))


def _find_orbit(T: RotationSystem, hname: str, verts: tuple[str, ...]) -> int:
    hits = []
    for f in trace_faces(T):
        cyc = [T.origin[d] for d in f.darts]
        if len(cyc) != len(verts):
            continue
        for i, d in enumerate(f.darts):
            if tuple(cyc[i:] + cyc[:i]) == verts:
                hits.append(d)
    if not hits:
        raise BadHole(f"hole {hname}: no face with vertex cycle {','.join(verts)}")
    if len(hits) > 1:
        raise BadHole(f"hole {hname}: vertex cycle {','.join(verts)} is ambiguous")
    return hits[0]


def from_faces(
    faces: Sequence[Sequence[str]],
    *,
    name: str = "surface",
    holes: Iterable[tuple[str, str, Sequence[str]]] = (),
    funds: Iterable[tuple[str, str, str]] = (),
) -> RotationSystem:
    """Build a rotation system from consistently oriented simplicial faces.

    Each directed edge ``a -> b`` must occur in exactly one face and its
    reverse in exactly one other.  ``funds`` name edges by endpoints.
    """
    faces = [tuple(str(x) for x in f) for f in faces]
    directed = {}
    for f in faces:
        for i in range(len(f)):
            a, b = f[i], f[(i + 1) % len(f)]
            if (a, b) in directed:
                raise SurfaceError(f"directed edge {a}->{b} used twice")
            directed[(a, b)] = f
    pairs = sorted({tuple(sorted(e)) for e in directed})
    dart_of: dict[tuple[str, str], int] = {}
    for k, (a, b) in enumerate(pairs):
        if (a, b) not in directed or (b, a) not in directed:
            raise SurfaceError(f"edge {a}-{b} lies on only one face")
        dart_of[(a, b)] = 2 * k
        dart_of[(b, a)] = 2 * k + 1
    # at vertex b, face (a, b, c) puts b->c right after b->a
    succ: dict[int, int] = {}
    for f in faces:
        for i in range(len(f)):
            a, b, c = f[i - 1], f[i], f[(i + 1) % len(f)]
            succ[dart_of[(b, a)]] = dart_of[(b, c)]
    out_darts: dict[str, list[int]] = {}
    for (a, _b), d in dart_of.items():
        out_darts.setdefault(a, []).append(d)
    rotation = {}
    for v in sorted(out_darts):
        start = min(out_darts[v])
        cyc = [start]
        x = succ[start]
        while x != start:
            cyc.append(x)
            x = succ[x]
        if len(cyc) != len(out_darts[v]):
            raise SurfaceError(f"vertex {v} is not a manifold point")
        rotation[v] = cyc
    fund_list = [(fname, dart_of[(a, b)]) for fname, a, b in funds]
    return validate(rotation, name=name, holes=holes, funds=fund_list)


def trace_faces(T: RotationSystem, triangulation: bool = False) -> list[FaceOrbit]:
    """Face orbits in order of their smallest dart."""
    holes = {T.face_of(h.dart) for h in T.holes}
    seen = [False] * T.dart_count
    out = []
    for d in range(T.dart_count):
        if seen[d]:
            continue
        orb = T.orbit(d)
        for x in orb:
            seen[x] = True
        fid = len(out)
        if triangulation and len(orb) != 3:
            raise NotATriangulation(f"face {fid} has length {len(orb)}")
        out.append(FaceOrbit(fid, orb, fid in holes))
    return out


def connected_components(T: RotationSystem) -> tuple[int, dict[str, int]]:
    """Number of components and a vertex -> component label map."""
    parent = {v: v for v in T.vertices}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in range(T.edge_count):
        a, b = (find(x) for x in T.edge(e))
        if a != b:
            parent[b] = a
    labels: dict[str, int] = {}
    roots: dict[str, int] = {}
    for v in T.vertices:
        r = find(v)
        labels[v] = roots.setdefault(r, len(roots))
    return len(roots), labels


def topology(T: RotationSystem) -> TopologySummary:
    faces = trace_faces(T)
    ncomp, labels = connected_components(T)
    chi_c = [0] * ncomp
    holes_c = [0] * ncomp
    for v in T.vertices:
        chi_c[labels[v]] += 1
    for e in range(T.edge_count):
        chi_c[labels[T.origin[2 * e]]] -= 1
    for f in faces:
        c = labels[T.origin[f.darts[0]]]
        if f.is_hole:
            holes_c[c] += 1
        else:
            chi_c[c] += 1
    genera = []
    for c in range(ncomp):
        twice = 2 - chi_c[c] - holes_c[c]
        if twice % 2 or twice < 0:
            raise NonIntegerGenus(f"component {c}: chi={chi_c[c]}, holes={holes_c[c]}")
        genera.append(twice // 2)
    F = sum(1 for f in faces if not f.is_hole)
    return TopologySummary(
        V=len(T.vertices),
        E=T.edge_count,
        F=F,
        holes=len(T.holes),
        euler_characteristic=len(T.vertices) - T.edge_count + F,
        components=ncomp,
        genus=sum(genera),
        component_genera=tuple(genera),
    )


def _bridges(n: int, edges: Sequence[tuple[int, int]]) -> list[int]:
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i, (a, b) in enumerate(edges):
        adj[a].append((b, i))
        adj[b].append((a, i))
    disc = [-1] * n
    low = [0] * n
    out = []
    timer = 0
    for root in range(n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, iter(adj[root]))]
        while stack:
            v, via, it = stack[-1]
            for w, eid in it:
                if eid == via:
                    continue
                if disc[w] < 0:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, eid, iter(adj[w])))
                    break
                low[v] = min(low[v], disc[w])
            else:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if low[v] > disc[u]:
                        out.append(via)
    return sorted(out)


def dual_graph(T: RotationSystem) -> DualGraph:
    if T.holes:
        raise HasHoles(f"{T.name} has {len(T.holes)} holes")
    faces = trace_faces(T)
    edges = tuple((T.face_of(2 * e), T.face_of(2 * e + 1)) for e in range(T.edge_count))
    degree = {f.id: 0 for f in faces}
    for a, b in edges:
        degree[a] += 1
        degree[b] += 1
    return DualGraph(tuple(f.id for f in faces), edges, degree, tuple(_bridges(len(faces), edges)))


def _label_from(T: RotationSystem, start: int) -> list[int]:
    """Darts in the order a breadth-first walk from ``start`` meets them."""
    order = [start]
    seen = {start}
    i = 0
    while i < len(order):
        d = order[i]
        i += 1
        for x in (T.rot_next[d], d ^ 1):
            if x not in seen:
                seen.add(x)
                order.append(x)
    return order


def canonical_form(T: RotationSystem) -> tuple:
    """Encoding that ignores dart numbering but keeps vertex names.

    Two systems that differ only in how darts are numbered get equal keys.
    """
    comps = []
    done: set[int] = set()
    for v in sorted(T.vertices):
        if T.rotation[v][0] in done:
            continue
        best = None
        for start in T.rotation[v]:
            order = _label_from(T, start)
            lab = {d: k for k, d in enumerate(order)}
            code = tuple((T.origin[d], lab[T.rot_next[d]], lab[d ^ 1]) for d in order)
            if best is None or code < best[0]:
                best = (code, lab)
        code, lab = best
        done.update(lab)
        holes = sorted(
            (min(lab[x] for x in T.orbit(h.dart)), h.name, h.role) for h in T.holes if h.dart in lab
        )
        funds = sorted((min(lab[f.dart], lab[f.dart ^ 1]), f.name) for f in T.funds if f.dart in lab)
        comps.append((code, tuple(holes), tuple(funds)))
    return tuple(comps)
