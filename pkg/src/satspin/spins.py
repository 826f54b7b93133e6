"""Spin assignments on embedded graphs.

A spin assignment maps every vertex to +1 or -1.  A face is frustrated when
its vertices do not all carry the same spin; an assignment is satisfying
when every non-hole face is frustrated.  Energy is the sum of s(u)s(v) over
edges.
"""

from __future__ import annotations

import sys
from collections.abc import Iterable, Mapping
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from pathlib import Path

import numpy as np

from .surface import HasHoles, RotationSystem, dual_graph, trace_faces

__all__ = [
    "SpinError",
    "MissingSpin",
    "NoSatisfyingAssignment",
    "NotSatisfying",
    "SpinFormatError",
    "SpinCensus",
    "energy",
    "monochromatic_edges",
    "monochromatic_faces",
    "is_satisfying",
    "count_satisfying",
    "count_satisfying_naive",
    "enumerate_satisfying",
    "groundstates",
    "serious_edges",
    "matching_correspondence",
    "negate",
    "sign",
    "parse_spins",
    "format_spins",
    "NAIVE_LIMIT",
]

NAIVE_LIMIT = 24


class SpinError(ValueError):
    pass


class MissingSpin(SpinError):
    pass


class NoSatisfyingAssignment(SpinError):
    pass


class NotSatisfying(SpinError):
    pass


class SpinFormatError(SpinError):
    pass


@dataclass(frozen=True)
class SpinCensus:
    satisfying_count: int
    min_monochromatic_edges: int | None = None
    groundstate_degeneracy: int | None = None
    assignments: tuple[dict[str, int], ...] | None = None


def _check(T: RotationSystem, s: Mapping[str, int]) -> None:
    for v in T.vertices:
        x = s.get(v)
        if x is None:
            raise MissingSpin(f"no spin for vertex {v}")
        if x not in (1, -1):
            raise SpinError(f"spin of {v} is {x!r}, expected +1 or -1")


def energy(T: RotationSystem, s: Mapping[str, int]) -> int:
    _check(T, s)
    o = T.origin
    return sum(s[o[2 * e]] * s[o[2 * e + 1]] for e in range(T.edge_count))


def monochromatic_edges(T: RotationSystem, s: Mapping[str, int]) -> list[int]:
    _check(T, s)
    o = T.origin
    return [e for e in range(T.edge_count) if s[o[2 * e]] == s[o[2 * e + 1]]]


def monochromatic_faces(T: RotationSystem, s: Mapping[str, int]) -> list[int]:
    """Ids of non-hole faces whose vertices all share one spin."""
    _check(T, s)
    out = []
    for f in trace_faces(T):
        if not f.is_hole and len({s[T.origin[d]] for d in f.darts}) == 1:
            out.append(f.id)
    return out


def is_satisfying(T: RotationSystem, s: Mapping[str, int]) -> bool:
    return not monochromatic_faces(T, s)


def negate(s: Mapping[str, int]) -> dict[str, int]:
    return {v: -x for v, x in s.items()}


def sign(spins: Iterable[int]) -> int:
    """Sign of a 3-cycle: +1 when at least two of its spins are +1."""
    return 1 if sum(1 for x in spins if x > 0) >= 2 else -1


def _constraints(T: RotationSystem) -> tuple[list[str], list[tuple[int, ...]]]:
    verts = list(T.vertices)
    index = {v: i for i, v in enumerate(verts)}
    faces = []
    for f in trace_faces(T):
        if not f.is_hole:
            faces.append(tuple(sorted({index[T.origin[d]] for d in f.darts})))
    return verts, faces


class _Search:
    """Backtracking over vertices with face propagation.

    ``unk``/``pos``/``neg`` hold, per face, how many vertices are unassigned,
    +1 and -1.  A face is live while it is not yet frustrated and still has
    unassigned vertices; live faces link unassigned vertices into the
    independent sub-problems that are counted separately and multiplied.
    """

    def __init__(self, n: int, faces: list[tuple[int, ...]]):
        self.n = n
        self.faces = faces
        self.vf: list[list[int]] = [[] for _ in range(n)]
        for i, f in enumerate(faces):
            for v in f:
                self.vf[v].append(i)
        self.val = [0] * n
        self.unk = [len(f) for f in faces]
        self.pos = [0] * len(faces)
        self.neg = [0] * len(faces)
        self.trail: list[int] = []
        self.nodes = 0

    def assign(self, v: int, s: int) -> bool:
        """Set v to s and propagate; False on conflict (undo to a mark)."""
        stack = [(v, s)]
        val, unk, pos, neg, faces = self.val, self.unk, self.pos, self.neg, self.faces
        ok = True
        while stack:
            v, s = stack.pop()
            if val[v]:
                if val[v] != s:
                    ok = False
                    break
                continue
            val[v] = s
            self.trail.append(v)
            vf = self.vf[v]
            if s > 0:
                for f in vf:
                    unk[f] -= 1
                    pos[f] += 1
            else:
                for f in vf:
                    unk[f] -= 1
                    neg[f] += 1
            for f in vf:
                if pos[f] and neg[f]:
                    continue
                if unk[f] == 0:
                    ok = False
                elif unk[f] == 1:
                    for w in faces[f]:
                        if not val[w]:
                            stack.append((w, -s))
                            break
            if not ok:
                break
        return ok

    def undo(self, mark: int) -> None:
        val, unk, pos, neg = self.val, self.unk, self.pos, self.neg
        while len(self.trail) > mark:
            v = self.trail.pop()
            if val[v] > 0:
                for f in self.vf[v]:
                    unk[f] += 1
                    pos[f] -= 1
            else:
                for f in self.vf[v]:
                    unk[f] += 1
                    neg[f] -= 1
            val[v] = 0

    def split(self, vars_: Iterable[int]) -> tuple[list[int], list[list[int]]]:
        """Free unassigned vertices and the live components among vars_."""
        val, pos, neg, faces, vf = self.val, self.pos, self.neg, self.faces, self.vf
        seen = set()
        free = []
        comps = []
        for v in vars_:
            if val[v] or v in seen:
                continue
            seen.add(v)
            comp = [v]
            i = 0
            while i < len(comp):
                x = comp[i]
                i += 1
                for f in vf[x]:
                    if pos[f] and neg[f]:
                        continue
                    for w in faces[f]:
                        if not val[w] and w not in seen:
                            seen.add(w)
                            comp.append(w)
            if len(comp) == 1 and all(pos[f] and neg[f] for f in vf[v]):
                free.append(v)
            else:
                comps.append(comp)
        comps.sort(key=len)
        return free, comps

    def pick(self, comp: list[int]) -> int:
        val, pos, neg, unk, vf = self.val, self.pos, self.neg, self.unk, self.vf
        best, best_key = comp[0], None
        for v in comp:
            near = live = 0
            for f in vf[v]:
                if pos[f] and neg[f]:
                    continue
                live += 1
                if unk[f] == 2 and (pos[f] or neg[f]):
                    near += 1
            key = (near, live, -v)
            if best_key is None or key > best_key:
                best, best_key = v, key
        return best

    # counting

    def count_comp(self, comp: list[int]) -> int:
        self.nodes += 1
        v = self.pick(comp)
        total = 0
        for s in (1, -1):
            mark = len(self.trail)
            if self.assign(v, s):
                total += self.count_rest(comp)
            self.undo(mark)
        return total

    def count_rest(self, vars_: Iterable[int]) -> int:
        free, comps = self.split(vars_)
        r = 1 << len(free)
        for c in comps:
            x = self.count_comp(c)
            if not x:
                return 0
            r *= x
        return r

    def count_rooted(self, comp: list[int]) -> int:
        """Count a whole component with its root fixed to +1, times two."""
        root = self.pick(comp)
        mark = len(self.trail)
        r = 2 * self.count_rest(comp) if self.assign(root, 1) else 0
        self.undo(mark)
        return r

    # enumeration

    def enum_comp(self, comp: list[int]) -> list[list[tuple[int, int]]]:
        v = self.pick(comp)
        out = []
        for s in (1, -1):
            mark = len(self.trail)
            if self.assign(v, s):
                forced = [(x, self.val[x]) for x in self.trail[mark:]]
                out.extend(forced + rest for rest in self.enum_rest(comp))
            self.undo(mark)
        return out

    def enum_rest(self, vars_: Iterable[int]) -> list[list[tuple[int, int]]]:
        free, comps = self.split(vars_)
        parts = []
        for c in comps:
            sols = self.enum_comp(c)
            if not sols:
                return []
            parts.append(sols)
        parts.extend([[(x, 1)], [(x, -1)]] for x in free)
        return [[a for chunk in combo for a in chunk] for combo in product(*parts)]

    # splitting for parallel counting

    def cubes(self, comp: list[int], depth: int) -> list[list[tuple[int, int]]]:
        out: list[list[tuple[int, int]]] = []

        def rec(decisions, vars_):
            free, comps = self.split(vars_)
            if not comps or len(decisions) >= depth:
                out.append(list(decisions))
                return
            c = comps[-1]
            v = self.pick(c)
            for s in (1, -1):
                mark = len(self.trail)
                if self.assign(v, s):
                    decisions.append((v, s))
                    rec(decisions, vars_)
                    decisions.pop()
                self.undo(mark)

        rec([], comp)
        return out


_worker: _Search | None = None


def _init_worker(n, faces):
    global _worker
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
    _worker = _Search(n, faces)


def _run_cube(args) -> int:
    prefix, vars_ = args
    w = _worker
    mark = len(w.trail)
    ok = all(w.assign(v, s) for v, s in prefix)
    r = w.count_rest(vars_) if ok else 0
    w.undo(mark)
    return r


def _prepare(T: RotationSystem, fixed: Mapping[str, int] | None):
    verts, faces = _constraints(T)
    index = {v: i for i, v in enumerate(verts)}
    S = _Search(len(verts), faces)
    ok = True
    for v, x in (fixed or {}).items():
        if v not in index:
            raise KeyError(f"unknown vertex {v}")
        if x not in (1, -1):
            raise SpinError(f"spin of {v} is {x!r}")
        if not S.assign(index[v], x):
            ok = False
            break
    return verts, faces, S, ok


def count_satisfying(
    T: RotationSystem,
    *,
    fixed: Mapping[str, int] | None = None,
    threads: int = 1,
) -> SpinCensus:
    """Exact number of satisfying assignments (extending ``fixed`` if given).

    Without ``fixed``, one root per component is pinned to +1 and the
    component count is doubled.
    """
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 20000))
    try:
        verts, faces, S, ok = _prepare(T, fixed)
        if not ok:
            total = 0
        elif fixed:
            total = S.count_rest(range(len(verts)))
        else:
            free, comps = S.split(range(len(verts)))
            total = 1 << len(free)
            if threads > 1 and comps:
                comps = sorted(comps, key=len)
                big = comps.pop()
                for c in comps:
                    total *= S.count_rooted(c)
                total *= _parallel_rooted(S, faces, big, threads) if total else 1
            else:
                for c in comps:
                    total *= S.count_rooted(c)
                    if not total:
                        break
    finally:
        sys.setrecursionlimit(old)
    closed = not T.holes
    if total and closed and not fixed:
        F = sum(1 for _ in faces)
        return SpinCensus(total, F // 2, total)
    return SpinCensus(total)


def _parallel_rooted(S: _Search, faces, comp: list[int], threads: int) -> int:
    root = S.pick(comp)
    mark = len(S.trail)
    if not S.assign(root, 1):
        S.undo(mark)
        return 0
    depth = max(1, (4 * threads - 1).bit_length())
    cubes = S.cubes(comp, depth)
    prefix = [(v, S.val[v]) for v in S.trail[mark:]]
    S.undo(mark)
    tasks = [(prefix + c, comp) for c in cubes]
    with ProcessPoolExecutor(threads, initializer=_init_worker, initargs=(S.n, faces)) as ex:
        counts = list(ex.map(_run_cube, tasks))
    return 2 * sum(counts)


def count_satisfying_naive(T: RotationSystem, *, fixed: Mapping[str, int] | None = None) -> int:
    """Plain enumeration of all 2^V assignments (V <= 24)."""
    verts, faces = _constraints(T)
    n = len(verts)
    if n > NAIVE_LIMIT:
        raise ValueError(f"naive enumeration limited to {NAIVE_LIMIT} vertices, got {n}")
    index = {v: i for i, v in enumerate(verts)}
    want_mask = want_bits = 0
    for v, x in (fixed or {}).items():
        want_mask |= 1 << index[v]
        if x > 0:
            want_bits |= 1 << index[v]
    masks = [np.uint32(sum(1 << v for v in f)) for f in faces]
    total = 0
    chunk = 1 << 20
    for start in range(0, 1 << n, chunk):
        x = np.arange(start, min(start + chunk, 1 << n), dtype=np.uint32)
        ok = (x & np.uint32(want_mask)) == np.uint32(want_bits)
        for m in masks:
            y = x & m
            ok &= (y != 0) & (y != m)
        total += int(np.count_nonzero(ok))
    return total


def enumerate_satisfying(
    T: RotationSystem, *, fixed: Mapping[str, int] | None = None
) -> list[dict[str, int]]:
    """All satisfying assignments extending ``fixed``, in a fixed order."""
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 20000))
    try:
        verts, _faces, S, ok = _prepare(T, fixed)
        if not ok:
            return []
        base = {verts[v]: S.val[v] for v in S.trail}
        out = []
        for sol in S.enum_rest(range(len(verts))):
            s = dict(base)
            s.update((verts[v], x) for v, x in sol)
            out.append({v: s[v] for v in verts})
    finally:
        sys.setrecursionlimit(old)
    out.sort(key=lambda s: tuple(s[v] < 0 for v in verts))
    return out


def groundstates(T: RotationSystem) -> SpinCensus:
    """Minimum number of monochromatic edges and how many assignments reach it.

    Branch and bound over vertices in breadth-first order; the bound is the
    number of monochromatic edges among already placed vertices.
    """
    verts = list(T.vertices)
    index = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    adj: list[list[int]] = [[] for _ in range(n)]
    for e in range(T.edge_count):
        a, b = (index[x] for x in T.edge(e))
        adj[a].append(b)
        adj[b].append(a)
    order, roots, seen = [], set(), [False] * n
    for r in range(n):
        if seen[r]:
            continue
        seen[r] = True
        roots.add(r)
        q = [r]
        for x in q:
            order.append(x)
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    q.append(y)
    pos = {v: i for i, v in enumerate(order)}
    back = [[w for w in adj[v] if pos[w] < pos[v]] for v in order]
    val = [0] * n
    best = [T.edge_count + 1, 0]

    def rec(i: int, mono: int) -> None:
        if mono > best[0]:
            return
        if i == n:
            if mono < best[0]:
                best[0], best[1] = mono, 1
            else:
                best[1] += 1
            return
        v = order[i]
        for s in ((1,) if v in roots else (1, -1)):
            val[v] = s
            rec(i + 1, mono + sum(1 for w in back[i] if val[w] == s))
        val[v] = 0

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, n + 1000))
    try:
        rec(0, 0)
    finally:
        sys.setrecursionlimit(old)
    degeneracy = best[1] << len(roots)
    sat = count_satisfying(T).satisfying_count
    return SpinCensus(sat, best[0], degeneracy)


def serious_edges(T: RotationSystem, sols: list[dict[str, int]] | None = None) -> frozenset[int]:
    """Edges monochromatic under every satisfying assignment."""
    if sols is None:
        sols = enumerate_satisfying(T)
    if not sols:
        raise NoSatisfyingAssignment(T.name)
    o = T.origin
    return frozenset(
        e for e in range(T.edge_count) if all(s[o[2 * e]] == s[o[2 * e + 1]] for s in sols)
    )


def matching_correspondence(T: RotationSystem, s: Mapping[str, int]) -> frozenset[int]:
    """Dual edges (by primal edge id) of the monochromatic edges.

    Checked to be a perfect matching of the dual graph.
    """
    if T.holes:
        raise HasHoles(T.name)
    if not is_satisfying(T, s):
        raise NotSatisfying(T.name)
    D = dual_graph(T)
    chosen = monochromatic_edges(T, s)
    covered: dict[int, int] = {}
    for e in chosen:
        for f in set(D.edges[e]):
            covered[f] = covered.get(f, 0) + 1
    if len(covered) != len(D.nodes) or any(c != 1 for c in covered.values()):
        raise NotSatisfying("monochromatic edges do not form a perfect matching of the dual")
    return frozenset(chosen)


def parse_spins(text: str) -> dict[str, int]:
    out: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2 or parts[1] not in ("+1", "-1", "1"):
            raise SpinFormatError(f"line {lineno}: expected 'VID +1|-1'")
        if parts[0] in out:
            raise SpinFormatError(f"line {lineno}: vertex {parts[0]} repeated")
        out[parts[0]] = -1 if parts[1] == "-1" else 1
    return out


def format_spins(s: Mapping[str, int]) -> str:
    return "".join(f"{v} {'+1' if x > 0 else '-1'}\n" for v, x in s.items())


def load_spins(path: str | Path) -> dict[str, int]:
    return parse_spins(Path(path).read_text())
