"""Small reference surfaces and random generators for tests and benchmarks."""

from __future__ import annotations

import random

from .surface import RotationSystem, from_faces, validate

__all__ = [
    "tetrahedron",
    "octahedron",
    "k7_torus",
    "random_rotation_system",
    "random_triangulation",
    "random_relabel",
]


def tetrahedron() -> RotationSystem:
    return from_faces([("a", "b", "c"), ("a", "c", "d"), ("a", "d", "b"), ("b", "d", "c")], name="tetrahedron")


def octahedron() -> RotationSystem:
    """Antipodal pairs are 1/2, 3/4 and 5/6."""
    faces = [
        ("1", "3", "5"), ("3", "2", "5"), ("2", "4", "5"), ("4", "1", "5"),
        ("3", "1", "6"), ("2", "3", "6"), ("4", "2", "6"), ("1", "4", "6"),
    ]  # fmt: skip
    return from_faces(faces, name="octahedron")


def _k7_faces() -> list[tuple[int, int, int]]:
    faces = []
    for i in range(7):
        faces.append((i, (i + 1) % 7, (i + 3) % 7))
        faces.append((i, (i + 3) % 7, (i + 2) % 7))
    return faces


def k7_torus() -> RotationSystem:
    """The 7-vertex triangulation of the torus (complete graph K7)."""
    return from_faces([tuple(f"t{x}" for x in f) for f in _k7_faces()], name="k7")


def random_rotation_system(rng: random.Random, n_vertices: int, n_edges: int | None = None) -> RotationSystem:
    """Random loopless multigraph with random rotations (any face lengths)."""
    if n_vertices < 2:
        raise ValueError("need at least two vertices")
    if n_edges is None:
        n_edges = rng.randint(n_vertices, 3 * n_vertices)
    ends = []
    # a spanning sequence first so that no vertex is isolated
    for v in range(1, n_vertices):
        ends.append((v, rng.randrange(v)))
    while len(ends) < max(n_edges, n_vertices - 1):
        a, b = rng.sample(range(n_vertices), 2)
        ends.append((a, b))
    darts: dict[str, list[int]] = {f"v{v}": [] for v in range(n_vertices)}
    for e, (a, b) in enumerate(ends):
        darts[f"v{a}"].append(2 * e)
        darts[f"v{b}"].append(2 * e + 1)
    for ds in darts.values():
        rng.shuffle(ds)
    return validate(darts, name="random")


def _flip(faces: list[list[int]], rng: random.Random) -> None:
    """Flip one random edge if that keeps the triangulation simplicial."""
    where = {}
    for i, f in enumerate(faces):
        for k in range(3):
            where[(f[k], f[(k + 1) % 3])] = (i, f[(k + 2) % 3])
    edges = {frozenset(e) for e in where}
    deg: dict[int, int] = {}
    for e in edges:
        for x in e:
            deg[x] = deg.get(x, 0) + 1
    for _ in range(20):
        (a, b), (i, c) = rng.choice(sorted(where.items()))
        j, d = where[(b, a)]
        if c == d or frozenset((c, d)) in edges or deg[a] <= 3 or deg[b] <= 3:
            continue
        faces[i] = [a, d, c]
        faces[j] = [b, c, d]
        return


def random_triangulation(
    rng: random.Random,
    n_vertices: int,
    *,
    genus: int = 0,
    flips: int = 20,
) -> RotationSystem:
    """Random simplicial triangulation of the sphere (genus 0) or torus (1)."""
    if genus == 0:
        faces = [[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]]
    elif genus == 1:
        faces = [list(f) for f in _k7_faces()]
    else:
        raise ValueError("only genus 0 and 1 are generated")
    n = 4 if genus == 0 else 7
    if n_vertices < n:
        raise ValueError(f"need at least {n} vertices for genus {genus}")
    while n < n_vertices:
        i = rng.randrange(len(faces))
        a, b, c = faces.pop(i)
        faces += [[a, b, n], [b, c, n], [c, a, n]]
        n += 1
        for _ in range(rng.randint(0, 3)):
            _flip(faces, rng)
    for _ in range(flips):
        _flip(faces, rng)
    return from_faces([tuple(f"v{x}" for x in f) for f in faces], name="random")


def random_relabel(T: RotationSystem, rng: random.Random) -> tuple[RotationSystem, dict[str, str], list[int]]:
    """Isomorphic copy with shuffled vertex names and edge numbering.

    Returns the copy, the vertex map and the edge map (old edge -> new edge).
    """
    names = list(T.vertices)
    rng.shuffle(names)
    vmap = {v: f"w{i}" for i, v in enumerate(names)}
    perm = list(range(T.edge_count))
    rng.shuffle(perm)
    swap = [rng.random() < 0.5 for _ in perm]

    def dmap(d: int) -> int:
        e = perm[d >> 1]
        return 2 * e + ((d & 1) ^ swap[d >> 1])

    rot = {vmap[v]: [dmap(d) for d in ds] for v, ds in T.rotation.items()}
    holes = [type(h)(h.name, h.role, dmap(h.dart)) for h in T.holes]
    funds = [type(f)(f.name, dmap(f.dart)) for f in T.funds]
    out = validate(dict(sorted(rot.items())), name=T.name, holes=holes, funds=funds)
    return out, vmap, perm
