from collections import Counter
from itertools import product

import pytest

from satspin.assembler import (
    AmbiguousAlignment,
    CycleLengthMismatch,
    EdgeNotOnCycle,
    GlueError,
    GlueSpec,
    build_k_replicator,
    cap_hole,
    disjoint_union,
    glue,
    glue_pair,
    instantiate,
    relabel,
)
from satspin.gadgets import load_fixture, load_gadget, verify_replicator_contract
from satspin.samples import tetrahedron
from satspin.spins import count_satisfying, count_satisfying_naive
from satspin.surface import from_faces, topology, trace_faces


def cap():
    return load_fixture("cap").surface


def face_multiset(T, rename=None):
    rename = rename or {}
    hole_faces = {T.face_of(h.dart) for h in T.holes}
    return Counter(
        frozenset(rename.get(T.origin[d], T.origin[d]) for d in f.darts) for f in trace_faces(T) if f.id not in hole_faces
    )


def brute(T):
    faces = [{T.origin[d] for d in f.darts} for f in trace_faces(T) if f.id not in {T.face_of(h.dart) for h in T.holes}]
    verts = list(T.vertices)
    n = 0
    for bits in product((1, -1), repeat=len(verts)):
        s = dict(zip(verts, bits))
        n += all(len({s[v] for v in f}) == 2 for f in faces)
    return n


def test_two_caps_make_a_sphere():
    A, B = instantiate(cap(), "p"), instantiate(cap(), "q")
    S = glue_pair(A, "p/outer", B, "q/outer")
    t = topology(S)
    assert (t.V, t.holes, t.genus, t.euler_characteristic) == (5, 0, 0, 2)
    assert count_satisfying(S).satisfying_count == brute(S) == 8


def test_glue_changes_v_and_e_only():
    A, B = instantiate(cap(), "p"), instantiate(cap(), "q")
    U = disjoint_union(A, B)
    S = glue(U, GlueSpec("p/outer", "q/outer"))
    tu, ts = topology(U), topology(S)
    assert (tu.V - ts.V, tu.E - ts.E, tu.F - ts.F) == (3, 3, 0)
    assert ts.euler_characteristic == tu.euler_characteristic


def test_face_multiset_preserved():
    core = instantiate(load_fixture("block-core").surface, "k")
    ch = instantiate(load_fixture("choice").surface, "x")
    U = disjoint_union(core, ch)
    renamed = {}
    S = glue(U, GlueSpec("k/eq1", "x/var", "k/zq", "x/uw"), renamed=renamed)
    assert face_multiset(S) == face_multiset(U, renamed)


def test_choice_on_core_equalizer():
    core = instantiate(load_fixture("block-core").surface, "k")
    ch = instantiate(load_fixture("choice").surface, "x")
    S = glue_pair(core, "k/eq1", ch, "x/var", edge_a="k/zq", edge_b="x/uw")
    t = topology(S)
    assert (t.euler_characteristic, t.holes) == (-7, 5)


def test_capped_choice_count():
    S = cap_hole(load_fixture("choice").surface, "var", cap())
    t = topology(S)
    assert (t.holes, t.genus) == (0, 1)
    assert count_satisfying(S).satisfying_count == count_satisfying_naive(S) == brute(S) == 4


def test_unknown_fundamental_edge():
    A, B = instantiate(cap(), "p"), instantiate(cap(), "q")
    with pytest.raises(EdgeNotOnCycle):
        glue_pair(A, "p/outer", B, "q/outer", edge_a="nope")
    ch = instantiate(load_fixture("choice").surface, "x")
    core = instantiate(load_fixture("block-core").surface, "k")
    with pytest.raises(EdgeNotOnCycle):
        glue_pair(core, "k/eq1", ch, "x/var", edge_a="k/xy")


def test_ambiguous_alignment_when_two_funds():
    core = instantiate(load_fixture("block-core").surface, "k")
    ch = instantiate(load_fixture("choice").surface, "x")
    with pytest.raises(AmbiguousAlignment):
        glue_pair(core, "k/eq3", ch, "x/var")


def test_cycle_length_mismatch():
    square = from_faces(
        [("a", "b", "e"), ("b", "c", "e"), ("c", "d", "e"), ("d", "a", "e"), ("a", "d", "c", "b")],
        holes=[("h", "outer", ("a", "d", "c", "b"))],
    )
    with pytest.raises(CycleLengthMismatch):
        glue_pair(square, "h", instantiate(cap(), "q"), "q/outer")


def test_glue_hole_to_itself():
    with pytest.raises(GlueError):
        glue(cap(), GlueSpec("outer", "outer"))


def test_pinch_rejected():
    # both holes of a doubly-marked tetrahedron share vertices
    T = from_faces(
        [("a", "b", "c"), ("a", "c", "d"), ("a", "d", "b"), ("b", "d", "c")],
        holes=[("h", "outer", "abc"), ("g", "outer", "acd")],
    )
    with pytest.raises(AmbiguousAlignment):
        glue(T, GlueSpec("h", "g"))


def test_self_glue_keeps_chi_of_component():
    # two holes of one surface: V-3, E-3, F same, two holes gone
    k2 = build_k_replicator(1, load_fixture("block-replicator").surface)
    t0 = topology(k2)
    S = glue(k2, GlueSpec("end1", "end2"))
    t1 = topology(S)
    assert t1.euler_characteristic == t0.euler_characteristic
    assert t1.holes == t0.holes - 2
    assert t1.genus == t0.genus + 1


def test_k2_replicator():
    block = load_fixture("block-replicator").surface
    R = build_k_replicator(2, block)
    t = topology(R)
    assert (t.V, t.genus, t.holes, t.euler_characteristic) == (75, 12, 5, -27)
    assert [h.name for h in R.holes] == ["start", "end1", "end2", "end3", "end4"]
    G = load_gadget(R, "replicator", depth=2)
    assert verify_replicator_contract(G, 2).ok


def test_k1_replicator_inverts_sign():
    R = build_k_replicator(1, load_fixture("block-replicator").surface)
    G = load_gadget(R, "replicator", depth=1)
    assert verify_replicator_contract(G, 1).ok


def test_capping_all_holes_of_k2():
    R = build_k_replicator(2, load_fixture("block-replicator").surface)
    for h in [h.name for h in R.holes]:
        R = cap_hole(R, h, cap())
    t = topology(R)
    assert (t.holes, t.genus, t.components) == (0, 12, 1)
    assert count_satisfying(R).satisfying_count > 0


def test_glue_log_format():
    log = []
    glue_pair(instantiate(cap(), "p"), "p/outer", instantiate(cap(), "q"), "q/outer", log=log)
    (line,) = log
    assert line.startswith("glue p/outer q/outer align ")
    assert line.endswith("chi 2 -> 2")


def test_relabel_rejects_merge():
    with pytest.raises(GlueError):
        relabel(tetrahedron(), {"a": "b"})


def test_union_rejects_shared_names():
    with pytest.raises(GlueError):
        disjoint_union(tetrahedron(), tetrahedron())
