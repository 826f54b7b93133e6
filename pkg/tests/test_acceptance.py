"""Acceptance suite: one test and one PASS/FAIL line per criterion.

Run ``python tests/test_acceptance.py`` for the bare report, or pytest for
the same lines in the terminal summary.
"""

import random
import time
from functools import lru_cache
from itertools import product
from pathlib import Path

import pytest

from satspin import cli
from satspin.assembler import build_k_replicator
from satspin.formula import PnaeFormula, connectify, count_nae_witnesses, is_connected, load, split_components
from satspin.gadgets import load_fixture, load_gadget
from satspin.reduction import build, stats
from satspin.samples import octahedron, random_rotation_system, random_triangulation, tetrahedron
from satspin.spins import (
    count_satisfying,
    count_satisfying_naive,
    energy,
    enumerate_satisfying,
    is_satisfying,
    matching_correspondence,
    negate,
    serious_edges,
    sign,
)
from satspin.surface import dual_graph, topology, trace_faces

CORPUS = Path(__file__).parent / "data" / "corpus"
RESULTS: dict[int, str] = {}


def record(n, title, ok, detail):
    line = f"criterion {n} {title}: {'PASS' if ok else 'FAIL'} ({detail})"
    RESULTS[n] = line
    print(line)
    assert ok, line


def bits(c, s):
    spins = [s[v] for v in c.verts]
    return sign(spins), len(set(spins)) == 1


def corpus():
    return {p.stem: load(p) for p in sorted(CORPUS.glob("*.pnae"))}


@lru_cache(maxsize=None)
def build_count(phi):
    return count_satisfying(build(phi).surface).satisfying_count


def test_criterion_1_oracle_equivalence():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    surfaces = [tetrahedron(), octahedron()]
    for i in range(50):
        if i % 2:
            surfaces.append(random_rotation_system(rng, rng.randint(2, 14)))
        else:
            genus = i % 4 // 2
            surfaces.append(random_triangulation(rng, rng.randint(7 if genus else 4, 14), genus=genus))
    got = [count_satisfying(T).satisfying_count for T in surfaces]
    naive = [count_satisfying_naive(T) for T in surfaces]
    dt = time.perf_counter() - t0
    ok = got == naive and got[:2] == [6, 18] and max(len(T.vertices) for T in surfaces) <= 14 and dt < 10
    record(1, "oracle equivalence", ok, f"{len(surfaces)} surfaces, tetrahedron {got[0]}, octahedron {got[1]}, {dt:.1f}s")


def test_criterion_2_gadget_contracts():
    t0 = time.perf_counter()
    fails = []

    choice = load_fixture("choice")
    (var,) = choice.by_role("variable")
    ext = [count_satisfying_naive(choice.surface, fixed=dict(zip(var.verts, s))) for s in product((1, -1), repeat=3)]
    if sorted(ext) != [0, 0, 0, 0, 1, 1, 1, 1] or count_satisfying_naive(choice.surface) != 4:
        fails.append("choice")
    for s, n in zip(product((1, -1), repeat=3), ext):
        if n != (1 if s[0] == s[1] else 0):  # fundamental edge split never extends
            fails.append("choice split")

    cap = load_fixture("cap")
    (outer,) = cap.by_role("outer")
    if any(count_satisfying_naive(cap.surface, fixed=dict(zip(outer.verts, s))) != 1 for s in product((1, -1), repeat=3)):
        fails.append("cap")

    br = load_fixture("block-replicator")
    (inc,) = br.by_role("incoming")
    outs = br.by_role("outgoing")
    if any(set(inc.verts) & set(o.verts) for o in outs):
        fails.append("block-replicator disjointness")
    for s in product((1, -1), repeat=3):
        bc = dict(zip(inc.verts, s))
        sols = enumerate_satisfying(br.surface, fixed=bc)
        if s[0] != s[1]:
            if sols:
                fails.append("block-replicator vw split")
            continue
        sg, mono = bits(inc, bc)
        if len(sols) != 1 or any(bits(o, sols[0]) != (-sg, mono) for o in outs):
            fails.append(f"block-replicator {s}")

    clause = load_fixture("clause")
    lits = clause.by_role("literal")
    verts = sorted({v for c in lits for v in c.verts})
    for s in product((1, -1), repeat=len(verts)):
        bc = dict(zip(verts, s))
        if any(bc[c.verts[0]] != bc[c.verts[1]] for c in lits):
            continue
        mono = sum(bits(c, bc)[1] for c in lits)
        n = count_satisfying_naive(clause.surface, fixed=bc)
        if n != (1 if mono in (1, 2) else 0):
            fails.append(f"clause mono={mono}")
        if n and len({bits(c, bc)[0] for c in lits}) != 1:
            fails.append("clause signs")
    dt = time.perf_counter() - t0
    ok = not fails and dt < 60
    record(2, "gadget contract suite", ok, f"choice, cap, block-replicator, clause; {dt:.1f}s" + (f"; {fails[:3]}" if fails else ""))


def test_criterion_3_k2_replicator():
    t0 = time.perf_counter()
    R = build_k_replicator(2, load_fixture("block-replicator").surface)
    G = load_gadget(R, "replicator", depth=2)
    top = G.surface
    t = topology(top)
    (start,) = G.by_role("incoming")
    ends = G.by_role("outgoing")
    counts, same = [], True
    for s in product((1, -1), repeat=3):
        bc = dict(zip(start.verts, s))
        sols = enumerate_satisfying(G.surface, fixed=bc)
        counts.append(len(sols))
        for sol in sols:
            same &= all(bits(e, sol) == bits(start, bc) for e in ends)
    expected = [1 if s[0] == s[1] else 0 for s in product((1, -1), repeat=3)]
    dt = time.perf_counter() - t0
    ok = (t.genus, t.holes) == (12, 5) and counts == expected and same and dt < 300
    record(3, "k-replicator k=2", ok, f"genus {t.genus}, {t.holes} holes, extensions {counts}, {dt:.1f}s")


def test_criterion_4_counting_identities():
    rows, ok, slowest = [], True, 0.0
    forms = corpus()
    for name, phi in forms.items():
        t0 = time.perf_counter()
        a = count_nae_witnesses(phi)
        conn = build_count(connectify(phi))
        good = conn == 4 * a
        if is_connected(phi):
            direct = build_count(phi)
            good &= direct == 2 * a
        else:
            direct = None
        ok &= good
        slowest = max(slowest, time.perf_counter() - t0)
        rows.append((name, a, direct, conn))
    table = {r[0]: r[1:] for r in rows}
    ok &= table["single"] == (6, 12, 24)
    ok &= table["all_equal"] == (0, 0, 0)
    ok &= table["chain"][1] == 36
    ok &= len(forms) >= 10 and any(not is_connected(p) for p in forms.values())
    ok &= all(p.n <= 6 and p.m <= 6 for p in forms.values()) and slowest < 600
    record(4, "end-to-end counting identities", ok, f"{len(rows)} formulas, slowest {slowest:.1f}s")


def test_criterion_5_topology_audit():
    ok = True
    for phi in corpus().values():
        for psi in (phi, connectify(phi)):
            C = build(psi)
            t = C.topology
            ok &= t.holes == 0
            ok &= all(len(f.darts) == 3 for f in trace_faces(C.surface))
            ok &= t.euler_characteristic == C.piece_chi
            ok &= t.components == len(split_components(psi))
            ok &= (2 * t.components - t.euler_characteristic) % 2 == 0
    s = stats(build(connectify(PnaeFormula.of((1, 2, 3)))))
    ok &= (s["genus"], s["closed_form_genus"], s["genus_discrepancy"]) == (73, 69, True)
    record(5, "topology audit", ok, f"connectify((1,2,3)) genus {s['genus']} vs closed form {s['closed_form_genus']}, flagged")


def test_criterion_6_duality_and_structure():
    ok, checked = True, 0
    for phi in (PnaeFormula.of((1, 2, 3)), PnaeFormula.of((1, 1, 2)), PnaeFormula.of((1, 2, 3), (1, 2, 4))):
        T = build(phi).surface
        sols = enumerate_satisfying(T)
        D = dual_graph(T)
        ok &= len(sols) % 2 == 0 and len(sols) == count_satisfying(T).satisfying_count
        ok &= D.cubic
        for s in sols:
            ok &= is_satisfying(T, negate(s))
            ok &= 3 * energy(T, s) == -T.edge_count
            matched = matching_correspondence(T, s)
            covered = [f for e in matched for f in D.edges[e]]
            ok &= sorted(covered) == sorted(D.nodes)
            checked += 1
    for phi in corpus().values():
        ok &= build_count(connectify(phi)) % 2 == 0 and (not is_connected(phi) or build_count(phi) % 2 == 0)
    record(6, "duality and structure", ok, f"{checked} satisfying assignments checked")


def test_criterion_7_serious_edges():
    T = build(PnaeFormula.of((1, 2, 3))).surface
    sols = enumerate_satisfying(T)
    serious = serious_edges(T, sols)
    clause_funds = [f for f in T.funds if f.name.startswith("c1/")]
    direct = all(all(s[a] == s[b] for s in sols) for a, b in (T.edge(f.dart >> 1) for f in clause_funds))
    ok = len(sols) == 12 and len(clause_funds) == 3 and direct and all(f.dart >> 1 in serious for f in clause_funds)
    record(7, "serious clause edges", ok, f"{len(clause_funds)} fundamental edges over {len(sols)} assignments")


def test_criterion_8_determinism(tmp_path):
    outs = []
    for k in range(2):
        p = tmp_path / f"run{k}.rot"
        assert cli.main(["reduce", "-i", str(CORPUS / "four_cycle.pnae"), "-o", str(p)]) == 0
        outs.append(p.read_bytes())
    T = build(load(CORPUS / "four_cycle.pnae")).surface
    counts = {count_satisfying(T, threads=t).satisfying_count for t in (1, 2, 3)}
    ok = outs[0] == outs[1] and len(counts) == 1
    record(8, "determinism", ok, f"byte-identical reduce, counts {sorted(counts)} for threads 1,2,3")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
