import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from satspin.gadgets import FIXTURE_DIR
from satspin.rotfile import RotFormatError, dump_rot, load_rot, parse_rot
from satspin.samples import random_rotation_system, random_triangulation, tetrahedron
from satspin.surface import DuplicateDart, canonical_form

TET = """\
# the tetrahedron
surface tet
darts 12
vertex a: 0 4 2
vertex b: 1 6 8
vertex c: 3 10 7
vertex d: 5 9 11
"""


def test_parse_tetrahedron():
    T = parse_rot(TET)
    assert T.name == "tet"
    assert len(T.vertices) == 4 and T.edge_count == 6


def test_round_trip_is_exact():
    assert dump_rot(parse_rot(TET)) == TET.split("\n", 1)[1]


@pytest.mark.parametrize(
    "text",
    [
        TET.replace("darts 12", "darts 11"),
        TET.replace("vertex d", "vertx d"),
        TET + "colour red\n",
        TET + "hole h role=outer verts=a,b,c colour=red\n",
        TET + "hole h verts=a,b,c\n",
        TET + "fund e 3\n",
        TET.replace("surface tet\n", ""),
        TET.replace("darts 12\n", ""),
        TET + "vertex a: 12 13\n",
    ],
)
def test_malformed_input_rejected(text):
    with pytest.raises(RotFormatError):
        parse_rot(text)


def test_duplicate_dart_in_file():
    with pytest.raises(DuplicateDart):
        parse_rot(TET.replace("vertex d: 5 9 11", "vertex d: 5 9 0"))


def test_hole_and_fund_lines():
    text = TET + "hole h role=outer verts=b,a,d\nfund ab = (0)\n"
    T = parse_rot(text)
    assert T.hole_cycle("h") == ("b", "a", "d")
    assert T.fund("ab").dart == 0
    assert parse_rot(dump_rot(T)).hole_cycle("h") == ("b", "a", "d")


def test_unknown_role_rejected():
    with pytest.raises(Exception):
        parse_rot(TET + "hole h role=bogus verts=b,a,d\n")


@pytest.mark.parametrize("name", sorted(p.name for p in FIXTURE_DIR.glob("*.rot")))
def test_fixtures_round_trip(name):
    text = (FIXTURE_DIR / name).read_text()
    assert dump_rot(parse_rot(text)) == text


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_round_trip_random(seed):
    rng = random.Random(seed)
    T = random_rotation_system(rng, rng.randint(2, 12)) if seed % 2 else random_triangulation(rng, rng.randint(4, 12))
    U = parse_rot(dump_rot(T))
    assert canonical_form(U) == canonical_form(T)
    assert dump_rot(U) == dump_rot(T)


def test_load_from_disk(tmp_path):
    p = tmp_path / "t.rot"
    p.write_text(dump_rot(tetrahedron()))
    assert load_rot(p).edge_count == 6
