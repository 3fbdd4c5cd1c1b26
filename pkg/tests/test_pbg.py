import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matchkast.corpus import _weights, random_map
from matchkast.graph import DanglingReference, same_graph
from matchkast.pbg import PbgParseError, format_pbg, parse_pbg, read_pbg, write_pbg
from matchkast.regions import rectangle

R22 = """pbg v1
# unit square
vertex 1_1 b
vertex 1_2 w
vertex 2_1 w
vertex 2_2 b
edge h1_1 1_1 1_2 1
edge h2_1 2_1 2_2 1
edge v1_1 1_1 2_1 x
edge v1_2 1_2 2_2 -3
rot 1_1 h1_1 v1_1
rot 1_2 h1_1 v1_2
rot 2_1 h2_1 v1_1
rot 2_2 h2_1 v1_2
outer h1_1 1_2
"""


def test_parse_literal():
    g = parse_pbg(R22)
    assert len(g.vertices) == 4 and len(g.edges) == 4
    assert str(g.weight("v1_1")) == "x"
    assert g.weight("v1_2").constant_value() == -3


def test_canonical_round_trip_is_byte_stable():
    g = parse_pbg(R22)
    text = format_pbg(g)
    assert format_pbg(parse_pbg(text)) == text
    assert text == R22.replace("# unit square\n", "")


@pytest.mark.parametrize(
    "text, line",
    [
        ("graph v2\n", 1),
        ("pbg v1\nvertex a q\n", 2),
        ("pbg v1\nvertex a b\nvertex c w\n\nedge e a c\n", 5),
        ("pbg v1\nvertex a b\nvertex c w\nedge e a c 1+\n", 4),
        ("pbg v1\nbogus 1\n", 2),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(PbgParseError) as info:
        parse_pbg(text, "t.pbg")
    assert info.value.lineno == line
    assert f"t.pbg:{line}:" in str(info.value)


def test_structural_errors_name_the_source():
    with pytest.raises(DanglingReference) as info:
        parse_pbg(R22.replace("edge h2_1 2_1 2_2 1", "edge h2_1 2_1 9_9 1"), "t.pbg")
    assert "t.pbg" in str(info.value)


def test_file_io(tmp_path):
    g = rectangle(3, 4, variables=True)
    p = tmp_path / "r34.pbg"
    write_pbg(g, p)
    assert same_graph(read_pbg(p), g)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 14))
def test_random_round_trip(seed, n):
    rng = random.Random(seed)
    g = _weights(rng, random_map(rng, n, parallel=seed % 4 == 0))
    text = format_pbg(g)
    h = parse_pbg(text)
    assert same_graph(h, g)
    assert format_pbg(h) == text
