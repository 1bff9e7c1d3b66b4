import pytest
from hypothesis import given, settings

from canonext import corpus
from canonext.completions import filter_completion
from canonext.dot import DotSyntaxError, emit_dot, validate_dot
from canonext.order import hasse_edges
from conftest import rng_for, seeds


@pytest.mark.parametrize("name,edges", [("CH2", 1), ("B2", 4), ("N5", 5), ("CH3", 2), ("M3", 6), ("B3", 12)])
def test_hasse_edge_counts(lat, name, edges):
    L = lat[name]
    assert validate_dot(emit_dot(L, name)) == (L.n, edges)


def test_emit_is_deterministic(lat):
    assert emit_dot(lat["N5"], "N5") == emit_dot(corpus.load_entry("n5"), "N5")


def test_emit_accepts_completion_and_quotes(lat):
    fc = filter_completion(lat["B2"])
    text = emit_dot(fc.carrier, 'F "B2"')
    assert '\\"B2\\"' in text
    assert validate_dot(text) == (4, 4)


@pytest.mark.parametrize("text,expected", [
    ("digraph { a -> b -> c }", (3, 2)),
    ("strict digraph g { a; b; a -> b [color=red, weight=2]; }", (2, 1)),
    ("graph { a -- b; subgraph s { c } }", (3, 1)),
    ('digraph { node [shape=box]; "x y" -> z; rankdir=LR }', (2, 1)),
    ("digraph { /* c */ a:n -> b:s:e // tail\n }", (2, 1)),
])
def test_validator_accepts(text, expected):
    assert validate_dot(text) == expected


@pytest.mark.parametrize("text", [
    "digraph { a -> }",
    "digraph { a -- b }",
    "graph { a -> b }",
    "digraph { a [label] }",
    "digraph { a",
    "digraph { } extra",
    "tree { a }",
    "digraph { a @ b }",
])
def test_validator_rejects(text):
    with pytest.raises(DotSyntaxError):
        validate_dot(text)


@settings(max_examples=30)
@given(seeds)
def test_random_lattice_dot(seed):
    L = corpus.random_lattice(rng_for(seed), max_size=8)
    assert validate_dot(emit_dot(L)) == (L.n, len(hasse_edges(L.poset)))
