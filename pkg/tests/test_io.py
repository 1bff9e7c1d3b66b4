import json

import numpy as np
import pytest
from hypothesis import given, settings

from canonext import corpus, io
from canonext.io import DocumentError
from canonext.lattice import FiniteLattice, OrderedAlgebra, parse_inequation
from canonext.order import Poset
from canonext.presentations import Presentation
from conftest import rng_for, seeds

CH2 = '{"kind": "lattice", "name": "CH2", "elements": ["0", "1"], "leq": [["0", "1"]]}'


def test_parse_ch2():
    L = io.parse(CH2)
    assert isinstance(L, FiniteLattice)
    assert L.n == 2 and L.leq(0, 1) and not L.leq(1, 0)
    assert L.labels[L.bottom] == "0" and L.labels[L.top] == "1"


def test_parse_b2_from_hasse_pairs():
    doc = {"kind": "lattice", "elements": ["0", "a", "b", "1"],
           "leq": [["0", "a"], ["0", "b"], ["a", "1"], ["b", "1"]]}
    L = io.from_document(doc)
    a, b = L.index("a"), L.index("b")
    assert L.labels[int(L.join[a, b])] == "1"
    assert L.labels[int(L.meet[a, b])] == "0"


def test_non_monotone_table_names_the_pair():
    doc = {"kind": "algebra",
           "lattice": {"elements": ["0", "1"], "leq": [["0", "1"]]},
           "ops": {"neg": {"arity": 1, "table": ["1", "0"]}}}
    with pytest.raises(DocumentError, match="neg") as info:
        io.from_document(doc)
    assert "0" in str(info.value) and "1" in str(info.value)
    assert info.value.path == "$.ops"


def test_unknown_field_has_path_and_line():
    text = '{\n  "kind": "lattice",\n  "elements": ["0"],\n  "leq": [],\n  "colour": "red"\n}'
    with pytest.raises(DocumentError, match="colour") as info:
        io.parse(text)
    assert info.value.path.startswith("$")
    assert info.value.line == 5


def test_nested_unknown_field_path():
    doc = {"kind": "algebra",
           "lattice": {"elements": ["0"], "leq": [], "extra": 1},
           "ops": {}}
    with pytest.raises(DocumentError) as info:
        io.from_document(doc)
    assert "lattice" in info.value.path


@pytest.mark.parametrize("text", ["{}", "[]", '{"kind": "widget"}', '"lattice"'])
def test_bad_top_level(text):
    with pytest.raises(DocumentError):
        io.parse(text)


def test_invalid_json_reports_line():
    with pytest.raises(DocumentError, match="invalid JSON") as info:
        io.parse('{\n  "kind": "lattice",\n  "elements": [\n')
    assert info.value.line is not None and info.value.line >= 3


def test_not_a_lattice():
    # two incomparable maximal elements
    doc = {"kind": "lattice", "elements": ["0", "a", "b"], "leq": [["0", "a"], ["0", "b"]]}
    with pytest.raises(DocumentError, match="not a lattice"):
        io.from_document(doc)


def test_poset_rejects_cycle_and_unknown_label():
    with pytest.raises(DocumentError, match="antisymmetric"):
        io.from_document({"kind": "poset", "elements": ["p", "q"], "leq": [["p", "q"], ["q", "p"]]})
    with pytest.raises(DocumentError, match="unknown element"):
        io.from_document({"kind": "poset", "elements": ["p"], "leq": [["p", "r"]]})


def test_duplicate_labels():
    with pytest.raises(DocumentError, match="distinct"):
        io.from_document({"kind": "poset", "elements": ["p", "p"], "leq": []})


def test_rows_table_equals_nested():
    lat = {"elements": ["0", "1", "2"], "leq": [["0", "1"], ["1", "2"]]}
    nested = {"kind": "algebra", "lattice": lat,
              "ops": {"succ": {"arity": 1, "table": ["1", "2", "2"]}}}
    rows = {"kind": "algebra", "lattice": lat,
            "ops": {"succ": {"arity": 1, "table": [["0", "1"], ["1", "2"], ["2", "2"]]}}}
    a, b = io.from_document(nested), io.from_document(rows)
    assert np.array_equal(a.ops["succ"], b.ops["succ"])
    rows["ops"]["succ"]["table"][2] = ["1", "2"]
    with pytest.raises(DocumentError, match="repeated"):
        io.from_document(rows)


def test_table_wrong_length():
    doc = {"kind": "algebra", "lattice": {"elements": ["0", "1"], "leq": [["0", "1"]]},
           "ops": {"f": {"arity": 2, "table": [["0", "1"], ["1"]]}}}
    with pytest.raises(DocumentError, match="2 entries") as info:
        io.from_document(doc)
    assert info.value.path == "$.ops.f.table[1]"


def test_presentation_document():
    p = corpus.load_entry("pres1")
    assert isinstance(p, Presentation) and p.kind == "suplattice"
    t = p.base.index("t")
    assert p.covers == ((t, (1 << p.base.index("a")) | (1 << p.base.index("b"))),)


def test_dcpo_presentation_requires_directed_rhs():
    doc = {"kind": "presentation", "type": "dcpo",
           "preorder": {"elements": ["x", "y", "z"], "leq": []},
           "covers": [{"lhs": "x", "rhs": ["y", "z"]}]}
    with pytest.raises(DocumentError) as info:
        io.from_document(doc)
    assert info.value.path == "$.covers"


def test_inequation_document():
    ineq = io.from_document({"kind": "inequation", "text": "(leq x (join x y))"})
    assert ineq.nvars == 2
    assert io.inequation_text(ineq) == "(leq x (join x y))"
    with pytest.raises(DocumentError, match=r"\$\.text"):
        io.from_document({"kind": "inequation", "text": "(leq x"})


def test_corpus_document():
    doc = {"kind": "corpus", "entries": {
        "ch2": json.loads(CH2),
        "eq": {"kind": "inequation", "text": "(leq x x)"}}}
    out = io.from_document(doc)
    assert set(out) == {"ch2", "eq"} and out["ch2"].n == 2
    doc["entries"]["bad"] = {"kind": "lattice", "elements": [], "leq": []}
    with pytest.raises(DocumentError) as info:
        io.from_document(doc)
    assert "entries.bad" in info.value.path


@pytest.mark.parametrize("name", corpus.entry_names())
def test_corpus_file_round_trip(name):
    text = corpus.entry_text(name)
    obj = io.parse(text)
    again = io.serialize(obj, json.loads(text).get("name"))
    assert again == text
    back = io.parse(again)
    if isinstance(obj, OrderedAlgebra):
        assert back.carrier.poset == obj.carrier.poset
        assert all(np.array_equal(back.ops[k], obj.ops[k]) for k in obj.ops)
    elif isinstance(obj, Presentation):
        assert back.base == obj.base and back.covers == obj.covers and back.kind == obj.kind
    else:
        assert back.poset == obj.poset


def test_load_from_disk(tmp_path):
    path = tmp_path / "ch2.json"
    path.write_text(CH2)
    assert io.load(path).n == 2


@settings(max_examples=40)
@given(seeds)
def test_random_lattice_round_trip(seed):
    L = corpus.random_lattice(rng_for(seed), max_size=8)
    back = io.parse(io.serialize(L, "r"))
    assert back.poset == L.poset
    assert io.serialize(back, "r") == io.serialize(L, "r")


@settings(max_examples=40)
@given(seeds)
def test_random_presentation_round_trip(seed):
    p = corpus.random_presentation(rng_for(seed), max_size=6)
    back = io.parse(io.serialize(p))
    assert back.base == p.base and back.kind == p.kind
    assert sorted(back.covers) == sorted(p.covers)


@settings(max_examples=30)
@given(seeds)
def test_random_poset_round_trip(seed):
    rng = rng_for(seed)
    P = corpus.random_poset(rng, rng.randint(1, 7))
    back = io.parse(io.serialize(P))
    assert isinstance(back, Poset) and back == P


def test_inequation_text_round_trip():
    for s in ["(leq (dia (join x y)) (join (dia x) (dia y)))", "(leq bot x)", "(leq (meet x y) top)"]:
        ineq = parse_inequation(s, {"dia": 1})
        assert parse_inequation(io.inequation_text(ineq), {"dia": 1}) == ineq
