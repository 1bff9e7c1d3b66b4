import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from canonext import corpus
from canonext.completions import (
    check_cocompletion_axioms, check_filter_inequation_transfer,
    check_operator_preservation, check_product_iso, co_scott_violation,
    extend_map_f, extend_operation_f, filter_completion, ideal_completion,
    lift_algebra_to_f, product_filter_iso,
)
from canonext.lattice import (
    OrderedAlgebra, generated_filter, lattice_op_table, parse_inequation,
    product_lattice,
)
from canonext.order import MonotoneMap, OrderError, bits, find_isomorphism, poset_from_pairs
from conftest import rng_for, seeds


def test_ch2_completion(lat):
    fc = filter_completion(lat["CH2"])
    C = fc.carrier
    assert C.n == 2
    up0, up1 = fc.embed(0), fc.embed(1)
    assert C.bottom == up0 and C.top == up1
    assert fc.filters[up0] == 0b11 and fc.filters[up1] == 0b10


def test_b2_completion_iso_via_up(lat):
    fc = filter_completion(lat["B2"])
    assert fc.embed.is_isomorphism()


def test_one_element_completion():
    fc = filter_completion(corpus.one_element())
    assert fc.carrier.n == 1


@pytest.mark.parametrize("name", ["CH2", "CH3", "B2", "B3", "N5", "M3"])
def test_carrier_order_is_reverse_inclusion(lat, name):
    fc = filter_completion(lat[name])
    C = fc.carrier
    for i, j in itertools.product(range(C.n), repeat=2):
        f, g = fc.filters[i], fc.filters[j]
        assert C.leq(i, j) == (f & g == g)
        assert fc.filters[C.join[i, j]] == f & g
        assert fc.filters[C.meet[i, j]] == generated_filter(fc.base, f | g)


@pytest.mark.parametrize("name", ["B2", "N5", "M3", "B3"])
def test_axioms_pass(lat, name):
    fc = filter_completion(lat[name])
    rep = check_cocompletion_axioms(lat[name], fc.carrier, fc.embed.image)
    assert rep.passed and set(rep.checks) == {
        "1 co-dcpo", "2 order-embedding", "3 meet-density", "4 compactness"}


def test_corrupted_carrier_fails_meet_density(lat):
    # F(B2) with an extra element m squeezed between ↑0 and ↑a
    B2 = lat["B2"]
    fc = filter_completion(B2)
    up = fc.embed.image
    o, a = up[B2.index("0")], up[B2.index("a")]
    labels = list(fc.carrier.labels) + ["m"]
    pairs = [(i, j) for i in range(4) for j in range(4) if fc.carrier.leq(i, j)]
    pairs += [(o, 4), (4, a)]
    bad = poset_from_pairs(labels, pairs)
    rep = check_cocompletion_axioms(B2, bad, up)
    assert not rep.checks["3 meet-density"]
    assert rep.witnesses["3 meet-density"] == "m"
    assert rep.checks["2 order-embedding"]


@settings(max_examples=25)
@given(seeds)
def test_random_filter_completions_are_iso(seed):
    A = corpus.random_lattice(rng_for(seed), max_size=7)
    fc = filter_completion(A)
    assert fc.embed.is_isomorphism()
    assert find_isomorphism(A.poset, fc.carrier.poset) is not None
    assert check_cocompletion_axioms(A, fc.carrier, fc.embed.image).passed


def test_extend_identity_and_constant(lat):
    fb = filter_completion(lat["B2"])
    ident = MonotoneMap(lat["B2"].poset, lat["B2"].poset, range(4))
    assert extend_map_f(ident, fb, fb).image == tuple(range(4))
    N5 = lat["N5"]
    fn = filter_completion(N5)
    top = N5.index("1")
    const = MonotoneMap(N5.poset, N5.poset, [top] * 5)
    assert set(extend_map_f(const, fn, fn).image) == {fn.embed(top)}


def test_extend_ch2_to_b2(lat):
    CH2, B2 = lat["CH2"], lat["B2"]
    f = MonotoneMap(CH2.poset, B2.poset, [B2.index("0"), B2.index("a")])
    ext = extend_map_f(f, filter_completion(CH2), fb := filter_completion(B2))
    assert ext(filter_completion(CH2).embed(1)) == fb.embed(B2.index("a"))


def test_extend_rejects_non_monotone(lat):
    fc = filter_completion(lat["CH2"])
    with pytest.raises(OrderError):
        extend_operation_f(np.array([1, 0]), [fc], fc)


@pytest.mark.parametrize("name", ["CH3", "B2", "N5", "M3"])
def test_extension_commutes_with_embedding(lat, name):
    A = lat[name]
    fc = filter_completion(A)
    for _, table in corpus.operator_corpus(A, 3, random_count=6):
        ext = extend_operation_f(table, [fc] * table.ndim, fc)
        for args in itertools.product(range(A.n), repeat=table.ndim):
            up_args = tuple(fc.embed(a) for a in args)
            assert ext[up_args] == fc.embed(int(table[args]))
        assert co_scott_violation(ext, [fc] * table.ndim, fc) is None


def test_lift_b2_diamond_matches_join_with_up_a(algs, lat):
    alg = algs["b2_diamond"]
    B2 = lat["B2"]
    fc = filter_completion(B2)
    lifted = lift_algebra_to_f(alg, fc)
    C = fc.carrier
    ua = fc.embed(B2.index("a"))
    assert np.array_equal(lifted.ops["dia"], C.join[:, ua])
    assert np.array_equal(lifted.ops["join"], C.join)
    assert int(lifted.ops["top"]) == fc.embed(B2.top)


@pytest.mark.parametrize("name", ["CH2", "B2", "N5", "M3"])
def test_join_lifts_to_join(lat, name):
    A = lat[name]
    fc = filter_completion(A)
    lifted = lift_algebra_to_f(OrderedAlgebra.over_lattice(A), fc)
    assert np.array_equal(lifted.ops["join"], fc.carrier.join)


def test_filter_transfer_examples(algs, lat):
    alg = algs["b2_diamond"]
    r = check_filter_inequation_transfer(
        alg, parse_inequation("(leq (dia x) (dia (join x y)))", alg.signature))
    assert r.passed and r.applicable
    N5 = OrderedAlgebra.over_lattice(lat["N5"])
    r = check_filter_inequation_transfer(
        N5, parse_inequation("(leq (meet x (join y z)) (join (meet x y) (meet x z)))"))
    assert not r.applicable and r.info["status"] == "not applicable" and r.passed
    assert check_filter_inequation_transfer(alg, parse_inequation("(leq x x)")).passed


def test_operator_preservation(lat):
    B2 = lat["B2"]
    fb = filter_completion(B2)
    assert check_operator_preservation(B2.join[:, B2.index("a")], [fb], fb).passed
    M3 = lat["M3"]
    fm = filter_completion(M3)
    assert check_operator_preservation(lattice_op_table(M3, "join"), [fm, fm], fm).passed
    N5 = lat["N5"]
    fn = filter_completion(N5)
    with pytest.raises(ValueError, match="not an operator"):
        check_operator_preservation(lattice_op_table(N5, "meet"), [fn, fn], fn)


def test_product_iso_examples(lat):
    for p, q in [("CH2", "CH2"), ("B2", "N5"), ("M3", "CH3")]:
        assert check_product_iso(lat[p], lat[q]).passed


def test_product_iso_maps_are_inverse(lat):
    P, Q = lat["CH3"], lat["B2"]
    fp, fq = filter_completion(P), filter_completion(Q)
    fpq = filter_completion(product_lattice([P, Q]))
    to_p, from_p = product_filter_iso([fp, fq], fpq)
    for a, b in itertools.product(range(fp.carrier.n), range(fq.carrier.n)):
        assert from_p(to_p((a, b))) == (a, b)


def test_ideal_completion_dual(lat):
    N5 = lat["N5"]
    ic = ideal_completion(N5)
    assert ic.embed.is_isomorphism()
    for i, j in itertools.product(range(5), repeat=2):
        assert ic.carrier.leq(i, j) == (ic.ideals[i] & ~ic.ideals[j] == 0)
    assert all(bin(I).count("1") == bin(N5.down[N5.join_all(bits(I))]).count("1")
               for I in ic.ideals)
