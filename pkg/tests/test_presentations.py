import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from canonext import corpus
from canonext.lattice import OrderedAlgebra, parse_inequation
from canonext.order import OrderError, bits, down_set, mask_of, poset_from_pairs, saturate_order
from canonext.presentations import (
    Presentation, all_c_ideals, c_ideal_closure, c_ideals_by_subset_scan,
    check_inequation_lifting, cover_preservation_witness, cover_stability_witness,
    free_dcpo, is_c_ideal, is_cover_preserving, is_cover_stable, lift_operation,
    universal_property_oracle,
)
from conftest import rng_for, seeds


def masks(P, *names):
    return mask_of(P.index(s) for s in names)


def chain2():
    return Presentation(saturate_order([(0, 1)], 2), "dcpo")


def test_pres1_closure(pres):
    p = pres["PRES1"]
    assert c_ideal_closure(p, masks(p.base, "a", "b")) == masks(p.base, "a", "b", "t")


def test_pres2_closure_differs_from_down_set(pres):
    p = pres["PRES2"]
    y = masks(p.base, "y")
    assert c_ideal_closure(p, y) == masks(p.base, "x", "y")
    assert c_ideal_closure(p, y) != down_set(p.base, y)


def test_cover_free_closure_of_empty():
    assert c_ideal_closure(chain2(), 0) == 0


def test_dcpo_cover_must_be_directed():
    P = poset_from_pairs(["x", "y", "z"], [])
    with pytest.raises(ValueError, match="directed"):
        Presentation(P, "dcpo", ((0, 0b110),))
    with pytest.raises(ValueError, match="directed"):
        Presentation(P, "dcpo", ((0, 0),))
    Presentation(P, "suplattice", ((0, 0),))


def test_intensional_needs_monotone_declaration():
    p = Presentation(saturate_order([], 2), "dcpo", oracle=lambda x, U: False)
    with pytest.raises(ValueError, match="monotone"):
        c_ideal_closure(p, 1)


def test_enumeration_examples(pres):
    p1 = pres["PRES1"]
    fam = all_c_ideals(p1)
    B = p1.base
    expected = [(), ("a",), ("b",), ("t",), ("a", "t"), ("b", "t"), ("a", "b", "t")]
    assert sorted(fam.members) == sorted(masks(B, *e) for e in expected)
    p2 = pres["PRES2"]
    B = p2.base
    assert sorted(all_c_ideals(p2).members) == sorted([0, masks(B, "x"), masks(B, "x", "y")])
    assert len(all_c_ideals(chain2())) == 3


def test_free_dcpo_examples(pres):
    p2 = pres["PRES2"]
    free = free_dcpo(p2)
    B = p2.base
    assert sorted(free.members) == sorted([masks(B, "x"), masks(B, "x", "y")])
    assert free.members[free.eta[B.index("y")]] == masks(B, "x", "y")
    f2 = free_dcpo(chain2())
    assert f2.members == (0b01, 0b11)
    with pytest.raises(ValueError):
        free_dcpo(pres["PRES1"])


def random_pres(seed, size=6):
    return corpus.random_presentation(rng_for(seed), max_size=size, max_covers=5)


@settings(max_examples=60)
@given(seeds, st.integers(0, 63), st.integers(0, 63))
def test_closure_is_closure_operator(seed, X, Y):
    p = random_pres(seed)
    full = (1 << p.base.n) - 1
    X &= full
    Y &= full
    cx = c_ideal_closure(p, X)
    assert X & ~cx == 0
    assert down_set(p.base, X) & ~cx == 0
    assert c_ideal_closure(p, cx) == cx
    assert c_ideal_closure(p, X & Y) & ~cx == 0
    assert is_c_ideal(p, cx)


@settings(max_examples=60)
@given(seeds)
def test_enumeration_matches_scan_and_lattice_laws(seed):
    p = random_pres(seed, 7)
    fam = all_c_ideals(p, verify=False)
    assert sorted(fam.members) == sorted(c_ideals_by_subset_scan(p))
    ms = fam.members
    for i, j in itertools.product(range(len(ms)), repeat=2):
        assert ms[i] & ms[j] in ms
        # order-theoretic join is the least member containing both
        ub = [k for k in range(len(ms)) if ms[i] | ms[j] == (ms[i] | ms[j]) & ms[k]]
        least = min(ub, key=lambda k: bin(ms[k]).count("1"))
        assert fam.join(i, j) == least
        assert all(ms[least] & ~ms[k] == 0 for k in ub)


@settings(max_examples=60)
@given(seeds)
def test_eta_preserves_covers(seed):
    p = random_pres(seed)
    for x, U in p.cover_list():
        gen = 0
        for y in bits(U):
            gen |= c_ideal_closure(p, 1 << y)
        assert c_ideal_closure(p, 1 << x) & ~c_ideal_closure(p, gen) == 0


@settings(max_examples=60)
@given(seeds)
def test_free_dcpo_is_principal_ideals(seed):
    p = corpus.random_presentation(rng_for(seed), max_size=6, kind="dcpo", max_covers=5)
    free = free_dcpo(p)
    assert set(free.members) == {c_ideal_closure(p, 1 << x) for x in range(p.base.n)}


def test_cover_preservation_examples(pres):
    p2 = pres["PRES2"]
    CH2 = corpus.chain(2)
    x, y = p2.base.index("x"), p2.base.index("y")
    f = [0, 0]
    f[x], f[y] = 0, 1
    assert is_cover_preserving(p2, f, CH2)
    f[x], f[y] = 1, 0
    assert cover_preservation_witness(p2, f, CH2) == (x, 1 << y)
    assert is_cover_preserving(chain2(), [0, 1], CH2)


def test_cover_preservation_rejects_non_monotone():
    with pytest.raises(OrderError):
        cover_preservation_witness(chain2(), [1, 0], corpus.chain(2))


def test_universal_property_examples(pres, lat):
    r = universal_property_oracle(pres["PRES2"], lat["CH2"])
    assert r.passed and r.info["maps"] == 4 and r.info["cover_preserving"] == 3
    assert r.info["unique"] == 3
    r = universal_property_oracle(pres["PRES1"], lat["B2"])
    assert r.passed and r.info["carrier"] == 7
    assert r.info["unique"] == r.info["cover_preserving"] > 0
    one = Presentation(poset_from_pairs(["p"], []), "dcpo")
    for D in lat.values():
        r = universal_property_oracle(one, D)
        assert r.passed and r.info["cover_preserving"] == D.n == r.info["unique"]


def test_cover_stability_examples(pres):
    p2 = pres["PRES2"]
    x, y = p2.base.index("x"), p2.base.index("y")
    assert is_cover_stable(np.arange(2), [p2], p2)
    f = np.zeros(2, dtype=int)
    f[x], f[y] = y, y
    assert is_cover_stable(f, [p2], p2)
    g = np.zeros(2, dtype=int)
    g[x], g[y] = y, x
    assert cover_stability_witness(g, [p2], p2) is not None


def test_lift_operation_examples(pres):
    p2 = pres["PRES2"]
    free = free_dcpo(p2)
    assert list(lift_operation(np.arange(2), [free], free)) == [0, 1]
    const = np.full(2, p2.base.index("x"))
    lifted = lift_operation(const, [free], free)
    assert set(lifted.tolist()) == {free.eta[p2.base.index("x")]}
    x, y = p2.base.index("x"), p2.base.index("y")
    swap = np.zeros(2, dtype=int)
    swap[x], swap[y] = y, x
    with pytest.raises(ValueError, match="cover-stable"):
        lift_operation(swap, [free], free)


def test_inequation_lifting_examples(pres):
    p2 = pres["PRES2"]
    alg = OrderedAlgebra(p2.base, {"f": np.arange(2)})
    r = check_inequation_lifting(p2, alg, parse_inequation("(leq x x)"))
    assert r.passed and r.applicable


@settings(max_examples=40)
@given(seeds)
def test_random_inequation_lifting(seed):
    p, alg, ineq = corpus.random_lifting_triple(rng_for(seed))
    r = check_inequation_lifting(p, alg, ineq)
    assert r.passed and r.applicable
    free = free_dcpo(p)
    for name, t in alg.ops.items():
        lifted = lift_operation(t, [free] * t.ndim, free)
        for args in itertools.product(range(len(free)), repeat=t.ndim):
            for i in range(t.ndim):
                for b in bits(free.poset.up[args[i]]):
                    other = args[:i] + (b,) + args[i + 1:]
                    assert free.poset.leq(int(lifted[args]), int(lifted[other]))
