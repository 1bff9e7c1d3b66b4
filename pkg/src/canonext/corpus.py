"""Shipped example structures and seeded random generators."""
from __future__ import annotations

import itertools
import random
from functools import lru_cache
from importlib import resources

import numpy as np

from .lattice import (
    App, FiniteLattice, Inequation, OrderedAlgebra, Var, inequation_witness,
    is_operator, lattice_from_poset, operator_violation,
)
from .order import Poset, Preorder, bits, is_directed, saturate_order
from .presentations import Presentation, is_cover_stable
from . import io

LATTICES = ("ch2", "ch3", "b2", "b3", "n5", "m3")
PRESENTATIONS = ("pres1", "pres2")
ALGEBRAS = ("b2_diamond", "b3_diamond", "ch3_succ", "ch3_fusion", "n5_join", "m3_join", "n5_meet")


def entry_names() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files("canonext.corpus_data").iterdir()
                  if p.name.endswith(".json"))


def entry_text(name: str) -> str:
    return resources.files("canonext.corpus_data").joinpath(name.lower() + ".json").read_text("utf-8")


@lru_cache(maxsize=None)
def load_entry(name: str):
    """Parse a shipped corpus file by name (case-insensitive)."""
    if name.lower() not in entry_names():
        raise KeyError(f"no corpus entry {name!r}")
    return io.parse(entry_text(name))


def lattices() -> dict[str, FiniteLattice]:
    return {name.upper(): load_entry(name) for name in LATTICES}


def presentations() -> dict[str, Presentation]:
    return {name.upper(): load_entry(name) for name in PRESENTATIONS}


def algebras() -> dict[str, OrderedAlgebra]:
    return {name: load_entry(name) for name in ALGEBRAS}


def one_element() -> FiniteLattice:
    return lattice_from_poset(Poset(["0"], [1]))


def chain(n: int) -> FiniteLattice:
    return lattice_from_poset(saturate_order([(i, i + 1) for i in range(n - 1)], n,
                                             [str(i) for i in range(n)]))


# -- random structures ------------------------------------------------------

def _subset_label(s: int, k: int) -> str:
    return "".join("abcdefgh"[i] for i in range(k) if s >> i & 1) or "0"


def random_lattice(rng: random.Random, max_size: int = 7, min_size: int = 1,
                   atoms: int | None = None) -> FiniteLattice:
    """A random meet-closed subset of a Boolean algebra with its top added,
    ordered by inclusion (always a lattice)."""
    while True:
        k = atoms if atoms is not None else rng.choice((2, 3, 4))
        top = (1 << k) - 1
        pool = set(rng.sample(range(1 << k), rng.randint(1, min(max_size, 1 << k))))
        pool.add(top)
        changed = True
        while changed:
            changed = False
            for a, b in itertools.combinations(list(pool), 2):
                if a & b not in pool:
                    pool.add(a & b)
                    changed = True
        if min_size <= len(pool) <= max_size:
            break
    els = sorted(pool, key=lambda s: (bin(s).count("1"), s))
    labels = [_subset_label(s, k) if s != top else "1" for s in els]
    up = [sum(1 << j for j, b in enumerate(els) if a & b == a) for a in els]
    return lattice_from_poset(Poset(labels, up))


def random_poset(rng: random.Random, n: int, density: float = 0.35) -> Poset:
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    p = saturate_order(pairs, n, [f"p{i}" for i in range(n)])
    return Poset(p.labels, p.up)


def random_presentation(rng: random.Random, max_size: int = 4, kind: str | None = None,
                        max_covers: int = 3) -> Presentation:
    """Random poset of at most ``max_size`` elements with a few covers; dcpo
    right-hand sides are nonempty and directed, suplattice ones arbitrary."""
    n = rng.randint(1, max_size)
    kind = kind or rng.choice(("dcpo", "suplattice"))
    P = random_poset(rng, n)
    covers = []
    for _ in range(rng.randint(0, max_covers)):
        x = rng.randrange(n)
        if kind == "dcpo":
            m = rng.randrange(n)
            U = (1 << m) | (rng.getrandbits(n) & P.down[m])
            assert is_directed(P, U)
        else:
            U = rng.getrandbits(n)
        covers.append((x, U))
    return Presentation(P, kind, tuple(covers))


def join_with(A: FiniteLattice, c: int) -> np.ndarray:
    return A.join[:, c].astype(np.int64).copy()


def random_unary_operator(rng: random.Random, A: FiniteLattice, tries: int = 50) -> np.ndarray:
    """A random map preserving binary joins.

    Values on join-irreducibles are drawn monotonically and extended by
    joins; on non-distributive lattices the result may fail to be an
    operator, in which case another draw is made.  Falls back to a
    join-with-constant map.
    """
    n = A.n
    irreducible = [j for j in range(n) if j != A.bottom and
                   not any(int(A.join[a, b]) == j for a in range(n) for b in range(n)
                           if a != j and b != j)]
    irreducible.sort(key=lambda j: bin(A.down[j]).count("1"))
    for _ in range(tries):
        base = rng.randrange(n)
        g = {}
        for j in irreducible:
            lower = base
            for i in irreducible:
                if i in g and A.leq(i, j):
                    lower = int(A.join[lower, g[i]])
            g[j] = rng.choice([v for v in range(n) if A.leq(lower, v)])
        f = np.array([A.join_all([base] + [g[j] for j in irreducible if A.leq(j, a)])
                      for a in range(n)], dtype=np.int64)
        if is_operator([A], A, f):
            return f
    return join_with(A, rng.randrange(n))


def random_binary_operator(rng: random.Random, A: FiniteLattice) -> np.ndarray:
    """``g(x) ∨ h(y)`` for random unary operators g and h."""
    g, h = random_unary_operator(rng, A), random_unary_operator(rng, A)
    f = A.join[g[:, None], h[None, :]].astype(np.int64)
    assert operator_violation([A, A], A, f) is None
    return f


def operator_corpus(A: FiniteLattice, seed: int, random_count: int = 20) -> list[tuple[str, np.ndarray]]:
    """Every join-with-constant map, join itself, and ``random_count``
    seeded random operators (alternating unary and binary)."""
    rng = random.Random(seed)
    ops = [(f"join_{A.labels[c]}", join_with(A, c)) for c in range(A.n)]
    ops.append(("join", A.join.astype(np.int64)))
    for k in range(random_count):
        if k % 2:
            ops.append((f"rand2_{k}", random_binary_operator(rng, A)))
        else:
            ops.append((f"rand1_{k}", random_unary_operator(rng, A)))
    return ops


def random_monotone_map(rng: random.Random, P: Preorder, arity: int = 1,
                        tries: int = 200) -> np.ndarray:
    """Random order-preserving table ``P^arity -> P``.

    Cells are filled along a linear extension of the product order, each
    drawn above every value already placed below it; a dead end (no common
    upper bound) restarts the draw.
    """
    n = P.n
    shape = (n,) * arity
    cells = sorted(itertools.product(range(n), repeat=arity),
                   key=lambda t: sum(bin(P.down[i]).count("1") for i in t))
    for _ in range(tries):
        out = np.full(shape, -1, dtype=np.int64)
        ok = True
        for t in cells:
            below = [int(out[s]) for s in cells if out[s] >= 0 and s != t
                     and all(P.leq(a, b) for a, b in zip(s, t))]
            cands = [v for v in range(n) if all(P.leq(b, v) for b in below)]
            if not cands:
                ok = False
                break
            out[t] = rng.choice(cands)
        if ok:
            return out
    return np.array(np.indices(shape)[0]) if arity else np.array(0)


def random_term(rng: random.Random, signature: dict[str, int], nvars: int, depth: int):
    if depth == 0 or rng.random() < 0.3:
        nullary = [s for s, a in signature.items() if a == 0]
        if nullary and rng.random() < 0.15:
            return App(rng.choice(nullary))
        return Var(rng.randrange(nvars))
    sym = rng.choice([s for s, a in signature.items() if a > 0])
    return App(sym, tuple(random_term(rng, signature, nvars, depth - 1)
                          for _ in range(signature[sym])))


def random_true_inequation(rng: random.Random, alg: OrderedAlgebra, max_depth: int = 2,
                           tries: int = 200) -> Inequation:
    """A random inequation over at most two variables that holds in ``alg``;
    ``x ≼ x`` when no random draw holds."""
    sig = alg.signature
    names = ("x", "y")
    for _ in range(tries):
        nvars = rng.choice((1, 2))
        ineq = Inequation(random_term(rng, sig, nvars, max_depth),
                          random_term(rng, sig, nvars, max_depth), nvars, names[:nvars])
        if inequation_witness(alg, ineq) is None:
            return ineq
    return Inequation(Var(0), Var(0), 1, ("x",))


def random_lifting_triple(rng: random.Random, max_size: int = 4):
    """(presentation, algebra of cover-stable ops on its base, true inequation)."""
    pres = random_presentation(rng, max_size=max_size, kind="dcpo")
    P = pres.base
    ops = {}
    for name, arity in (("f", 1), ("g", 2)):
        for _ in range(30):
            t = random_monotone_map(rng, P, arity)
            if is_cover_stable(t, [pres] * arity, pres):
                ops[name] = t
                break
        else:
            ops[name] = (np.arange(P.n) if arity == 1
                         else np.indices((P.n, P.n))[0].astype(np.int64))
    alg = OrderedAlgebra(P, ops)
    return pres, alg, random_true_inequation(rng, alg)


def covers_as_text(pres: Presentation) -> list[str]:
    lab = pres.base.labels
    return [f"{lab[x]} ◁ {{{', '.join(lab[y] for y in bits(U))}}}" for x, U in pres.covers]
