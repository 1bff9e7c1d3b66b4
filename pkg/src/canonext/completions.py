"""Filter (co-directed meet) and ideal (directed join) completions."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .lattice import (
    FiniteLattice, Inequation, OrderedAlgebra, filters_of, generated_filter,
    ideals_of, inequation_witness, is_filter, lattice_from_poset,
    monotonicity_violation, operator_violation, product_lattice,
)
from .order import (
    DEFAULT_MAX_SIZE, MonotoneMap, OrderError, Poset, bits, codirected_subsets,
    full_mask, infimum, is_codirected, mask_of, product_order,
)
from .report import Report

# co-directed subsets are enumerated exhaustively up to this carrier size
EXHAUSTIVE_LIMIT = 14


def _set_label(L: FiniteLattice, mask: int, arrow: str) -> str:
    for a in range(L.n):
        if (L.up if arrow == "↑" else L.down)[a] == mask:
            return f"{arrow}{L.labels[a]}"
    return L.fmt(mask)


@dataclass(eq=False)
class FilterCompletion:
    """Filters of ``base`` ordered by reverse inclusion, with ``a -> ↑a``."""

    base: FiniteLattice
    filters: tuple[int, ...]
    carrier: FiniteLattice
    embed: MonotoneMap

    def index_of(self, mask: int) -> int:
        return self._index[mask]

    def __post_init__(self):
        self._index = {m: i for i, m in enumerate(self.filters)}


@dataclass(eq=False)
class IdealCompletion:
    """Ideals of ``base`` ordered by inclusion, with ``a -> ↓a``."""

    base: FiniteLattice
    ideals: tuple[int, ...]
    carrier: FiniteLattice
    embed: MonotoneMap

    def index_of(self, mask: int) -> int:
        return self._index[mask]

    def __post_init__(self):
        self._index = {m: i for i, m in enumerate(self.ideals)}


def filter_completion(A: FiniteLattice, order: Sequence[int] | None = None,
                      max_size: int | None = DEFAULT_MAX_SIZE) -> FilterCompletion:
    """Build F(A).  ``order`` optionally permutes the filter enumeration.

    Meets and joins of the carrier come from glb/lub search on reverse
    inclusion; they are cross-checked against the generated filter of the
    union and the intersection respectively.
    """
    fs = filters_of(A, max_size=max_size)
    if order is not None:
        if sorted(order) != list(range(len(fs))):
            raise ValueError("order must be a permutation of the filter indices")
        fs = [fs[i] for i in order]
    up = [mask_of(j for j, g in enumerate(fs) if f & g == g) for f in fs]
    labels = [_set_label(A, f, "↑") for f in fs]
    carrier = lattice_from_poset(Poset(labels, up))
    index = {f: i for i, f in enumerate(fs)}
    for i, f in enumerate(fs):
        for j, g in enumerate(fs):
            if fs[carrier.join[i, j]] != f & g:
                raise AssertionError("join in F(A) is not intersection")
            if fs[carrier.meet[i, j]] != generated_filter(A, f | g):
                raise AssertionError("meet in F(A) is not the generated filter")
    embed = MonotoneMap(A.poset, carrier.poset, [index[A.up[a]] for a in range(A.n)])
    return FilterCompletion(A, tuple(fs), carrier, embed)


def ideal_completion(A: FiniteLattice,
                     max_size: int | None = DEFAULT_MAX_SIZE) -> IdealCompletion:
    ids = ideals_of(A, max_size=max_size)
    up = [mask_of(j for j, g in enumerate(ids) if f & g == f) for f in ids]
    labels = [_set_label(A, f, "↓") for f in ids]
    carrier = lattice_from_poset(Poset(labels, up))
    index = {f: i for i, f in enumerate(ids)}
    embed = MonotoneMap(A.poset, carrier.poset, [index[A.down[a]] for a in range(A.n)])
    return IdealCompletion(A, tuple(ids), carrier, embed)


def check_cocompletion_axioms(A: FiniteLattice, carrier: FiniteLattice | Poset,
                              embed: Sequence[int],
                              exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> Report:
    """Check the four characterising properties of a co-directed meet
    completion ``embed: A -> carrier``.  Meets are computed from the
    carrier order alone, so a corrupted carrier is caught."""
    P = carrier.poset if isinstance(carrier, FiniteLattice) else carrier
    rep = Report("co-completion axioms")
    embed = list(embed)
    exhaustive = P.n <= exhaustive_limit
    rep.info["exhaustive"] = exhaustive

    # 1: every co-directed subset has an infimum
    if exhaustive:
        for s in codirected_subsets(P, limit=None):
            if not rep.record("1 co-dcpo", infimum(P, s) is not None, P.fmt(s)):
                break
    else:
        ok = infimum(P, full_mask(P.n)) is not None and all(
            infimum(P, (1 << i) | (1 << j)) is not None
            for i in range(P.n) for j in range(P.n))
        rep.record("1 co-dcpo", ok, "missing binary meet or bottom")

    # 2: order embedding
    rep.record("2 order-embedding", True)
    for a in range(A.n):
        for b in range(A.n):
            if A.leq(a, b) != P.leq(embed[a], embed[b]):
                rep.record("2 order-embedding", False, (A.labels[a], A.labels[b]))
                break

    # 3: each x is the co-directed meet of the embedded elements above it
    rep.record("3 meet-density", True)
    for x in range(P.n):
        above = mask_of(a for a in range(A.n) if P.leq(x, embed[a]))
        ok = is_codirected(A.poset, above)
        if ok:
            ok = infimum(P, mask_of(embed[a] for a in bits(above))) == x
        if not ok:
            rep.record("3 meet-density", False, P.labels[x])
            break

    # 4: ⋀S <= ↑a  implies  s <= ↑a for some s in S
    rep.record("4 compactness", True)
    families = (codirected_subsets(P, limit=None) if exhaustive
                else [1 << i for i in range(P.n)])
    for s in families:
        lo = infimum(P, s)
        if lo is None:
            continue
        for a in range(A.n):
            if P.leq(lo, embed[a]) and not any(P.leq(t, embed[a]) for t in bits(s)):
                rep.record("4 compactness", False, (P.fmt(s), A.labels[a]))
                break
        if not rep.checks["4 compactness"]:
            break
    return rep


def _check_monotone(table, sources, target):
    bad = monotonicity_violation(sources, target, table)
    if bad is not None:
        i, lo, hi = bad
        raise OrderError(f"map is not monotone in coordinate {i}: {lo} <= {hi}")


def extend_operation_f(table: np.ndarray, sources: Sequence[FilterCompletion],
                       target: FilterCompletion) -> np.ndarray:
    """f^F(x1..xn) = ⋀ { ↑f(a1..an) | xi <= ↑ai }.

    Tuples are identified with filters of the product through
    :func:`product_filter_iso`; ``xi <= ↑ai`` holds exactly when ``ai`` is a
    member of the filter ``xi``.
    """
    table = np.asarray(table, dtype=np.int64)
    if table.ndim != len(sources):
        raise ValueError("table arity does not match number of sources")
    _check_monotone(table, [s.base for s in sources], target.base)
    C = target.carrier
    up_b = target.embed.image
    out = np.zeros(tuple(len(s.filters) for s in sources), dtype=np.int64)
    for idx in itertools.product(*(range(len(s.filters)) for s in sources)):
        # members a with x <= ↑a, read off the completion order
        above = [[a for a in range(s.base.n) if s.carrier.leq(x, s.embed.image[a])]
                 for s, x in zip(sources, idx)]
        out[idx] = C.meet_all(up_b[int(table[args])] for args in itertools.product(*above))
    return out


def extend_map_f(f: MonotoneMap, source: FilterCompletion,
                 target: FilterCompletion) -> MonotoneMap:
    table = extend_operation_f(np.array(f.image), [source], target)
    return MonotoneMap(source.carrier.poset, target.carrier.poset, table.tolist())


def product_filter_iso(fcs: Sequence[FilterCompletion], product_fc: FilterCompletion):
    """Explicit inverse pair between F(A1)x..xF(An) and F(A1x..xAn).

    Returns ``(to_product, from_product)``: the first sends a tuple of
    carrier indices to an index of ``product_fc``, the second goes back by
    projecting the product filter onto each factor.
    """
    bases = [fc.base for fc in fcs]
    tuples = list(itertools.product(*(range(b.n) for b in bases)))

    def to_product(idx):
        members = [list(bits(fc.filters[i])) for fc, i in zip(fcs, idx)]
        pos = {t: k for k, t in enumerate(tuples)}
        return product_fc.index_of(mask_of(pos[t] for t in itertools.product(*members)))

    def from_product(i):
        f = product_fc.filters[i]
        proj = [0] * len(fcs)
        for k in bits(f):
            for c, a in enumerate(tuples[k]):
                proj[c] |= 1 << a
        return tuple(fc.index_of(p) for fc, p in zip(fcs, proj))

    return to_product, from_product


def check_product_iso(P: FiniteLattice, Q: FiniteLattice,
                      max_size: int | None = 64) -> Report:
    """F(PxQ) is isomorphic to F(P)xF(Q) via the explicit projection map."""
    rep = Report(f"F(PxQ) ~ F(P)xF(Q) [{P.n}x{Q.n}]")
    fp, fq = filter_completion(P), filter_completion(Q)
    PQ = product_lattice([P, Q])
    fpq = filter_completion(PQ, max_size=max_size)
    to_p, from_p = product_filter_iso([fp, fq], fpq)
    prod = product_order(fp.carrier.poset, fq.carrier.poset)
    nq = fq.carrier.n
    image = []
    for i in range(fpq.carrier.n):
        a, b = from_p(i)
        image.append(a * nq + b)
        rep.record("round trip", to_p((a, b)) == i, fpq.carrier.labels[i])
    rep.record("bijective", sorted(image) == list(range(prod.n)))
    if rep.passed:
        src = fpq.carrier.poset
        rep.record("order isomorphism", all(
            src.leq(i, j) == prod.leq(image[i], image[j])
            for i in range(src.n) for j in range(src.n)))
    for a, b in itertools.product(range(fp.carrier.n), range(nq)):
        rep.record("product filters are filters",
                   is_filter(PQ, fpq.filters[to_p((a, b))]), (a, b))
    rep.info["size"] = PQ.n
    return rep


def lift_algebra_to_f(alg: OrderedAlgebra, fc: FilterCompletion | None = None) -> OrderedAlgebra:
    """Interpret every symbol on F(A) by its filter extension."""
    A = alg.carrier
    if not isinstance(A, FiniteLattice):
        raise TypeError("filter lifting needs a lattice carrier")
    fc = fc or filter_completion(A)
    ops = {name: extend_operation_f(t, [fc] * t.ndim, fc) for name, t in alg.ops.items()}
    return OrderedAlgebra(fc.carrier, ops)


def check_filter_inequation_transfer(alg: OrderedAlgebra, ineq: Inequation,
                                     fc: FilterCompletion | None = None,
                                     lifted: OrderedAlgebra | None = None) -> Report:
    rep = Report(f"filter transfer {ineq}")
    w = inequation_witness(alg, ineq)
    if w is not None:
        rep.applicable = False
        rep.info["status"] = "not applicable"
        rep.info["base witness"] = w
        return rep
    lifted = lifted or lift_algebra_to_f(alg.restrict(ineq.symbols()), fc)
    wf = inequation_witness(lifted, ineq)
    rep.record("holds in F(A)", wf is None, wf)
    return rep


def check_operator_preservation(table: np.ndarray, sources: Sequence[FilterCompletion],
                                target: FilterCompletion) -> Report:
    """An operator's filter extension is again an operator."""
    bad = operator_violation([s.base for s in sources], target.base, table)
    if bad is not None:
        raise ValueError(f"input is not an operator: {bad}")
    rep = Report("operator preservation")
    ext = extend_operation_f(table, sources, target)
    w = operator_violation([s.carrier for s in sources], target.carrier, ext)
    rep.record("f^F is an operator", w is None, w)
    return rep


def co_scott_violation(ext: np.ndarray, sources: Sequence[FilterCompletion],
                       target: FilterCompletion, exhaustive_limit: int = EXHAUSTIVE_LIMIT):
    """Check f^F preserves co-directed meets in each coordinate (others
    fixed).  Returns ``(coordinate, args, subset)`` or None."""
    C = target.carrier
    for i, src in enumerate(sources):
        P = src.carrier.poset
        if P.n > exhaustive_limit:
            continue
        fams = codirected_subsets(P, limit=None)
        moved = np.moveaxis(ext, i, 0)
        for rest in itertools.product(*(range(d) for d in moved.shape[1:])):
            col = moved[(slice(None),) + rest]
            for s in fams:
                lo = src.carrier.meet_all(bits(s))
                if int(col[lo]) != C.meet_all(int(col[t]) for t in bits(s)):
                    return (i, rest, P.fmt(s))
    return None
