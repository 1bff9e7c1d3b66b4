"""DCPO and suplattice presentations and their free completions by C-ideals.

A presentation is a preorder together with covers ``x ◁ U``.  Covers are
either listed explicitly or given by a membership oracle; an oracle must
be declared monotone in ``U`` before closure will use it, because the
closure only ever asks about sets of the form ``↓m``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .lattice import (
    FiniteLattice, Inequation, OrderedAlgebra, inequation_witness,
    monotonicity_violation,
)
from .order import (
    DEFAULT_MAX_SIZE, OrderError, Poset, Preorder, bits, check_size, directed_subsets,
    down_set, full_mask, is_directed, mask_of, popcount,
)
from .report import Report

# subset scans used as independent oracles stop here
SCAN_LIMIT = 16

KINDS = ("dcpo", "suplattice")


@dataclass(eq=False)
class Presentation:
    base: Preorder
    kind: str = "dcpo"
    covers: tuple[tuple[int, int], ...] = ()
    oracle: Callable[[int, int], bool] | None = None
    oracle_monotone: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown presentation kind {self.kind!r}")
        if self.oracle is not None and self.covers:
            raise ValueError("give either listed covers or an oracle, not both")
        n = self.base.n
        covers = []
        for x, U in self.covers:
            if not 0 <= x < n or U >> n:
                raise IndexError(f"cover ({x}, {U:b}) out of range")
            if self.kind == "dcpo" and not is_directed(self.base, U):
                raise ValueError(
                    f"dcpo cover {self.base.labels[x]} ◁ {self.base.fmt(U)} "
                    "needs a nonempty directed right-hand side")
            covers.append((int(x), int(U)))
        self.covers = tuple(sorted(set(covers)))
        self._cover_set = frozenset(self.covers)
        self._cover_cache = None

    @property
    def intensional(self) -> bool:
        return self.oracle is not None

    def has_cover(self, x: int, U: int) -> bool:
        """``x ◁ U``, admitting ``x ⊑ y`` for some ``y`` in ``U`` implicitly."""
        if self.base.up[x] & U:
            return True
        if self.oracle is not None:
            if self.kind == "dcpo" and not is_directed(self.base, U):
                return False
            return bool(self.oracle(x, U))
        return (x, U) in self._cover_set

    def cover_list(self, limit: int | None = SCAN_LIMIT) -> list[tuple[int, int]]:
        """Listed covers, or for an oracle every ``(x, U)`` it accepts with
        ``U`` ranging over admissible right-hand sides (small carriers only)."""
        if self.oracle is None:
            return list(self.covers)
        if self._cover_cache is None:
            n = self.base.n
            check_size("cover_list", n, limit)
            rhs = (directed_subsets(self.base, limit=None) if self.kind == "dcpo"
                   else list(range(1 << n)))
            self._cover_cache = [(x, U) for U in rhs for x in range(n) if self.oracle(x, U)]
        return self._cover_cache

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, Presentation) and not self.intensional
                and not other.intensional and self.base == other.base
                and self.kind == other.kind and self.covers == other.covers)

    def __hash__(self):
        return hash((self.base, self.kind, self.covers))


def c_ideal_closure(pres: Presentation, X: int) -> int:
    """Smallest down-closed, cover-closed set containing ``X``."""
    base = pres.base
    cur = down_set(base, X)
    if pres.oracle is None:
        changed = True
        while changed:
            changed = False
            for x, U in pres.covers:
                if U & ~cur == 0 and not cur >> x & 1:
                    cur |= base.down[x]
                    changed = True
        return cur
    if not pres.oracle_monotone:
        raise ValueError("cover oracle must be declared monotone in U")
    everything = full_mask(base.n)
    changed = True
    while changed:
        changed = False
        for x in bits(everything & ~cur):
            # a finite directed U inside cur sits under some m in cur
            rhs = [base.down[m] & cur for m in bits(cur)]
            if pres.kind == "suplattice":
                rhs.append(0)
            if any(pres.oracle(x, U) for U in rhs):
                cur |= base.down[x]
                changed = True
    return cur


def is_c_ideal(pres: Presentation, s: int, covers=None) -> bool:
    if down_set(pres.base, s) != s:
        return False
    covers = pres.cover_list() if covers is None else covers
    return all(s >> x & 1 for x, U in covers if U & ~s == 0)


def _sort_key(m: int):
    return (popcount(m), m)


def _label(pres: Presentation, mask: int, principal: dict[int, int]) -> str:
    if mask in principal:
        return f"⟨{pres.base.labels[principal[mask]]}⟩"
    return pres.base.fmt(mask)


@dataclass(eq=False)
class CIdealFamily:
    """A family of C-ideals ordered by inclusion, with ``eta: x -> ⟨x⟩``."""

    pres: Presentation
    members: tuple[int, ...]
    eta: tuple[int, ...]
    poset: Poset

    def __post_init__(self):
        self._index = {m: i for i, m in enumerate(self.members)}

    def index_of(self, mask: int) -> int:
        return self._index[mask]

    def __len__(self):
        return len(self.members)

    def join(self, i: int, j: int) -> int:
        return self._index[c_ideal_closure(self.pres, self.members[i] | self.members[j])]

    def meet(self, i: int, j: int) -> int:
        return self._index[self.members[i] & self.members[j]]


FreeDcpo = CIdealFamily


def _family(pres: Presentation, members) -> CIdealFamily:
    members = tuple(sorted(set(members), key=_sort_key))
    index = {m: i for i, m in enumerate(members)}
    principal = {}
    eta = []
    for x in range(pres.base.n):
        m = c_ideal_closure(pres, 1 << x)
        principal.setdefault(m, x)
        eta.append(index[m])
    up = [mask_of(j for j, g in enumerate(members) if f & g == f) for f in members]
    labels = [_label(pres, m, principal) for m in members]
    return CIdealFamily(pres, members, tuple(eta), Poset(labels, up))


def c_ideals_by_subset_scan(pres: Presentation, limit: int = SCAN_LIMIT) -> list[int]:
    """Every subset that is down-closed and closed under covers."""
    check_size("c_ideals_by_subset_scan", pres.base.n, limit)
    covers = pres.cover_list(limit=limit)
    return sorted((s for s in range(1 << pres.base.n) if is_c_ideal(pres, s, covers)),
                  key=_sort_key)


def all_c_ideals(pres: Presentation, max_size: int | None = DEFAULT_MAX_SIZE,
                 verify: bool = True) -> CIdealFamily:
    """The complete lattice of all C-ideals.

    Generated as the closure of ``{⟨x⟩} ∪ {⟨∅⟩}`` under ``I ∨ J = ⟨I ∪ J⟩``.
    With ``verify`` and a carrier of at most 16 elements the result is
    compared bit-for-bit with a scan over all subsets.
    """
    check_size("all_c_ideals", pres.base.n, max_size)
    seen = {c_ideal_closure(pres, 0)}
    seen.update(c_ideal_closure(pres, 1 << x) for x in range(pres.base.n))
    frontier = list(seen)
    while frontier:
        new = []
        current = list(seen)
        for a in frontier:
            for b in current:
                c = c_ideal_closure(pres, a | b)
                if c not in seen:
                    seen.add(c)
                    new.append(c)
        frontier = new
    if verify and pres.base.n <= SCAN_LIMIT:
        scanned = set(c_ideals_by_subset_scan(pres))
        if scanned != seen:
            raise AssertionError(
                f"C-ideal generation disagrees with subset scan: "
                f"{sorted(seen ^ scanned)}")
    return _family(pres, seen)


def directed_families(fam: list[int], exhaustive_limit: int = 12):
    """Subfamilies of ``fam`` directed under inclusion.

    Up to ``exhaustive_limit`` members every subfamily is tested, and each
    directed one is checked to own a largest member.  Above that only the
    families ``{I, J, K}`` with ``K`` an upper bound of ``I, J`` are produced.
    """
    n = len(fam)
    if n <= exhaustive_limit:
        for sel in range(1, 1 << n):
            S = [fam[i] for i in bits(sel)]
            if all(any((a | b) & ~c == 0 for c in S) for a in S for b in S):
                top = [c for c in S if all(s & ~c == 0 for s in S)]
                if not top:
                    raise AssertionError("finite directed family without a maximum")
                yield S
        return
    for a, b in itertools.combinations(fam, 2):
        for c in fam:
            if (a | b) & ~c == 0:
                yield [a, b, c]


def free_dcpo(pres: Presentation, exhaustive_limit: int = 12) -> CIdealFamily:
    """Least family of C-ideals holding every ``⟨x⟩`` and closed under
    directed joins, computed as a fixpoint.  On a finite carrier it must
    come out as exactly the principal C-ideals, which is asserted."""
    if pres.kind != "dcpo":
        raise ValueError("free_dcpo needs a dcpo presentation")
    principals = {c_ideal_closure(pres, 1 << x) for x in range(pres.base.n)}
    fam = set(principals)
    changed = True
    while changed:
        changed = False
        for S in directed_families(sorted(fam), exhaustive_limit):
            j = c_ideal_closure(pres, mask_of_union(S))
            if j not in fam:
                fam.add(j)
                changed = True
                break
    if fam != principals:
        raise AssertionError("free dcpo is larger than the principal C-ideals")
    return _family(pres, fam)


def mask_of_union(masks) -> int:
    out = 0
    for m in masks:
        out |= m
    return out


# -- maps out of presentations ---------------------------------------------

def cover_preservation_witness(pres: Presentation, f: Sequence[int], D: FiniteLattice):
    """First cover ``(x, U)`` with ``f(x) > ⋁f[U]``, or None.

    Raises OrderError if ``f`` is not order-preserving."""
    base = pres.base
    for i in range(base.n):
        for j in bits(base.up[i]):
            if not D.leq(f[i], f[j]):
                raise OrderError(f"map is not order-preserving at {base.labels[i]} <= {base.labels[j]}")
    for x, U in pres.cover_list():
        if not D.leq(f[x], D.join_all(f[y] for y in bits(U))):
            return (x, U)
    return None


def is_cover_preserving(pres: Presentation, f: Sequence[int], D: FiniteLattice) -> bool:
    return cover_preservation_witness(pres, f, D) is None


def free_carrier(pres: Presentation) -> CIdealFamily:
    return free_dcpo(pres) if pres.kind == "dcpo" else all_c_ideals(pres)


def _extensions(fam: CIdealFamily, D: FiniteLattice, fixed: dict[int, int],
                preserve_joins: bool, bottom: int | None, stop: int = 2):
    """Enumerate maps fam -> D extending ``fixed`` that are monotone (and,
    with ``preserve_joins``, preserve binary joins and the least element)."""
    n = len(fam)
    P = fam.poset
    order = sorted(range(n), key=lambda i: _sort_key(fam.members[i]))
    joins = None
    if preserve_joins:
        joins = [[fam.join(i, j) for j in range(n)] for i in range(n)]
    g = [-1] * n
    found = []

    def consistent(k: int, d: int) -> bool:
        for j in range(n):
            gj = g[j]
            if gj < 0 or j == k:
                continue
            if P.leq(j, k) and not D.leq(gj, d):
                return False
            if P.leq(k, j) and not D.leq(d, gj):
                return False
        if joins is not None:
            for i in range(n):
                if g[i] < 0 and i != k:
                    continue
                for j in range(n):
                    if g[j] < 0 and j != k:
                        continue
                    if k not in (i, j, joins[i][j]):
                        continue
                    vi = d if i == k else g[i]
                    vj = d if j == k else g[j]
                    jk = joins[i][j]
                    vk = d if jk == k else g[jk]
                    if vk >= 0 and vk != int(D.join[vi, vj]):
                        return False
        return True

    def go(pos: int):
        if len(found) >= stop:
            return
        if pos == n:
            found.append(tuple(g))
            return
        k = order[pos]
        if k in fixed:
            choices = [fixed[k]]
        elif preserve_joins and bottom == k:
            choices = [D.bottom]
        else:
            choices = range(D.n)
        for d in choices:
            if consistent(k, d):
                g[k] = d
                go(pos + 1)
                g[k] = -1

    go(0)
    return found


def universal_property_oracle(pres: Presentation, D: FiniteLattice,
                              max_size: int = 8, max_target: int = 8) -> Report:
    """Exhaustively test the free-completion universal property against D.

    For every cover-preserving monotone ``f: P -> D`` the map
    ``f̄(I) = ⋁ f[I]`` must be monotone (for suplattice presentations: a
    join homomorphism) with ``f̄ ∘ η = f``, and be the only such map.
    """
    check_size("universal_property_oracle (presentation)", pres.base.n, max_size)
    check_size("universal_property_oracle (target)", D.n, max_target)
    from .order import monotone_maps

    rep = Report(f"universal property vs |D|={D.n}")
    fam = free_carrier(pres)
    sup = pres.kind == "suplattice"
    bottom = fam.index_of(c_ideal_closure(pres, 0)) if sup else None
    total = preserving = unique = 0
    for f in monotone_maps(pres.base, D.poset):
        total += 1
        if cover_preservation_witness(pres, f, D) is not None:
            continue
        preserving += 1
        ext = [D.join_all(f[x] for x in bits(I)) for I in fam.members]
        P = fam.poset
        rep.record("extension monotone", all(
            D.leq(ext[i], ext[j]) for i in range(P.n) for j in bits(P.up[i])), f)
        rep.record("extension restricts to f",
                   all(ext[fam.eta[x]] == f[x] for x in range(pres.base.n)), f)
        if sup:
            rep.record("extension preserves joins", ext[bottom] == D.bottom and all(
                ext[fam.join(i, j)] == int(D.join[ext[i], ext[j]])
                for i in range(P.n) for j in range(P.n)), f)
        fixed = {fam.eta[x]: f[x] for x in range(pres.base.n)}
        cands = _extensions(fam, D, fixed, sup, bottom)
        ok = len(cands) == 1 and list(cands[0]) == ext
        unique += ok
        rep.record("extension unique", ok, (f, cands))
    rep.info.update(maps=total, cover_preserving=preserving, unique=unique,
                    carrier=len(fam))
    return rep


# -- operations -------------------------------------------------------------

def cover_stability_witness(table: np.ndarray, sources: Sequence[Presentation],
                            target: Presentation):
    """First ``(i, args, U, V)`` where ``f(args) ◁' V`` fails for a cover
    ``args[i] ◁ U`` and ``V = {f(.., y, ..) | y ∈ U}``; None if stable."""
    table = np.asarray(table)
    bad = monotonicity_violation([s.base for s in sources], target.base, table)
    if bad is not None:
        raise OrderError(f"operation is not order-preserving: {bad}")
    for i, src in enumerate(sources):
        by_x: dict[int, list[int]] = {}
        for x, U in src.cover_list():
            by_x.setdefault(x, []).append(U)
        for args in itertools.product(*(range(s.base.n) for s in sources)):
            fx = int(table[args])
            for U in by_x.get(args[i], ()):
                V = mask_of(int(table[args[:i] + (y,) + args[i + 1:]]) for y in bits(U))
                if not target.has_cover(fx, V):
                    return (i, args, U, V)
    return None


def is_cover_stable(table, sources, target) -> bool:
    return cover_stability_witness(table, sources, target) is None


def lift_operation(table: np.ndarray, sources: Sequence[CIdealFamily],
                   target: CIdealFamily, check_stable: bool = True) -> np.ndarray:
    """f̄(X1..Xn) = ⟨{ f(x1..xn) | xi ∈ Xi }⟩ on free carriers."""
    table = np.asarray(table, dtype=np.int64)
    if check_stable:
        w = cover_stability_witness(table, [s.pres for s in sources], target.pres)
        if w is not None:
            raise ValueError(f"operation is not cover-stable: {w}")
    out = np.zeros(tuple(len(s) for s in sources), dtype=np.int64)
    for idx in itertools.product(*(range(len(s)) for s in sources)):
        pools = [list(bits(s.members[i])) for s, i in zip(sources, idx)]
        img = mask_of(int(table[xs]) for xs in itertools.product(*pools))
        J = c_ideal_closure(target.pres, img)
        try:
            out[idx] = target.index_of(J)
        except KeyError:
            raise AssertionError("lifted value is not in the target carrier") from None
    # f̄(⟨x1⟩..⟨xn⟩) = ⟨f(x1..xn)⟩
    for xs in itertools.product(*(range(s.pres.base.n) for s in sources)):
        at = tuple(s.eta[x] for s, x in zip(sources, xs))
        if int(out[at]) != target.eta[int(table[xs])]:
            raise AssertionError(f"lift disagrees with f on generators at {xs}")
    return out


def check_inequation_lifting(pres: Presentation, alg: OrderedAlgebra,
                             ineq: Inequation) -> Report:
    """``P ⊨ s ≼ t`` implies the same inequation on the free dcpo with
    every operation lifted.  ``alg`` must live on ``pres.base``."""
    if alg.carrier != pres.base:
        raise ValueError("algebra carrier differs from the presentation base")
    rep = Report(f"inequation lifting {ineq}")
    for name, table in alg.ops.items():
        w = cover_stability_witness(table, [pres] * table.ndim, pres)
        if w is not None:
            raise ValueError(f"operation {name!r} is not cover-stable: {w}")
    w = inequation_witness(alg, ineq)
    if w is not None:
        rep.applicable = False
        rep.info["status"] = "not applicable"
        return rep
    free = free_dcpo(pres)
    ops = {name: lift_operation(t, [free] * t.ndim, free, check_stable=False)
           for name, t in alg.ops.items()}
    lifted = OrderedAlgebra(free.poset, ops)
    wl = inequation_witness(lifted, ineq)
    rep.record("holds on free dcpo", wl is None, wl)
    return rep
