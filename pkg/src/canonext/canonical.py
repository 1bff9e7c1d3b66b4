"""Canonical extensions of finite lattices through the Δ(A) presentation.

Δ(A) is a dcpo presentation on the filter completion F(A): ``x ◁ U`` holds
when ``U`` is nonempty and directed and every ideal of A that reaches
below each member of ``U`` also reaches below ``x``.  The covers are never
stored; they exist only as the oracle :meth:`DeltaPresentation.covers`.
The canonical extension is the free dcpo over Δ(A).
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .completions import (
    FilterCompletion, IdealCompletion, extend_operation_f, filter_completion,
    ideal_completion, lift_algebra_to_f,
)
from .lattice import (
    App, FiniteLattice, Inequation, OrderedAlgebra, Var, assignment_grid,
    describe_operator_violation,
    filters_of, ideals_of, inequation_witness, lattice_from_poset,
    monotonicity_violation, operator_violation,
)
from .order import (
    DEFAULT_MAX_SIZE, MonotoneMap, OrderError, bits, check_size, down_set,
    is_directed, mask_of,
)
from .presentations import (
    CIdealFamily, Presentation, all_c_ideals,
    cover_stability_witness, free_dcpo, lift_operation,
)
from .report import Report


class DeltaPresentation:
    """Δ(A) over ``fc.carrier`` with the ideal-quantified cover oracle.

    By default only principal ideals ``↓c`` are quantified over; that they
    are all the ideals of A is asserted on construction.  ``all_ideals``
    switches to the family computed by :func:`ideals_of`.
    """

    def __init__(self, A: FiniteLattice, fc: FilterCompletion | None = None,
                 all_ideals: bool = False):
        self.base = A
        self.fc = fc or filter_completion(A)
        principal = [A.down[c] for c in range(A.n)]
        enumerated = ideals_of(A)
        if set(principal) != set(enumerated):
            raise AssertionError("finite lattice with a non-principal ideal")
        self.ideals = tuple(enumerated if all_ideals else principal)
        C = self.fc.carrier
        up_a = self.fc.embed.image
        # above[x] = { a in A | x <= ↑a }
        self.above = tuple(mask_of(a for a in range(A.n) if C.leq(x, up_a[a]))
                           for x in range(C.n))
        self.pres = Presentation(C.poset, "dcpo", oracle=self.covers, oracle_monotone=True)

    def ideal_witness(self, x: int, U: int) -> int | None:
        """An ideal reaching every member of ``U`` but not ``x``, if any."""
        if not is_directed(self.fc.carrier.poset, U):
            raise ValueError("Δ(A) covers need a nonempty directed U")
        above = self.above
        members = list(bits(U))
        for I in self.ideals:
            if all(above[y] & I for y in members) and not above[x] & I:
                return I
        return None

    def covers(self, x: int, U: int) -> bool:
        return self.ideal_witness(x, U) is None


def cover_holds_delta(dp: DeltaPresentation, x: int, U: int) -> bool:
    return dp.covers(x, U)


def audit_delta_monotonicity(dp: DeltaPresentation, trials: int = 200,
                             seed: int = 0) -> Report:
    """Randomised audit that ``x ◁ U`` and ``U ⊆ U'`` (both directed) give
    ``x ◁ U'``; closure relies on this."""
    rng = random.Random(seed)
    P = dp.fc.carrier.poset
    rep = Report("Δ(A) cover monotonicity")
    n = P.n
    for _ in range(trials):
        m = rng.randrange(n)
        U = (1 << m) | (rng.getrandbits(n) & P.down[m])
        hi = rng.choice(list(bits(P.up[m])))
        V = U | (1 << hi) | (rng.getrandbits(n) & P.down[hi])
        x = rng.randrange(n)
        if dp.covers(x, U):
            rep.record("monotone in U", dp.covers(x, V), (x, U, V))
    rep.record("monotone in U", True)
    rep.info["trials"] = trials
    return rep


@dataclass(eq=False)
class CanonicalExtension:
    base: FiniteLattice
    fc: FilterCompletion
    delta: DeltaPresentation
    free: CIdealFamily
    all_ideals: CIdealFamily
    carrier: FiniteLattice
    e: MonotoneMap
    eta_f: MonotoneMap
    lemmas: Report


def canonical_extension(A: FiniteLattice, filter_order: Sequence[int] | None = None,
                        max_size: int | None = DEFAULT_MAX_SIZE,
                        check: bool = True) -> CanonicalExtension:
    """Build A^σ as the free dcpo over Δ(A).

    The family of all C_A-ideals is generated too; its directed members
    must coincide with the free-dcpo fixpoint (a mismatch is an error).
    With ``check`` the structural lemmas are verified and any failure
    raises AssertionError.
    """
    check_size("canonical_extension", A.n, max_size)
    fc = filter_completion(A, order=filter_order, max_size=max_size)
    dp = DeltaPresentation(A, fc)
    audit_delta_monotonicity(dp).require()
    free = free_dcpo(dp.pres)
    full = all_c_ideals(dp.pres, max_size=max_size)
    P = fc.carrier.poset
    directed = {m for m in full.members if is_directed(P, m)}
    if directed != set(free.members):
        raise AssertionError("directed C_A-ideals differ from the free dcpo carrier")
    carrier = lattice_from_poset(free.poset)
    eta_f = MonotoneMap(P, carrier.poset, free.eta)
    e = MonotoneMap(A.poset, carrier.poset, [free.eta[fc.embed(a)] for a in range(A.n)])
    ce = CanonicalExtension(A, fc, dp, free, full, carrier, e, eta_f, Report("Δ(A) lemmas"))
    ce.lemmas = check_delta_lemmas(ce)
    if check:
        ce.lemmas.require()
    return ce


def check_delta_lemmas(ce: CanonicalExtension, all_meets_limit: int = 12) -> Report:
    rep = Report("Δ(A) lemmas")
    A, fc, C = ce.base, ce.fc, ce.carrier
    F = fc.carrier
    members = ce.free.members
    rep.info["carrier"] = C.n
    rep.info["all C_A-ideals"] = len(ce.all_ideals)
    rep.info["directed C_A-ideals"] = len(members)

    for x in range(F.n):
        rep.record("⟨x⟩ = ↓x", members[ce.eta_f(x)] == F.down[x], F.labels[x])

    for u, m in enumerate(members):
        is_lattice_ideal = bool(m) and down_set(F.poset, m) == m and all(
            m >> int(F.join[x, y]) & 1 for x in bits(m) for y in bits(m))
        rep.record("members are lattice ideals of F(A)", is_lattice_ideal, C.labels[u])

    eta = ce.eta_f.image
    for x in range(F.n):
        for y in range(F.n):
            rep.record("η preserves ∨", eta[int(F.join[x, y])] == int(C.join[eta[x], eta[y]]), (x, y))
            rep.record("η preserves ∧", eta[int(F.meet[x, y])] == int(C.meet[eta[x], eta[y]]), (x, y))
    if F.n <= all_meets_limit:
        for S in range(1 << F.n):
            rep.record("η preserves all meets",
                       eta[F.meet_all(bits(S))] == C.meet_all(eta[x] for x in bits(S)), S)
    else:
        rep.record("η preserves all meets", eta[F.top] == C.top, "empty meet")

    # directed T ⊆ A: the join of ⟨↑b⟩ is their plain union
    e = ce.e.image
    for T in range(1, 1 << A.n):
        if not is_directed(A.poset, T):
            continue
        union = 0
        for b in bits(T):
            union |= members[e[b]]
        joined = members[C.join_all(e[b] for b in bits(T))]
        rep.record("directed joins are unions", joined == union, A.fmt(T))

    rep.record("e is a lattice embedding", ce.e.is_order_embedding() and all(
        e[int(A.join[a, b])] == int(C.join[e[a], e[b]]) and
        e[int(A.meet[a, b])] == int(C.meet[e[a], e[b]])
        for a in range(A.n) for b in range(A.n)))
    rep.record("e = η ∘ ↑", all(e[a] == eta[fc.embed(a)] for a in range(A.n)))
    return rep


def verify_density_compactness(A: FiniteLattice, C: FiniteLattice,
                               e: Sequence[int]) -> Report:
    """Exhaustive density and compactness check of a completion ``e: A -> C``.

    Works for any completion, which is what makes negative controls
    possible.  Witness pairs ``(F, I)`` are recorded for every density
    instance.
    """
    rep = Report("density and compactness")
    e = list(e)
    filters, ideals = filters_of(A), ideals_of(A)
    closed = {F: C.meet_all(e[a] for a in bits(F)) for F in filters}
    opened = {I: C.join_all(e[a] for a in bits(I)) for I in ideals}
    density = {}
    rep.record("density", True)
    for u in range(C.n):
        for v in range(C.n):
            if C.leq(u, v):
                continue
            found = None
            for F in filters:
                k = closed[F]
                if not (C.leq(k, u) and not C.leq(k, v)):
                    continue
                for I in ideals:
                    o = opened[I]
                    if C.leq(v, o) and not C.leq(u, o):
                        found = (A.fmt(F), A.fmt(I))
                        break
                if found:
                    break
            if found is None:
                rep.record("density", False, (C.labels[u], C.labels[v]))
            else:
                density[(C.labels[u], C.labels[v])] = found
    rep.record("compactness", True)
    for F in filters:
        for I in ideals:
            if C.leq(closed[F], opened[I]):
                ok = any(A.leq(b, a) for b in bits(F) for a in bits(I))
                rep.record("compactness", ok, (A.fmt(F), A.fmt(I)))
    rep.info["density witnesses"] = density
    rep.info["pairs"] = len(filters) * len(ideals)
    return rep


def closed_elements(ce: CanonicalExtension) -> list[int]:
    """``{⋀ e[F] | F a filter}``, asserted equal to the image of η."""
    C, e = ce.carrier, ce.e.image
    closed = sorted({C.meet_all(e[a] for a in bits(F)) for F in filters_of(ce.base)})
    if closed != sorted(set(ce.eta_f.image)):
        raise AssertionError("closed elements differ from the image of F(A)")
    return closed


def _require_monotone(table, sources, target):
    bad = monotonicity_violation(sources, target, table)
    if bad is not None:
        raise OrderError(f"map is not monotone: {bad}")


def sigma_extension_direct(table: np.ndarray, sources: Sequence[CanonicalExtension],
                           target: CanonicalExtension) -> np.ndarray:
    """f^σ from its two-stage definition: meets of ``e(f(a))`` over closed
    tuples, then joins over the closed tuples below an arbitrary one."""
    table = np.asarray(table, dtype=np.int64)
    _require_monotone(table, [s.base for s in sources], target.base)
    C = target.carrier
    e_b = target.e.image
    ks = [closed_elements(s) for s in sources]
    on_closed = {}
    for xs in itertools.product(*ks):
        above = [[a for a in range(s.base.n) if s.carrier.leq(x, s.e(a))]
                 for s, x in zip(sources, xs)]
        on_closed[xs] = C.meet_all(e_b[int(table[args])] for args in itertools.product(*above))
    out = np.zeros(tuple(s.carrier.n for s in sources), dtype=np.int64)
    for us in itertools.product(*(range(s.carrier.n) for s in sources)):
        below = [[x for x in k if s.carrier.leq(x, u)] for s, k, u in zip(sources, ks, us)]
        out[us] = C.join_all(on_closed[xs] for xs in itertools.product(*below))
    return out


def sigma_extension_via_lift(table: np.ndarray, sources: Sequence[CanonicalExtension],
                             target: CanonicalExtension, crosscheck: bool = True) -> np.ndarray:
    """f^σ as the lift of f^F over the Δ presentations.

    Requires ``f`` to be an operator.  f^F is checked for cover-stability
    before lifting; with ``crosscheck`` the result must equal
    :func:`sigma_extension_direct` pointwise.
    """
    table = np.asarray(table, dtype=np.int64)
    bad = operator_violation([s.base for s in sources], target.base, table)
    if bad is not None:
        raise ValueError(f"not an operator: {bad}")
    f_f = extend_operation_f(table, [s.fc for s in sources], target.fc)
    w = cover_stability_witness(f_f, [s.delta.pres for s in sources], target.delta.pres)
    if w is not None:
        raise AssertionError(f"f^F is not cover-stable: {w}")
    lifted = lift_operation(f_f, [s.free for s in sources], target.free, check_stable=False)
    if crosscheck:
        direct = sigma_extension_direct(table, sources, target)
        if not np.array_equal(direct, lifted):
            at = tuple(int(v) for v in np.argwhere(direct != lifted)[0])
            raise AssertionError(f"lifted and direct σ-extensions differ at {at}")
    return lifted


class NonOperatorSymbol(ValueError):
    pass


class SigmaAlgebra:
    """An ordered algebra on a lattice together with its filter lift and
    its σ-extension built through Δ(A).  Expensive parts are built once so
    many inequations can be checked against the same algebra."""

    def __init__(self, alg: OrderedAlgebra, ce: CanonicalExtension | None = None,
                 symbols=None):
        A = alg.carrier
        if not isinstance(A, FiniteLattice):
            raise TypeError("canonicity needs a lattice carrier")
        names = sorted(symbols if symbols is not None else alg.ops)
        for name in names:
            t = alg.ops[name]
            bad = operator_violation([A] * t.ndim, A, t)
            if bad is not None:
                raise NonOperatorSymbol(f"{name!r} is not an operator, "
                                        + describe_operator_violation([A] * t.ndim, A, t, bad))
        self.alg = alg.restrict(names)
        self.ce = ce or canonical_extension(A)
        ce = self.ce
        self.filter_alg = lift_algebra_to_f(self.alg, ce.fc)
        sigma_ops = {}
        self.stability = Report("f^F cover-stable")
        for name in names:
            f_f = self.filter_alg.ops[name]
            k = f_f.ndim
            w = cover_stability_witness(f_f, [ce.delta.pres] * k, ce.delta.pres)
            self.stability.record(name, w is None, w)
            sigma_ops[name] = lift_operation(f_f, [ce.free] * k, ce.free, check_stable=False)
        self.sigma_alg = OrderedAlgebra(ce.carrier, sigma_ops)

    def crosscheck(self) -> Report:
        """Compare lifted operations with the direct σ formula and with the
        operations transported along the isomorphism ``e``."""
        rep = Report("σ cross-checks")
        ce = self.ce
        e = np.array(ce.e.image)
        for name, t in self.alg.ops.items():
            direct = sigma_extension_direct(t, [ce] * t.ndim, ce)
            rep.record(f"{name}: lift = direct", np.array_equal(direct, self.sigma_alg.ops[name]), name)
            if ce.e.is_isomorphism():
                inv = np.argsort(e)
                transported = e[t[np.ix_(*([inv] * t.ndim))]] if t.ndim else e[int(t)]
                rep.record(f"{name}: lift = e∘f∘e⁻¹",
                           np.array_equal(transported, self.sigma_alg.ops[name]), name)
        return rep

    def check(self, ineq: Inequation) -> Report:
        rep = Report(f"canonicity {ineq}")
        missing = ineq.symbols() - self.alg.ops.keys()
        if missing:
            raise NonOperatorSymbol(f"symbols {sorted(missing)} not available as operators")
        w = inequation_witness(self.alg, ineq)
        if w is not None:
            rep.applicable = False
            rep.info["status"] = "not applicable"
            rep.info["base witness"] = w
            return rep
        wf = inequation_witness(self.filter_alg, ineq)
        rep.record("holds in F(A)", wf is None, wf)
        rep.record("f^F cover-stable", self.stability.passed, self.stability.witnesses)
        ws = inequation_witness(self.sigma_alg, ineq)
        rep.record("holds in A^σ", ws is None, ws)
        rep.info["status"] = "canonical" if rep.passed else "counterexample"
        return rep


def check_canonicity(alg: OrderedAlgebra, ineq: Inequation,
                     ce: CanonicalExtension | None = None) -> Report:
    """``A ⊨ s ≼ t`` implies ``A^σ ⊨ s ≼ t`` for operator symbols.

    Runs the filter step and then the Δ lifting step, and cross-checks
    the σ operations against the direct formula and the isomorphism.
    """
    sa = SigmaAlgebra(alg, ce, symbols=ineq.symbols())
    rep = sa.check(ineq)
    cross = sa.crosscheck()
    for k, ok in cross.checks.items():
        rep.record(k, ok, cross.witnesses.get(k))
    return rep


def mu_embedding(ce: CanonicalExtension, ic: IdealCompletion | None = None) -> MonotoneMap:
    """μ: I(A) -> A^σ, ``y ↦ ⋁_{b ∈ y} ⟨↑b⟩``; asserts it preserves finite
    joins, binary meets and directed joins."""
    ic = ic or ideal_completion(ce.base)
    C, e = ce.carrier, ce.e.image
    image = [C.join_all(e[b] for b in bits(y)) for y in ic.ideals]
    mu = MonotoneMap(ic.carrier.poset, C.poset, image)
    I = ic.carrier
    if image[I.bottom] != C.bottom:
        raise AssertionError("μ does not preserve the least element")
    for y in range(I.n):
        for z in range(I.n):
            if image[int(I.join[y, z])] != int(C.join[image[y], image[z]]):
                raise AssertionError(f"μ does not preserve the join of {y}, {z}")
            if image[int(I.meet[y, z])] != int(C.meet[image[y], image[z]]):
                raise AssertionError(f"μ does not preserve the meet of {y}, {z}")
    if I.n <= 12:
        for S in range(1, 1 << I.n):
            if is_directed(I.poset, S) and \
                    image[I.join_all(bits(S))] != C.join_all(image[y] for y in bits(S)):
                raise AssertionError("μ does not preserve a directed join")
    return mu


@dataclass
class TermClass:
    """Term functions of one syntactic class, evaluated in A, F(A) and A^σ,
    with the number of distinct terms of bounded depth that produce it and
    one representative term."""
    values: tuple[np.ndarray, np.ndarray, np.ndarray]
    count: int
    term: object


def term_classes(sa: SigmaAlgebra, nvars: int = 2, depth: int = 3) -> list[TermClass]:
    """All term functions of depth at most ``depth`` over ``nvars`` variables.

    Terms are grouped by their value vectors in the three algebras jointly,
    so two terms share a class only if they agree everywhere.  ``count``
    is the exact number of syntactic terms in each class.
    """
    algs = (sa.alg, sa.filter_alg, sa.sigma_alg)
    grids = [assignment_grid(a.carrier.n, nvars) for a in algs]
    sizes = [a.carrier.n ** nvars for a in algs]
    sig = sa.alg.signature

    def key(vals):
        return b"|".join(v.tobytes() for v in vals)

    atoms: dict[bytes, TermClass] = {}

    def add(table, vals, count, term):
        k = key(vals)
        if k in table:
            table[k].count += count
        else:
            table[k] = TermClass(vals, count, term)

    for i in range(nvars):
        add(atoms, tuple(g[i] for g in grids), 1, Var(i))
    for s, a in sorted(sig.items()):
        if a == 0:
            add(atoms, tuple(np.full(m, int(alg.ops[s]), dtype=np.int64)
                             for alg, m in zip(algs, sizes)), 1, App(s))
    level = dict(atoms)
    for _ in range(depth):
        prev = list(level.values())
        nxt = {k: TermClass(c.values, c.count, c.term) for k, c in atoms.items()}
        for s, a in sorted(sig.items()):
            if a == 0:
                continue
            tables = [alg.ops[s] for alg in algs]
            for args in itertools.product(prev, repeat=a):
                vals = tuple(t[tuple(arg.values[j] for arg in args)]
                             for j, t in enumerate(tables))
                count = 1
                for arg in args:
                    count *= arg.count
                add(nxt, vals, count, App(s, tuple(arg.term for arg in args)))
        level = nxt
    return list(level.values())


def _holds_matrix(carrier, rows: np.ndarray) -> np.ndarray:
    """``out[i, j]`` iff term function ``i`` is below ``j`` everywhere."""
    leq = (carrier.leq_matrix if isinstance(carrier, FiniteLattice)
           else np.array(carrier.matrix(), dtype=bool))
    out = np.ones((rows.shape[0], rows.shape[0]), dtype=bool)
    for k in range(rows.shape[1]):
        col = rows[:, k]
        out &= leq[col[:, None], col[None, :]]
    return out


def canonicity_sweep(sa: SigmaAlgebra, nvars: int = 2, depth: int = 3) -> Report:
    """Every inequation ``s ≼ t`` with ``s``, ``t`` of depth at most
    ``depth`` over ``nvars`` variables: if it holds in A it must hold in
    F(A) and in A^σ.

    Satisfaction depends only on the term functions, so the check runs
    over pairs of classes from :func:`term_classes`; ``info`` records
    both the class pairs checked and the syntactic pairs they stand for.
    """
    classes = term_classes(sa, nvars, depth)
    rep = Report(f"canonicity sweep depth<={depth} vars<={nvars}")
    holds = [_holds_matrix(alg.carrier, np.stack([c.values[j] for c in classes]))
             for j, alg in enumerate((sa.alg, sa.filter_alg, sa.sigma_alg))]
    counts = np.array([c.count for c in classes], dtype=object)
    for name, j in (("holds in F(A)", 1), ("holds in A^σ", 2)):
        bad = np.argwhere(holds[0] & ~holds[j])
        w = None
        if len(bad):
            s, t = (classes[int(i)].term for i in bad[0])
            w = str(Inequation(s, t, nvars, ("x", "y", "z")[:nvars]))
        rep.record(name, not len(bad), w)
    true_pairs = np.argwhere(holds[0])
    rep.info["classes"] = len(classes)
    rep.info["terms"] = int(sum(counts))
    rep.info["class pairs"] = len(classes) ** 2
    rep.info["true class pairs"] = len(true_pairs)
    rep.info["syntactic pairs"] = int(sum(counts)) ** 2
    rep.info["true syntactic pairs"] = int(sum(counts[i] * counts[j] for i, j in true_pairs))
    return rep
