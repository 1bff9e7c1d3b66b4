"""Finite bounded lattices, filters and ideals, ordered algebras and terms."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np

from .order import (
    DEFAULT_MAX_SIZE, OrderError, Poset, Preorder, as_poset, bits, check_size,
    full_mask, infimum, is_up_closed, mask_of, supremum, up_set, down_set,
)

LATTICE_SYMBOLS = {"join": 2, "meet": 2, "bot": 0, "top": 0}


class NotALattice(OrderError):
    def __init__(self, i: int, j: int, labels: Sequence[str], what: str):
        super().__init__(f"{labels[i]} and {labels[j]} have no {what}")
        self.pair = (i, j)


class FiniteLattice:
    """A finite poset together with its meet and join tables."""

    def __init__(self, poset: Poset, meet: np.ndarray, join: np.ndarray,
                 bottom: int, top: int):
        self.poset = poset
        self.meet = meet
        self.join = join
        self.bottom = bottom
        self.top = top
        self.leq_matrix = np.array(poset.matrix(), dtype=bool).reshape(poset.n, poset.n)

    @property
    def n(self) -> int:
        return self.poset.n

    def __len__(self) -> int:
        return self.poset.n

    @property
    def labels(self) -> tuple[str, ...]:
        return self.poset.labels

    @property
    def up(self):
        return self.poset.up

    @property
    def down(self):
        return self.poset.down

    def leq(self, i: int, j: int) -> bool:
        return self.poset.leq(i, j)

    def index(self, label: str) -> int:
        return self.poset.index(label)

    def fmt(self, mask: int) -> str:
        return self.poset.fmt(mask)

    def meet_all(self, items) -> int:
        out = self.top
        for i in items:
            out = int(self.meet[out, i])
        return out

    def join_all(self, items) -> int:
        out = self.bottom
        for i in items:
            out = int(self.join[out, i])
        return out

    def __eq__(self, other):
        return isinstance(other, FiniteLattice) and self.poset == other.poset

    def __hash__(self):
        return hash(self.poset)

    def __repr__(self):
        return f"FiniteLattice({self.poset!r})"


def lattice_from_poset(p: Preorder) -> FiniteLattice:
    """Compute meet/join tables by glb/lub search; raise NotALattice."""
    p = as_poset(p)
    n = p.n
    if n == 0:
        raise OrderError("a lattice needs at least one element")
    meet = np.zeros((n, n), dtype=np.int64)
    join = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i, n):
            s = (1 << i) | (1 << j)
            lo, hi = infimum(p, s), supremum(p, s)
            if lo is None:
                raise NotALattice(i, j, p.labels, "meet")
            if hi is None:
                raise NotALattice(i, j, p.labels, "join")
            meet[i, j] = meet[j, i] = lo
            join[i, j] = join[j, i] = hi
    bottom = infimum(p, full_mask(n))
    top = supremum(p, full_mask(n))
    return FiniteLattice(p, meet, join, bottom, top)


def lattice_law_violation(L: FiniteLattice):
    """First failing (law, args) among commutativity, associativity and
    absorption, or None."""
    m, j = L.meet, L.join
    r = range(L.n)
    for a in r:
        for b in r:
            if m[a, b] != m[b, a] or j[a, b] != j[b, a]:
                return ("commutativity", (a, b))
            if m[a, j[a, b]] != a or j[a, m[a, b]] != a:
                return ("absorption", (a, b))
            for c in r:
                if m[m[a, b], c] != m[a, m[b, c]] or j[j[a, b], c] != j[a, j[b, c]]:
                    return ("associativity", (a, b, c))
    if any(m[L.bottom, a] != L.bottom or j[L.top, a] != L.top for a in r):
        return ("bounds", ())
    return None


def distributivity_witness(L: FiniteLattice) -> tuple[int, int, int] | None:
    """First (x, y, z) with x∧(y∨z) != (x∧y)∨(x∧z), or None."""
    m, j = L.meet, L.join
    for x, y, z in itertools.product(range(L.n), repeat=3):
        if m[x, j[y, z]] != j[m[x, y], m[x, z]]:
            return (x, y, z)
    return None


def is_distributive(L: FiniteLattice) -> bool:
    return distributivity_witness(L) is None


# -- filters and ideals -----------------------------------------------------

def principal_filter(L: FiniteLattice, a: int) -> int:
    return L.up[a]


def principal_ideal(L: FiniteLattice, a: int) -> int:
    return L.down[a]


def generated_filter(L: FiniteLattice, s: int) -> int:
    """Up-closure of the finite meets of ``s`` (``s`` nonempty)."""
    closed = s
    while True:
        new = closed
        members = list(bits(closed))
        for a in members:
            for b in members:
                new |= 1 << int(L.meet[a, b])
        if new == closed:
            break
        closed = new
    return up_set(L.poset, closed)


def generated_ideal(L: FiniteLattice, s: int) -> int:
    closed = s
    while True:
        new = closed
        members = list(bits(closed))
        for a in members:
            for b in members:
                new |= 1 << int(L.join[a, b])
        if new == closed:
            break
        closed = new
    return down_set(L.poset, closed)


def is_filter(L: FiniteLattice, s: int) -> bool:
    if not s or not is_up_closed(L.poset, s):
        return False
    members = list(bits(s))
    return all(s >> int(L.meet[a, b]) & 1 for a in members for b in members)


def is_ideal(L: FiniteLattice, s: int) -> bool:
    if not s or down_set(L.poset, s) != s:
        return False
    members = list(bits(s))
    return all(s >> int(L.join[a, b]) & 1 for a in members for b in members)


def _join_closure(generators: list[int], combine) -> list[int]:
    """Close a family of masks under a binary ``combine``; sorted output."""
    seen = set(generators)
    frontier = list(seen)
    while frontier:
        nxt = []
        current = list(seen)
        for a in frontier:
            for b in current:
                c = combine(a | b)
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return sorted(seen, key=lambda m: (bin(m).count("1"), m))


def filters_of(L: FiniteLattice, max_size: int | None = DEFAULT_MAX_SIZE) -> list[int]:
    """All filters of ``L`` (nonempty, up-closed, meet-closed).

    Every filter of a finite lattice is generated by its own finitely many
    elements, so the family is the closure of the singly generated filters
    under filter-join; each result is re-verified with :func:`is_filter`.
    """
    check_size("filters_of", L.n, max_size)
    gens = [generated_filter(L, 1 << a) for a in range(L.n)]
    out = _join_closure(gens, lambda s: generated_filter(L, s))
    for f in out:
        if not is_filter(L, f):
            raise AssertionError(f"generated set {L.fmt(f)} is not a filter")
    return out


def ideals_of(L: FiniteLattice, max_size: int | None = DEFAULT_MAX_SIZE) -> list[int]:
    check_size("ideals_of", L.n, max_size)
    gens = [generated_ideal(L, 1 << a) for a in range(L.n)]
    out = _join_closure(gens, lambda s: generated_ideal(L, s))
    for i in out:
        if not is_ideal(L, i):
            raise AssertionError(f"generated set {L.fmt(i)} is not an ideal")
    return out


def filters_by_subset_scan(L: FiniteLattice, max_size: int = 16) -> list[int]:
    """Independent check for :func:`filters_of`: test every subset."""
    check_size("filters_by_subset_scan", L.n, max_size)
    return [s for s in range(1, 1 << L.n) if is_filter(L, s)]


def ideals_by_subset_scan(L: FiniteLattice, max_size: int = 16) -> list[int]:
    check_size("ideals_by_subset_scan", L.n, max_size)
    return [s for s in range(1, 1 << L.n) if is_ideal(L, s)]


def product_lattice(Ls: Sequence[FiniteLattice]) -> FiniteLattice:
    """Product with lexicographic (row-major) element indexing."""
    shape = [L.n for L in Ls]
    tuples = list(itertools.product(*(range(k) for k in shape)))
    index = {t: i for i, t in enumerate(tuples)}
    labels = ["(" + ",".join(L.labels[a] for L, a in zip(Ls, t)) + ")" for t in tuples]
    up = []
    for t in tuples:
        ups = [list(bits(L.up[a])) for L, a in zip(Ls, t)]
        up.append(mask_of(index[u] for u in itertools.product(*ups)))
    p = Poset(labels, up)
    meet = np.zeros((len(tuples), len(tuples)), dtype=np.int64)
    join = np.zeros_like(meet)
    for i, s in enumerate(tuples):
        for j, t in enumerate(tuples):
            meet[i, j] = index[tuple(int(L.meet[a, b]) for L, a, b in zip(Ls, s, t))]
            join[i, j] = index[tuple(int(L.join[a, b]) for L, a, b in zip(Ls, s, t))]
    bottom = index[tuple(L.bottom for L in Ls)]
    top = index[tuple(L.top for L in Ls)]
    return FiniteLattice(p, meet, join, bottom, top)


# -- operators --------------------------------------------------------------

def monotonicity_violation(sources: Sequence[Preorder], target: Preorder,
                           table: np.ndarray):
    """First (coordinate, lower args, upper args) breaking monotonicity."""
    for args in itertools.product(*(range(s.n) for s in sources)):
        for i, src in enumerate(sources):
            for b in bits(src.up[args[i]]):
                if b == args[i]:
                    continue
                other = args[:i] + (b,) + args[i + 1:]
                if not target.leq(int(table[args]), int(table[other])):
                    return (i, args, other)
    return None


def operator_violation(sources: Sequence[FiniteLattice], target: FiniteLattice,
                       table: np.ndarray):
    """First failure of join preservation in some coordinate, or None.

    Returned as ``(coordinate, a_i, b_i, args)`` where ``args`` carries the
    other coordinates (its ``i``-th entry is ``a_i``).
    """
    table = np.asarray(table)
    for i, src in enumerate(sources):
        moved = np.moveaxis(table, i, 0)
        lhs = moved[src.join]                      # f(.., a∨b, ..)
        rhs = target.join[moved[:, None], moved[None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            a, b, *rest = (int(v) for v in bad[0])
            args = tuple(rest[:i]) + (a,) + tuple(rest[i:])
            return (i, a, b, args)
    return None


def describe_operator_violation(sources: Sequence[FiniteLattice], target: FiniteLattice,
                                table: np.ndarray, w) -> str:
    """Readable form of an :func:`operator_violation` witness."""
    i, a, b, args = w
    src = sources[i]
    lab = src.labels

    def at(v):
        return "(" + ", ".join(lab[v] if k == i else sources[k].labels[x]
                               for k, x in enumerate(args)) + ")"

    j = int(src.join[a, b])
    lhs = target.labels[int(table[args[:i] + (j,) + args[i + 1:]])]
    ra = int(table[args])
    rb = int(table[args[:i] + (b,) + args[i + 1:]])
    return (f"coordinate {i + 1}: f{at(j)} = {lhs} but f{at(a)} ∨ f{at(b)} = "
            f"{target.labels[int(target.join[ra, rb])]} (with {lab[a]} ∨ {lab[b]} = {lab[j]})")


def is_operator(sources: Sequence[FiniteLattice], target: FiniteLattice,
                table: np.ndarray) -> bool:
    return operator_violation(sources, target, table) is None


def lattice_op_table(L: FiniteLattice, name: str) -> np.ndarray:
    if name == "join":
        return L.join.copy()
    if name == "meet":
        return L.meet.copy()
    if name == "bot":
        return np.array(L.bottom, dtype=np.int64)
    if name == "top":
        return np.array(L.top, dtype=np.int64)
    raise KeyError(name)


# -- ordered algebras -------------------------------------------------------

class OrderedAlgebra:
    """A carrier with order-preserving operation tables.

    ``ops`` maps a symbol name to a numpy table of shape ``(n,) * arity``.
    Construction rejects tables that are not monotone in every coordinate.
    """

    def __init__(self, carrier: Union[FiniteLattice, Preorder],
                 ops: Mapping[str, np.ndarray]):
        self.carrier = carrier
        self.ops = {}
        n = carrier.n
        for name, table in ops.items():
            table = np.asarray(table, dtype=np.int64)
            if any(d != n for d in table.shape):
                raise ValueError(f"table for {name!r} has shape {table.shape}, carrier has {n}")
            if table.size and (table.min() < 0 or table.max() >= n):
                raise ValueError(f"table for {name!r} has values outside the carrier")
            bad = monotonicity_violation([carrier] * table.ndim, carrier, table)
            if bad is not None:
                i, lo, hi = bad
                lab = carrier.labels
                raise OrderError(
                    f"operation {name!r} is not monotone in coordinate {i}: "
                    f"({','.join(lab[a] for a in lo)}) <= ({','.join(lab[a] for a in hi)}) "
                    f"but {lab[int(table[lo])]} is not <= {lab[int(table[hi])]}")
            self.ops[name] = table

    @classmethod
    def over_lattice(cls, L: FiniteLattice, extra: Mapping[str, np.ndarray] | None = None,
                     lattice_ops: Sequence[str] = ("join", "meet", "bot", "top")):
        ops = {name: lattice_op_table(L, name) for name in lattice_ops}
        ops.update(extra or {})
        return cls(L, ops)

    @property
    def signature(self) -> dict[str, int]:
        return {name: t.ndim for name, t in self.ops.items()}

    def restrict(self, names) -> "OrderedAlgebra":
        return OrderedAlgebra(self.carrier, {k: self.ops[k] for k in names})

    def __eq__(self, other):
        return (isinstance(other, OrderedAlgebra) and self.carrier == other.carrier
                and self.ops.keys() == other.ops.keys()
                and all(np.array_equal(self.ops[k], other.ops[k]) for k in self.ops))

    def __repr__(self):
        return f"OrderedAlgebra({self.carrier!r}, ops={self.signature})"


# -- terms ------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class App:
    symbol: str
    args: tuple = ()


Term = Union[Var, App]


@dataclass(frozen=True)
class Inequation:
    lhs: Term
    rhs: Term
    nvars: int
    var_names: tuple = ()

    def symbols(self) -> set[str]:
        return term_symbols(self.lhs) | term_symbols(self.rhs)

    def __str__(self):
        names = self.var_names or tuple(f"x{i}" for i in range(self.nvars))
        return f"(leq {format_term(self.lhs, names)} {format_term(self.rhs, names)})"


def term_symbols(t: Term) -> set[str]:
    if isinstance(t, Var):
        return set()
    out = {t.symbol}
    for a in t.args:
        out |= term_symbols(a)
    return out


def term_depth(t: Term) -> int:
    if isinstance(t, Var) or not t.args:
        return 0
    return 1 + max(term_depth(a) for a in t.args)


def format_term(t: Term, names: Sequence[str]) -> str:
    if isinstance(t, Var):
        return names[t.index]
    if not t.args:
        return t.symbol
    return "(" + " ".join([t.symbol] + [format_term(a, names) for a in t.args]) + ")"


class TermSyntaxError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(\(|\)|[^\s()]+)")


def _tokens(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise TermSyntaxError(f"unexpected input at offset {pos}")
        out.append(m.group(1))
        pos = m.end()
    return out


def _read(tokens: list[str], pos: int):
    if pos >= len(tokens):
        raise TermSyntaxError("unexpected end of input")
    tok = tokens[pos]
    if tok == ")":
        raise TermSyntaxError("unexpected ')'")
    if tok != "(":
        return tok, pos + 1
    items = []
    pos += 1
    while pos < len(tokens) and tokens[pos] != ")":
        item, pos = _read(tokens, pos)
        items.append(item)
    if pos >= len(tokens):
        raise TermSyntaxError("missing ')'")
    if not items or isinstance(items[0], list):
        raise TermSyntaxError("application needs a symbol name")
    return items, pos + 1


def _build(sexp, signature: Mapping[str, int], var_names: list[str]) -> Term:
    if isinstance(sexp, str):
        if signature.get(sexp) == 0:
            return App(sexp)
        if sexp in signature:
            raise TermSyntaxError(f"symbol {sexp!r} used without arguments")
        if sexp not in var_names:
            var_names.append(sexp)
        return Var(var_names.index(sexp))
    head, args = sexp[0], sexp[1:]
    if head not in signature:
        raise TermSyntaxError(f"unknown symbol {head!r}")
    if signature[head] != len(args):
        raise TermSyntaxError(
            f"arity mismatch: {head!r} takes {signature[head]}, got {len(args)}")
    return App(head, tuple(_build(a, signature, var_names) for a in args))


def parse_term(text: str, signature: Mapping[str, int],
               var_names: list[str] | None = None) -> Term:
    names = var_names if var_names is not None else []
    tokens = _tokens(text)
    sexp, pos = _read(tokens, 0)
    if pos != len(tokens):
        raise TermSyntaxError("trailing input after term")
    return _build(sexp, {**LATTICE_SYMBOLS, **signature}, names)


def parse_inequation(text: str, signature: Mapping[str, int] | None = None) -> Inequation:
    """Parse ``(leq s t)``; variables are numbered by first appearance."""
    sig = {**LATTICE_SYMBOLS, **(signature or {})}
    tokens = _tokens(text)
    sexp, pos = _read(tokens, 0)
    if pos != len(tokens):
        raise TermSyntaxError("trailing input after inequation")
    if not isinstance(sexp, list) or sexp[0] != "leq" or len(sexp) != 3:
        raise TermSyntaxError("inequation must have the form (leq s t)")
    names: list[str] = []
    lhs = _build(sexp[1], sig, names)
    rhs = _build(sexp[2], sig, names)
    return Inequation(lhs, rhs, len(names), tuple(names))


def eval_term(t: Term, alg: OrderedAlgebra, assignment: Sequence[int]) -> int:
    if isinstance(t, Var):
        return int(assignment[t.index])
    table = alg.ops.get(t.symbol)
    if table is None:
        raise KeyError(f"algebra has no operation {t.symbol!r}")
    if table.ndim != len(t.args):
        raise ValueError(f"arity mismatch for {t.symbol!r}")
    return int(table[tuple(eval_term(a, alg, assignment) for a in t.args)])


def assignment_grid(n: int, nvars: int) -> list[np.ndarray]:
    """Per-variable value vectors enumerating all ``n**nvars`` assignments
    in lexicographic order."""
    if nvars == 0:
        return []
    grids = np.meshgrid(*([np.arange(n)] * nvars), indexing="ij")
    return [g.ravel() for g in grids]


def term_values(t: Term, alg: OrderedAlgebra, nvars: int, _grid=None) -> np.ndarray:
    """Value of ``t`` under every assignment, as a vector."""
    grid = _grid if _grid is not None else assignment_grid(alg.carrier.n, nvars)
    size = alg.carrier.n ** nvars

    def go(u: Term) -> np.ndarray:
        if isinstance(u, Var):
            return grid[u.index]
        table = alg.ops[u.symbol]
        if not u.args:
            return np.full(size, int(table), dtype=np.int64)
        return table[tuple(go(a) for a in u.args)]

    return go(t)


def leq_vector(carrier, lhs: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    if isinstance(carrier, FiniteLattice):
        m = carrier.leq_matrix
    else:
        m = np.array(carrier.matrix(), dtype=bool).reshape(carrier.n, carrier.n)
    return m[lhs, rhs]


def inequation_witness(alg: OrderedAlgebra, ineq: Inequation) -> tuple[int, ...] | None:
    """First assignment (lexicographic) with s > t, or None if it holds."""
    missing = ineq.symbols() - alg.ops.keys()
    if missing:
        raise KeyError(f"algebra lacks symbols {sorted(missing)}")
    n = alg.carrier.n
    grid = assignment_grid(n, ineq.nvars)
    s = term_values(ineq.lhs, alg, ineq.nvars, grid)
    t = term_values(ineq.rhs, alg, ineq.nvars, grid)
    ok = leq_vector(alg.carrier, s, t)
    if ok.all():
        return None
    k = int(np.argmin(ok))
    return tuple(int(g[k]) for g in grid)


def satisfies_inequation(alg: OrderedAlgebra, ineq: Inequation) -> bool:
    return inequation_witness(alg, ineq) is None
