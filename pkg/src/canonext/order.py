"""Finite preorders and posets over index carriers.

Elements are the integers ``0..n-1``; string labels are only used at the
I/O boundary.  Subsets of a carrier are plain ``int`` bitmasks (bit ``i``
set means element ``i`` is a member), and the order itself is stored as
one bitmask per element: ``up[i]`` holds every ``j`` with ``i <= j``.
"""
from __future__ import annotations

from itertools import product as _cartesian
from typing import Iterable, Iterator, Sequence

DEFAULT_MAX_SIZE = 20


class SizeLimitError(ValueError):
    """Raised when an enumerating operation is asked to work on a carrier
    above its configured size bound."""

    def __init__(self, what: str, size: int, limit: int):
        super().__init__(f"{what}: size {size} exceeds limit {limit}")
        self.size = size
        self.limit = limit


class OrderError(ValueError):
    pass


def check_size(what: str, size: int, limit: int | None) -> None:
    if limit is not None and size > limit:
        raise SizeLimitError(what, size, limit)


# -- bitset helpers ---------------------------------------------------------

def bits(mask: int) -> Iterator[int]:
    """Yield the members of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(items: Iterable[int]) -> int:
    m = 0
    for i in items:
        m |= 1 << i
    return m


def full_mask(n: int) -> int:
    return (1 << n) - 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def subsets(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, the empty one first."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


# -- preorders --------------------------------------------------------------

class Preorder:
    """A reflexive, transitive relation on ``n`` labelled elements."""

    def __init__(self, labels: Sequence[str], up: Sequence[int]):
        labels = tuple(str(x) for x in labels)
        if len(set(labels)) != len(labels):
            raise OrderError(f"duplicate labels in {labels}")
        if len(up) != len(labels):
            raise OrderError("order rows do not match label count")
        n = len(labels)
        up = tuple(int(u) & full_mask(n) for u in up)
        for i, row in enumerate(up):
            if not row >> i & 1:
                raise OrderError(f"order is not reflexive at {labels[i]!r}")
            for j in bits(row):
                if up[j] & ~row:
                    k = next(bits(up[j] & ~row))
                    raise OrderError(
                        f"order is not transitive: {labels[i]} <= {labels[j]} <= "
                        f"{labels[k]} but not {labels[i]} <= {labels[k]}")
        self.labels = labels
        self.up = up
        down = [0] * n
        for i, row in enumerate(up):
            for j in bits(row):
                down[j] |= 1 << i
        self.down = tuple(down)
        self._index = {lab: i for i, lab in enumerate(labels)}

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown element {label!r}") from None

    def matrix(self) -> list[list[bool]]:
        return [[self.leq(i, j) for j in range(self.n)] for i in range(self.n)]

    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in bits(self.up[i])]

    def is_antisymmetric(self) -> bool:
        return all(self.up[i] & self.down[i] == 1 << i for i in range(self.n))

    def fmt(self, mask: int) -> str:
        return "{" + ",".join(self.labels[i] for i in bits(mask)) + "}"

    def __eq__(self, other):
        return (isinstance(other, Preorder) and self.labels == other.labels
                and self.up == other.up)

    def __hash__(self):
        return hash((self.labels, self.up))

    def __repr__(self):
        rel = ", ".join(f"{self.labels[i]}<={self.labels[j]}"
                        for i, j in hasse_edges(self))
        return f"{type(self).__name__}({list(self.labels)}; {rel})"


class Poset(Preorder):
    """A preorder that is also antisymmetric."""

    def __init__(self, labels: Sequence[str], up: Sequence[int]):
        super().__init__(labels, up)
        for i in range(self.n):
            other = self.up[i] & self.down[i] & ~(1 << i)
            if other:
                j = next(bits(other))
                raise OrderError(
                    f"order is not antisymmetric: {self.labels[i]} and "
                    f"{self.labels[j]} are equivalent")


def _closure_rows(pairs: Iterable[tuple[int, int]], n: int) -> list[int]:
    up = [1 << i for i in range(n)]
    for i, j in pairs:
        if not (0 <= i < n and 0 <= j < n):
            raise IndexError(f"pair ({i}, {j}) out of range for n={n}")
        up[i] |= 1 << j
    # Warshall on bit rows
    for k in range(n):
        kb = 1 << k
        row_k = up[k]
        for i in range(n):
            if up[i] & kb:
                up[i] |= row_k
    return up


def saturate_order(pairs: Iterable[tuple[int, int]], n: int,
                   labels: Sequence[str] | None = None) -> Preorder:
    """Reflexive-transitive closure of ``pairs`` as a :class:`Preorder`."""
    up = _closure_rows(pairs, n)
    labels = labels if labels is not None else [str(i) for i in range(n)]
    return Preorder(labels, up)


def poset_from_pairs(labels: Sequence[str], pairs: Iterable[tuple[int, int]]) -> Poset:
    return Poset(labels, _closure_rows(pairs, len(labels)))


def as_poset(p: Preorder) -> Poset:
    return p if isinstance(p, Poset) else Poset(p.labels, p.up)


class MonotoneMap:
    """An order-preserving map given by its image vector."""

    def __init__(self, source: Preorder, target: Preorder, image: Sequence[int]):
        image = tuple(int(v) for v in image)
        if len(image) != source.n:
            raise OrderError("image length does not match source size")
        for v in image:
            if not 0 <= v < target.n:
                raise OrderError(f"image value {v} out of range")
        for i in range(source.n):
            for j in bits(source.up[i]):
                if not target.leq(image[i], image[j]):
                    raise OrderError(
                        f"map is not monotone: {source.labels[i]} <= "
                        f"{source.labels[j]} but images "
                        f"{target.labels[image[i]]}, {target.labels[image[j]]} "
                        "are not ordered")
        self.source = source
        self.target = target
        self.image = image

    def __call__(self, i: int) -> int:
        return self.image[i]

    def __eq__(self, other):
        return (isinstance(other, MonotoneMap) and self.image == other.image
                and self.source == other.source and self.target == other.target)

    def __hash__(self):
        return hash(self.image)

    def is_order_embedding(self) -> bool:
        s = self.source
        return all(s.leq(i, j) == self.target.leq(self.image[i], self.image[j])
                   for i in range(s.n) for j in range(s.n))

    def is_bijective(self) -> bool:
        return sorted(self.image) == list(range(self.target.n))

    def is_isomorphism(self) -> bool:
        return self.is_bijective() and self.is_order_embedding()


def quotient_to_poset(p: Preorder) -> tuple[Poset, MonotoneMap]:
    """Identify equivalent elements; classes are ordered by first member."""
    cls_of = [-1] * p.n
    reps = []
    for i in range(p.n):
        if cls_of[i] >= 0:
            continue
        c = len(reps)
        reps.append(i)
        for j in bits(p.up[i] & p.down[i]):
            cls_of[j] = c
    labels = []
    for c, r in enumerate(reps):
        members = [p.labels[j] for j in bits(p.up[r] & p.down[r])]
        labels.append(members[0] if len(members) == 1 else "=".join(members))
    up = []
    for r in reps:
        up.append(mask_of(cls_of[j] for j in bits(p.up[r])))
    q = Poset(labels, up)
    return q, MonotoneMap(p, q, cls_of)


# -- subsets ----------------------------------------------------------------

def down_set(p: Preorder, s: int) -> int:
    out = 0
    for i in bits(s):
        out |= p.down[i]
    return out


def up_set(p: Preorder, s: int) -> int:
    out = 0
    for i in bits(s):
        out |= p.up[i]
    return out


def is_down_closed(p: Preorder, s: int) -> bool:
    return down_set(p, s) == s


def is_up_closed(p: Preorder, s: int) -> bool:
    return up_set(p, s) == s


def is_directed(p: Preorder, s: int) -> bool:
    """Nonempty and every pair has an upper bound inside ``s``."""
    if not s:
        return False
    members = list(bits(s))
    return all(p.up[a] & p.up[b] & s for a in members for b in members)


def is_codirected(p: Preorder, s: int) -> bool:
    if not s:
        return False
    members = list(bits(s))
    return all(p.down[a] & p.down[b] & s for a in members for b in members)


def maximum(p: Preorder, s: int) -> int | None:
    """The greatest element of ``s``, or None (first one for preorders)."""
    for i in bits(s):
        if p.down[i] & s == s:
            return i
    return None


def minimum(p: Preorder, s: int) -> int | None:
    for i in bits(s):
        if p.up[i] & s == s:
            return i
    return None


def upper_bounds(p: Preorder, s: int) -> int:
    out = full_mask(p.n)
    for i in bits(s):
        out &= p.up[i]
    return out


def lower_bounds(p: Preorder, s: int) -> int:
    out = full_mask(p.n)
    for i in bits(s):
        out &= p.down[i]
    return out


def supremum(p: Preorder, s: int) -> int | None:
    return minimum(p, upper_bounds(p, s))


def infimum(p: Preorder, s: int) -> int | None:
    return maximum(p, lower_bounds(p, s))


def directed_subsets(p: Preorder, limit: int | None = DEFAULT_MAX_SIZE) -> list[int]:
    check_size("directed_subsets", p.n, limit)
    return [s for s in range(1, 1 << p.n) if is_directed(p, s)]


def codirected_subsets(p: Preorder, limit: int | None = DEFAULT_MAX_SIZE) -> list[int]:
    check_size("codirected_subsets", p.n, limit)
    return [s for s in range(1, 1 << p.n) if is_codirected(p, s)]


# -- constructions ----------------------------------------------------------

def product_order(p: Preorder, q: Preorder) -> Preorder:
    """Componentwise order; element ``(i, j)`` has index ``i * q.n + j``."""
    labels = [f"({a},{b})" for a in p.labels for b in q.labels]
    up = []
    for i in range(p.n):
        for j in range(q.n):
            up.append(mask_of(a * q.n + b for a in bits(p.up[i]) for b in bits(q.up[j])))
    cls = Poset if isinstance(p, Poset) and isinstance(q, Poset) else Preorder
    return cls(labels, up)


def dual_order(p: Preorder) -> Preorder:
    return type(p)(p.labels, p.down)


def hasse_edges(p: Preorder) -> list[tuple[int, int]]:
    """Covering pairs ``(i, j)``: ``i < j`` with nothing strictly between."""
    edges = []
    for i in range(p.n):
        strictly_above = p.up[i] & ~p.down[i]
        for j in bits(strictly_above):
            between = strictly_above & p.down[j] & ~p.up[j]
            if not between:
                edges.append((i, j))
    return edges


def find_isomorphism(p: Preorder, q: Preorder,
                     fixed: dict[int, int] | None = None) -> list[int] | None:
    """Backtracking search for an order isomorphism ``p -> q``.

    ``fixed`` pins some images (used to search for isomorphisms over a
    common embedded base).  Candidates are pruned by up/down set sizes.
    """
    if p.n != q.n:
        return None
    n = p.n
    sig_p = [(popcount(p.up[i]), popcount(p.down[i])) for i in range(n)]
    sig_q = [(popcount(q.up[i]), popcount(q.down[i])) for i in range(n)]
    if sorted(sig_p) != sorted(sig_q):
        return None
    fixed = dict(fixed or {})
    image = [-1] * n
    used = 0
    for a, b in fixed.items():
        if sig_p[a] != sig_q[b] or used >> b & 1:
            return None
        image[a] = b
        used |= 1 << b
    for a in fixed:
        for c in fixed:
            if p.leq(a, c) != q.leq(image[a], image[c]):
                return None
    order = sorted((i for i in range(n) if image[i] < 0),
                   key=lambda i: (popcount(p.down[i]), i))
    assigned = [i for i in range(n) if image[i] >= 0]

    def extend(k: int, used: int) -> bool:
        if k == len(order):
            return True
        a = order[k]
        for b in range(n):
            if used >> b & 1 or sig_q[b] != sig_p[a]:
                continue
            if all(p.leq(a, c) == q.leq(b, image[c]) and p.leq(c, a) == q.leq(image[c], b)
                   for c in assigned):
                image[a] = b
                assigned.append(a)
                if extend(k + 1, used | 1 << b):
                    return True
                assigned.pop()
                image[a] = -1
        return False

    return image if extend(0, used) else None


def monotone_maps(p: Preorder, q: Preorder,
                  fixed: dict[int, int] | None = None) -> Iterator[tuple[int, ...]]:
    """Enumerate all monotone maps ``p -> q`` as image tuples."""
    fixed = fixed or {}
    order = list(range(p.n))
    image = [-1] * p.n

    def extend(k: int) -> Iterator[tuple[int, ...]]:
        if k == p.n:
            yield tuple(image)
            return
        a = order[k]
        choices = [fixed[a]] if a in fixed else range(q.n)
        for b in choices:
            ok = True
            for c in order[:k]:
                if p.leq(a, c) and not q.leq(b, image[c]):
                    ok = False
                    break
                if p.leq(c, a) and not q.leq(image[c], b):
                    ok = False
                    break
            if ok:
                image[a] = b
                yield from extend(k + 1)
        image[a] = -1

    yield from extend(0)


def all_functions(n: int, m: int) -> Iterator[tuple[int, ...]]:
    return _cartesian(range(m), repeat=n)
