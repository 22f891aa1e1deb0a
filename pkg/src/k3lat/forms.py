"""Finite quadratic forms and discriminant groups of even lattices.

A form is stored in Smith-normal-form coordinates: generators ``g_i`` of
orders ``d_1 | d_2 | ...`` and a symmetric matrix whose diagonal holds
``q(g_i) mod 2`` and whose off-diagonal entries hold ``b(g_i, g_j) mod 1``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import gcd, lcm, prod
from typing import Iterator, Sequence

from . import linalg
from .lattice import Lattice, LatticeError

DEFAULT_CAP = 10_000

Element = tuple[int, ...]


class CapExceeded(RuntimeError):
    """An exhaustive search would exceed its configured bound; the answer is unknown."""


def mod2(x) -> Fraction:
    return Fraction(x) % 2


def mod1(x) -> Fraction:
    return Fraction(x) % 1


def fmt(x) -> str:
    """Exact ``num/den`` rendering used in all serialized output."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class FiniteQuadraticForm:
    orders: tuple[int, ...]
    matrix: tuple[tuple[Fraction, ...], ...]
    # dual-lattice lifts of the generators, in coordinates of the source lattice
    lifts: tuple[tuple[Fraction, ...], ...] = field(default=(), compare=False)
    # rows r_i with coordinate_i(x) = r_i . x mod d_i for a dual vector x
    coord_rows: tuple[tuple[int, ...], ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        k = len(self.orders)
        if len(self.matrix) != k or any(len(r) != k for r in self.matrix):
            raise ValueError("form matrix does not match the number of generators")
        norm = tuple(
            tuple(mod2(self.matrix[i][j]) if i == j else mod1(self.matrix[i][j]) for j in range(k))
            for i in range(k))
        object.__setattr__(self, "matrix", norm)

    @classmethod
    def diagonal(cls, orders: Sequence[int], values: Sequence) -> "FiniteQuadraticForm":
        k = len(orders)
        m = [[Fraction(values[i]) if i == j else Fraction(0) for j in range(k)] for i in range(k)]
        return cls(tuple(orders), tuple(map(tuple, m)))

    @property
    def size(self) -> int:
        return prod(self.orders)

    @property
    def length(self) -> int:
        """Minimal number of generators l(A)."""
        return len(self.orders)

    def elements(self) -> Iterator[Element]:
        return product(*(range(d) for d in self.orders))

    def reduce(self, x: Sequence[int]) -> Element:
        return tuple(int(a) % d for a, d in zip(x, self.orders))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.orders))

    def scale(self, k: int, x: Element) -> Element:
        return tuple((k * a) % d for a, d in zip(x, self.orders))

    def order_of(self, x: Element) -> int:
        return lcm(*(d // gcd(a, d) for a, d in zip(x, self.orders))) if x else 1

    def q(self, x: Sequence[int]) -> Fraction:
        m = self.matrix
        k = len(x)
        total = Fraction(0)
        for i in range(k):
            if x[i]:
                total += x[i] * x[i] * m[i][i]
                for j in range(i + 1, k):
                    if x[j]:
                        total += 2 * x[i] * x[j] * m[i][j]
        return mod2(total)

    def b(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        m = self.matrix
        return mod1(sum(x[i] * y[j] * m[i][j] for i in range(len(x)) if x[i]
                        for j in range(len(y)) if y[j]))

    def q_values(self) -> dict[Element, Fraction]:
        return {x: self.q(x) for x in self.elements()}

    def scaled(self, k: int) -> "FiniteQuadraticForm":
        """The form ``k * q`` on the same group (``k = -1`` gives ``q(-1)``)."""
        m = tuple(tuple(k * v for v in row) for row in self.matrix)
        return FiniteQuadraticForm(self.orders, m, self.lifts, self.coord_rows)

    def coordinates(self, x: Sequence) -> Element:
        """Class in the group of a dual vector ``x`` (coordinates in the source lattice)."""
        if not self.coord_rows and self.orders:
            raise ValueError("form has no source lattice")
        vals = []
        for row, d in zip(self.coord_rows, self.orders):
            v = Fraction(sum(r * Fraction(c) for r, c in zip(row, x)))
            if v.denominator != 1:
                raise ValueError("vector is not in the dual lattice")
            vals.append(int(v) % d)
        return tuple(vals)

    @cached_property
    def histogram(self) -> Counter:
        """Counts of elements by (order, q-value); an isomorphism invariant."""
        return Counter((self.order_of(x), self.q(x)) for x in self.elements())

    def to_json(self) -> dict:
        return {
            "orders": list(self.orders),
            "q": [[",".join(map(str, x)), fmt(self.q(x))] for x in self.elements()],
        }

    def describe(self) -> str:
        if not self.orders:
            return "0"
        return " x ".join(f"Z/{d}" for d in self.orders)


def discriminant_group(lat: Lattice) -> FiniteQuadraticForm:
    """The discriminant form of a nondegenerate even lattice via Smith normal form.

    With ``U G V = D``, the generator of order ``d_i`` lifts to column ``i`` of
    ``V`` divided by ``d_i``, and a dual vector ``x`` has coordinates
    ``(U G x)_i mod d_i``.
    """
    if lat.det == 0:
        raise LatticeError("discriminant group of a degenerate lattice")
    if not lat.is_even:
        raise LatticeError("discriminant form needs an even lattice")
    g = [list(r) for r in lat.gram]
    d, u, v = linalg.smith_normal_form(g)
    n = lat.rank
    keep = [i for i in range(n) if d[i][i] > 1]
    orders = tuple(d[i][i] for i in keep)
    lifts = tuple(tuple(Fraction(v[r][i], d[i][i]) for r in range(n)) for i in keep)
    ug = linalg.matmul(u, g)
    coord_rows = tuple(tuple(ug[i]) for i in keep)
    m = tuple(tuple(lat.pair(a, b) for b in lifts) for a in lifts)
    return FiniteQuadraticForm(orders, m, lifts, coord_rows)


def group_structure(orders: Sequence[int]) -> tuple[int, ...]:
    """Invariant factors (> 1) of a product of cyclic groups of the given orders."""
    diag = [[d if i == j else 0 for j in range(len(orders))] for i, d in enumerate(orders)]
    if not diag:
        return ()
    return tuple(x for x in linalg.invariant_factors(diag) if x > 1)


# -- isomorphism -----------------------------------------------------------------

def form_isomorphism(q1: FiniteQuadraticForm, q2: FiniteQuadraticForm,
                     cap: int = DEFAULT_CAP) -> list[Element] | None:
    """Images of the generators of ``q1`` under an isometry onto ``q2``, or None.

    Exhaustive backtracking with order, q-value, pairing and independence
    pruning; raises :class:`CapExceeded` when the groups exceed ``cap``.
    """
    if q1.orders != q2.orders:
        return None
    if q1.size > cap:
        raise CapExceeded(f"|A| = {q1.size} exceeds cap {cap}")
    if q1.histogram != q2.histogram:
        return None
    k = len(q1.orders)
    elems = list(q2.elements())
    buckets: dict[tuple[int, Fraction], list[Element]] = {}
    for y in elems:
        buckets.setdefault((q2.order_of(y), q2.q(y)), []).append(y)
    gens = [tuple(int(i == j) for j in range(k)) for i in range(k)]
    images: list[Element] = []
    zero = tuple(0 for _ in range(k))

    def extend(i: int, span: frozenset) -> bool:
        if i == k:
            return True
        d = q1.orders[i]
        for y in buckets.get((d, q1.q(gens[i])), ()):
            if any(q2.b(y, images[j]) != q1.b(gens[i], gens[j]) for j in range(i)):
                continue
            if any(q2.scale(t, y) in span for t in range(1, d)):
                continue
            multiples = [q2.scale(t, y) for t in range(d)]
            new_span = frozenset(q2.add(s, m) for s in span for m in multiples)
            images.append(y)
            if extend(i + 1, new_span):
                return True
            images.pop()
        return False

    return list(images) if extend(0, frozenset([zero])) else None


def compare_discriminant_forms(q1: FiniteQuadraticForm, q2: FiniteQuadraticForm,
                               cap: int = DEFAULT_CAP) -> bool:
    """True iff the two finite quadratic forms are isometric."""
    return form_isomorphism(q1, q2, cap) is not None


# -- subgroups -------------------------------------------------------------------

def subgroup_closure(form: FiniteQuadraticForm, gens: Sequence[Element]) -> frozenset[Element]:
    span = {tuple(0 for _ in form.orders)}
    for g in gens:
        if g in span:
            continue
        d = form.order_of(g)
        span = {form.add(s, form.scale(t, g)) for s in span for t in range(d)}
    return frozenset(span)


@dataclass(frozen=True)
class Subgroup:
    generators: tuple[Element, ...]
    elements: frozenset[Element]

    @property
    def order(self) -> int:
        return len(self.elements)


def isotropic_subgroups(form: FiniteQuadraticForm, cap: int = DEFAULT_CAP) -> list[Subgroup]:
    """All subgroups on which ``q`` vanishes mod 2, the trivial one included.

    Subgroups are grown one cyclic generator at a time and deduplicated by
    their element sets.
    """
    if form.size > cap:
        raise CapExceeded(f"|A| = {form.size} exceeds cap {cap}")
    zero = tuple(0 for _ in form.orders)
    iso = [x for x in form.elements() if x != zero and form.q(x) == 0]
    root = Subgroup((), frozenset([zero]))
    seen = {root.elements: root}
    frontier = [root]
    while frontier:
        nxt = []
        for s in frontier:
            for x in iso:
                if x in s.elements or any(form.b(x, g) != 0 for g in s.generators):
                    continue
                elems = subgroup_closure(form, s.generators + (x,))
                if elems in seen:
                    continue
                sub = Subgroup(s.generators + (x,), elems)
                seen[elems] = sub
                nxt.append(sub)
        frontier = nxt
    return sorted(seen.values(), key=lambda s: (s.order, sorted(s.elements)))
