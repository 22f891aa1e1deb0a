"""Integral lattices: the Lattice type, standard constructors and basic invariants.

Sign convention: ADE root lattices are negative definite (Gram matrix equal to
minus the Cartan matrix), so every root has square -2. The K3 lattice is
U^3 + E8(-1)^2 of signature (3, 19).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd
from typing import Iterable, Sequence

from . import linalg


class LatticeError(ValueError):
    """Malformed lattice input."""


class DegenerateLatticeError(LatticeError):
    """The Gram matrix is singular where a nondegenerate lattice is required."""


Vector = tuple  # exact coordinates (int or Fraction) relative to a lattice basis


@dataclass(frozen=True)
class Lattice:
    gram: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        n = len(self.gram)
        if any(len(row) != n for row in self.gram):
            raise LatticeError("Gram matrix is not square")
        if len(self.labels) != n:
            raise LatticeError(f"{len(self.labels)} labels for rank {n}")
        for i in range(n):
            for j in range(i):
                if self.gram[i][j] != self.gram[j][i]:
                    raise LatticeError("Gram matrix is not symmetric")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return linalg.det(self.gram)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def pair(self, u: Sequence, v: Sequence):
        return linalg.bilinear(self.gram, u, v)

    def norm(self, v: Sequence):
        return self.pair(v, v)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def vector(self, terms: dict[str, int | Fraction] | None = None, **kw) -> tuple:
        """Coordinates of ``sum coeff * basis[label]``; integral when possible."""
        terms = dict(terms or {}, **kw)
        v = [Fraction(0)] * self.rank
        for label, c in terms.items():
            v[self.index(label)] += Fraction(c)
        return tuple(int(x) if x.denominator == 1 else x for x in v)

    def to_json(self) -> dict:
        return {"labels": list(self.labels), "gram": [list(r) for r in self.gram]}

    def __repr__(self) -> str:
        return f"Lattice(rank={self.rank}, det={self.det}, labels={list(self.labels)})"


def make_lattice(gram: Sequence[Sequence[int]], labels: Sequence[str] | None = None, *,
                 allow_odd: bool = False, allow_degenerate: bool = False) -> Lattice:
    """Validate and build a lattice from a Gram matrix."""
    try:
        rows = tuple(tuple(_as_int(x) for x in row) for row in gram)
    except (TypeError, ValueError) as exc:
        raise LatticeError(f"Gram entries must be integers: {exc}") from None
    if labels is None:
        labels = [f"b{i + 1}" for i in range(len(rows))]
    lat = Lattice(rows, tuple(labels))
    if not allow_odd and not lat.is_even:
        raise LatticeError("lattice is not even")
    if not allow_degenerate and lat.det == 0:
        raise DegenerateLatticeError("Gram matrix is degenerate")
    return lat


def _as_int(x) -> int:
    if isinstance(x, bool):
        raise TypeError("boolean entry")
    if isinstance(x, int):
        return x
    f = Fraction(x)
    if f.denominator != 1:
        raise ValueError(f"non-integral entry {x}")
    return int(f)


def lattice_from_json(data: dict | str) -> Lattice:
    if isinstance(data, str):
        data = json.loads(data)
    if "gram" not in data:
        raise LatticeError("missing 'gram'")
    return make_lattice(data["gram"], data.get("labels"))


# -- ADE catalog ---------------------------------------------------------------

_TYPE_RE = re.compile(r"^\s*([ADE])\s*_?\s*(\d+)\s*$", re.IGNORECASE)


def parse_type(name: str) -> tuple[str, int]:
    """``"D5" -> ("D", 5)``; validates the range of the rank."""
    m = _TYPE_RE.match(name)
    if not m:
        raise LatticeError(f"not an ADE type: {name!r}")
    kind, n = m.group(1).upper(), int(m.group(2))
    if (kind == "A" and n < 1) or (kind == "D" and n < 4) or (kind == "E" and n not in (6, 7, 8)):
        raise LatticeError(f"invalid ADE parameter: {name!r}")
    return kind, n


def dynkin_edges(kind: str, n: int) -> list[tuple[int, int]]:
    """Edges of the Dynkin diagram, 0-based, in Bourbaki numbering."""
    if kind == "A":
        return [(i, i + 1) for i in range(n - 1)]
    if kind == "D":
        return [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    if kind == "E":
        # 1-3-4-5-...-n with 2 attached to 4
        return [(0, 2), (1, 3)] + [(i, i + 1) for i in range(2, n - 1)]
    raise LatticeError(f"unknown kind {kind}")


def cartan_matrix(kind: str, n: int) -> list[list[int]]:
    c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in dynkin_edges(kind, n):
        c[i][j] = c[j][i] = -1
    return c


def ade(name: str, labels: Sequence[str] | None = None) -> Lattice:
    """Negative definite root lattice of the given type, e.g. ``ade("E8")``."""
    kind, n = parse_type(name)
    gram = [[-x for x in row] for row in cartan_matrix(kind, n)]
    return make_lattice(gram, labels or [f"x{i + 1}" for i in range(n)])


def hyperbolic_u() -> Lattice:
    return make_lattice([[0, 1], [1, 0]], ["e", "f"])


def rank_one(k: int, label: str = "v") -> Lattice:
    if k % 2:
        raise LatticeError("rank_one expects an even integer")
    return make_lattice([[k]], [label])


def rescale(lat: Lattice, n: int) -> Lattice:
    if n == 0:
        raise LatticeError("rescale factor must be nonzero")
    return make_lattice([[n * x for x in row] for row in lat.gram], lat.labels)


def direct_sum(parts: Iterable[Lattice]) -> Lattice:
    parts = list(parts)
    size = sum(p.rank for p in parts)
    gram = [[0] * size for _ in range(size)]
    labels: list[str] = []
    off = 0
    for p in parts:
        for i in range(p.rank):
            for j in range(p.rank):
                gram[off + i][off + j] = p.gram[i][j]
        labels.extend(p.labels)
        off += p.rank
    return make_lattice(gram, labels, allow_odd=not all(p.is_even for p in parts))


def k3() -> Lattice:
    """The K3 lattice U^3 + E8(-1)^2 with basis e1,f1,e2,f2,e3,f3,a1..a8,b1..b8."""
    us = [make_lattice([[0, 1], [1, 0]], [f"e{i}", f"f{i}"]) for i in (1, 2, 3)]
    e8a = ade("E8", [f"a{i}" for i in range(1, 9)])
    e8b = ade("E8", [f"b{i}" for i in range(1, 9)])
    return direct_sum(us + [e8a, e8b])


# -- invariants ----------------------------------------------------------------

def signature(lat: Lattice) -> tuple[int, int]:
    """Exact inertia ``(p, q)``; raises on degenerate input."""
    p, q, z = linalg.inertia(lat.gram)
    if z:
        raise DegenerateLatticeError("signature of a degenerate lattice")
    return p, q


def is_definite(lat: Lattice) -> bool:
    p, q = signature(lat)
    return p == 0 or q == 0


def divisibility(lat: Lattice, v: Sequence[int]) -> int:
    """gcd of the pairings of ``v`` with the basis of ``lat``."""
    if not any(v):
        raise LatticeError("divisibility of the zero vector")
    if any(Fraction(x).denominator != 1 for x in v):
        raise LatticeError("divisibility needs an integral vector")
    return reduce(gcd, (abs(int(x)) for x in linalg.matvec(lat.gram, v)), 0)


def sublattice_gram(lat: Lattice, basis: Sequence[Sequence]) -> list[list]:
    return linalg.congruence(basis, lat.gram)


@dataclass(frozen=True, repr=False)
class Sublattice(Lattice):
    """A lattice together with its basis inside an ambient rational quadratic space.

    ``basis`` rows are coordinates (possibly rational, for overlattices) with
    respect to the basis of ``ambient``; ``gram`` is the induced pairing.
    """

    basis: tuple[tuple, ...] = ()
    ambient: Lattice | None = None

    def to_ambient(self, coeffs: Sequence) -> tuple:
        """Ambient coordinates of ``sum coeffs_i * basis_i``."""
        n = self.ambient.rank
        out = [Fraction(0)] * n
        for c, b in zip(coeffs, self.basis):
            if c:
                for k in range(n):
                    out[k] += c * b[k]
        return tuple(int(x) if x.denominator == 1 else x for x in out)

    def from_ambient(self, v: Sequence) -> tuple | None:
        """Coordinates of an ambient vector in this basis, or None if outside the span."""
        c = linalg.solve_rows(self.basis, v)
        if c is None:
            return None
        return tuple(int(x) if x.denominator == 1 else x for x in c)

    def contains(self, v: Sequence) -> bool:
        c = self.from_ambient(v)
        return c is not None and all(Fraction(x).denominator == 1 for x in c)


def make_sublattice(ambient: Lattice, basis: Sequence[Sequence], labels: Sequence[str] | None = None, *,
                    allow_odd: bool = False, allow_degenerate: bool = False) -> Sublattice:
    """The lattice spanned by independent ``basis`` rows of ``ambient`` coordinates."""
    rows = tuple(tuple(int(x) if Fraction(x).denominator == 1 else Fraction(x) for x in b) for b in basis)
    gram = sublattice_gram(ambient, rows)
    try:
        gram = [[_as_int(x) for x in row] for row in gram]
    except ValueError:
        raise LatticeError("induced pairing is not integral") from None
    if labels is None:
        labels = [f"v{i + 1}" for i in range(len(rows))]
    lat = Sublattice(tuple(map(tuple, gram)), tuple(labels), rows, ambient)
    if not allow_odd and not lat.is_even:
        raise LatticeError("sublattice is not even")
    if not allow_degenerate and lat.det == 0:
        raise DegenerateLatticeError("sublattice is degenerate")
    return lat


_PART_RE = re.compile(r"^(?:U(?:\((-?\d+)\))?|<(-?\d+)>|([ADE]_?\d+)(?:\((-?\d+)\))?)(?:\^(\d+))?$", re.IGNORECASE)


def lattice_from_name(name: str) -> Lattice:
    """Build a direct sum from a name such as ``"<-2>+U(3)^2+A2^2"``.

    Parts: ``U`` or ``U(k)``, ``<k>`` (rank one), ADE types (negative
    definite, optionally rescaled as ``E8(2)``), each with an optional power.
    """
    parts: list[Lattice] = []
    for token in name.replace(" ", "").replace("⊕", "+").split("+"):
        m = _PART_RE.match(token)
        if not m:
            raise LatticeError(f"cannot parse lattice name part {token!r}")
        u_scale, rank1, ade_type, ade_scale, power = m.groups()
        if rank1 is not None:
            piece = make_lattice([[int(rank1)]], ["v"], allow_odd=True)
        elif ade_type is not None:
            piece = ade(ade_type)
            if ade_scale is not None:
                piece = rescale(piece, int(ade_scale))
        else:
            piece = rescale(hyperbolic_u(), int(u_scale)) if u_scale is not None else hyperbolic_u()
        parts.extend([piece] * int(power or 1))
    if not parts:
        raise LatticeError("empty lattice name")
    total = direct_sum(parts)
    return Lattice(total.gram, tuple(f"b{i + 1}" for i in range(total.rank)))
