"""Lattice calculus around the K3 lattice.

Orthogonal complements, primitive hulls, even overlattices through isotropic
glue, configuration lattices ``<H> + L + (component classes)`` and the
admissibility filters that a generic Picard lattice has to pass.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Any, Sequence

from . import linalg
from .forms import DEFAULT_CAP, FiniteQuadraticForm, discriminant_group, form_isomorphism, isotropic_subgroups
from .isometry import GenusDescriptor
from .lattice import (
    DegenerateLatticeError,
    Lattice,
    LatticeError,
    Sublattice,
    ade,
    direct_sum,
    make_sublattice,
    parse_type,
    rank_one,
    signature,
)
from .roots import enumerate_roots, fundamental_weights, longest_element, standard_base

K3_SIGNATURE = (3, 19)


class ConfigurationError(ValueError):
    pass


# -- complements and hulls ---------------------------------------------------------

def _integral_rows(vectors: Sequence[Sequence]) -> list[list[int]]:
    den = linalg.common_denominator(vectors)
    return [[int(Fraction(x) * den) for x in v] for v in vectors]


def orthogonal_complement(ambient: Lattice, vectors: Sequence[Sequence], *,
                          allow_degenerate: bool = False) -> Sublattice:
    """``{v : v.s = 0 for all s}`` as a primitive sublattice of ``ambient``."""
    rows = _integral_rows([linalg.matvec(ambient.gram, s) for s in vectors]) if vectors else []
    basis = linalg.kernel(rows, ambient.rank) if rows else linalg.identity(ambient.rank)
    try:
        return make_sublattice(ambient, basis, [f"c{i + 1}" for i in range(len(basis))],
                               allow_odd=not ambient.is_even, allow_degenerate=allow_degenerate)
    except DegenerateLatticeError:
        raise DegenerateLatticeError("orthogonal complement is degenerate") from None


def saturation(ambient: Lattice, vectors: Sequence[Sequence[int]]) -> Sublattice:
    """The primitive hull ``span_Q(S) ∩ ambient`` (may be degenerate)."""
    rows = [list(v) for v in vectors]
    if any(Fraction(x).denominator != 1 for v in rows for x in v):
        raise LatticeError("saturation expects integral vectors")
    if linalg.rank(rows) != len(rows):
        raise LatticeError("vectors are linearly dependent")
    basis = linalg.saturate_rows(rows)
    return make_sublattice(ambient, basis, [f"s{i + 1}" for i in range(len(basis))],
                           allow_odd=not ambient.is_even, allow_degenerate=True)


def sublattice_index(big: Sequence[Sequence], small: Sequence[Sequence]) -> int:
    """``[big : small]`` for two full-rank families of rational row vectors."""
    d_big = abs(linalg.det_rational(big))
    d_small = abs(linalg.det_rational(small))
    ratio = d_small / d_big
    if ratio.denominator != 1:
        raise LatticeError("not a sublattice of finite index")
    return int(ratio)


# -- overlattices ----------------------------------------------------------------

@dataclass(frozen=True)
class OverlatticeCandidate:
    base: Lattice
    glue: tuple[tuple[int, ...], ...]  # generators of the isotropic subgroup of A_base
    glue_order: int
    result: Sublattice  # basis in the coordinates of base.ambient (or of base)
    filters: dict = field(default_factory=dict, compare=False)

    @property
    def passed(self) -> bool:
        return all(v == "pass" for v in self.filters.values())


def _in_ambient(base: Lattice, rows: Sequence[Sequence]) -> tuple[Lattice, list[tuple]]:
    if isinstance(base, Sublattice) and base.ambient is not None:
        return base.ambient, [base.to_ambient(r) for r in rows]
    return base, [tuple(r) for r in rows]


def overlattice(base: Lattice, form: FiniteQuadraticForm, glue: Sequence[Sequence[int]],
                labels: Sequence[str] | None = None) -> Sublattice:
    """The overlattice of ``base`` obtained by adjoining lifts of the glue elements."""
    n = base.rank
    rows: list[list] = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for g in glue:
        rows.append([sum(c * lift[k] for c, lift in zip(g, form.lifts)) for k in range(n)])
    basis = linalg.rational_row_basis(rows)
    ambient, amb_rows = _in_ambient(base, basis)
    labels = labels or [f"n{i + 1}" for i in range(n)]
    return make_sublattice(ambient, amb_rows, labels)


def even_overlattices(base: Lattice, cap: int = DEFAULT_CAP) -> list[OverlatticeCandidate]:
    """All even overlattices ``base ⊆ N ⊆ base^∨``, one per isotropic subgroup of the glue group."""
    form = discriminant_group(base)
    out = []
    for sub in isotropic_subgroups(form, cap):
        res = overlattice(base, form, sub.generators)
        out.append(OverlatticeCandidate(base, sub.generators, sub.order, res))
    return out


# -- configurations ----------------------------------------------------------------

@dataclass(frozen=True)
class Incidence:
    sing: int  # index into the singularity list
    node: int  # 1-based catalog node whose fundamental weight is contributed


@dataclass(frozen=True)
class Component:
    degree: int
    incidences: tuple[Incidence, ...]


@dataclass(frozen=True)
class Configuration:
    """A plane curve configuration: singular types, components and their incidences.

    Component ``i`` gives the class ``beta_i = d_i H / 2 + sum lambda_node`` in
    ``<H> + L``, where ``lambda_node`` are fundamental weights of the
    singularities the component passes through (a node met by two branches of
    the same component is listed twice). ``picard_classes`` are further
    classes known to lie in P but not in M.
    """

    degree: int
    singularities: tuple[str, ...]
    components: tuple[Component, ...]
    labels: tuple[tuple[str, ...], ...] = ()
    picard_classes: tuple[tuple[Fraction, ...], ...] = ()
    name: str = ""

    def __post_init__(self):
        for s in self.singularities:
            parse_type(s)
        if self.labels and len(self.labels) != len(self.singularities):
            raise ConfigurationError("one label list per singularity expected")

    # layout of <H> + L: H first, then each singularity block
    @cached_property
    def offsets(self) -> list[int]:
        out, off = [], 1
        for s in self.singularities:
            out.append(off)
            off += parse_type(s)[1]
        return out

    def sing_labels(self, i: int) -> tuple[str, ...]:
        if self.labels:
            return tuple(self.labels[i])
        n = parse_type(self.singularities[i])[1]
        return tuple(f"s{i}_{k + 1}" for k in range(n))

    @cached_property
    def base_lattice(self) -> Lattice:
        """``<H> + L`` with ``H^2 = 2`` and ADE blocks in their standard bases."""
        parts = [rank_one(2, "H")] + [ade(s, self.sing_labels(i)) for i, s in enumerate(self.singularities)]
        return direct_sum(parts)

    @property
    def h(self) -> tuple[int, ...]:
        return tuple(int(i == 0) for i in range(self.base_lattice.rank))

    @cached_property
    def root_lattice(self) -> Sublattice:
        n = self.base_lattice.rank
        basis = [tuple(int(i == j) for j in range(n)) for i in range(1, n)]
        return make_sublattice(self.base_lattice, basis, self.base_lattice.labels[1:])

    @property
    def simple_roots(self) -> list[tuple[int, ...]]:
        """The standard base of L, in coordinates of ``<H> + L``."""
        return [tuple(b) for b in self.root_lattice.basis]

    def _block_weights(self, i: int) -> list[tuple[Fraction, ...]]:
        return fundamental_weights(standard_base(ade(self.singularities[i])))

    def embed(self, i: int, local: Sequence) -> tuple[Fraction, ...]:
        """Coordinates in ``<H> + L`` of a vector of singularity block ``i``."""
        v = [Fraction(0)] * self.base_lattice.rank
        off = self.offsets[i]
        for k, x in enumerate(local):
            v[off + k] = Fraction(x)
        return tuple(v)

    def betas(self) -> list[tuple[Fraction, ...]]:
        out = []
        for comp in self.components:
            v = [Fraction(0)] * self.base_lattice.rank
            v[0] = Fraction(comp.degree, 2)
            for inc in comp.incidences:
                w = self._block_weights(inc.sing)[inc.node - 1]
                for k, x in enumerate(self.embed(inc.sing, w)):
                    v[k] += x
            out.append(tuple(v))
        return out

    @cached_property
    def iota(self) -> list[list[int]]:
        """The involution on ``<H> + L``: identity on H, ``-w0`` on each block."""
        n = self.base_lattice.rank
        m = linalg.identity(n)
        for i, s in enumerate(self.singularities):
            lat = ade(s)
            inv = longest_element(standard_base(lat))
            off = self.offsets[i]
            for a in range(lat.rank):
                for b in range(lat.rank):
                    m[off + a][off + b] = inv.matrix[a][b]
        return m

    def validate(self) -> None:
        if sum(c.degree for c in self.components) != self.degree:
            raise ConfigurationError("component degrees do not sum to the curve degree")
        v = self.base_lattice
        for i, (comp, beta) in enumerate(zip(self.components, self.betas())):
            for inc in comp.incidences:
                if not 0 <= inc.sing < len(self.singularities):
                    raise ConfigurationError(f"component {i}: unknown singularity {inc.sing}")
                if not 1 <= inc.node <= parse_type(self.singularities[inc.sing])[1]:
                    raise ConfigurationError(f"component {i}: node {inc.node} out of range")
            sq = v.norm(beta)
            if Fraction(sq).denominator != 1 or sq % 2:
                raise ConfigurationError(f"component {i}: class has square {sq}, not even")
            if v.pair(beta, self.h) != comp.degree:
                raise ConfigurationError(f"component {i}: class does not meet H in its degree")
            if tuple(linalg.matvec(self.iota, beta)) != tuple(beta):
                raise ConfigurationError(f"component {i}: class is not invariant under the involution")

    # -- (de)serialization
    @classmethod
    def from_json(cls, data: dict | str) -> "Configuration":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            sings = tuple(s["type"] for s in data["singularities"])
            labels = tuple(tuple(s["labels"]) for s in data["singularities"]) \
                if all("labels" in s for s in data["singularities"]) and data["singularities"] else ()
            comps = []
            for c in data["components"]:
                incs = tuple(Incidence(int(x["sing"]), _node_index(sings[int(x["sing"])], x["node"]))
                             for x in c.get("incidences", ()))
                comps.append(Component(int(c["degree"]), incs))
            extra = tuple(tuple(Fraction(x) for x in row) for row in data.get("picard_classes", ()))
            config = cls(int(data["degree"]), sings, tuple(comps), labels, extra, data.get("name", ""))
        except (KeyError, TypeError, IndexError, ValueError, ZeroDivisionError) as exc:
            raise ConfigurationError(f"malformed configuration: {exc!r}") from None
        config.validate()
        return config

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "degree": self.degree,
            "components": [
                {"degree": c.degree, "incidences": [{"sing": x.sing, "node": x.node} for x in c.incidences]}
                for c in self.components],
            "singularities": [
                {"type": s, **({"labels": list(self.labels[i])} if self.labels else {})}
                for i, s in enumerate(self.singularities)],
        }
        if self.picard_classes:
            out["picard_classes"] = [[_frac(x) for x in row] for row in self.picard_classes]
        if self.name:
            out["name"] = self.name
        return out


def _frac(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _node_index(sing_type: str, node) -> int:
    kind, n = parse_type(sing_type)
    if node == "middle":
        if kind != "A" or n % 2 == 0:
            raise ConfigurationError(f"{sing_type} has no middle node")
        return (n + 1) // 2
    if node == "end":
        return 1
    return int(node)


def build_M(config: Configuration) -> Sublattice:
    """``<H> + L`` extended by the component classes."""
    config.validate()
    v = config.base_lattice
    n = v.rank
    rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    rows += [list(b) for b in config.betas()]
    basis = linalg.rational_row_basis(rows)
    try:
        return make_sublattice(v, basis, [f"m{i + 1}" for i in range(len(basis))])
    except LatticeError as exc:
        raise ConfigurationError(f"configuration lattice is not even integral: {exc}") from None


def picard_lattice(config: Configuration) -> Sublattice:
    """M extended by the classes the configuration declares to lie in P (M itself if none)."""
    m = build_M(config)
    if not config.picard_classes:
        return m
    rows = [list(b) for b in m.basis] + [list(x) for x in config.picard_classes]
    basis = linalg.rational_row_basis(rows)
    try:
        return make_sublattice(config.base_lattice, basis, [f"p{i + 1}" for i in range(len(basis))])
    except LatticeError as exc:
        raise ConfigurationError(f"declared Picard classes do not give an even lattice: {exc}") from None


def iota_on(config: Configuration, lat: Sublattice) -> list[list[int]]:
    """Matrix of the involution on a lattice between ``<H> + L`` and its dual (columns)."""
    cols = []
    for b in lat.basis:
        img = lat.from_ambient(linalg.matvec(config.iota, b))
        if img is None or any(Fraction(x).denominator != 1 for x in img):
            raise ConfigurationError("lattice is not stable under the involution")
        cols.append([int(x) for x in img])
    return linalg.transpose(cols)


# -- admissibility ---------------------------------------------------------------

def _ext_gcd_solution(values: Sequence[int]) -> list[int] | None:
    """Integers ``c`` with ``sum c_i v_i = 1``, or None if the gcd is not 1."""
    coeffs = [0] * len(values)
    g = 0
    for i, v in enumerate(values):
        if v == 0:
            continue
        if g == 0:
            g, coeffs = abs(v), [0] * len(values)
            coeffs[i] = 1 if v > 0 else -1
            continue
        # extended Euclid on (g, v)
        a, b, x0, x1, y0, y1 = g, v, 1, 0, 0, 1
        while b:
            q = a // b
            a, b = b, a - q * b
            x0, x1 = x1, x0 - q * x1
            y0, y1 = y1, y0 - q * y1
        if a < 0:
            a, x0, y0 = -a, -x0, -y0
        coeffs = [c * x0 for c in coeffs]
        coeffs[i] += y0
        g = a
    return coeffs if g == 1 else None


def roots_orthogonal_to(lat: Sublattice, h: Sequence) -> tuple[Sublattice, list[tuple]]:
    """The complement of ``h`` in ``lat`` and its roots (ambient coordinates)."""
    h_local = lat.from_ambient(h)
    k = orthogonal_complement(lat, [h_local])
    roots = [lat.to_ambient(k.to_ambient(r)) for r in enumerate_roots(k)]
    return k, sorted(roots)


def isotropic_u(lat: Sublattice, h: Sequence) -> tuple | None:
    """A vector ``u`` of ``lat`` with ``u^2 = 0`` and ``u.H = 1`` (ambient coordinates), if any.

    Writing ``u = H/H^2 + x`` with ``x`` orthogonal to ``H``, the condition is
    ``x^2 = -1/H^2`` on a coset of the (negative definite) complement, which a
    centred Fincke-Pohst search settles exactly.
    """
    h_local = lat.from_ambient(h)
    h2 = lat.norm(h_local)
    pair_h = linalg.matvec(lat.gram, h_local)
    c = _ext_gcd_solution([int(x) for x in pair_h])
    if c is None:
        return None
    k = orthogonal_complement(lat, [h_local])
    x0 = [Fraction(ci) - Fraction(hi) / h2 for ci, hi in zip(c, h_local)]
    centre = k.from_ambient(x0)
    # u = H/H^2 + x, so u^2 = 1/H^2 + x^2 vanishes iff -x^2 = 1/H^2
    target = Fraction(1, h2)
    a = [[-v for v in row] for row in k.gram]
    for y in linalg.fincke_pohst(a, target, centre):
        z = [Fraction(yi) + ci for yi, ci in zip(y, centre)]
        if linalg.bilinear(a, z, z) == target:
            local = [Fraction(hi) / h2 + xi for hi, xi in zip(h_local, k.to_ambient(z))]
            return lat.to_ambient(local)
    return None


def screen_overlattices(config: Configuration, cap: int = DEFAULT_CAP) -> list[OverlatticeCandidate]:
    """Every even overlattice of M with the results of the admissibility filters."""
    m = build_M(config)
    l_roots = len(enumerate_roots(config.root_lattice))
    out = []
    for cand in even_overlattices(m, cap):
        n = cand.result
        _, roots = roots_orthogonal_to(n, config.h)
        u = isotropic_u(n, config.h)
        filters = {
            "even": "pass" if n.is_even else "fail",
            "roots": "pass" if len(roots) == l_roots else "fail",
            "isotropic_u": "pass" if u is None else "fail",
        }
        out.append(OverlatticeCandidate(cand.base, cand.glue, cand.glue_order, n, filters))
    return out


def admissible_picard(config: Configuration, cap: int = DEFAULT_CAP) -> list[OverlatticeCandidate]:
    """Even overlattices of M with no new roots orthogonal to H and no isotropic u with u.H = 1."""
    return [c for c in screen_overlattices(config, cap) if c.passed]


def a3_anti_glue(config: Configuration, blocks: Sequence[int] | None = None) -> dict[str, list[tuple[int, ...]]]:
    """Isotropic anti-invariant glue between A3 blocks.

    ``w = sum a_k (x1 - x3)_k / 4`` is isotropic iff ``8 | sum a_k^2``.
    Isotropic tuples are split into those whose class contains a root
    orthogonal to H (rejected), those lying in M (kept) and the rest.
    """
    if blocks is None:
        blocks = [i for i, s in enumerate(config.singularities) if parse_type(s) == ("A", 3)]
    if not blocks or any(parse_type(config.singularities[i]) != ("A", 3) for i in blocks):
        raise ConfigurationError("expected A3 singularities")
    v = config.base_lattice
    m = build_M(config)
    anti = [config.embed(i, (1, 0, -1)) for i in blocks]
    l_lat = config.root_lattice
    a_neg = [[-x for x in row] for row in l_lat.gram]
    out: dict[str, list] = {"isotropic": [], "rejected": [], "kept": [], "other": []}
    for t in product(range(4), repeat=len(blocks)):
        if not any(t):
            continue
        w = [sum(Fraction(c, 4) * vec[k] for c, vec in zip(t, anti)) for k in range(v.rank)]
        if Fraction(v.norm(w)) % 2 != 0:
            continue
        out["isotropic"].append(t)
        centre = l_lat.from_ambient(w)
        has_root = False
        for x in linalg.fincke_pohst(a_neg, 2, centre):
            z = [y + c for y, c in zip(x, centre)]
            if linalg.bilinear(a_neg, z, z) == 2:
                has_root = True
                break
        if has_root:
            out["rejected"].append(t)
        elif m.contains(w):
            out["kept"].append(t)
        else:
            out["other"].append(t)
    return out


def eight_divides_filter(config: Configuration) -> dict[str, list[tuple[int, int, int, int]]]:
    """:func:`a3_anti_glue` for a configuration with exactly four A3 blocks."""
    blocks = [i for i, s in enumerate(config.singularities) if parse_type(s) == ("A", 3)]
    if len(blocks) != 4:
        raise ConfigurationError("expected exactly four A3 singularities")
    return a3_anti_glue(config, blocks)


# -- placing a lattice in the K3 lattice --------------------------------------------

def complement_genus(p: Lattice, ambient_signature: tuple[int, int] = K3_SIGNATURE) -> GenusDescriptor:
    """Genus of the orthogonal complement of a primitive embedding into an even unimodular lattice."""
    sp, sq = signature(p)
    return GenusDescriptor(ambient_signature[0] - sp, ambient_signature[1] - sq,
                           discriminant_group(p).scaled(-1))


@dataclass(frozen=True)
class Realization:
    """An even unimodular overlattice of ``P + Q`` in which P and Q are mutual complements."""

    unimodular: Sublattice  # ambient = P + Q
    p_basis: tuple[tuple, ...]  # P inside `unimodular`, in its coordinates
    q_basis: tuple[tuple, ...]


def glue_to_unimodular(p: Lattice, q: Lattice, cap: int = DEFAULT_CAP) -> Realization | None:
    """Glue ``P + Q`` along an anti-isometry ``A_P -> A_Q``; None if no such map exists."""
    fp, fq = discriminant_group(p), discriminant_group(q)
    phi = form_isomorphism(fp.scaled(-1), fq, cap)
    if phi is None:
        return None
    total = direct_sum([p, q])
    np_, nq = p.rank, q.rank
    glue_rows = []
    for lift_p, img in zip(fp.lifts, phi):
        lift_q = [sum(c * lift[k] for c, lift in zip(img, fq.lifts)) for k in range(nq)]
        glue_rows.append(list(lift_p) + lift_q)
    rows = [[Fraction(int(i == j)) for j in range(np_ + nq)] for i in range(np_ + nq)] + glue_rows
    basis = linalg.rational_row_basis(rows)
    uni = make_sublattice(total, basis, [f"k{i + 1}" for i in range(len(basis))])
    p_basis = tuple(uni.from_ambient([int(i == j) for j in range(np_ + nq)]) for i in range(np_))
    q_basis = tuple(uni.from_ambient([int(i == j) for j in range(np_ + nq)]) for i in range(np_, np_ + nq))
    return Realization(uni, p_basis, q_basis)
