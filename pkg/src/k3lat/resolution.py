"""Canonical resolution of a double cover branched along an ADE curve germ.

The branch curve is blown up downstairs until it becomes smooth. A new
exceptional curve joins the branch locus iff the branch multiplicity of its
centre is odd. The cover is then lifted combinatorially: a branch curve has a
single preimage, a non-branch curve whose local intersections with the branch
locus are all even splits into two sheets, any other curve has a connected
double cover. Contracting the (-1)-curves upstairs leaves the minimal
resolution, whose dual graph must be the Dynkin diagram of the germ.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Literal

import sympy

from .lattice import LatticeError, cartan_matrix, parse_type
from .roots import cartan_components

Poly = dict[tuple[int, int], Fraction]

MAX_N = 30


class ResolutionError(RuntimeError):
    """The simulation left the range it can handle exactly."""


# -- polynomials in two variables -------------------------------------------------

def _clean(p: Poly) -> Poly:
    return {k: v for k, v in p.items() if v}


def _order(p: Poly) -> int:
    return min((a + b for a, b in p), default=-1)


def _truncate(p: Poly, cap: int) -> tuple[Poly, bool]:
    kept = {k: v for k, v in p.items() if k[0] + k[1] <= cap}
    return kept, len(kept) != len(p)


def _chart_a(p: Poly, d: int) -> Poly:
    """``p(x, xy) / x^d``."""
    return {(a + b - d, b): v for (a, b), v in p.items()}


def _chart_b(p: Poly, d: int) -> Poly:
    """``p(xy, y) / y^d``."""
    return {(a, a + b - d): v for (a, b), v in p.items()}


def _shift_y(p: Poly, t: Fraction) -> Poly:
    """``p(x, y + t)``."""
    out: Poly = {}
    for (a, b), v in p.items():
        for k in range(b + 1):
            key = (a, k)
            out[key] = out.get(key, Fraction(0)) + v * comb(b, k) * t ** (b - k)
    return _clean(out)


def _ord_on_axis(p: Poly, axis: str) -> int:
    """Order of vanishing of ``p`` restricted to ``x = 0`` (axis 'x') or ``y = 0`` (axis 'y')."""
    if axis == "x":
        return min((b for a, b in p if a == 0), default=-1)
    return min((a for a, b in p if b == 0), default=-1)


def poly_str(p: Poly) -> str:
    terms = []
    for (a, b), v in sorted(p.items(), key=lambda kv: (kv[0][0] + kv[0][1], -kv[0][0])):
        mono = "*".join(s for s in (f"x^{a}" if a > 1 else "x" if a else "",
                                    f"y^{b}" if b > 1 else "y" if b else "") if s)
        coeff = "" if v == 1 and mono else str(v)
        terms.append(coeff + ("*" if coeff and mono else "") + mono)
    return " + ".join(terms) or "0"


# -- germs --------------------------------------------------------------------------

@dataclass(frozen=True)
class CurveGerm:
    poly: tuple[tuple[tuple[int, int], int], ...]  # ((exponents), coefficient) pairs

    @property
    def as_dict(self) -> Poly:
        return {e: Fraction(c) for e, c in self.poly}

    @property
    def origin_mult(self) -> int:
        return _order(self.as_dict)

    def __str__(self) -> str:
        return poly_str(self.as_dict)


def _germ(terms: dict[tuple[int, int], int]) -> CurveGerm:
    return CurveGerm(tuple(sorted(terms.items())))


def ade_germ(kind: str, n: int | None = None) -> CurveGerm:
    """Normal form of the simple curve singularity of the given type."""
    if n is None:
        kind, n = parse_type(kind)
    else:
        kind, n = parse_type(f"{kind}{n}")
    if n > MAX_N:
        raise LatticeError(f"n = {n} exceeds the supported bound {MAX_N}")
    if kind == "A":
        return _germ({(2, 0): 1, (0, n + 1): 1})
    if kind == "D":
        return _germ({(2, 1): 1, (0, n - 1): 1})
    return {6: _germ({(3, 0): 1, (0, 4): 1}),
            7: _germ({(3, 0): 1, (1, 3): 1}),
            8: _germ({(3, 0): 1, (0, 5): 1})}[n]


# -- downstairs state ----------------------------------------------------------------

@dataclass
class Point:
    """A point on the current surface: local equation of the strict transform and
    the exceptional curves through it along ``x = 0`` and ``y = 0``."""

    g: Poly
    ex: int | None = None
    ey: int | None = None
    truncated: bool = False


@dataclass
class Curve:
    self_int: int = -1
    branch: bool = False
    # local intersection multiplicities with the final strict transform
    strict_contacts: list[int] = field(default_factory=list)


@dataclass
class ResolutionState:
    worklist: deque = field(default_factory=deque)
    curves: list[Curve] = field(default_factory=list)
    meets: dict[frozenset, int] = field(default_factory=dict)
    steps: int = 0
    cap_degree: int = 0

    def pair(self, a: int, b: int) -> int:
        return self.meets.get(frozenset((a, b)), 0)

    def _add_meet(self, a: int, b: int, k: int) -> None:
        key = frozenset((a, b))
        self.meets[key] = self.meets.get(key, 0) + k
        if not self.meets[key]:
            del self.meets[key]

    def is_branch(self, c: int | None) -> bool:
        return c is not None and self.curves[c].branch

    def multiplicity(self, pt: Point) -> int:
        return max(_order(pt.g), 0) + self.is_branch(pt.ex) + self.is_branch(pt.ey)

    def branch_degree(self, c: int) -> int:
        """``B.E_c`` for the current total branch divisor ``B``."""
        curve = self.curves[c]
        total = sum(curve.strict_contacts)
        for pt in self.worklist:
            for cc, axis in ((pt.ex, "x"), (pt.ey, "y")):
                if cc == c and _order(pt.g) >= 1:
                    total += max(_ord_on_axis(pt.g, axis), 0)
        total += sum(k for key, k in self.meets.items() if c in key
                     for other in key - {c} if self.curves[other].branch)
        if curve.branch:
            total += curve.self_int
        return total

    def check_parity(self) -> None:
        """The branch divisor is 2-divisible: it meets every exceptional curve evenly."""
        for c in range(len(self.curves)):
            if self.branch_degree(c) % 2:
                raise ResolutionError(f"branch divisor meets E{c} oddly")


def initial_state(germ: CurveGerm, n: int) -> ResolutionState:
    st = ResolutionState(cap_degree=2 * n + 4)
    st.worklist.append(Point(germ.as_dict))
    return st


def _tangent_points(st: ResolutionState, pt: Point, d: int, e: int) -> list[Point]:
    """Points of the new exceptional curve ``e`` that need attention."""
    g = pt.g
    lead = {k: v for k, v in g.items() if k[0] + k[1] == d}
    # h(t) = g_d(1, t); degree deficiency gives the multiplicity at t = infinity
    coeffs = {b: v for (a, b), v in lead.items()}
    out: list[Point] = []
    ga, trunc_a = _truncate(_clean(_chart_a(g, d)), st.cap_degree)
    trunc_a = trunc_a or pt.truncated
    finite: dict[Fraction, None] = {}
    if coeffs:
        t = sympy.Symbol("t")
        h = sympy.Poly(sum(sympy.Rational(v.numerator, v.denominator) * t ** b for b, v in coeffs.items()), t)
        if h.degree() > 0:
            _, factors = sympy.factor_list(h.as_expr(), t)
            for f, mult in factors:
                fp = sympy.Poly(f, t)
                if fp.degree() == 1:
                    a1, a0 = fp.all_coeffs()
                    finite[Fraction(int(sympy.numer(-a0 / a1)), int(sympy.denom(-a0 / a1)))] = None
                elif mult == 1:
                    # conjugate simple roots: transverse crossings of E
                    for _ in range(fp.degree()):
                        out.append(Point({(0, 1): Fraction(1)}, ex=e))
                else:
                    raise ResolutionError("repeated irrational tangent direction")
    if pt.ey is not None:
        finite.setdefault(Fraction(0), None)
    for t0 in finite:
        if t0 == 0:
            out.append(Point(ga, ex=e, ey=pt.ey, truncated=trunc_a))
        else:
            if trunc_a:
                raise ResolutionError("translation after truncation")
            out.append(Point(_shift_y(ga, t0), ex=e))
    deficiency = d - max(coeffs, default=-1) if coeffs else d
    if deficiency > 0 or pt.ex is not None:
        gb, trunc_b = _truncate(_clean(_chart_b(g, d)), st.cap_degree)
        out.append(Point(gb, ex=pt.ex, ey=e, truncated=trunc_b or pt.truncated))
    return out


def blowup_step(st: ResolutionState) -> ResolutionState:
    """Process the next point: blow it up if the branch locus is singular there."""
    if not st.worklist:
        return st
    pt = st.worklist.popleft()
    mu = st.multiplicity(pt)
    if mu <= 1:
        _record_contacts(st, pt)
        return st
    st.steps += 1
    e = len(st.curves)
    st.curves.append(Curve(self_int=-1, branch=bool(mu % 2)))
    for old in (pt.ex, pt.ey):
        if old is not None:
            st.curves[old].self_int -= 1
            st._add_meet(old, e, 1)
    if pt.ex is not None and pt.ey is not None:
        st._add_meet(pt.ex, pt.ey, -1)
    d = max(_order(pt.g), 0)
    st.worklist.extend(_tangent_points(st, pt, d, e))
    return st


def _record_contacts(st: ResolutionState, pt: Point) -> None:
    if _order(pt.g) < 1:
        return
    for c, axis in ((pt.ex, "x"), (pt.ey, "y")):
        if c is not None:
            k = _ord_on_axis(pt.g, axis)
            if k > 0:
                st.curves[c].strict_contacts.append(k)


# -- upstairs --------------------------------------------------------------------------

@dataclass(frozen=True)
class DualGraph:
    self_ints: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]  # (i, j, multiplicity), i < j
    names: tuple[str, ...]

    def intersection_matrix(self) -> list[list[int]]:
        n = len(self.self_ints)
        m = [[0] * n for _ in range(n)]
        for i in range(n):
            m[i][i] = self.self_ints[i]
        for i, j, k in self.edges:
            m[i][j] = m[j][i] = k
        return m

    def to_json(self) -> dict:
        return {"nodes": [{"name": s, "self_intersection": x} for s, x in zip(self.names, self.self_ints)],
                "edges": [[i, j] if k == 1 else [i, j, k] for i, j, k in self.edges]}

    def to_dot(self, title: str = "resolution") -> str:
        lines = [f'graph "{title}" {{']
        for i, (s, x) in enumerate(zip(self.names, self.self_ints)):
            lines.append(f'  n{i} [label="{s} ({x})"];')
        for i, j, k in self.edges:
            attr = f' [label="{k}"]' if k != 1 else ""
            lines.append(f"  n{i} -- n{j}{attr};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _lift(st: ResolutionState) -> tuple[list[int], dict[tuple[int, int], int], list[str], dict[int, int]]:
    """Upstairs curves: self-intersections, pairings, names and the involution."""
    curves = st.curves
    branch_nbrs = [sum(k for key, k in st.meets.items() if i in key
                       for o in key - {i} if curves[o].branch) for i in range(len(curves))]
    split = [not c.branch and not branch_nbrs[i] and all(k % 2 == 0 for k in c.strict_contacts)
             for i, c in enumerate(curves)]
    # upstairs node ids
    ids: dict[tuple[int, int], int] = {}
    selfs: list[int] = []
    names: list[str] = []
    iota: dict[int, int] = {}
    for i, c in enumerate(curves):
        if c.branch:
            if c.self_int % 2:
                raise ResolutionError(f"odd self-intersection on branch curve E{i}")
            ids[(i, 0)] = len(selfs)
            selfs.append(c.self_int // 2)
            names.append(f"E{i}")
        elif split[i]:
            touch = sum(c.strict_contacts) // 2
            for s in (0, 1):
                ids[(i, s)] = len(selfs)
                selfs.append(c.self_int - touch)
                names.append(f"E{i}{chr(39) * (s + 1)}")
            iota[ids[(i, 0)]] = ids[(i, 1)]
            iota[ids[(i, 1)]] = ids[(i, 0)]
        else:
            ids[(i, 0)] = len(selfs)
            selfs.append(2 * c.self_int)
            names.append(f"E{i}")
    pairs: dict[tuple[int, int], int] = {}

    def add(a: int, b: int, k: int) -> None:
        key = (min(a, b), max(a, b))
        pairs[key] = pairs.get(key, 0) + k

    for i, c in enumerate(curves):
        if split[i] and c.strict_contacts:
            add(ids[(i, 0)], ids[(i, 1)], sum(c.strict_contacts) // 2)
    # sheets of split curves are matched along a spanning forest
    sheet: dict[int, int] = {}
    edges = sorted((tuple(sorted(k)), v) for k, v in st.meets.items())
    adj: dict[int, list[int]] = {i: [] for i in range(len(curves))}
    for (a, b), _ in edges:
        adj[a].append(b)
        adj[b].append(a)
    for root in range(len(curves)):
        if not split[root] or root in sheet:
            continue
        sheet[root] = 0
        queue = deque([root])
        while queue:
            a = queue.popleft()
            for b in adj[a]:
                if split[b] and b not in sheet:
                    sheet[b] = sheet[a]
                    queue.append(b)
    for (a, b), k in edges:
        ca, cb = curves[a], curves[b]
        if ca.branch and cb.branch:
            raise ResolutionError("two branch curves meet after resolution")
        if ca.branch or cb.branch:
            br, nb = (a, b) if ca.branch else (b, a)
            if split[nb]:
                raise ResolutionError("split curve meets the branch locus")
            add(ids[(br, 0)], ids[(nb, 0)], k)
        elif split[a] and split[b]:
            if sheet[a] != sheet[b] and k:
                raise ResolutionError("inconsistent sheet matching")
            for s in (0, 1):
                add(ids[(a, s)], ids[(b, s)], k)
        elif split[a] or split[b]:
            sp, ns = (a, b) if split[a] else (b, a)
            for s in (0, 1):
                add(ids[(sp, s)], ids[(ns, 0)], k)
        else:
            add(ids[(a, 0)], ids[(b, 0)], 2 * k)
    return selfs, {k: v for k, v in pairs.items() if v}, names, iota


def _contract(selfs: list[int], pairs: dict[tuple[int, int], int], names: list[str],
              iota: dict[int, int]) -> tuple[DualGraph, tuple[int, ...]]:
    alive = set(range(len(selfs)))
    selfs = list(selfs)
    pairs = dict(pairs)

    def meet(a, b):
        return pairs.get((min(a, b), max(a, b)), 0)

    while True:
        minus_one = sorted(v for v in alive if selfs[v] == -1)
        if not minus_one:
            break
        c = minus_one[0]
        nbrs = [v for v in alive if v != c and meet(v, c)]
        for v in nbrs:
            selfs[v] += meet(v, c) ** 2
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1:]:
                key = (min(a, b), max(a, b))
                pairs[key] = pairs.get(key, 0) + meet(a, c) * meet(b, c)
        alive.discard(c)
    keep = sorted(alive)
    index = {v: i for i, v in enumerate(keep)}
    edges = tuple(sorted((index[a], index[b], k) for (a, b), k in pairs.items()
                         if a in alive and b in alive and k))
    perm = tuple(index[iota.get(v, v)] for v in keep)
    return DualGraph(tuple(selfs[v] for v in keep), edges, tuple(names[v] for v in keep)), perm


@dataclass(frozen=True)
class ResolutionResult:
    kind: str
    n: int
    dual_graph: DualGraph
    m: int  # branch exceptional curves downstairs
    iota_permutation: tuple[int, ...]  # on catalog-ordered Dynkin nodes
    catalog_order: tuple[int, ...]  # graph node for each catalog index
    steps: int

    @property
    def iota(self) -> Literal["identity", "flip"]:
        return "identity" if all(i == p for i, p in enumerate(self.iota_permutation)) else "flip"

    @property
    def cartan_matches(self) -> bool:
        m = [[-x for x in row] for row in self.dual_graph.intersection_matrix()]
        want = cartan_matrix(self.kind, self.n)
        order = self.catalog_order
        return len(order) == self.n and all(
            m[order[i]][order[j]] == want[i][j] for i in range(self.n) for j in range(self.n))

    def to_json(self) -> dict:
        return {"type": f"{self.kind}{self.n}", "dual_graph": self.dual_graph.to_json(), "m": self.m,
                "iota": self.iota, "iota_permutation": list(self.iota_permutation)}


def resolve(kind: str, n: int | None = None) -> ResolutionResult:
    if n is None:
        kind, n = parse_type(kind)
    germ = ade_germ(kind, n)
    kind, n = parse_type(f"{kind}{n}")
    st = initial_state(germ, n)
    cap = 4 * n
    while st.worklist:
        blowup_step(st)
        st.check_parity()
        if st.steps > cap:
            raise ResolutionError(f"no termination within {cap} blowups")
    st.check_parity()
    m = sum(c.branch for c in st.curves)
    graph, graph_iota = _contract(*_lift(st))
    cartan = [[-x for x in row] for row in graph.intersection_matrix()]
    comps = cartan_components(cartan)
    if len(comps) != 1 or comps[0][0] != f"{kind}{n}":
        got = ", ".join(t for t, _ in comps)
        raise ResolutionError(f"dual graph is {got or 'empty'}, expected {kind}{n}")
    order = comps[0][1]
    pos = {v: i for i, v in enumerate(order)}
    perm = tuple(pos[graph_iota[v]] for v in order)
    return ResolutionResult(kind, n, graph, m, perm, tuple(order), st.steps)


def branch_curve_count(kind: str, n: int) -> int:
    """Closed form for the number of branch exceptional curves."""
    if kind == "A":
        return 0
    if kind == "D":
        return (n - 2) // 2
    return {6: 1, 7: 3, 8: 4}[n]
