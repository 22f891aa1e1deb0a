"""Roots, simple-root bases, the longest Weyl element and the involution -w0."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import isqrt
from typing import Sequence

from . import linalg
from .lattice import Lattice, LatticeError, Sublattice, cartan_matrix, dynkin_edges, make_sublattice, signature

# Weights 1, M, M^2, ... of the generic functional that picks positive roots.
FUNCTIONAL_BASE = 10**6 + 3

Root = tuple[int, ...]


class RootSystemError(ValueError):
    pass


# -- enumeration -------------------------------------------------------------------

def _require_negative_definite(lat: Lattice) -> None:
    if lat.rank and signature(lat) != (0, lat.rank):
        raise RootSystemError("lattice is not negative definite")


def enumerate_roots(lat: Lattice) -> list[Root]:
    """All vectors of square -2, by Fincke-Pohst on an LLL-reduced basis."""
    _require_negative_definite(lat)
    a = [[-x for x in row] for row in lat.gram]
    t = linalg.lll(a)
    reduced = linalg.congruence(t, a)
    out = []
    for y in linalg.fincke_pohst(reduced, 2):
        if any(y) and linalg.bilinear(reduced, y, y) == 2:
            out.append(tuple(sum(c * row[k] for c, row in zip(y, t)) for k in range(lat.rank)))
    return sorted(out)


def enumerate_roots_schur(lat: Lattice) -> list[Root]:
    """All vectors of square -2, by a forward search with Schur-complement bounds.

    Independent of :func:`enumerate_roots`: no basis reduction, coordinates are
    fixed first-to-last, and each prefix is pruned by the exact minimum of the
    form over all real completions.
    """
    _require_negative_definite(lat)
    n = lat.rank
    a = [[Fraction(-x) for x in row] for row in lat.gram]
    # schur[k] is the form on the first k coordinates after minimizing over the rest
    schur = []
    for k in range(n + 1):
        if k == n:
            schur.append(a)
            continue
        app = [row[:k] for row in a[:k]]
        apr = [row[k:] for row in a[:k]]
        arr_inv = linalg.inverse([row[k:] for row in a[k:]])
        corr = linalg.matmul(linalg.matmul(apr, arr_inv), linalg.transpose(apr))
        schur.append([[app[i][j] - corr[i][j] for j in range(k)] for i in range(k)])
    # clear denominators level by level so the search runs in integers
    scaled, scales = [], []
    for k in range(n + 1):
        den = linalg.common_denominator(schur[k]) if k else 1
        scaled.append([[int(v * den) for v in row] for row in schur[k]])
        scales.append(den)
    out: list[Root] = []
    x: list[int] = []

    def rec(k: int):
        if k == n:
            if any(x) and linalg.bilinear(a, x, x) == 2:
                out.append(tuple(x))
            return
        s, bound = scaled[k + 1], 2 * scales[k + 1]
        qa = s[k][k]
        qb = sum(s[k][j] * x[j] for j in range(k))
        qc = sum(s[i][j] * x[i] * x[j] for i in range(k) for j in range(k))
        # qa t^2 + 2 qb t + qc <= bound, a quadratic in t with qa > 0
        disc = qb * qb - qa * (qc - bound)
        if disc < 0:
            return
        root = isqrt(disc)
        for t in range((-qb - root) // qa - 1, (-qb + root) // qa + 2):
            if qa * t * t + 2 * qb * t + qc <= bound:
                x.append(t)
                rec(k + 1)
                x.pop()

    rec(0)
    return sorted(out)


# -- bases -------------------------------------------------------------------------

@dataclass(frozen=True)
class RootBase:
    lattice: Lattice
    simple_roots: tuple[Root, ...]
    cartan: tuple[tuple[int, ...], ...]
    # (type, indices into simple_roots listed in catalog node order)
    components: tuple[tuple[str, tuple[int, ...]], ...]

    @property
    def rank(self) -> int:
        return len(self.simple_roots)

    @property
    def types(self) -> list[str]:
        return [t for t, _ in self.components]

    def to_json(self) -> dict:
        return {
            "simple_roots": [list(r) for r in self.simple_roots],
            "components": [{"type": t, "indices": list(ix)} for t, ix in self.components],
        }


def _functional(v: Sequence[int]) -> int:
    return sum(c * FUNCTIONAL_BASE**i for i, c in enumerate(v))


def _connected_components(n: int, adj: dict[int, set[int]]) -> list[list[int]]:
    seen: set[int] = set()
    comps = []
    for s in range(n):
        if s in seen:
            continue
        stack, comp = [s], []
        seen.add(s)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in sorted(adj[v]):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def _walk(start: int, prev: int | None, adj: dict[int, set[int]]) -> list[int]:
    """Nodes along an unbranched arm, starting at ``start`` and moving away from ``prev``."""
    path = [start]
    while True:
        nxt = [w for w in adj[path[-1]] if w != (path[-2] if len(path) > 1 else prev)]
        if len(nxt) != 1 or len(adj[path[-1]]) > 2:
            return path
        path.append(nxt[0])


def identify_component(nodes: Sequence[int], cartan: Sequence[Sequence[int]]) -> tuple[str, tuple[int, ...]]:
    """ADE type of a connected simply-laced Cartan matrix and its nodes in catalog order."""
    adj = {v: {w for w in nodes if w != v and cartan[v][w] != 0} for v in nodes}
    for v in nodes:
        if cartan[v][v] != 2 or any(cartan[v][w] not in (0, -1) for w in nodes if w != v):
            raise RootSystemError("not a simply-laced Cartan matrix")
    n = len(nodes)
    if sum(len(s) for s in adj.values()) != 2 * (n - 1):
        raise RootSystemError("Dynkin graph is not a tree")
    branch = [v for v in nodes if len(adj[v]) >= 3]
    if not branch:
        ends = sorted(v for v in nodes if len(adj[v]) <= 1)
        order = _walk(ends[0], None, {v: adj[v] for v in nodes}) if n > 1 else [nodes[0]]
        kind = "A"
    elif len(branch) == 1 and len(adj[branch[0]]) == 3:
        c = branch[0]
        arms = sorted((_walk(w, c, adj) for w in adj[c]), key=lambda arm: (len(arm), arm[-1]))
        lengths = tuple(len(arm) for arm in arms)
        if lengths[:2] == (1, 1):
            kind = "D"
            # the longest arm (lowest endpoint on ties) carries nodes 1..n-3
            long_arm = min(arms, key=lambda arm: (-len(arm), arm[-1]))
            short = sorted(arm[0] for arm in arms if arm is not long_arm)
            order = long_arm[::-1] + [c] + short
        elif lengths in ((1, 2, 2), (1, 2, 3), (1, 2, 4)):
            kind = "E"
            short, mid, long_arm = arms
            order = [mid[1], short[0], mid[0], c] + long_arm
        else:
            raise RootSystemError(f"arm lengths {lengths} are not ADE")
    else:
        raise RootSystemError("Dynkin graph is not ADE")
    rank = len(order)
    expected = cartan_matrix(kind, rank)
    if any(cartan[order[i]][order[j]] != expected[i][j] for i in range(rank) for j in range(rank)):
        raise RootSystemError("component does not match the catalog")
    return f"{kind}{rank}", tuple(order)


def cartan_components(cartan: Sequence[Sequence[int]]) -> list[tuple[str, tuple[int, ...]]]:
    n = len(cartan)
    adj = {v: {w for w in range(n) if w != v and cartan[v][w] != 0} for v in range(n)}
    return [identify_component(c, cartan) for c in _connected_components(n, adj)]


def base_from_simple_roots(lat: Lattice, roots: Sequence[Sequence[int]]) -> RootBase:
    """Wrap given simple roots (in the given order) as a RootBase."""
    roots = tuple(tuple(r) for r in roots)
    for r in roots:
        if lat.norm(r) != -2:
            raise RootSystemError(f"{r} is not a root")
    cartan = tuple(tuple(-lat.pair(a, b) for b in roots) for a in roots)
    return RootBase(lat, roots, cartan, tuple(cartan_components(cartan)))


def classify_root_system(lat: Lattice, roots: Sequence[Sequence[int]]) -> RootBase:
    """Choose positive roots by a generic functional, extract the simple ones, and type them."""
    rset = {tuple(r) for r in roots}
    for r in rset:
        if lat.norm(r) != -2:
            raise RootSystemError(f"{r} does not have square -2")
        if tuple(-x for x in r) not in rset:
            raise RootSystemError("root set is not closed under negation")
    positive = sorted((r for r in rset if _functional(r) > 0), key=_functional)
    pos_set = set(positive)
    simple = [r for r in positive
              if not any(tuple(a - b for a, b in zip(r, s)) in pos_set for s in positive if s != r)]
    return base_from_simple_roots(lat, simple)


def simple_roots(lat: Lattice) -> RootBase:
    return classify_root_system(lat, enumerate_roots(lat))


# -- Weyl group ----------------------------------------------------------------------

def reflection_matrix(lat: Lattice, r: Sequence[int]) -> list[list[int]]:
    """Matrix of ``s_r(x) = x + (x.r) r`` acting on coordinate columns."""
    gr = linalg.matvec(lat.gram, r)
    n = lat.rank
    return [[int(i == j) + r[i] * gr[j] for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class InvolutionData:
    base: RootBase
    permutation: tuple[int, ...]  # -w0(r_i) = r_{permutation[i]}
    matrix: tuple[tuple[int, ...], ...]  # iota = -w0 on lattice coordinates (columns)
    word: tuple[int, ...]  # reduced word of w0 in simple reflections

    @property
    def is_trivial(self) -> bool:
        return all(i == p for i, p in enumerate(self.permutation))

    def apply(self, v: Sequence) -> tuple:
        return tuple(linalg.matvec(self.matrix, v))


def longest_element(base: RootBase) -> InvolutionData:
    """w0 by walking a strictly dominant vector to its antidominant image."""
    lat = base.lattice
    k = base.rank
    c = [1] * k  # pairings of the moving vector with the simple roots
    word = []
    while True:
        i = next((j for j in range(k) if c[j] > 0), None)
        if i is None:
            break
        ci = c[i]
        c = [c[j] - ci * base.cartan[i][j] for j in range(k)]
        word.append(i)
    w = linalg.identity(lat.rank)
    for i in word:
        w = linalg.matmul(reflection_matrix(lat, base.simple_roots[i]), w)
    iota = [[-x for x in row] for row in w]
    index = {r: i for i, r in enumerate(base.simple_roots)}
    perm = []
    for r in base.simple_roots:
        img = tuple(linalg.matvec(iota, r))
        if img not in index:
            raise RootSystemError("-w0 does not permute the simple roots")
        perm.append(index[img])
    return InvolutionData(base, tuple(perm), tuple(map(tuple, iota)), tuple(word))


def invariant_sublattices(lat: Lattice, iota: InvolutionData | Sequence[Sequence[int]]) -> tuple[Sublattice, Sublattice]:
    """Kernels of ``iota - 1`` and ``iota + 1`` as primitive sublattices."""
    m = iota.matrix if isinstance(iota, InvolutionData) else iota
    n = lat.rank
    plus = linalg.kernel([[m[i][j] - (i == j) for j in range(n)] for i in range(n)])
    minus = linalg.kernel([[m[i][j] + (i == j) for j in range(n)] for i in range(n)])
    inv = make_sublattice(lat, plus, [f"p{i + 1}" for i in range(len(plus))])
    anti = make_sublattice(lat, minus, [f"m{i + 1}" for i in range(len(minus))])
    return inv, anti


def index_of_sum(lat: Lattice, iota: InvolutionData | Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Invariant factors of ``L / (L^iota + L^-iota)``."""
    inv, anti = invariant_sublattices(lat, iota)
    rows = [list(b) for b in inv.basis] + [list(b) for b in anti.basis]
    return tuple(x for x in linalg.invariant_factors(rows) if x > 1)


def fundamental_weights(base: RootBase) -> list[tuple[Fraction, ...]]:
    """Dual vectors with ``lambda_i . r_j = delta_ij`` (negated inverse Cartan columns)."""
    cinv = linalg.inverse(base.cartan)
    n = base.lattice.rank
    out = []
    for i in range(base.rank):
        v = [Fraction(0)] * n
        for j, r in enumerate(base.simple_roots):
            for t in range(n):
                v[t] -= cinv[i][j] * r[t]
        out.append(tuple(v))
    return out


def z2_independence(config, cap: int = 20) -> bool:
    """Every sum of at most ``l' - 1`` distinct component classes is non-integral.

    ``config`` must provide ``betas()``, the classes in coordinates of
    ``<H> + L``.
    """
    betas = config.betas()
    count = len(betas)
    if count > cap:
        raise LatticeError(f"{count} components exceed the search cap {cap}")
    for size in range(1, count):
        for subset in combinations(betas, size):
            total = [sum(col) for col in zip(*subset)]
            if all(Fraction(x).denominator == 1 for x in total):
                return False
    return True


# -- catalog helpers ---------------------------------------------------------------

def standard_base(lat: Lattice) -> RootBase:
    """The basis vectors of an ADE lattice from :func:`~k3lat.lattice.ade` as a base."""
    n = lat.rank
    return base_from_simple_roots(lat, [tuple(int(i == j) for j in range(n)) for i in range(n)])


def positive_root_count(kind: str, n: int) -> int:
    return {"A": n * (n + 1) // 2, "D": n * (n - 1), "E": {6: 36, 7: 63, 8: 120}.get(n, 0)}[kind]


__all__ = [
    "RootBase", "InvolutionData", "enumerate_roots", "enumerate_roots_schur", "classify_root_system",
    "simple_roots", "longest_element", "invariant_sublattices", "index_of_sum",
    "fundamental_weights", "z2_independence", "reflection_matrix", "base_from_simple_roots",
    "standard_base", "cartan_components", "dynkin_edges",
]
