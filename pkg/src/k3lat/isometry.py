"""Deciding isomorphism of even lattices.

Indefinite lattices are decided through the genus when Nikulin's uniqueness
criterion applies. Definite lattices of small rank are decided by an
exhaustive isometry search seeded with an LLL-reduced basis.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Literal

from . import linalg
from .forms import DEFAULT_CAP, CapExceeded, FiniteQuadraticForm, compare_discriminant_forms, discriminant_group
from .lattice import Lattice, signature

Verdict = Literal["yes", "no", "unknown"]

DEFINITE_RANK_CAP = 10


@dataclass(frozen=True)
class GenusDescriptor:
    sig_plus: int
    sig_minus: int
    form: FiniteQuadraticForm


def genus(lat: Lattice) -> GenusDescriptor:
    p, q = signature(lat)
    return GenusDescriptor(p, q, discriminant_group(lat))


def same_genus(g1: GenusDescriptor, g2: GenusDescriptor, cap: int = DEFAULT_CAP) -> bool:
    """Equal signatures and isometric discriminant forms (may raise CapExceeded)."""
    if (g1.sig_plus, g1.sig_minus) != (g2.sig_plus, g2.sig_minus):
        return False
    return compare_discriminant_forms(g1.form, g2.form, cap)


def lattices_isomorphic(l1: Lattice, l2: Lattice, cap: int = DEFAULT_CAP) -> Verdict:
    if l1.rank != l2.rank or l1.det != l2.det:
        return "no"
    g1, g2 = genus(l1), genus(l2)
    try:
        if not same_genus(g1, g2, cap):
            return "no"
    except CapExceeded:
        return "unknown"
    p, q = g1.sig_plus, g1.sig_minus
    if p >= 1 and q >= 1:
        if l1.rank >= g1.form.length + 2:
            return "yes"
        return "unknown"
    if l1.rank <= DEFINITE_RANK_CAP:
        return "yes" if definite_isometry(l1, l2) is not None else "no"
    return "unknown"


def _positive(gram) -> list[list[int]]:
    if gram and gram[0][0] < 0:
        return [[-x for x in row] for row in gram]
    return [list(row) for row in gram]


def definite_isometry(l1: Lattice, l2: Lattice) -> list[list[int]] | None:
    """An integral matrix ``T`` with ``T G2 T^T = G1``, or None.

    Row ``i`` of ``T`` is the image of the ``i``-th basis vector of ``l1`` in
    coordinates of ``l2``. Both lattices must be definite of the same sign.
    """
    a1, a2 = _positive(l1.gram), _positive(l2.gram)
    if (l1.gram and l1.gram[0][0] < 0) != (l2.gram and l2.gram[0][0] < 0):
        return None
    n = len(a1)
    if n == 0:
        return []
    red = linalg.lll(a1)
    b1 = linalg.congruence(red, a1)
    bound = max(b1[i][i] for i in range(n))

    def short(a):
        out = {}
        for x in linalg.fincke_pohst(a, bound):
            if any(x):
                out.setdefault(linalg.bilinear(a, x, x), []).append(x)
        return out

    s1, s2 = short(a1), short(a2)
    if Counter({k: len(v) for k, v in s1.items()}) != Counter({k: len(v) for k, v in s2.items()}):
        return None
    chosen: list[tuple[int, ...]] = []

    def extend(i: int) -> bool:
        if i == n:
            return abs(linalg.det(chosen)) == 1
        for y in s2.get(b1[i][i], ()):
            if all(linalg.bilinear(a2, y, chosen[j]) == b1[i][j] for j in range(i)):
                chosen.append(y)
                if extend(i + 1):
                    return True
                chosen.pop()
        return False

    if not extend(0):
        return None
    # images of the reduced basis; pull back to the original basis of l1
    red_inv = linalg.unimodular_inverse(red)
    return linalg.matmul(red_inv, chosen)
