"""Exact integer and rational matrix routines.

Matrices are lists of rows. Integer routines never leave ``int``; rational
routines use :class:`fractions.Fraction`. Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Iterator, Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)] if a else []


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def bilinear(gram: Sequence[Sequence], u: Sequence, v: Sequence):
    """Return ``u^T gram v``."""
    return sum(ui * sum(g * vj for g, vj in zip(row, v)) for ui, row in zip(u, gram) if ui)


def congruence(basis: Sequence[Sequence], gram: Sequence[Sequence]) -> list[list]:
    """Gram matrix of the rows of ``basis`` under ``gram``."""
    images = [matvec(gram, b) for b in basis]
    return [[sum(x * y for x, y in zip(b, img)) for img in images] for b in basis]


def det(a: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by Bareiss elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def det_rational(a: Sequence[Sequence]) -> Fraction:
    rows = [[Fraction(x) for x in row] for row in a]
    den = 1
    for row in rows:
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
    scaled = [[int(x * den) for x in row] for row in rows]
    return Fraction(det(scaled), den ** len(rows))


def inverse(a: Sequence[Sequence]) -> list[list[Fraction]]:
    """Inverse over the rationals; raises ``ZeroDivisionError`` if singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def solve_rows(basis: Sequence[Sequence], target: Sequence) -> list[Fraction] | None:
    """Coefficients ``c`` with ``sum c_i basis_i == target``, or None.

    ``basis`` rows must be linearly independent.
    """
    k = len(basis)
    n = len(target)
    # augmented system: columns are basis rows
    m = [[Fraction(basis[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(n)]
    row = 0
    pivots = []
    for col in range(k):
        piv = next((r for r in range(row, n) if m[r][col] != 0), None)
        if piv is None:
            raise ValueError("basis rows are dependent")
        m[row], m[piv] = m[piv], m[row]
        p = m[row][col]
        m[row] = [x / p for x in m[row]]
        for r in range(n):
            if r != row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[row])]
        pivots.append(row)
        row += 1
    if any(m[r][k] != 0 for r in range(row, n)):
        return None
    return [m[r][k] for r in pivots]


def rank(a: Sequence[Sequence]) -> int:
    m = [[Fraction(x) for x in row] for row in a]
    r = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, len(m)):
            if m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
    return r


def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(D, U, V)`` with ``U @ a @ V == D`` and ``U``, ``V`` unimodular.

    ``D`` is diagonal with nonnegative entries, each dividing the next.
    Pivots are chosen by minimal absolute value to keep entries small.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(row) for row in a]
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        if f:
            d[dst] = [x + f * y for x, y in zip(d[dst], d[src])]
            u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        if f:
            for row in d:
                row[dst] += f * row[src]
            for row in v:
                row[dst] += f * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = d[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best and best[0] == 1:
                    break
            if best is None:
                return d, u, v
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            p = d[t][t]
            clean = True
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // p))
                    clean = clean and d[i][t] == 0
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // p))
                    clean = clean and d[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    return d, u, v


def invariant_factors(a: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal of the Smith normal form (including ones)."""
    d, _, _ = smith_normal_form(a)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i]]


def kernel(a: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    """Basis (as rows) of the integer kernel ``{x : a x = 0}``; it is primitive."""
    if not a:
        return identity(ncols or 0)
    n = len(a[0])
    d, _, v = smith_normal_form(a)
    r = sum(1 for i in range(min(len(d), n)) if d[i][i])
    return [[v[i][j] for i in range(n)] for j in range(r, n)]


def row_basis(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """A basis of the Z-span of integer row vectors."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    d, _, v = smith_normal_form(rows)
    vinv = unimodular_inverse(v)
    r = sum(1 for i in range(min(len(d), len(d[0]))) if d[i][i])
    return [[d[i][i] * x for x in vinv[i]] for i in range(r)]


def saturate_rows(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """A basis of ``span_Q(rows) ∩ Z^n``."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    d, _, v = smith_normal_form(rows)
    vinv = unimodular_inverse(v)
    r = sum(1 for i in range(min(len(d), len(d[0]))) if d[i][i])
    return [list(vinv[i]) for i in range(r)]


def unimodular_inverse(a: Sequence[Sequence[int]]) -> Matrix:
    inv = inverse(a)
    out = [[int(x) for x in row] for row in inv]
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return out


def common_denominator(vectors: Sequence[Sequence]) -> int:
    den = 1
    for v in vectors:
        for x in v:
            q = Fraction(x).denominator
            den = den * q // gcd(den, q)
    return den


def rational_row_basis(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """A basis of the Z-span of rational row vectors."""
    den = common_denominator(rows)
    scaled = [[int(Fraction(x) * den) for x in r] for r in rows]
    return [[Fraction(x, den) for x in r] for r in row_basis(scaled)]


# -- inertia -------------------------------------------------------------------

def inertia(gram: Sequence[Sequence]) -> tuple[int, int, int]:
    """``(positive, negative, zero)`` counts by symmetric Gaussian elimination."""
    m = [[Fraction(x) for x in row] for row in gram]
    n = len(m)
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if m[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i < j and m[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # replace e_i by e_i + e_j, whose square is 2 m_ij != 0
            for k in range(n):
                m[i][k] += m[j][k]
            for k in range(n):
                m[k][i] += m[k][j]
            piv = i
        p = m[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for i in active:
            if m[i][piv] != 0:
                f = m[i][piv] / p
                for k in active:
                    m[i][k] -= f * m[piv][k]
                m[i][piv] = Fraction(0)
        for i in active:
            m[piv][i] = Fraction(0)
    return pos, neg, n - pos - neg


# -- reduction and enumeration in positive definite forms -----------------------

def lll(gram: Sequence[Sequence], delta: Fraction = Fraction(3, 4)) -> list[list[int]]:
    """LLL-reduce a positive definite Gram matrix.

    Returns the unimodular change of basis ``T`` (rows are the new basis vectors
    in old coordinates), so the reduced Gram matrix is ``T gram T^T``.
    """
    n = len(gram)
    g = [[Fraction(x) for x in row] for row in gram]
    t = identity(n)
    mu = [[Fraction(0)] * n for _ in range(n)]
    b = [Fraction(0)] * n

    def gso(k):
        for j in range(k):
            mu[k][j] = (g[k][j] - sum(mu[j][i] * mu[k][i] * b[i] for i in range(j))) / b[j]
        b[k] = g[k][k] - sum(mu[k][i] ** 2 * b[i] for i in range(k))

    def reduce(k, l):
        q = round(mu[k][l])
        if q:
            t[k] = [x - q * y for x, y in zip(t[k], t[l])]
            # g <- E g E^T with E = I - q e_k e_l^T
            for i in range(n):
                g[k][i] -= q * g[l][i]
            for i in range(n):
                g[i][k] -= q * g[i][l]
            for i in range(l):
                mu[k][i] -= q * mu[l][i]
            mu[k][l] -= q

    valid = 0
    k = 1
    while k < n:
        for i in range(valid, k + 1):
            gso(i)
        valid = k + 1
        reduce(k, k - 1)
        if b[k] < (delta - mu[k][k - 1] ** 2) * b[k - 1]:
            t[k], t[k - 1] = t[k - 1], t[k]
            g[k], g[k - 1] = g[k - 1], g[k]
            for row in g:
                row[k], row[k - 1] = row[k - 1], row[k]
            valid = k - 1
            k = max(k - 1, 1)
            continue
        for l in range(k - 2, -1, -1):
            reduce(k, l)
        k += 1
    return t


def _pohst_coefficients(gram: Sequence[Sequence]) -> list[list[Fraction]]:
    """Coefficients ``q`` with ``x^T A x = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2``."""
    n = len(gram)
    q = [[Fraction(x) for x in row] for row in gram]
    for i in range(n):
        if q[i][i] <= 0:
            raise ValueError("form is not positive definite")
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def _isqrt_ceil(r: Fraction) -> int:
    """An integer ``s >= sqrt(r)`` for ``r >= 0``."""
    return isqrt(r.numerator // r.denominator) + 1


def fincke_pohst(gram: Sequence[Sequence], bound, center: Sequence | None = None) -> Iterator[tuple[int, ...]]:
    """Yield integer ``x`` with ``(x + c)^T gram (x + c) <= bound``.

    ``gram`` must be positive definite; ``c`` defaults to zero, in which case
    the zero vector is included. Arithmetic is exact throughout.
    """
    n = len(gram)
    bound = Fraction(bound)
    if n == 0:
        if bound >= 0:
            yield ()
        return
    q = _pohst_coefficients(gram)
    c = [Fraction(x) for x in center] if center is not None else [Fraction(0)] * n
    x = [0] * n

    def rec(i: int, remaining: Fraction):
        s = c[i] + sum(q[i][j] * (x[j] + c[j]) for j in range(i + 1, n))
        r = remaining / q[i][i]
        rad = _isqrt_ceil(r)
        lo = int(-s - rad) - 1
        hi = int(-s + rad) + 1
        for v in range(lo, hi + 1):
            d = (v + s) ** 2
            if d > r:
                continue
            x[i] = v
            rest = remaining - q[i][i] * d
            if i == 0:
                yield tuple(x)
            else:
                yield from rec(i - 1, rest)
        x[i] = 0

    yield from rec(n - 1, bound)
