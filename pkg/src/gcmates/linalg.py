"""Exact dense linear algebra over the integers and rationals.

Matrices are plain row-major ``list[list[int]]`` (or ``list[list[Fraction]]``);
Python integers give arbitrary precision and ``Fraction`` keeps entries in
lowest terms with positive denominators.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .factor import is_prime

IntMatrix = list[list[int]]
RatMatrix = list[list[Fraction]]
Matrix = Union[IntMatrix, RatMatrix]


class SingularMatrix(ArithmeticError):
    pass


class PreconditionViolated(ValueError):
    pass


# ------------------------------------------------------------- basics


def shape(m: Sequence[Sequence]) -> tuple[int, int]:
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if any(len(r) != cols for r in m):
        raise ValueError("ragged matrix")
    return rows, cols


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def diag(values: Sequence[int]) -> IntMatrix:
    n = len(values)
    return [[values[i] if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> IntMatrix:
    return [[0] * cols for _ in range(rows)]


def transpose(m: Matrix) -> Matrix:
    return [list(col) for col in zip(*m)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Matrix, v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def scale(m: Matrix, c) -> Matrix:
    return [[c * x for x in row] for row in m]


def is_integral(m: Matrix) -> bool:
    return all(getattr(x, "denominator", 1) == 1 for row in m for x in row)


def to_int(m: Matrix) -> IntMatrix:
    if not is_integral(m):
        raise ValueError("matrix has non-integral entries")
    return [[int(x) for x in row] for row in m]


def level_of(q: Matrix) -> int:
    """Least positive integer ``l`` with ``l * q`` integral."""
    lvl = 1
    for row in q:
        for x in row:
            lvl = math.lcm(lvl, getattr(x, "denominator", 1))
    return lvl


# -------------------------------------------------- determinant & inverse


def det(m: IntMatrix) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    n, cols = shape(m)
    if n != cols:
        raise ValueError("det needs a square matrix")
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
            ri[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def rat_inverse(m: Matrix) -> RatMatrix:
    """Exact inverse by Gauss-Jordan over the rationals."""
    n, cols = shape(m)
    if n != cols:
        raise ValueError("inverse needs a square matrix")
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return [row[n:] for row in a]


# ------------------------------------------------------------- rank mod p


def rank_mod_p(m: IntMatrix, p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    a = [[x % p for x in row] for row in m]
    rows, cols = shape(a)
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(r + 1, rows):
            f = a[i][c]
            if f:
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return r


# ------------------------------------------------------ characteristic poly


def char_poly(m: IntMatrix) -> list[int]:
    """Coefficients ``[1, c1, ..., cn]`` of ``det(xI - m)``.

    Faddeev-LeVerrier recurrence; every division by ``k`` is exact because
    the coefficients are integers.
    """
    n, cols = shape(m)
    if n != cols:
        raise ValueError("char_poly needs a square matrix")
    coeffs = [1]
    mk = zeros(n, n)  # M_0 = 0
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{k-1} I ; c_k = -tr(A M_k) / k
        mk = matmul(m, mk)
        for i in range(n):
            mk[i][i] += coeffs[-1]
        am = matmul(m, mk)
        tr = sum(am[i][i] for i in range(n))
        c, rem = divmod(-tr, k)
        assert rem == 0, "inexact Faddeev-LeVerrier division"
        coeffs.append(c)
    return coeffs


# ---------------------------------------------------------- Smith form


@dataclass
class SnfResult:
    """Invariant factors ``d`` with ``U @ diag(d) @ V == M``; ``V_inv`` is ``V**-1``."""

    d: list[int]
    U: IntMatrix
    V: IntMatrix
    V_inv: IntMatrix


def snf(m: IntMatrix) -> SnfResult:
    """Smith normal form with unimodular transforms of a square integer matrix.

    Elimination with smallest-absolute-value pivots. Row operations applied
    to the working matrix are mirrored as inverse column operations on ``U``,
    column operations as inverse row operations on ``V`` (and directly on
    ``V_inv``), so ``U @ S @ V == M`` holds throughout.
    """
    n, cols = shape(m)
    if n != cols:
        raise ValueError("snf needs a square matrix")
    a = [list(map(int, row)) for row in m]
    U, V, Vi = identity(n), identity(n), identity(n)

    def row_add(dst: int, src: int, q: int) -> None:
        # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        for r in U:
            r[src] -= q * r[dst]

    def row_swap(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        for r in U:
            r[i], r[j] = r[j], r[i]

    def row_neg(i: int) -> None:
        a[i] = [-x for x in a[i]]
        for r in U:
            r[i] = -r[i]

    def col_add(dst: int, src: int, q: int) -> None:
        # col_dst += q * col_src
        for r in a:
            r[dst] += q * r[src]
        V[src] = [x - q * y for x, y in zip(V[src], V[dst])]
        for r in Vi:
            r[dst] += q * r[src]

    def col_swap(i: int, j: int) -> None:
        for r in a:
            r[i], r[j] = r[j], r[i]
        V[i], V[j] = V[j], V[i]
        for r in Vi:
            r[i], r[j] = r[j], r[i]

    for t in range(n):
        while True:
            piv = None
            for i in range(t, n):
                for j in range(t, n):
                    x = a[i][j]
                    if x and (piv is None or abs(x) < abs(a[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                break  # remaining block is zero
            row_swap(t, piv[0])
            col_swap(t, piv[1])
            p = a[t][t]
            dirty = False
            for i in range(t + 1, n):
                if a[i][t]:
                    row_add(i, t, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, n):
                if a[t][j]:
                    col_add(j, t, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next((i for i in range(t + 1, n)
                        if any(a[i][j] % p for j in range(t + 1, n))), None)
            if bad is None:
                break
            row_add(t, bad, 1)
        if a[t][t] < 0:
            row_neg(t)
    d = [a[i][i] for i in range(n)]
    # zero factors are already last: a zero block ends the sweep
    return SnfResult(d, U, V, Vi)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    # prefer the trivial combination so a pivot that already divides b stays put
    if a and b % a == 0:
        return a, 1, 0
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def invariant_factors(m: IntMatrix) -> list[int]:
    """Invariant factors only; much faster than :func:`snf` for nonsingular input.

    With ``D = |det m|`` the column lattice of ``m`` contains ``D * Z^n``, so
    the elimination runs modulo the determinant ``R`` of the block still to
    be reduced, which keeps entries below ``D``. Singular input falls back to
    :func:`snf`.
    """
    n, cols = shape(m)
    if n != cols:
        raise ValueError("invariant_factors needs a square matrix")
    D = abs(det(m))
    if D == 0:
        return snf(m).d
    R = D
    a = [[x % R for x in row] for row in m]
    d: list[int] = []
    for t in range(n):
        if R == 1:
            d.extend([1] * (n - t))
            break
        while True:
            for i in range(t + 1, n):
                if a[i][t]:
                    g, x, y = _xgcd(a[t][t], a[i][t])
                    u, v = a[t][t] // g, a[i][t] // g
                    rt, ri = a[t], a[i]
                    a[t] = [(x * p + y * q) % R for p, q in zip(rt, ri)]
                    a[i] = [(u * q - v * p) % R for p, q in zip(rt, ri)]
            for j in range(t + 1, n):
                if a[t][j]:
                    g, x, y = _xgcd(a[t][t], a[t][j])
                    u, v = a[t][t] // g, a[t][j] // g
                    for r in a[t:]:
                        p, q = r[t], r[j]
                        r[t], r[j] = (x * p + y * q) % R, (u * q - v * p) % R
            if any(a[i][t] for i in range(t + 1, n)):
                continue
            g = math.gcd(a[t][t], R)
            bad = next((i for i in range(t + 1, n)
                        if any(a[i][j] % g for j in range(t + 1, n))), None)
            if bad is None:
                break
            a[t] = [(p + q) % R for p, q in zip(a[t], a[bad])]
        d.append(g)
        R //= g
        for i in range(t + 1, n):
            a[i] = [x % R for x in a[i]]
    return d


# ------------------------------------------------- kernels mod p^k


def kernel_mod_prime_power(m: IntMatrix, p: int, k: int) -> list[int]:
    """Generator ``w`` of the solutions of ``m v = 0 (mod p^k)``.

    Needs ``m`` nonsingular with ``p^k | d_n(m)`` and ``rank_p(m) = n - 1``;
    then the solution module is cyclic and spanned by the last column of
    ``V^-1`` from ``m = U S V``. ``w`` is reduced into ``[0, p^k)`` and scaled
    so that its first entry not divisible by ``p`` equals 1.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1:
        raise ValueError("k must be >= 1")
    n, cols = shape(m)
    if n != cols:
        raise ValueError("kernel_mod_prime_power needs a square matrix")
    res = snf(m)
    pk = p**k
    if res.d[-1] == 0:
        raise PreconditionViolated("matrix is singular")
    if res.d[-1] % pk:
        raise PreconditionViolated(f"{p}^{k} does not divide d_n = {res.d[-1]}")
    if sum(1 for x in res.d if x % p) != n - 1:
        raise PreconditionViolated(f"rank mod {p} is not n - 1")
    w = [row[-1] % pk for row in res.V_inv]
    lead = next(x for x in w if x % p)
    inv = pow(lead, -1, pk)
    return [x * inv % pk for x in w]
