"""Walk matrices, generalized-spectrum fingerprints and membership in F_n."""
from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph, adjacency_matrix, complement
from .linalg import IntMatrix, char_poly, det, invariant_factors, matmul, transpose


class DegenerateOrder(ValueError):
    pass


def ceil_half(n: int) -> int:
    return (n + 1) // 2


def _neighbour_sums(g: Graph, v: list[int]) -> list[int]:
    # A @ v via the bitmask rows
    out = []
    for r in g.rows:
        s = 0
        j = 0
        while r:
            if r & 1:
                s += v[j]
            r >>= 1
            j += 1
        out.append(s)
    return out


def walk_columns(g: Graph, count: int, start: list[int] | None = None) -> list[list[int]]:
    """``[v, Av, ..., A^(count-1) v]`` with ``v = e`` by default."""
    v = [1] * g.n if start is None else list(start)
    cols = []
    for _ in range(count):
        cols.append(v)
        v = _neighbour_sums(g, v)
    return cols


def walk_matrix(g: Graph) -> IntMatrix:
    return transpose(walk_columns(g, g.n))


def is_controllable(g: Graph) -> bool:
    return det(walk_matrix(g)) != 0


def m_matrix(g: Graph) -> IntMatrix:
    """The polynomial in ``A`` built from the even-index char-poly coefficients.

    Even n: ``A^(n/2) + c2 A^(n/2-1) + ... + c_n I``;
    odd n: ``A^((n+1)/2) + c2 A^((n-1)/2) + ... + c_(n-1) A``.
    ``M e`` is always even.
    """
    a = adjacency_matrix(g)
    n = g.n
    c = char_poly(a)
    top = ceil_half(n) if n % 2 else n // 2
    lowest = n % 2
    # Horner in A over the powers top, top-1, ..., lowest, then one more A for odd n
    m = [[0] * n for _ in range(n)]
    for i in range(top - lowest + 1):
        m = matmul(m, a)
        for k in range(n):
            m[k][k] += c[2 * i]
    if lowest:
        m = matmul(m, a)
    me = [sum(row) for row in m]
    assert all(x % 2 == 0 for x in me), "M(G) e is not even"
    return m


def w_hat(g: Graph) -> IntMatrix:
    """Columns ``e, ..., A^(h-1) e`` then ``Me/2, A Me/2, ..., A^(n-h-1) Me/2`` with ``h = ceil(n/2)``."""
    n = g.n
    h = ceil_half(n)
    first = walk_columns(g, h)
    me = [sum(row) for row in m_matrix(g)]
    second = walk_columns(g, n - h, [x // 2 for x in me])
    return transpose(first + second)


@dataclass(frozen=True)
class SpectralFingerprint:
    """Characteristic polynomials of ``A(G)`` and ``A(complement G)``."""

    phi_G: tuple[int, ...]
    phi_Gc: tuple[int, ...]


def fingerprint(g: Graph) -> SpectralFingerprint:
    return SpectralFingerprint(
        tuple(char_poly(adjacency_matrix(g))),
        tuple(char_poly(adjacency_matrix(complement(g)))),
    )


@dataclass
class FnClassification:
    controllable: bool
    d: list[int]
    d_mid: int | None
    d_penult: int | None
    in_Fn: bool
    degenerate_order: bool = False

    @property
    def d_n(self) -> int:
        return self.d[-1]


def classify_Fn(g: Graph, strict: bool = False) -> FnClassification:
    """F_n membership: controllable, ``d_ceil(n/2) = 1`` and ``d_(n-1) = 2`` (1-based).

    Order 1 has no ``d_(n-1)``; it is reported as not in F_n with
    ``degenerate_order`` set, or raises :class:`DegenerateOrder` when ``strict``.
    """
    w = walk_matrix(g)
    d = invariant_factors(w)
    controllable = d[-1] != 0
    n = g.n
    if n < 2:
        if strict:
            raise DegenerateOrder("F_n membership needs n >= 2")
        return FnClassification(controllable, d, None, None, False, True)
    d_mid = d[ceil_half(n) - 1]
    d_penult = d[n - 2]
    in_fn = controllable and d_mid == 1 and d_penult == 2
    return FnClassification(controllable, d, d_mid, d_penult, in_fn)
