"""Certifying generalized cospectral mates through regular rational orthogonal matrices."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Union

from .factor import Factorization, factorize
from .graph import Graph, Graph6Error, adjacency_matrix, canonical_form, emit_graph6, parse_graph6
from .linalg import (
    RatMatrix,
    SingularMatrix,
    det,
    identity,
    invariant_factors,
    level_of,
    matmul,
    matvec,
    rat_inverse,
    scale,
    to_int,
    transpose,
)
from .walk import SpectralFingerprint, classify_Fn, fingerprint, w_hat, walk_matrix

CHECKS = (
    "cospectral",
    "orthogonal",
    "regular",
    "conjugates",
    "level_divides_dn_hat",
    "level_admissible",
)


class OrderMismatch(ValueError):
    pass


class NotControllable(ValueError):
    pass


class VerificationFailed(ArithmeticError):
    pass


class NotInFn(ValueError):
    pass


class IncompleteFactorization(ArithmeticError):
    def __init__(self, message: str, report: BoundReport | None = None):
        super().__init__(message)
        self.report = report


class ContradictionReport(RuntimeError):
    """A finding that contradicts a result the search relies on."""

    def __init__(self, message: str, certificates: list[MateCertificate] | None = None):
        super().__init__(message)
        self.certificates = certificates or []


# ------------------------------------------------------------ spectra


def is_generalized_cospectral(g: Graph, h: Graph) -> bool:
    if g.n != h.n:
        raise OrderMismatch(f"orders differ: {g.n} vs {h.n}")
    return fingerprint(g) == fingerprint(h)


def _orthogonal_checks(q: RatMatrix, a_g, a_h) -> dict[str, bool]:
    n = len(q)
    qt = transpose(q)
    return {
        "orthogonal": matmul(qt, q) == identity(n),
        "regular": matvec(q, [1] * n) == [1] * n,
        "conjugates": matmul(matmul(qt, a_g), q) == a_h,
    }


def regular_orthogonal_Q(g: Graph, h: Graph) -> RatMatrix:
    """``W(G) W(H)^-1``, verified to be regular, orthogonal and to conjugate ``A(G)`` to ``A(H)``."""
    if g.n != h.n:
        raise OrderMismatch(f"orders differ: {g.n} vs {h.n}")
    wg, wh = walk_matrix(g), walk_matrix(h)
    if det(wg) == 0:
        raise NotControllable("first graph is not controllable")
    try:
        wh_inv = rat_inverse(wh)
    except SingularMatrix:
        raise NotControllable("second graph is not controllable") from None
    q = matmul(wg, wh_inv)
    failed = [k for k, ok in _orthogonal_checks(q, adjacency_matrix(g), adjacency_matrix(h)).items() if not ok]
    if failed:
        raise VerificationFailed(f"Q fails: {', '.join(failed)}")
    return q


# ------------------------------------------------------ levels & bound


def admissible_levels_from(factorization: Factorization) -> list[int]:
    """Every ``l`` with ``ord_p(l) <= k_p - 1`` for each ``p^k_p`` in the factorization."""
    choices = [[p**e for e in range(k)] for p, k in factorization.factors.items()]
    levels = []
    for combo in itertools.product(*choices):
        x = 1
        for f in combo:
            x *= f
        levels.append(x)
    return sorted(levels)


@dataclass
class BoundReport:
    dn: int
    factorization: Factorization
    admissible: list[int] | None
    bound: int | None

    def to_json(self) -> dict:
        f = self.factorization
        return {
            "dn": str(self.dn),
            "factorization": {str(p): k for p, k in f.factors.items()},
            "factorization_complete": f.complete,
            "unfactored_cofactor": str(f.cofactor),
            "admissible_levels": None if self.admissible is None else [str(x) for x in self.admissible],
            "bound": self.bound,
        }


def mate_bound(g: Graph) -> BoundReport:
    cls = classify_Fn(g)
    if not cls.in_Fn:
        raise NotInFn("graph is not in F_n")
    f = factorize(cls.d_n)
    if not f.complete:
        report = BoundReport(cls.d_n, f, None, None)
        raise IncompleteFactorization(f"could not fully factor d_n = {cls.d_n}", report)
    levels = admissible_levels_from(f)
    return BoundReport(cls.d_n, f, levels, len(levels) - 1)


def admissible_levels(g: Graph) -> list[int]:
    return mate_bound(g).admissible


# -------------------------------------------------------- certificates


@dataclass
class MateCertificate:
    mate: Graph
    Q: RatMatrix | None
    level: int | None
    checks: dict[str, bool | None] = field(default_factory=lambda: dict.fromkeys(CHECKS))
    isomorphic: bool | None = None

    @property
    def accepted(self) -> bool:
        """All applicable checks pass; ``None`` marks a check that does not apply."""
        return bool(self.checks["cospectral"]) and all(v is not False for v in self.checks.values())

    def to_json(self) -> dict:
        return {
            "mate_g6": emit_graph6(self.mate),
            "level": None if self.level is None else str(self.level),
            "checks": dict(self.checks),
            "q_denominator_lcm": None if self.Q is None else str(level_of(self.Q)),
            "isomorphic": self.isomorphic,
            "accepted": self.accepted,
        }


class MateVerifier:
    """Per-graph context for repeated mate verification against one ``g``.

    With ``allow_uncontrollable`` an uncontrollable ``g`` is accepted; its
    certificates then only witness generalized cospectrality (no ``Q``).
    """

    def __init__(self, g: Graph, allow_uncontrollable: bool = False):
        self.g = g
        self.a = adjacency_matrix(g)
        self.w = walk_matrix(g)
        self.fingerprint: SpectralFingerprint = fingerprint(g)
        self.canonical = canonical_form(g)
        self.controllable = det(self.w) != 0
        if not self.controllable and not allow_uncontrollable:
            raise NotControllable("graph is not controllable")
        self.classification = classify_Fn(g)
        self.in_fn = self.classification.in_Fn
        self.dn_hat = invariant_factors(w_hat(g))[-1] if self.controllable else None
        self.bound: BoundReport | None = None
        if self.in_fn:
            try:
                self.bound = mate_bound(g)
            except IncompleteFactorization as exc:
                self.bound = exc.report

    def verify(self, h: Graph) -> MateCertificate:
        cert = MateCertificate(h, None, None)
        if h.n != self.g.n or fingerprint(h) != self.fingerprint:
            cert.checks["cospectral"] = False
            return cert
        cert.checks["cospectral"] = True
        cert.isomorphic = canonical_form(h) == self.canonical
        if not self.controllable:
            return cert
        try:
            wh_inv = rat_inverse(walk_matrix(h))
        except SingularMatrix:
            # impossible for a genuine mate of a controllable graph
            for key in ("orthogonal", "regular", "conjugates"):
                cert.checks[key] = False
            return cert
        q = matmul(self.w, wh_inv)
        cert.Q = q
        cert.level = level_of(q)
        cert.checks.update(_orthogonal_checks(q, self.a, adjacency_matrix(h)))
        cert.checks["level_divides_dn_hat"] = self.dn_hat % cert.level == 0
        if self.bound is not None and self.bound.admissible is not None:
            cert.checks["level_admissible"] = cert.level in self.bound.admissible
        return cert


def verify_mate(g: Graph, h: Graph) -> MateCertificate:
    return MateVerifier(g).verify(h)


# -------------------------------------------------------------- search


def search_mates(
    g: Graph,
    candidates: Iterable[Union[Graph, str]],
    on_error: Callable[[Graph6Error], None] | None = None,
) -> list[MateCertificate]:
    """Certified mates of ``g`` among ``candidates``, one per isomorphism class.

    Candidates may be graphs or graph6 lines; a decode error carries its
    1-based position in the stream and is raised unless ``on_error`` is given.
    Cheap filters run first: order, edge count, then the full fingerprint.
    Raises :class:`ContradictionReport` when a cospectral non-isomorphic
    candidate fails certification, or when two mates of an F_n graph share a
    level.
    """
    ctx = MateVerifier(g, allow_uncontrollable=True)
    edges = g.edge_count
    seen = {ctx.canonical}
    found: list[MateCertificate] = []
    levels = {1: None}
    for index, item in enumerate(candidates, start=1):
        if isinstance(item, str):
            if not item.strip():
                continue
            try:
                h = parse_graph6(item)
            except ValueError as exc:
                err = Graph6Error(str(exc).split(" (")[0], getattr(exc, "position", None), index)
                if on_error is None:
                    raise err from None
                on_error(err)
                continue
        else:
            h = item
        if h.n != g.n or h.edge_count != edges:
            continue
        if fingerprint(h) != ctx.fingerprint:
            continue
        cf = canonical_form(h)
        if cf in seen:
            continue
        cert = ctx.verify(h)
        if not cert.accepted:
            raise ContradictionReport(
                f"candidate {index} ({emit_graph6(h)}) is cospectral but fails {_failed(cert)}",
                found + [cert],
            )
        if ctx.controllable and cert.level in levels:
            other = levels[cert.level]
            what = "g itself" if other is None else emit_graph6(other.mate)
            if cert.level == 1 or ctx.in_fn:
                raise ContradictionReport(
                    f"candidate {index} ({emit_graph6(h)}) shares level {cert.level} with {what}",
                    found + [cert],
                )
        seen.add(cf)
        found.append(cert)
        if cert.level is not None:
            levels.setdefault(cert.level, cert)
    if ctx.bound is not None and ctx.bound.bound is not None and len(found) > ctx.bound.bound:
        raise ContradictionReport(f"{len(found)} mates exceed the bound {ctx.bound.bound}", found)
    return found


def _failed(cert: MateCertificate) -> str:
    return ", ".join(k for k, v in cert.checks.items() if v is False)


# --------------------------------------------------------- diagnostics


def _ord(p: int, x: int) -> int:
    if x == 0:
        return 10**9
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


@dataclass
class ColumnDiagnostics:
    level: int
    prime_powers: list[tuple[int, int]]
    ok: bool
    violation: str | None = None


def q_column_diagnostics(q: RatMatrix) -> ColumnDiagnostics:
    """Congruences of the columns ``v_i`` of ``level * Q`` for each ``p^k || level``.

    Checks ``v_i.v_j = 0 (mod p^2k)``, ``p^2k || v_i.v_i`` and ``p^k || v_i.e``.
    """
    n = len(q)
    qt = transpose(q)
    if matmul(qt, q) != identity(n) or matvec(q, [1] * n) != [1] * n:
        raise ValueError("Q must be regular and orthogonal")
    lvl = level_of(q)
    qbar = to_int(scale(q, lvl))
    cols = transpose(qbar)
    gram = [[sum(x * y for x, y in zip(u, v)) for v in cols] for u in cols]
    sums = [sum(v) for v in cols]
    powers = list(factorize(lvl).factors.items())
    for p, k in powers:
        for i, j in itertools.product(range(n), repeat=2):
            if gram[i][j] % p ** (2 * k):
                return ColumnDiagnostics(lvl, powers, False, f"v{i}.v{j} not 0 mod {p}^{2 * k}")
        for i in range(n):
            if _ord(p, gram[i][i]) != 2 * k:
                return ColumnDiagnostics(lvl, powers, False, f"ord_{p}(v{i}.v{i}) != {2 * k}")
            if _ord(p, sums[i]) != k:
                return ColumnDiagnostics(lvl, powers, False, f"ord_{p}(v{i}.e) != {k}")
    return ColumnDiagnostics(lvl, powers, True)


def columns_aligned(q: RatMatrix, w: list[int], p: int, k: int) -> bool:
    """Every column of ``level * Q`` is a multiple of ``w`` modulo ``p^k``."""
    pk = p**k
    lvl = level_of(q)
    i0 = next(i for i, x in enumerate(w) if x % p)
    inv = pow(w[i0], -1, pk)
    for col in transpose(to_int(scale(q, lvl))):
        c = col[i0] * inv % pk
        if any((x - c * y) % pk for x, y in zip(col, w)):
            return False
    return True
