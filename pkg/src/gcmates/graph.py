"""Simple undirected graphs, the graph6 codec, canonical labeling and random graphs."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

MAX_ORDER = 64
MAX_GRAPH6_ORDER = 62


class Graph6Error(ValueError):
    """Malformed graph6 input. ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int | None = None, line: int | None = None):
        self.position = position
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"char {position}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


@dataclass(frozen=True)
class Graph:
    """Simple graph on vertices ``0..n-1``.

    ``rows[i]`` is a bitmask of the neighbours of ``i``.
    """

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_ORDER:
            raise ValueError(f"graph order must be in 1..{MAX_ORDER}, got {self.n}")
        if len(self.rows) != self.n:
            raise ValueError("rows length does not match n")
        full = (1 << self.n) - 1
        for i, r in enumerate(self.rows):
            if r & ~full:
                raise ValueError(f"row {i} has bits outside the vertex set")
            if (r >> i) & 1:
                raise ValueError(f"loop at vertex {i}")
            for j in _bits(r):
                if not (self.rows[j] >> i) & 1:
                    raise ValueError(f"asymmetric adjacency between {i} and {j}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        rows = [0] * n
        for i, j in edges:
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            rows[i] |= 1 << j
            rows[j] |= 1 << i
        return cls(n, tuple(rows))

    @classmethod
    def from_matrix(cls, a: list[list[int]]) -> Graph:
        n = len(a)
        if any(len(row) != n for row in a):
            raise ValueError("adjacency matrix must be square")
        rows = []
        for i, row in enumerate(a):
            mask = 0
            for j, x in enumerate(row):
                if x not in (0, 1):
                    raise ValueError(f"adjacency entry ({i},{j}) = {x} is not 0/1")
                if x:
                    mask |= 1 << j
            rows.append(mask)
        return cls(n, tuple(rows))

    def has_edge(self, i: int, j: int) -> bool:
        return bool((self.rows[i] >> j) & 1)

    def degree(self, i: int) -> int:
        return bin(self.rows[i]).count("1")

    @property
    def edge_count(self) -> int:
        return sum(bin(r).count("1") for r in self.rows) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        for i in range(self.n):
            for j in _bits(self.rows[i] >> (i + 1)):
                yield i, i + 1 + j

    def relabel(self, perm: list[int]) -> Graph:
        """Graph with vertex ``i`` renamed to ``perm[i]``."""
        rows = [0] * self.n
        for i in range(self.n):
            mask = 0
            for j in _bits(self.rows[i]):
                mask |= 1 << perm[j]
            rows[perm[i]] = mask
        return Graph(self.n, tuple(rows))


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full & ~(1 << i) for i in range(n)))


def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, tuple(full & ~r & ~(1 << i) for i, r in enumerate(g.rows)))


def adjacency_matrix(g: Graph) -> list[list[int]]:
    return [[(g.rows[i] >> j) & 1 for j in range(g.n)] for i in range(g.n)]


# ---------------------------------------------------------------- graph6


def parse_graph6(text: str) -> Graph:
    """Decode a short-form graph6 string (``n <= 62``)."""
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise Graph6Error("empty graph6 string", 0)
    for pos, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"character {ch!r} outside graph6 range", pos)
    if s[0] == "~":
        raise Graph6Error("long-form graph6 header (n > 62) is not supported", 0)
    n = ord(s[0]) - 63
    if n == 0:
        raise Graph6Error("graph6 header encodes n = 0", 0)
    npairs = n * (n - 1) // 2
    nchars = (npairs + 5) // 6
    payload = s[1:]
    if len(payload) < nchars:
        raise Graph6Error(f"truncated payload: expected {nchars} chars, got {len(payload)}", len(s))
    if len(payload) > nchars:
        raise Graph6Error(f"trailing data after {nchars} payload chars", 1 + nchars)
    bits = []
    for ch in payload:
        v = ord(ch) - 63
        bits.extend((v >> (5 - b)) & 1 for b in range(6))
    if any(bits[npairs:]):
        raise Graph6Error("nonzero padding bits", len(s) - 1)
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    return Graph(n, tuple(rows))


def emit_graph6(g: Graph) -> str:
    if g.n > MAX_GRAPH6_ORDER:
        raise ValueError(f"short-form graph6 only encodes n <= {MAX_GRAPH6_ORDER}")
    bits = [(g.rows[i] >> j) & 1 for j in range(1, g.n) for i in range(j)]
    bits.extend([0] * (-len(bits) % 6))
    out = [chr(g.n + 63)]
    for k in range(0, len(bits), 6):
        v = 0
        for b in bits[k:k + 6]:
            v = (v << 1) | b
        out.append(chr(v + 63))
    return "".join(out)


def read_graph6_lines(lines: Iterable[str]) -> Iterator[tuple[int, Graph]]:
    """Yield ``(line_number, graph)`` for non-blank lines; errors carry the line number."""
    for lineno, line in enumerate(lines, start=1):
        s = line.strip()
        if not s:
            continue
        try:
            yield lineno, parse_graph6(s)
        except Graph6Error as exc:
            raise Graph6Error(str(exc).split(" (")[0], exc.position, lineno) from None
        except ValueError as exc:
            raise Graph6Error(str(exc), None, lineno) from None


# ---------------------------------------------------------- canonical form


def _refine(g: Graph, cells: list[list[int]]) -> list[list[int]]:
    # Split cells by neighbour counts into every cell until stable. New cells
    # are ordered by signature, so the result depends only on the structure.
    while True:
        masks = []
        for c in cells:
            m = 0
            for v in c:
                m |= 1 << v
            masks.append(m)
        new_cells: list[list[int]] = []
        changed = False
        for c in cells:
            if len(c) == 1:
                new_cells.append(c)
                continue
            sig = {v: tuple(bin(g.rows[v] & m).count("1") for m in masks) for v in c}
            keys = sorted(set(sig.values()))
            if len(keys) == 1:
                new_cells.append(c)
                continue
            changed = True
            for key in keys:
                new_cells.append([v for v in c if sig[v] == key])
        cells = new_cells
        if not changed:
            return cells


def _leaf_code(g: Graph, order: list[int]) -> tuple[int, ...]:
    pos = [0] * g.n
    for p, v in enumerate(order):
        pos[v] = p
    code = []
    for v in order:
        mask = 0
        for u in _bits(g.rows[v]):
            mask |= 1 << pos[u]
        code.append(mask)
    return tuple(code)


class _Orbits:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def canonical_labeling(g: Graph) -> list[int]:
    """Vertex order whose relabeled graph is the same for every isomorph of ``g``.

    Individualization-refinement search keeping the largest leaf code. A leaf
    equal to the first or best leaf yields an automorphism; the search then
    jumps back to the level where the two paths diverge, and children in the
    same orbit (under automorphisms fixing the current prefix) are skipped.
    """
    first: tuple[tuple[int, ...], list[int]] | None = None
    best: tuple[tuple[int, ...], list[int], list[int]] | None = None
    automorphisms: list[list[int]] = []

    def record(order: list[int], target: list[int]) -> None:
        perm = [0] * g.n
        for a, b in zip(order, target):
            perm[a] = b
        automorphisms.append(perm)

    def diverge(p: list[int], q: list[int]) -> int:
        return next(i for i, (a, b) in enumerate(zip(p, q)) if a != b)

    def search(cells: list[list[int]], prefix: list[int]) -> int | None:
        # returns the level to unwind to, or None to carry on
        nonlocal first, best
        cells = _refine(g, cells)
        if all(len(c) == 1 for c in cells):
            order = [c[0] for c in cells]
            code = _leaf_code(g, order)
            if first is None:
                first = (code, prefix)
                best = (code, prefix, order)
                return None
            if code == first[0]:
                record(order, _leaf_order(g, first[1]))
                return diverge(prefix, first[1])
            if code == best[0]:
                record(order, best[2])
                return diverge(prefix, best[1])
            if code > best[0]:
                best = (code, prefix, order)
            return None
        idx = next(i for i, c in enumerate(cells) if len(c) > 1)
        target = cells[idx]
        explored: list[int] = []
        orbits = _Orbits(g.n)
        used = 0
        for v in target:
            if explored:
                for perm in automorphisms[used:]:
                    if all(perm[x] == x for x in prefix):
                        for x in range(g.n):
                            orbits.union(x, perm[x])
                used = len(automorphisms)
                if any(orbits.find(v) == orbits.find(u) for u in explored):
                    continue
            child = cells[:idx] + [[v], [u for u in target if u != v]] + cells[idx + 1:]
            level = search(child, prefix + [v])
            explored.append(v)
            if level is not None and level < len(prefix):
                return level
        return None

    search([list(range(g.n))], [])
    return best[2]


def _leaf_order(g: Graph, prefix: list[int]) -> list[int]:
    cells = [list(range(g.n))]
    for v in prefix:
        cells = _refine(g, cells)
        idx = next(i for i, c in enumerate(cells) if v in c)
        cells = cells[:idx] + [[v], [u for u in cells[idx] if u != v]] + cells[idx + 1:]
    return [c[0] for c in _refine(g, cells)]


def canonical_form(g: Graph) -> bytes:
    code = _leaf_code(g, canonical_labeling(g))
    return bytes([g.n]) + b"".join(r.to_bytes(8, "little") for r in code)


def is_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.edge_count != h.edge_count:
        return False
    if sorted(map(g.degree, range(g.n))) != sorted(map(h.degree, range(h.n))):
        return False
    return canonical_form(g) == canonical_form(h)


# ----------------------------------------------------------- random graphs


def _coin_threshold(p: Fraction) -> int:
    # a raw 64-bit draw r is "heads" iff r < p * 2**64, i.e. r < ceil(p * 2**64)
    return -((-p.numerator << 64) // p.denominator)


def random_graph(n: int, p: Fraction | float | str, seed: int) -> Graph:
    """G(n, p) sample, deterministic in ``(n, p, seed)``.

    One 64-bit Philox draw per vertex pair, pairs in row-major order
    (0,1), (0,2), ..., (1,2), ...
    """
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    if not 1 <= n <= MAX_ORDER:
        raise ValueError(f"graph order must be in 1..{MAX_ORDER}, got {n}")
    npairs = n * (n - 1) // 2
    bitgen = np.random.Philox(key=seed & (2**64 - 1))
    draws = bitgen.random_raw(npairs)
    threshold = _coin_threshold(p)
    if threshold >= 2**64:
        heads = np.ones(npairs, dtype=bool)
    else:
        heads = draws < np.uint64(threshold)
    rows = [0] * n
    for k, (i, j) in enumerate(itertools.combinations(range(n), 2)):
        if heads[k]:
            rows[i] |= 1 << j
            rows[j] |= 1 << i
    return Graph(n, tuple(rows))
