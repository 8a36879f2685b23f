import itertools
import random
from fractions import Fraction

import pytest

from gcmates import mates as mates_mod
from gcmates.factor import Factorization
from gcmates.graph import Graph, complete_graph, emit_graph6, is_isomorphic, path_graph, random_graph
from gcmates.linalg import identity, kernel_mod_prime_power, level_of, matmul, transpose
from gcmates.mates import (
    BoundReport,
    ContradictionReport,
    MateVerifier,
    NotControllable,
    NotInFn,
    OrderMismatch,
    admissible_levels,
    admissible_levels_from,
    columns_aligned,
    is_generalized_cospectral,
    mate_bound,
    q_column_diagnostics,
    regular_orthogonal_Q,
    search_mates,
    verify_mate,
)
from gcmates.walk import classify_Fn, is_controllable, w_hat


def gm_switch_pair(rng, n):
    """A graph and its Godsil-McKay switch on a 4-vertex regular block."""
    while True:
        g = random_graph(n, "1/2", rng.getrandbits(64))
        d = rng.sample(range(n), 4)
        edges = {e for e in g.edges() if not (e[0] in d or e[1] in d)}
        a, b, c, e = d
        block = rng.choice([[], [(a, b), (c, e)], [(a, b), (b, c), (c, e), (e, a)],
                            list(itertools.combinations(d, 2))])
        edges |= {tuple(sorted(p)) for p in block}
        switched = set(edges)
        for v in range(n):
            if v in d:
                continue
            kind = rng.randrange(3)
            if kind == 1:
                nbrs = set(d)
            elif kind == 2:
                nbrs = set(rng.sample(d, 2))
            else:
                nbrs = set()
            for u in nbrs:
                edges.add(tuple(sorted((u, v))))
            for u in (set(d) - nbrs if kind == 2 else nbrs):
                switched.add(tuple(sorted((u, v))))
        g, h = Graph.from_edges(n, edges), Graph.from_edges(n, switched)
        if is_controllable(g) and not is_isomorphic(g, h):
            return g, h


def is_permutation_matrix(q):
    return all(sorted(row) == [0] * (len(q) - 1) + [1] for row in q) and \
        all(sorted(col) == [0] * (len(q) - 1) + [1] for col in transpose(q))


class TestCospectral:
    def test_example(self, example_graph, mates):
        for h in mates.values():
            assert is_generalized_cospectral(example_graph, h)
        assert not is_generalized_cospectral(example_graph, complete_graph(10))

    def test_order_mismatch(self):
        with pytest.raises(OrderMismatch):
            is_generalized_cospectral(complete_graph(2), complete_graph(3))


class TestQ:
    def test_relabeling_gives_permutation(self, example_graph):
        perm = [3, 1, 4, 0, 5, 9, 2, 6, 8, 7]
        q = regular_orthogonal_Q(example_graph, example_graph.relabel(perm))
        assert is_permutation_matrix(q)
        assert level_of(q) == 1

    def test_uncontrollable_rejected(self):
        with pytest.raises(NotControllable):
            regular_orthogonal_Q(path_graph(3), path_graph(3))

    def test_example_levels(self, example_graph, mates):
        assert [level_of(regular_orthogonal_Q(example_graph, h)) for h in mates.values()] == [3, 15, 5]

    def test_level_divides_both_last_factors(self, example_graph, mates):
        from math import gcd

        from gcmates.linalg import invariant_factors
        from gcmates.walk import walk_matrix

        dg = invariant_factors(walk_matrix(example_graph))[-1]
        for h in mates.values():
            lvl = level_of(regular_orthogonal_Q(example_graph, h))
            assert gcd(dg, invariant_factors(walk_matrix(h))[-1]) % lvl == 0
            assert invariant_factors(w_hat(example_graph))[-1] % lvl == 0

    def test_conjugates_walk_hat(self, example_graph, mates):
        wg = w_hat(example_graph)
        for h in mates.values():
            q = regular_orthogonal_Q(example_graph, h)
            assert matmul(transpose(q), wg) == w_hat(h)


class TestAdmissible:
    def test_rule(self):
        assert admissible_levels_from(Factorization({2: 1})) == [1]
        assert admissible_levels_from(Factorization({2: 1, 3: 3})) == [1, 3, 9]
        assert admissible_levels_from(Factorization({2: 2, 7: 1})) == [1, 2]
        assert admissible_levels_from(Factorization({2: 1, 3: 2, 5: 2, 43: 1})) == [1, 3, 5, 15]

    def test_example_bound(self, example_graph):
        b = mate_bound(example_graph)
        assert b.bound == 3 and b.admissible == [1, 3, 5, 15] and b.dn == 19350
        assert admissible_levels(example_graph) == [1, 3, 5, 15]
        assert b.to_json()["dn"] == "19350"

    def test_bound_is_product_minus_one(self):
        f = Factorization({2: 1, 3: 2, 7: 3})
        assert len(admissible_levels_from(f)) - 1 == 2 * 3 * 1 - 1

    def test_outside_fn(self):
        with pytest.raises(NotInFn):
            mate_bound(complete_graph(3))


class TestVerify:
    def test_accepts_example_mates(self, example_graph, mates):
        levels = []
        for h in mates.values():
            cert = verify_mate(example_graph, h)
            assert cert.accepted and cert.isomorphic is False
            assert all(cert.checks.values())
            levels.append(cert.level)
        assert levels == [3, 15, 5]

    def test_isomorphic_copy_is_flagged(self, example_graph):
        cert = verify_mate(example_graph, example_graph.relabel(list(range(10))[::-1]))
        assert cert.isomorphic and cert.level == 1

    def test_rejects_non_cospectral(self, example_graph):
        cert = verify_mate(example_graph, complete_graph(10))
        assert not cert.accepted and cert.checks["cospectral"] is False
        assert cert.Q is None

    def test_order_mismatch_is_rejection(self, example_graph):
        assert not verify_mate(example_graph, complete_graph(4)).accepted

    def test_json_uses_strings(self, example_graph, mates):
        j = verify_mate(example_graph, mates["H2"]).to_json()
        assert j["level"] == "15" and j["mate_g6"] == emit_graph6(mates["H2"])
        assert j["accepted"] is True

    def test_uncontrollable_query(self):
        with pytest.raises(NotControllable):
            MateVerifier(path_graph(4))

    def test_switched_pairs(self):
        rng = random.Random(20)
        for _ in range(40):
            g, h = gm_switch_pair(rng, rng.randint(8, 11))
            cert = verify_mate(g, h)
            assert cert.accepted and not cert.isomorphic
            assert matmul(transpose(cert.Q), cert.Q) == identity(g.n)
            assert q_column_diagnostics(cert.Q).ok


class TestSearch:
    def test_relabelings_are_not_mates(self, example_graph):
        rng = random.Random(21)
        cands = []
        for _ in range(20):
            perm = list(range(10))
            rng.shuffle(perm)
            cands.append(example_graph.relabel(perm))
        assert search_mates(example_graph, cands) == []

    def test_finds_three_classes(self, example_graph, mates):
        rng = random.Random(22)
        cands = [random_graph(10, "1/2", s) for s in range(50)]
        for h in mates.values():
            for _ in range(3):
                perm = list(range(10))
                rng.shuffle(perm)
                cands.append(h.relabel(perm))
        rng.shuffle(cands)
        found = search_mates(example_graph, cands)
        assert sorted(c.level for c in found) == [3, 5, 15]

    def test_accepts_graph6_lines(self, example_graph, mates):
        lines = [emit_graph6(h) for h in mates.values()] + ["", "A_"]
        assert len(search_mates(example_graph, lines)) == 3

    def test_decode_error_carries_line(self, example_graph):
        with pytest.raises(ValueError) as info:
            search_mates(example_graph, ["I?ABEdsuW", "I?A"])
        assert info.value.line == 2
        errors = []
        search_mates(example_graph, ["I?A", "I?ABEdsuW"], on_error=errors.append)
        assert [e.line for e in errors] == [1]

    def test_bound_violation_is_reported(self, example_graph, mates, monkeypatch):
        real = mates_mod.mate_bound

        def tight(g):
            r = real(g)
            return BoundReport(r.dn, r.factorization, r.admissible, 1)

        monkeypatch.setattr(mates_mod, "mate_bound", tight)
        with pytest.raises(ContradictionReport) as info:
            search_mates(example_graph, list(mates.values()))
        assert len(info.value.certificates) == 3

    def test_uncontrollable_query_uses_spectrum_only(self):
        # P4 and its labeled copies: no 4-vertex graph is controllable
        g = path_graph(4)
        found = search_mates(g, [g.relabel([1, 0, 3, 2]), complete_graph(4)])
        assert found == []

    def test_switched_pair_found(self):
        rng = random.Random(23)
        g, h = gm_switch_pair(rng, 9)
        found = search_mates(g, [h, h.relabel(list(range(9))[::-1]), g])
        assert len(found) == 1 and found[0].level == level_of(regular_orthogonal_Q(g, h))


class TestDiagnostics:
    def test_example_columns(self, example_graph, mates):
        wh_t = transpose(w_hat(example_graph))
        for h in mates.values():
            q = regular_orthogonal_Q(example_graph, h)
            diag = q_column_diagnostics(q)
            assert diag.ok, diag.violation
            for p, k in diag.prime_powers:
                w = kernel_mod_prime_power(wh_t, p, k)
                assert columns_aligned(q, w, p, k)

    def test_rejects_non_orthogonal(self):
        with pytest.raises(ValueError):
            q_column_diagnostics([[Fraction(1, 2), 0], [0, 1]])

    def test_permutation_has_trivial_level(self):
        d = q_column_diagnostics([[0, 1], [1, 0]])
        assert d.ok and d.level == 1 and d.prime_powers == []

    def test_level_divides_hat_dn_on_fn_switches(self):
        rng = random.Random(24)
        seen = 0
        for _ in range(60):
            g, h = gm_switch_pair(rng, rng.randint(8, 11))
            if not classify_Fn(g).in_Fn:
                continue
            cert = verify_mate(g, h)
            assert cert.checks["level_divides_dn_hat"] and cert.checks["level_admissible"]
            seen += 1
        assert seen > 0
