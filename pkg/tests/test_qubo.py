import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force_mis, min_energy_masks, random_conflict_graph
from qimatch.conflict import ConflictGraph, MatchCandidate, MatchParams
from qimatch.qubo import (
    Assignment,
    QuboFormatError,
    QuboInstance,
    energy,
    mis_to_qubo,
    read_qubo,
    write_qubo,
)
from qimatch.rng import Xorshift64Star


def make_gc(n, edges):
    return ConflictGraph(
        vertices=tuple(MatchCandidate(k, k, 1.0) for k in range(n)),
        edges=frozenset(edges),
        params=MatchParams(limit_l=max(n, 1)),
    )


class TestMisToQubo:
    def test_single_vertex(self):
        q = mis_to_qubo(make_gc(1, []))
        assert q.n == 1
        assert q.terms == {(0, 0): -1.0}
        assert energy(q, Assignment((1,))) == -1.0

    def test_two_vertices_one_edge(self):
        q = mis_to_qubo(make_gc(2, [(0, 1)]))
        assert q.terms == {(0, 0): -1.0, (1, 1): -1.0, (0, 1): 2.0}
        energies = {
            bits: energy(q, Assignment(bits))
            for bits in itertools.product((0, 1), repeat=2)
        }
        assert energies == {(0, 0): 0.0, (1, 0): -1.0, (0, 1): -1.0, (1, 1): 0.0}

    def test_triangle(self):
        q = mis_to_qubo(make_gc(3, [(0, 1), (0, 2), (1, 2)]))
        energies = {
            bits: energy(q, Assignment(bits))
            for bits in itertools.product((0, 1), repeat=3)
        }
        minima = [b for b, e in energies.items() if e == min(energies.values())]
        assert min(energies.values()) == -1.0
        assert sorted(minima) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]

    def test_empty_graph_rejected(self):
        with pytest.raises(ValueError):
            mis_to_qubo(make_gc(0, []))

    def test_exactness_on_random_graphs(self):
        rng = Xorshift64Star(2024)
        for _ in range(20):
            n = 5 + rng.randrange(8)
            gc = random_conflict_graph(rng, n, 0.2 + 0.6 * rng.uniform())
            q = mis_to_qubo(gc)
            emin, argmins = min_energy_masks(q.n, q.terms)
            mis_size, mis_masks = brute_force_mis(n, gc.edges)
            assert emin == -mis_size
            assert argmins == mis_masks

    def test_penalty_sufficiency(self):
        rng = Xorshift64Star(55)
        for _ in range(20):
            n = 6 + rng.randrange(8)
            gc = random_conflict_graph(rng, n, 0.4)
            if not gc.edges:
                continue
            q = mis_to_qubo(gc)
            # random assignment forced to contain one edge
            u, v = sorted(gc.edges)[rng.randrange(len(gc.edges))]
            bits = [1 if rng.uniform() < 0.5 else 0 for _ in range(n)]
            bits[u] = bits[v] = 1
            e = energy(q, Assignment(tuple(bits)))
            cleared = list(bits)
            cleared[u] = 0
            assert energy(q, Assignment(tuple(cleared))) < e


class TestEnergy:
    def test_all_zero(self):
        q = QuboInstance(n=3, terms={(0, 0): -1.0, (0, 2): 5.0})
        assert energy(q, Assignment((0, 0, 0))) == 0.0

    def test_independent_set_energy(self):
        gc = make_gc(4, [(0, 1), (2, 3)])
        q = mis_to_qubo(gc)
        assert energy(q, Assignment((1, 0, 1, 0))) == -2.0

    def test_violated_edge(self):
        q = mis_to_qubo(make_gc(2, [(0, 1)]))
        assert energy(q, Assignment((1, 1))) == 0.0

    def test_length_mismatch(self):
        q = QuboInstance(n=2, terms={(0, 0): 1.0})
        with pytest.raises(ValueError):
            energy(q, Assignment((1,)))

    def test_linear_in_coefficients(self):
        rng = Xorshift64Star(7)
        n = 6
        t1 = {(i, j): rng.normal() for i in range(n) for j in range(i, n) if rng.uniform() < 0.5}
        t2 = {(i, j): rng.normal() for i in range(n) for j in range(i, n) if rng.uniform() < 0.5}
        merged = dict(t1)
        for k, v in t2.items():
            merged[k] = merged.get(k, 0.0) + v
        q1, q2 = QuboInstance(n, t1), QuboInstance(n, t2)
        qm = QuboInstance(n, merged)
        for _ in range(20):
            x = Assignment(tuple(1 if rng.uniform() < 0.5 else 0 for _ in range(n)))
            assert energy(qm, x) == pytest.approx(energy(q1, x) + energy(q2, x), abs=1e-9)


class TestQuboInstance:
    def test_zero_terms_dropped(self):
        q = QuboInstance(n=2, terms={(0, 0): 0.0, (0, 1): 3.0})
        assert q.terms == {(0, 1): 3.0}

    def test_bad_index_order(self):
        with pytest.raises(ValueError):
            QuboInstance(n=3, terms={(2, 1): 1.0})

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            QuboInstance(n=2, terms={(0, 2): 1.0})


class TestFormat:
    def test_single_vertex_text(self):
        q = mis_to_qubo(make_gc(1, []))
        assert write_qubo(q) == "p qubo 0 1 1 0\n0 0 -1\n"

    def test_two_vertex_text(self):
        q = mis_to_qubo(make_gc(2, [(0, 1)]))
        assert write_qubo(q) == "p qubo 0 2 2 1\n0 0 -1\n1 1 -1\n0 1 2\n"

    def test_comments_ignored(self):
        text = "c a comment\np qubo 0 2 1 0\nc another\n0 0 -1\n"
        q = read_qubo(text)
        assert q.n == 2 and q.terms == {(0, 0): -1.0}

    @given(st.integers(0, 2**32))
    @settings(max_examples=50, deadline=None)
    def test_round_trip_random(self, seed):
        rng = Xorshift64Star(seed)
        n = 20
        terms = {}
        for i in range(n):
            for j in range(i, n):
                u = rng.uniform()
                if u < 0.3:
                    terms[(i, j)] = rng.normal() * 10
        q = QuboInstance(n=n, terms=terms)
        text = write_qubo(q)
        q2 = read_qubo(text)
        assert q2.n == q.n and q2.terms == q.terms
        assert write_qubo(q2) == text  # byte fixpoint

    def test_bad_header(self):
        with pytest.raises(QuboFormatError, match="line 1"):
            read_qubo("q hello\n")

    def test_missing_header(self):
        with pytest.raises(QuboFormatError, match="header"):
            read_qubo("c only comments\n")

    def test_index_out_of_range(self):
        with pytest.raises(QuboFormatError, match="line 2"):
            read_qubo("p qubo 0 2 1 0\n0 5 -1\n")

    def test_duplicate_pair(self):
        with pytest.raises(QuboFormatError, match="duplicate"):
            read_qubo("p qubo 0 2 2 0\n0 0 -1\n0 0 -2\n")

    def test_count_mismatch(self):
        with pytest.raises(QuboFormatError, match="announced"):
            read_qubo("p qubo 0 2 2 0\n0 0 -1\n")

    def test_malformed_term(self):
        with pytest.raises(QuboFormatError, match="line 2"):
            read_qubo("p qubo 0 2 1 0\n0 0 xyz\n")
