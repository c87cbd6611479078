import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qnet import corpus, lhv, oracle
from qnet.canonical import canonicalize, decompose_bipartite, schmidt_exponent
from qnet.errors import BadPartition, MixedSourcePresent, NotTwoNetwork
from qnet.network import Edge, NetworkSpec, Party, PureSource, run_quantum, validate
from qnet.stabilizer import Membership, apply_circuit, membership, state_from_generators, zero_state


def random_bipartite(seed, max_side=6):
    rng = random.Random(seed)
    nl, nr = rng.randint(0, max_side), rng.randint(0, max_side)
    n = max(nl + nr, 1)
    t = apply_circuit(zero_state(n), corpus.random_circuit(rng, range(n), max_gates=8 * n))
    qubits = list(range(n))
    rng.shuffle(qubits)
    cut = min(nl, n)
    return t, sorted(qubits[:cut]), sorted(qubits[cut:])


def reaches_normal_form(t, dec):
    out = apply_circuit(t, dec.circuit)
    return all(membership(out, g) is Membership.PLUS for g in dec.target_generators(t.n))


class TestDecompose:
    def test_bell(self):
        dec = decompose_bipartite(state_from_generators(["+XX", "+ZZ"]), [0], [1])
        assert dec.bell_count == 1 and dec.singles == ()

    def test_zero_zero(self):
        dec = decompose_bipartite(PureSource(generators=("+ZI", "+IZ")), [0], [1])
        assert dec.bell_count == 0 and dec.singles == (0, 1)

    def test_bad_partition(self):
        with pytest.raises(BadPartition):
            decompose_bipartite(state_from_generators(["+XX", "+ZZ"]), [0], [0])
        with pytest.raises(BadPartition):
            decompose_bipartite(state_from_generators(["+XX", "+ZZ"]), [0], [])

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 10 ** 9))
    def test_normal_form_and_schmidt_rank(self, seed):
        t, left, right = random_bipartite(seed)
        dec = decompose_bipartite(t, left, right)
        assert reaches_normal_form(t, dec)
        assert dec.circuit_left.qubits <= set(left)
        assert dec.circuit_right.qubits <= set(right)
        for a, b in dec.pairs:
            assert a in left and b in right
        assert dec.bell_count == schmidt_exponent(t, left)
        if t.n <= 8:
            rank = oracle.schmidt_rank(oracle.stabilizer_vector(t.stabilizers), left)
            assert rank == 2 ** dec.bell_count

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10 ** 9), st.integers(0, 10 ** 9))
    def test_bell_count_invariant_under_local_cliffords(self, seed, seed2):
        t, left, right = random_bipartite(seed)
        rng = random.Random(seed2)
        local = corpus.random_circuit(rng, left) + corpus.random_circuit(rng, right)
        moved = apply_circuit(t, local)
        assert decompose_bipartite(moved, left, right).bell_count == decompose_bipartite(t, left, right).bell_count


class TestCanonicalize:
    def test_already_canonical_is_unchanged(self):
        rng = random.Random(3)
        bell, zero = PureSource(generators=("+XX", "+ZZ")), PureSource(generators=("+Z",))
        edges = (Edge("e0", (0, 2), bell), Edge("e1", (1, 3), bell), Edge("z", (4,), zero))
        spec = NetworkSpec(5, edges, (
            Party("A", (0, 1), 0, corpus.random_circuit(rng, [0, 1])),
            Party("B", (2, 3, 4), 0, corpus.random_circuit(rng, [2, 3, 4])),
        ))
        out, layout = canonicalize(spec)
        assert out == spec
        assert layout == {q: q for q in range(spec.total_qubits)}

    def test_relabeled_bell_source(self):
        spec = NetworkSpec(2, (Edge("e", (0, 1), PureSource(generators=("+ZZ", "-YY"))),),
                           (Party("A", (1,)), Party("B", (0,))))
        out, _ = canonicalize(spec)
        lhv.synthesize(out)  # canonical precondition holds
        assert run_quantum(out) == run_quantum(spec)

    def test_result_is_canonical_and_equal(self, two_corpus):
        for spec in two_corpus[:40]:
            out, layout = canonicalize(spec)
            assert validate(out) <= 2
            assert out.total_qubits == spec.total_qubits
            assert all(len(e.vertices) in (1, 2) for e in out.edges)
            assert all(p.ancillas == 0 for p in out.parties)
            assert run_quantum(out) == run_quantum(spec)
            lhv.synthesize(out)

    def test_rejects_k3(self):
        spec = NetworkSpec(3, (Edge("g", (0, 1, 2), corpus.ghz_source(3)),),
                           (Party("A", (0,)), Party("B", (1,)), Party("C", (2,))))
        with pytest.raises(NotTwoNetwork):
            canonicalize(spec)

    def test_rejects_mixed(self, mixed_corpus):
        spec = next(s for s in mixed_corpus if s.has_mixed)
        with pytest.raises(MixedSourcePresent):
            canonicalize(spec)

    def test_same_party_edge_becomes_zeros(self):
        spec = NetworkSpec(2, (Edge("e", (0, 1), PureSource(generators=("+XX", "+ZZ"))),),
                           (Party("A", (0, 1)),))
        out, _ = canonicalize(spec)
        assert all(len(e.vertices) == 1 for e in out.edges)
        assert np.isclose(float(run_quantum(out)["00"]), 0.5)
