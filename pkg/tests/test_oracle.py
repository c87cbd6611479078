import numpy as np
import pytest

from qnet import corpus, oracle
from qnet.distribution import total_variation
from qnet.errors import NotCompletelyPositive, NotTracePreserving, ParseError, TooManyQubits
from qnet.network import Edge, NetworkSpec, Party, PureSource, run_quantum

BELL = PureSource(generators=("+XX", "+ZZ"))


def bell_spec():
    return NetworkSpec(2, (Edge("e", (0, 1), BELL),), (Party("A", (0,)), Party("B", (1,))))


class TestStatevector:
    def test_bell(self):
        probs = oracle.statevector_run(bell_spec())
        assert probs.keys() == {"00", "11"}
        assert all(abs(p - 0.5) < 1e-12 for p in probs.values())

    def test_bound(self):
        with pytest.raises(TooManyQubits):
            oracle.statevector_run(bell_spec(), bound=1)

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("QNET_MAX_QUBITS", "1")
        with pytest.raises(TooManyQubits):
            oracle.statevector_run(bell_spec())
        monkeypatch.delenv("QNET_MAX_QUBITS")
        assert oracle.max_qubits() == oracle.DEFAULT_MAX_QUBITS

    @pytest.mark.parametrize("kind", ["canonical", "two", "mixed"])
    def test_agrees_with_exact_engine(self, kind):
        for seed in range(15):
            spec = corpus.generate(kind, seed)
            if spec.total_qubits > 12:
                continue
            assert total_variation(run_quantum(spec), oracle.statevector_run(spec)) <= oracle.DIST_TOL

    def test_dense_state_normalized(self):
        with pytest.raises(ValueError):
            oracle.DenseState(1, [1, 1])
        s = oracle.DenseState(1, np.array([1, 1]) / np.sqrt(2))
        assert s.tensor().shape == (2,)


class TestSchmidtRank:
    def test_bell(self):
        assert oracle.schmidt_rank(oracle.stabilizer_vector(["+XX", "+ZZ"]), [0]) == 2

    def test_product(self):
        assert oracle.schmidt_rank(oracle.zero_vector(2), [0]) == 1

    def test_invariant_under_one_sided_unitaries(self):
        rng = np.random.default_rng(1)
        psi = oracle.stabilizer_vector(["+XXI", "+ZZI", "+IIX"])
        for _ in range(10):
            g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            u, _ = np.linalg.qr(g)
            moved = np.tensordot(u.reshape(2, 2, 2, 2), psi, axes=([2, 3], [1, 2]))
            moved = np.moveaxis(moved, [0, 1], [1, 2])
            assert oracle.schmidt_rank(moved, [0]) == 2

    def test_bound(self):
        with pytest.raises(TooManyQubits):
            oracle.schmidt_rank(oracle.zero_vector(3), [0], bound=2)


class TestChannels:
    def test_dephasing_is_simulatable(self):
        assert oracle.check_classically_simulatable(oracle.dephasing(2))
        assert oracle.check_classically_simulatable(oracle.dephasing(3))

    def test_random_stochastic(self):
        rng = np.random.default_rng(2)
        for d in (2, 3, 4):
            for _ in range(10):
                ch = oracle.classical_channel(oracle.random_stochastic(d, rng))
                assert oracle.check_classically_simulatable(ch)

    def test_hadamard_fails(self):
        assert not oracle.check_classically_simulatable(oracle.unitary_channel(oracle._H))

    def test_hadamard_on_plus(self):
        # Delta.H sends |+><+| to |0><0|; Delta.H.Delta sends it to I/2.
        ch, delta = oracle.unitary_channel(oracle._H), oracle.dephasing(2)
        plus = np.full((2, 2), 0.5, dtype=complex).reshape(-1, order="F")
        assert np.allclose((delta @ ch @ plus).reshape(2, 2, order="F"), np.diag([1, 0]))
        assert np.allclose((delta @ ch @ delta @ plus).reshape(2, 2, order="F"), np.eye(2) / 2)

    def test_phase_gate_commutes_with_dephasing(self):
        # S is diagonal, so Delta.S = Delta = Delta.S.Delta: the check passes.
        ch, delta = oracle.unitary_channel(oracle._S), oracle.dephasing(2)
        assert np.allclose(delta @ ch, delta)
        assert oracle.check_classically_simulatable(ch)

    def test_dephased_input_always_simulatable(self):
        # E.Delta satisfies Delta.E.Delta = Delta.E.Delta.Delta for every E.
        rng = np.random.default_rng(3)
        for _ in range(100):
            d = int(rng.integers(2, 5))
            ch = oracle.random_channel(d, rng)
            oracle.check_channel(ch)
            assert oracle.check_classically_simulatable(ch @ oracle.dephasing(d))

    def test_dephased_output_need_not_be_simulatable(self):
        # Delta.H still maps |+><+| to |0><0| but Delta.H.Delta maps it to I/2.
        delta = oracle.dephasing(2)
        assert not oracle.check_classically_simulatable(delta @ oracle.unitary_channel(oracle._H))

    def test_random_channels_generally_fail(self):
        rng = np.random.default_rng(4)
        assert not all(oracle.check_classically_simulatable(oracle.random_channel(2, rng)) for _ in range(10))

    def test_not_trace_preserving(self):
        with pytest.raises(NotTracePreserving):
            oracle.check_classically_simulatable(2 * oracle.dephasing(2))

    def test_not_completely_positive(self):
        # transpose map: trace preserving, positive, not CP
        t = np.zeros((4, 4), dtype=complex)
        for i in range(2):
            for j in range(2):
                t[j + 2 * i, i + 2 * j] = 1
        with pytest.raises(NotCompletelyPositive):
            oracle.check_classically_simulatable(t)

    def test_file_round_trip(self, networks_dir):
        ch = oracle.load_channel(networks_dir / "hadamard.chan")
        assert np.allclose(ch, oracle.unitary_channel(oracle._H))
        assert np.allclose(oracle.parse_channel(oracle.dump_channel(ch)), ch)
        assert np.allclose(oracle.load_channel(networks_dir / "dephasing.chan"), oracle.dephasing(2))

    @pytest.mark.parametrize(
        "text, line",
        [("", 1), ("dim x\n", 1), ("dim 2\n1 0\n", 2), ("# c\ndim 1\n1 q\n", 3)],
    )
    def test_parse_errors(self, text, line):
        with pytest.raises(ParseError) as info:
            oracle.parse_channel(text)
        assert info.value.line == line
