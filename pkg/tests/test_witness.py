import itertools
from fractions import Fraction

import numpy as np
import pytest

from qnet import lhv, oracle, witness
from qnet.errors import MixedSourcePresent, ShapeMismatch
from qnet.network import run_quantum, validate
from qnet.pauli import PauliOperator, commutes, product
from qnet.stabilizer import Membership, membership, state_from_generators

P = PauliOperator.from_label
GRID = witness.GRID


@pytest.fixture(scope="module")
def quantum():
    return run_quantum(witness.magic_square_spec())


class TestGrid:
    def test_rows_and_columns(self):
        ident = PauliOperator.identity(2)
        for r in range(3):
            assert product([GRID.cell(3 * r + c + 1) for c in range(3)], 2) == ident
        for c in range(3):
            assert product([GRID.cell(3 * r + c + 1) for r in range(3)], 2) == ident.negate()

    def test_contexts_commute(self):
        for x in range(1, 7):
            ops = [GRID.cell(y) for y in GRID.context(x)]
            assert all(commutes(p, q) for p in ops for q in ops)

    def test_representative_is_joint_eigenstate(self):
        for x in range(1, 7):
            t = GRID.representative(x)
            signs = [membership(t, GRID.cell(y)) for y in GRID.context(x)]
            assert Membership.NONMEMBER not in signs

    def test_auxiliary(self):
        for y in range(1, 10):
            g, h = GRID.cell(y), GRID.auxiliary(y)
            assert commutes(g, h) and (g.x, g.z) != (h.x, h.z)
            state_from_generators([g, h])
        # g_1 = IZ: IX and IY anticommute, IZ is g itself, so XI comes first
        assert str(GRID.auxiliary(1)) == "+XI"


class TestAnswers:
    def test_no_correction(self):
        for x in range(1, 7):
            t = GRID.representative(x)
            expected = tuple(1 if membership(t, GRID.cell(y)) is Membership.PLUS else -1 for y in GRID.context(x))
            assert witness.alice_answer(x, "0000") == expected

    def test_worked_case(self):
        # Column 2 (x = 5) has representative |0>|+>; X on A1 and Z on A2 give |1>|->.
        assert GRID.representative(5).labels() == ["+ZI", "+IX"]
        bits = "0110"  # (s1, t1, s2, t2): t1 = 1 is X on A1, s2 = 1 is Z on A2
        assert witness.correction(bits) == P("+XZ")
        assert witness.alice_answer(5, bits) == (-1, -1, -1)

    def test_parity_always_respected(self):
        for x in range(1, 7):
            for bits in itertools.product("01", repeat=4):
                triple = witness.alice_answer(x, "".join(bits))
                assert triple[0] * triple[1] * triple[2] == GRID.sign(x)

    def test_bob(self):
        assert all(witness.bob_answer(y, "0000") == 1 for y in range(1, 10))
        # correction Z on the first qubit against g = XI
        assert witness.bob_answer(4, "1000") == -1

    def test_bob_matches_dense_projection(self):
        # Teleported component P rho P with rho a +1 eigenstate of g_y: the sign of <g_y>.
        for y in range(1, 10):
            g = oracle.pauli_matrix(GRID.cell(y))
            for h in (GRID.auxiliary(y), GRID.auxiliary(y).negate()):
                psi = oracle.stabilizer_vector([GRID.cell(y), h]).reshape(-1)
                for bits in ("".join(b) for b in itertools.product("01", repeat=4)):
                    moved = oracle.pauli_matrix(witness.correction(bits)) @ psi
                    value = np.real(moved.conj() @ g @ moved)
                    assert np.isclose(value, witness.bob_answer(y, bits))

    def test_yb_density(self):
        for y in range(1, 10):
            comps = [(0.5, [g, h]) for g, h in witness.yb_components(y)]
            rho = oracle.density_matrix(comps)
            target = (np.eye(4) + oracle.pauli_matrix(GRID.cell(y))) / 4
            assert np.allclose(rho, target, atol=1e-12)


class TestSpec:
    def test_structure(self):
        spec = witness.magic_square_spec()
        assert validate(spec) == 2
        counts = [len(e.components()) for e in spec.edges]
        assert counts == [6, 1, 1, 18] and np.prod(counts) == 108
        assert spec.total_qubits == 8

    def test_lhv_refuses(self):
        with pytest.raises(MixedSourcePresent):
            lhv.synthesize(witness.magic_square_spec())

    def test_labels_correlated(self, quantum):
        for key in quantum:
            seg = quantum.segments(key)
            assert seg["X"] == seg["A"][4] and seg["Y"] == seg["B"][4]

    def test_matches_oracle(self, quantum):
        approx = oracle.statevector_run(witness.magic_square_spec())
        assert oracle.max_deviation(quantum, approx) < 1e-9


class TestScoring:
    def test_quantum_value(self, quantum):
        assert witness.winning_probability(quantum) == 1
        assert witness.winning_probability(quantum, "auto") == 1
        assert set(witness.score_table(quantum).values()) == {1}

    def test_all_plus_strategy(self):
        alice = [(1, 1, 1) if GRID.sign(x) == 1 else (1, 1, -1) for x in range(1, 7)]
        d = witness.strategy_distribution(alice, [1] * 9)
        # rows all win; columns lose on their third cell only
        assert witness.winning_probability(d) == Fraction(15, 18)
        naive = witness.strategy_distribution([(1, 1, 1)] * 6, [1] * 9)
        assert witness.winning_probability(naive) == Fraction(1, 2)
        assert witness.winning_probability(naive, "auto") == Fraction(5, 6)

    def test_strategy_value_matches_counting(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            alice = [witness.valid_triples(x)[rng.integers(4)] for x in range(1, 7)]
            bob = [int(v) for v in rng.choice([1, -1], size=9)]
            wins = sum(
                alice[x - 1][GRID.context(x).index(y)] == bob[y - 1]
                for x in range(1, 7) for y in GRID.context(x)
            )
            assert witness.winning_probability(witness.strategy_distribution(alice, bob)) == Fraction(wins, 18)

    def test_classical_bound(self):
        assert witness.classical_bound() == Fraction(17, 18)
        assert witness.classical_bound("auto") == Fraction(53, 54)
        assert witness.classical_bound(bob_constant=True) == Fraction(5, 6)
        assert witness.classical_bound(bob_constant=True) < witness.classical_bound()

    def test_bound_is_attained(self):
        # Flip one sign-carrying cell away from the rule "answer +1 except the
        # last cell of each column": a single (x, y) pair is lost.
        best = Fraction(0)
        for bob in itertools.product((1, -1), repeat=9):
            alice = []
            for x in range(1, 7):
                cells = GRID.context(x)
                options = witness.valid_triples(x)
                alice.append(max(options, key=lambda t: sum(t[i] == bob[c - 1] for i, c in enumerate(cells))))
            best = max(best, witness.winning_probability(witness.strategy_distribution(alice, list(bob))))
        assert best == witness.classical_bound()

    def test_wrong_shape(self, quantum):
        with pytest.raises(ShapeMismatch):
            witness.winning_probability(quantum.marginal_parties(["A", "B"]))

    def test_report(self):
        report, _ = witness.report()
        assert report == {
            "quantum_value": Fraction(1), "scoring": "containing",
            "classical_bound": Fraction(17, 18), "nonlocal": True,
        }
