import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qnet import oracle
from qnet.corpus import random_circuit
from qnet.errors import Dependent, ImaginarySign, NonCommuting, WrongCount
from qnet.pauli import CliffordCircuit, PauliOperator, commutes, multiply
from qnet.stabilizer import (
    Membership,
    apply_circuit,
    membership,
    state_from_generators,
    tensor,
    z_distribution,
    z_support,
    zero_state,
)

P = PauliOperator.from_label


def random_state(seed, n):
    rng = random.Random(seed)
    return apply_circuit(zero_state(n), random_circuit(rng, range(n), max_gates=8 * n))


class TestConstruction:
    def test_bell(self):
        t = state_from_generators(["+XX", "+ZZ"])
        assert t.labels() == ["+XX", "+ZZ"]
        for g, d in zip(t.stabilizers, t.destabilizers):
            assert not commutes(g, d)

    def test_zero(self):
        assert state_from_generators(["+Z"]).labels() == ["+Z"]

    def test_rejects_minus_identity(self):
        with pytest.raises((NonCommuting, Dependent)):
            state_from_generators(["+XX", "-XX"])

    def test_rejects_anticommuting(self):
        with pytest.raises(NonCommuting):
            state_from_generators(["+XI", "+ZI"])

    def test_rejects_imaginary(self):
        with pytest.raises(ImaginarySign):
            state_from_generators(["+iXX", "+ZZ"])

    def test_rejects_wrong_count(self):
        with pytest.raises(WrongCount):
            state_from_generators(["+XX"])

    def test_rejects_dependent(self):
        with pytest.raises(Dependent):
            state_from_generators(["+XX", "+XX"])

    @pytest.mark.parametrize("n", [1, 3])
    def test_zero_state(self, n):
        t = zero_state(n)
        expected = ["+" + "I" * q + "Z" + "I" * (n - q - 1) for q in range(n)]
        assert t.labels() == expected
        assert z_distribution(t).probs == {"0" * n: Fraction(1)}

    @settings(deadline=None)
    @given(st.integers(0, 10 ** 6), st.integers(1, 7))
    def test_destabilizers_are_symplectic_partners(self, seed, n):
        t = random_state(seed, n)
        for i, g in enumerate(t.stabilizers):
            for j, d in enumerate(t.destabilizers):
                assert commutes(g, d) == (i != j)
            for h in t.stabilizers:
                assert commutes(g, h)
            assert g.is_real


class TestEvolution:
    def test_bell_preparation(self):
        t = apply_circuit(zero_state(2), CliffordCircuit.parse("H 0;CX 0 1"))
        assert membership(t, P("+XX")) is Membership.PLUS
        assert membership(t, P("+ZZ")) is Membership.PLUS

    def test_empty_circuit(self):
        t = random_state(3, 4)
        assert apply_circuit(t, CliffordCircuit()) == t

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10 ** 6), st.integers(1, 8))
    def test_distribution_matches_statevector(self, seed, n):
        rng = random.Random(seed)
        c = random_circuit(rng, range(n), max_gates=10 * n)
        t = apply_circuit(zero_state(n), c)
        psi = oracle.apply_circuit(oracle.zero_vector(n), c).reshape(-1)
        dense = {format(i, f"0{n}b"): abs(a) ** 2 for i, a in enumerate(psi) if abs(a) ** 2 > 1e-12}
        exact = z_distribution(t)
        assert set(dense) == set(exact.probs)
        for k, p in exact.items():
            assert abs(float(p) - dense[k]) < 1e-12


class TestTensor:
    def test_zero_zero(self):
        assert tensor(zero_state(1), zero_state(1)).labels() == ["+ZI", "+IZ"]

    def test_bell_bell(self):
        bell = state_from_generators(["+XX", "+ZZ"])
        assert tensor(bell, bell).labels() == ["+XXII", "+ZZII", "+IIXX", "+IIZZ"]

    def test_distribution_factorizes(self):
        a, b = random_state(11, 3), random_state(12, 2)
        joint = z_distribution(tensor(a, b))
        da, db = z_distribution(a), z_distribution(b)
        expected = {ka + kb: pa * pb for ka, pa in da.items() for kb, pb in db.items()}
        assert joint.probs == expected


class TestMembership:
    bell = state_from_generators(["+XX", "+ZZ"])

    def test_plus(self):
        assert membership(self.bell, P("+ZZ")) is Membership.PLUS

    def test_minus_yy_is_plus(self):
        assert membership(self.bell, P("-YY")) is Membership.PLUS
        assert membership(self.bell, P("+YY")) is Membership.MINUS

    def test_nonmember(self):
        assert membership(self.bell, P("+XZ")) is Membership.NONMEMBER

    def test_imaginary(self):
        with pytest.raises(ImaginarySign):
            membership(self.bell, P("+iXX"))

    @settings(deadline=None)
    @given(st.integers(0, 10 ** 6), st.integers(1, 6), st.data())
    def test_sign_is_multiplicative(self, seed, n, data):
        t = random_state(seed, n)
        picks = [data.draw(st.lists(st.booleans(), min_size=n, max_size=n)) for _ in range(2)]
        g = PauliOperator.identity(n)
        h = PauliOperator.identity(n)
        for bit_g, bit_h, s in zip(*picks, t.stabilizers):
            if bit_g:
                g = multiply(g, s)
            if bit_h:
                h = multiply(h, s)
        assert membership(t, g) is Membership.PLUS
        assert membership(t, multiply(g, h)) is Membership.PLUS
        assert membership(t, multiply(g, h).negate()) is Membership.MINUS


class TestZDistribution:
    def test_bell(self):
        d = z_distribution(state_from_generators(["+XX", "+ZZ"]))
        assert d.probs == {"00": Fraction(1, 2), "11": Fraction(1, 2)}

    def test_ghz(self):
        t = apply_circuit(zero_state(3), CliffordCircuit.parse("H 0;CX 0 1;CX 0 2"))
        assert z_distribution(t).probs == {"000": Fraction(1, 2), "111": Fraction(1, 2)}

    def test_negative_z(self):
        d = z_distribution(state_from_generators(["-ZI", "+IX"]))
        assert d.probs == {"10": Fraction(1, 2), "11": Fraction(1, 2)}

    @settings(deadline=None)
    @given(st.integers(0, 10 ** 6), st.integers(1, 7))
    def test_dyadic_and_normalized(self, seed, n):
        d = z_distribution(random_state(seed, n))
        assert d.total() == 1
        for p in d.probs.values():
            assert p.denominator & (p.denominator - 1) == 0

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10 ** 6), st.integers(1, 6))
    def test_parity_bridge(self, seed, n):
        # Pr[XOR_S b = 0] is 1, 0 or 1/2 as Z_S is a +member, -member or nonmember.
        t = random_state(seed, n)
        d = z_distribution(t)
        expected = {Membership.PLUS: 1, Membership.MINUS: 0, Membership.NONMEMBER: Fraction(1, 2)}
        for mask in range(1 << n):
            zero = sum(
                (p for k, p in d.items() if sum(int(k[i]) for i in range(n) if (mask >> i) & 1) % 2 == 0),
                Fraction(0),
            )
            assert zero == expected[membership(t, PauliOperator.z_string(n, mask))]

    def test_support_size(self):
        t = random_state(5, 6)
        assert z_support(t).size == len(z_distribution(t))
        assert np.all([z_support(t).contains(int(p)) for p in z_support(t).points()])
