"""Magic-square nonlocality on the line network X - A - B - Y with mixed sources.

Qubit layout (vertex indices)::

    A: 0 = A12[0]  1 = A1  2 = A12[1]  3 = A2
    B: 4 = B12[0]  5 = B1  6 = B12[1]  7 = B2

Sources: ``xa`` on (0, 2) is a uniform mixture over the six contexts ``x``
of the context state ``|e_x>``, labelled ``x`` at X and A; ``ab1`` and
``ab2`` are Bell pairs (1, 5) and (3, 7); ``yb`` on (4, 6) is a uniform
mixture over the nine cells ``y`` of ``(I + g_y)/4``, written as two pure
components, labelled ``y`` at Y and B.

A and B each Bell-measure their pairs (``CX`` then ``H``), reading bits
``(s1, t1, s2, t2)``.  The teleportation byproduct on qubit ``j`` is
``X^t_j Z^s_j``; the post-processing tables turn the bits into game answers.

Outcome key segments: X: ``x``; A: 4 Bell bits, ``x``, triple of ``+``/``-``;
B: 4 Bell bits, ``y``, one ``+``/``-``; Y: ``y``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .distribution import OutcomeDistribution
from .errors import ShapeMismatch
from .network import Edge, MixedComponent, MixedSource, NetworkSpec, Party, PureSource
from .pauli import CliffordCircuit, PauliOperator, commutes, product
from .stabilizer import Membership, StabilizerTableau, membership, state_from_generators

GRID_LABELS = (
    ("+IZ", "+ZI", "+ZZ"),
    ("+XI", "+IX", "+XX"),
    ("-XZ", "-ZX", "+YY"),
)

SCORINGS = ("containing", "auto")


@dataclass(frozen=True)
class MagicSquareGrid:
    cells: tuple[PauliOperator, ...]          # y = 1..9 row-major, stored at y - 1
    contexts: tuple[tuple[int, ...], ...]     # x = 1..6: rows then columns, cell ids 1..9
    signs: tuple[int, ...]                    # required product of each context (+1 / -1)

    def cell(self, y) -> PauliOperator:
        return self.cells[y - 1]

    def context(self, x):
        return self.contexts[x - 1]

    def sign(self, x):
        return self.signs[x - 1]

    def representative(self, x) -> StabilizerTableau:
        """``|e_x>``: the common +1 eigenstate of the first two context observables."""
        a, b = self.context(x)[:2]
        return state_from_generators([self.cell(a), self.cell(b)])

    def auxiliary(self, y) -> PauliOperator:
        """``h_y``: smallest two-qubit Pauli (letters ordered I, X, Y, Z) commuting with ``g_y``, independent of it."""
        g = self.cell(y)
        for letters in itertools.product("IXYZ", repeat=2):
            h = PauliOperator.from_label("+" + "".join(letters))
            if h.x == 0 and h.z == 0:
                continue
            if (h.x, h.z) == (g.x, g.z):
                continue
            if commutes(g, h):
                return h
        raise AssertionError("no auxiliary operator")


def build_grid() -> MagicSquareGrid:
    cells = tuple(PauliOperator.from_label(lab) for row in GRID_LABELS for lab in row)
    rows = tuple(tuple(3 * r + c + 1 for c in range(3)) for r in range(3))
    cols = tuple(tuple(3 * r + c + 1 for r in range(3)) for c in range(3))
    grid = MagicSquareGrid(cells, rows + cols, (1, 1, 1, -1, -1, -1))
    ident = PauliOperator.identity(2)
    for x in range(1, 7):
        ops = [grid.cell(y) for y in grid.context(x)]
        assert all(commutes(p, q) for p in ops for q in ops)
        expected = ident if grid.sign(x) == 1 else ident.negate()
        assert product(ops, 2) == expected, f"context {x} product"
    return grid


GRID = build_grid()

ALICE_QUBITS = (0, 1, 2, 3)
BOB_QUBITS = (4, 5, 6, 7)


def correction(bits) -> PauliOperator:
    """Byproduct Pauli ``X^t Z^s`` per teleported qubit from bits ``(s1, t1, s2, t2)``."""
    s1, t1, s2, t2 = (int(b) for b in bits)
    return PauliOperator(2, 0, t1 | (t2 << 1), s1 | (s2 << 1))


def _sign(m: Membership):
    assert m is not Membership.NONMEMBER
    return 1 if m is Membership.PLUS else -1


def alice_answer(x, bell_bits):
    """Eigenvalue triple of context ``x`` on the corrected context state."""
    p = correction(bell_bits)
    base = GRID.representative(x)
    moved = StabilizerTableau(
        2,
        tuple(g if commutes(g, p) else g.negate() for g in base.stabilizers),
        base.destabilizers,
    )
    return tuple(_sign(membership(moved, GRID.cell(y))) for y in GRID.context(x))


def bob_answer(y, bell_bits, branch=None):
    """+1 unless the byproduct anticommutes with ``g_y``.

    ``branch`` (the sign of ``h_y`` in the source component) is accepted for
    symmetry with the source decomposition; it does not enter the answer.
    """
    del branch
    return 1 if commutes(correction(bell_bits), GRID.cell(y)) else -1


def _sym(v):
    return "+" if v == 1 else "-"


def _bits4():
    return ["".join(b) for b in itertools.product("01", repeat=4)]


def alice_table():
    return {
        bits + str(x): bits + str(x) + "".join(_sym(v) for v in alice_answer(x, bits))
        for x in range(1, 7) for bits in _bits4()
    }


def bob_table():
    return {
        bits + str(y): bits + str(y) + _sym(bob_answer(y, bits))
        for y in range(1, 10) for bits in _bits4()
    }


def magic_square_spec() -> NetworkSpec:
    xa = MixedSource(tuple(
        MixedComponent(
            Fraction(1, 6),
            PureSource(generators=tuple(str(g) for g in GRID.representative(x).stabilizers)),
            (("X", str(x)), ("A", str(x))),
        )
        for x in range(1, 7)
    ))
    yb_components = []
    for y in range(1, 10):
        g, h = GRID.cell(y), GRID.auxiliary(y)
        for aux in (h, h.negate()):
            yb_components.append(MixedComponent(
                Fraction(1, 18),
                PureSource(generators=(str(g), str(aux))),
                (("Y", str(y)), ("B", str(y))),
            ))
    bell = PureSource(generators=("+XX", "+ZZ"))
    edges = (
        Edge("xa", (0, 2), xa),
        Edge("ab1", (1, 5), bell),
        Edge("ab2", (3, 7), bell),
        Edge("yb", (4, 6), MixedSource(tuple(yb_components))),
    )
    parties = (
        Party("X"),
        Party("A", ALICE_QUBITS, 0, CliffordCircuit.parse("CX 0 1;H 0;CX 2 3;H 2"), alice_table(), "alice.post"),
        Party("B", BOB_QUBITS, 0, CliffordCircuit.parse("CX 4 5;H 4;CX 6 7;H 6"), bob_table(), "bob.post"),
        Party("Y"),
    )
    return NetworkSpec(8, edges, parties)


# -- scoring -----------------------------------------------------------------

def _wins(x, y, triple, bob):
    prod = triple[0] * triple[1] * triple[2]
    pos = GRID.context(x).index(y)
    return prod == GRID.sign(x) and triple[pos] == bob


def _parse(key, d):
    seg = d.segments(key)
    try:
        x, y = int(seg["X"]), int(seg["Y"])
        a, b = seg["A"], seg["B"]
        triple = tuple(1 if ch == "+" else -1 for ch in a[5:8])
        bob = 1 if b[5] == "+" else -1
    except (KeyError, ValueError, IndexError):
        raise ShapeMismatch(f"key {key!r} is not a magic-square outcome") from None
    if int(a[4]) != x or int(b[4]) != y:
        raise ShapeMismatch(f"key {key!r}: label copies disagree")
    return x, y, triple, bob


def score_table(d: OutcomeDistribution):
    """``{(x, y): Pr[win | x, y]}`` for every question pair present in ``d``."""
    if [name for name, _ in d.groups] != ["X", "A", "B", "Y"]:
        raise ShapeMismatch(f"expected parties X, A, B, Y; got {d.party_names}")
    mass, won = {}, {}
    for key, p in d.items():
        x, y, triple, bob = _parse(key, d)
        mass[(x, y)] = mass.get((x, y), Fraction(0)) + p
        if y not in GRID.context(x) or _wins(x, y, triple, bob):
            won[(x, y)] = won.get((x, y), Fraction(0)) + p
    return {xy: won.get(xy, Fraction(0)) / m for xy, m in mass.items()}


def winning_probability(d: OutcomeDistribution, scoring="containing") -> Fraction:
    """Game value of ``d``.

    ``containing`` (default) averages over the 18 pairs whose context ``x``
    contains cell ``y``; ``auto`` averages over all 54 pairs with the other
    36 counted as wins.
    """
    if scoring not in SCORINGS:
        raise ValueError(f"unknown scoring {scoring!r}")
    table = score_table(d)
    if scoring == "containing":
        pairs = [(x, y) for x in range(1, 7) for y in GRID.context(x)]
    else:
        pairs = [(x, y) for x in range(1, 7) for y in range(1, 10)]
    missing = [xy for xy in pairs if xy not in table]
    if missing:
        raise ShapeMismatch(f"question pairs {missing[:3]} have zero probability")
    return sum((table[xy] for xy in pairs), Fraction(0)) / len(pairs)


def valid_triples(x):
    return [t for t in itertools.product((1, -1), repeat=3) if t[0] * t[1] * t[2] == GRID.sign(x)]


def strategy_distribution(alice, bob) -> OutcomeDistribution:
    """Outcome distribution of a deterministic classical strategy.

    ``alice[x - 1]`` is the triple for context ``x``; ``bob[y - 1]`` the sign
    for cell ``y``.  Bell-bit fields are reported as zeros.
    """
    w = Fraction(1, 54)
    probs = {}
    for x in range(1, 7):
        for y in range(1, 10):
            a = "0000" + str(x) + "".join(_sym(v) for v in alice[x - 1])
            b = "0000" + str(y) + _sym(bob[y - 1])
            probs[str(x) + a + b + str(y)] = w
    return OutcomeDistribution(probs, (("X", 1), ("A", 8), ("B", 6), ("Y", 1)))


def _agreement_tensor(bob_strategies):
    """``agree[x][b, o]``: cells of context ``x`` where option ``o`` matches Bob strategy ``b``."""
    out = []
    for x in range(1, 7):
        opts = np.array(valid_triples(x))                     # (4, 3)
        cells = [y - 1 for y in GRID.context(x)]
        bob = bob_strategies[:, cells]                        # (B, 3)
        out.append((bob[:, None, :] == opts[None, :, :]).sum(axis=2))  # (B, 4)
    return out


def classical_bound(scoring="containing", bob_constant=False) -> Fraction:
    """Best value over all deterministic strategies, by exhaustive enumeration.

    Alice: one of the 4 parity-respecting triples per context (4**6); Bob: a
    sign per cell (2**9, or just the two constant strategies).  Shared
    randomness is a convex mixture of these and cannot do better.
    """
    if scoring not in SCORINGS:
        raise ValueError(f"unknown scoring {scoring!r}")
    if bob_constant:
        bob = np.array([[1] * 9, [-1] * 9])
    else:
        bob = np.array(list(itertools.product((1, -1), repeat=9)))
    agree = _agreement_tensor(bob)
    total = np.zeros((len(bob),) + (4,) * 6, dtype=np.int64)
    for i, a in enumerate(agree):
        shape = [len(bob)] + [1] * 6
        shape[i + 1] = 4
        total = total + a.reshape(shape)
    best = int(total.max())
    if scoring == "containing":
        return Fraction(best, 18)
    return Fraction(best + 36, 54)


def yb_components(y):
    """The two pure components ``(g_y, +h_y)`` and ``(g_y, -h_y)`` of cell ``y``."""
    g, h = GRID.cell(y), GRID.auxiliary(y)
    return [(g, h), (g, h.negate())]


def report(scoring="containing", with_bound=True):
    from .network import run_quantum

    d = run_quantum(magic_square_spec())
    q = winning_probability(d, scoring)
    out = {"quantum_value": q, "scoring": scoring}
    if with_bound:
        c = classical_bound(scoring)
        out["classical_bound"] = c
        out["nonlocal"] = q > c
    return out, d
