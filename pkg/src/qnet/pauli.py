"""Signed Pauli operators in the symplectic (x, z) representation.

An n-qubit operator is ``i**phase * P_0 (x) ... (x) P_{n-1}`` where qubit ``q``
is decoded from bit ``q`` of the packed ``x`` and ``z`` words::

    (0, 0) -> I    (1, 0) -> X    (0, 1) -> Z    (1, 1) -> Y

The (1, 1) pattern is ``Y`` itself, not ``XZ``, so every operator with phase
0 or 2 is Hermitian.  Textual literals put qubit 0 leftmost: ``"-XZ"`` is
``-X_0 Z_1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import DimensionError, GateIndexError, ParseError

_SIGNS = {"+": 0, "+i": 1, "-": 2, "-i": 3}
_SIGN_TEXT = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_LETTERS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_BITS = {v: k for k, v in _LETTERS.items()}


@dataclass(frozen=True, slots=True)
class PauliOperator:
    n: int
    phase: int
    x: int
    z: int

    def __post_init__(self):
        if self.phase not in (0, 1, 2, 3):
            object.__setattr__(self, "phase", self.phase % 4)
        limit = 1 << self.n
        if self.x >= limit or self.z >= limit or self.x < 0 or self.z < 0:
            raise DimensionError(f"bit words exceed width {self.n}")

    @classmethod
    def identity(cls, n):
        return cls(n, 0, 0, 0)

    @classmethod
    def single(cls, n, qubit, letter):
        if not 0 <= qubit < n:
            raise GateIndexError(f"qubit {qubit} outside width {n}")
        xb, zb = _BITS[letter]
        return cls(n, 0, xb << qubit, zb << qubit)

    @classmethod
    def z_string(cls, n, mask):
        return cls(n, 0, 0, mask)

    @classmethod
    def from_label(cls, text):
        text = text.strip()
        for prefix in ("+i", "-i", "+", "-"):
            if text.startswith(prefix):
                phase = _SIGNS[prefix]
                body = text[len(prefix):]
                break
        else:
            phase, body = 0, text
        x = z = 0
        for q, ch in enumerate(body):
            try:
                xb, zb = _BITS[ch]
            except KeyError:
                raise ParseError(f"bad Pauli letter {ch!r} in {text!r}") from None
            x |= xb << q
            z |= zb << q
        if not body:
            raise ParseError(f"empty Pauli literal {text!r}")
        return cls(len(body), phase, x, z)

    def __str__(self):
        return _SIGN_TEXT[self.phase] + self.letters()

    def __repr__(self):
        return f"PauliOperator({str(self)!r})"

    def letters(self):
        return "".join(
            _LETTERS[((self.x >> q) & 1, (self.z >> q) & 1)] for q in range(self.n)
        )

    @property
    def is_real(self):
        return self.phase in (0, 2)

    @property
    def sign_bit(self):
        """1 for a minus sign; only meaningful on real-signed operators."""
        return self.phase >> 1

    @property
    def support(self):
        return self.x | self.z

    def bare(self):
        return PauliOperator(self.n, 0, self.x, self.z)

    def negate(self):
        return PauliOperator(self.n, self.phase + 2, self.x, self.z)

    def symplectic(self):
        """The 2n-bit word ``x | z << n``."""
        return self.x | (self.z << self.n)

    def __mul__(self, other):
        return multiply(self, other)

    def __neg__(self):
        return self.negate()


def _check_width(p, q):
    if p.n != q.n:
        raise DimensionError(f"width mismatch: {p.n} vs {q.n}")


def multiply(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    _check_width(p, q)
    x1, z1, x2, z2 = p.x, p.z, q.x, q.z
    y1 = x1 & z1
    xo = x1 & ~z1
    zo = z1 & ~x1
    # Per-site factor i**g from Aaronson-Gottesman's g(x1, z1, x2, z2).
    plus = (y1 & z2 & ~x2) | (xo & z2 & x2) | (zo & x2 & ~z2)
    minus = (y1 & x2 & ~z2) | (xo & z2 & ~x2) | (zo & x2 & z2)
    phase = p.phase + q.phase + plus.bit_count() - minus.bit_count()
    return PauliOperator(p.n, phase % 4, x1 ^ x2, z1 ^ z2)


def commutes(p: PauliOperator, q: PauliOperator) -> bool:
    _check_width(p, q)
    return ((p.x & q.z) ^ (p.z & q.x)).bit_count() % 2 == 0


def supports(p: PauliOperator) -> tuple[frozenset, frozenset, frozenset]:
    """Qubit index sets where ``p`` acts as X, Y and Z respectively."""
    def members(mask):
        return frozenset(q for q in range(p.n) if (mask >> q) & 1)

    return members(p.x & ~p.z), members(p.x & p.z), members(p.z & ~p.x)


def product(ops: Iterable[PauliOperator], n: int) -> PauliOperator:
    acc = PauliOperator.identity(n)
    for op in ops:
        acc = multiply(acc, op)
    return acc


# -- Clifford circuits -------------------------------------------------------

GATE_ARITY = {"H": 1, "S": 1, "X": 1, "Y": 1, "Z": 1, "CX": 2, "CZ": 2}


class Gate(NamedTuple):
    name: str
    qubits: tuple[int, ...]

    def __str__(self):
        return " ".join([self.name, *map(str, self.qubits)])


def make_gate(name, *qubits):
    name = name.upper()
    if name not in GATE_ARITY:
        raise ParseError(f"unknown gate {name!r}")
    if len(qubits) != GATE_ARITY[name]:
        raise ParseError(f"gate {name} takes {GATE_ARITY[name]} qubit(s), got {len(qubits)}")
    qubits = tuple(int(q) for q in qubits)
    if any(q < 0 for q in qubits):
        raise ParseError(f"negative qubit index in {name} {qubits}")
    if len(set(qubits)) != len(qubits):
        raise ParseError(f"gate {name} repeats a qubit: {qubits}")
    return Gate(name, qubits)


@dataclass(frozen=True)
class CliffordCircuit:
    gates: tuple[Gate, ...] = ()

    @classmethod
    def parse(cls, text):
        """Parse ``"H 0;CX 0 1"``.  Blank input is the empty circuit."""
        gates = []
        for chunk in text.split(";"):
            tokens = chunk.split()
            if not tokens:
                continue
            try:
                gates.append(make_gate(tokens[0], *tokens[1:]))
            except ValueError:
                raise ParseError(f"bad gate {chunk.strip()!r}") from None
        return cls(tuple(gates))

    def __str__(self):
        return ";".join(str(g) for g in self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __len__(self):
        return len(self.gates)

    def __add__(self, other):
        return CliffordCircuit(self.gates + tuple(other.gates))

    @property
    def qubits(self):
        return frozenset(q for g in self.gates for q in g.qubits)

    def width(self):
        return max(self.qubits, default=-1) + 1

    def inverse(self):
        out = []
        for g in reversed(self.gates):
            # S is the only generator that is not self-inverse; S^-1 = S^3.
            out.extend([g] * 3 if g.name == "S" else [g])
        return CliffordCircuit(tuple(out))

    def relabel(self, mapping):
        return CliffordCircuit(
            tuple(Gate(g.name, tuple(mapping[q] for q in g.qubits)) for g in self.gates)
        )


def circuit(*specs) -> CliffordCircuit:
    """Shorthand: ``circuit(("H", 0), ("CX", 0, 1))``."""
    return CliffordCircuit(tuple(make_gate(*s) for s in specs))


def _conjugate_gate(n, phase, x, z, gate):
    name, qs = gate
    for q in qs:
        if q >= n:
            raise GateIndexError(f"gate {gate} touches qubit {q} of a {n}-qubit operator")
    if name == "CX":
        a, b = qs
        xa, za = (x >> a) & 1, (z >> a) & 1
        xb, zb = (x >> b) & 1, (z >> b) & 1
        if xa and zb and not (xb ^ za):
            phase += 2
        x ^= xa << b
        z ^= zb << a
        return phase, x, z
    if name == "CZ":
        a, b = qs
        for sub in (Gate("H", (b,)), Gate("CX", (a, b)), Gate("H", (b,))):
            phase, x, z = _conjugate_gate(n, phase, x, z, sub)
        return phase, x, z
    (q,) = qs
    bit = 1 << q
    xq, zq = x & bit, z & bit
    if name == "H":
        if xq and zq:
            phase += 2
        x = (x & ~bit) | zq
        z = (z & ~bit) | xq
    elif name == "S":
        if xq and zq:
            phase += 2
        z ^= xq
    elif name == "X":
        if zq:
            phase += 2
    elif name == "Z":
        if xq:
            phase += 2
    elif name == "Y":
        if (xq != 0) != (zq != 0):
            phase += 2
    return phase, x, z


def conjugate(p: PauliOperator, c: CliffordCircuit) -> PauliOperator:
    """Heisenberg image ``U p U^dagger`` for the circuit unitary ``U``."""
    phase, x, z = p.phase, p.x, p.z
    for gate in c:
        phase, x, z = _conjugate_gate(p.n, phase, x, z, gate)
    return PauliOperator(p.n, phase % 4, x, z)


def embed(p: PauliOperator, positions, n) -> PauliOperator:
    """Place a ``len(positions)``-qubit operator onto ``positions`` of ``n`` qubits."""
    x = z = 0
    for local, target in enumerate(positions):
        x |= ((p.x >> local) & 1) << target
        z |= ((p.z >> local) & 1) << target
    return PauliOperator(n, p.phase, x, z)


def restrict(p: PauliOperator, positions) -> PauliOperator:
    """Bare operator on ``positions`` (in the given order); phase dropped."""
    x = z = 0
    for local, source in enumerate(positions):
        x |= ((p.x >> source) & 1) << local
        z |= ((p.z >> source) & 1) << local
    return PauliOperator(len(positions), 0, x, z)
