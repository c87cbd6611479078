"""Dense linear-algebra cross-checks: statevectors, channels, Schmidt ranks.

Nothing here uses the stabilizer engine.  Sources given by generators are
built as the range of the projector ``prod_i (I + g_i)/2``; preparation
circuits are applied gate by gate.  Qubit 0 is the first tensor factor
(the most significant bit of a dense index).

Channels are ``d^2 x d^2`` superoperators in the column-stacking
convention: ``vec(rho)[i + d*j] = rho[i, j]``.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .distribution import OutcomeDistribution
from .errors import NotCompletelyPositive, NotTracePreserving, ParseError, TooManyQubits
from .network import KeyAssembler, NetworkSpec, PureSource, validate
from .pauli import CliffordCircuit, PauliOperator

DEFAULT_MAX_QUBITS = 14
DIST_TOL = 1e-9
MATRIX_TOL = 1e-10

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.array([[1, 0], [0, 1j]], dtype=complex)
_CX = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
_CZ = np.diag([1, 1, 1, -1]).astype(complex)
GATE_MATRICES = {"H": _H, "S": _S, "X": _X, "Y": _Y, "Z": _Z, "CX": _CX, "CZ": _CZ}
_PAULI = {"I": _I2, "X": _X, "Y": _Y, "Z": _Z}


def max_qubits():
    raw = os.environ.get("QNET_MAX_QUBITS")
    return int(raw) if raw else DEFAULT_MAX_QUBITS


@dataclass
class DenseState:
    n: int
    amps: np.ndarray  # shape (2**n,)

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        if self.amps.shape != (2 ** self.n,):
            raise ValueError(f"need {2 ** self.n} amplitudes, got {self.amps.shape}")
        if abs(np.vdot(self.amps, self.amps).real - 1) > 1e-12:
            raise ValueError("state is not normalized")

    def tensor(self):
        return self.amps.reshape((2,) * self.n) if self.n else self.amps.reshape(())


def pauli_matrix(p: PauliOperator) -> np.ndarray:
    m = np.array([[1]], dtype=complex)
    for ch in p.letters():
        m = np.kron(m, _PAULI[ch])
    return (1j ** p.phase) * m


def apply_gate(psi: np.ndarray, name, qubits) -> np.ndarray:
    """Apply a gate to a state tensor of shape ``(2,) * n``."""
    k = len(qubits)
    u = GATE_MATRICES[name].reshape((2,) * (2 * k))
    out = np.tensordot(u, psi, axes=(list(range(k, 2 * k)), list(qubits)))
    return np.moveaxis(out, list(range(k)), list(qubits))


def apply_circuit(psi: np.ndarray, c: CliffordCircuit) -> np.ndarray:
    for g in c:
        psi = apply_gate(psi, g.name, g.qubits)
    return psi


def zero_vector(n) -> np.ndarray:
    psi = np.zeros((2,) * n, dtype=complex)
    psi[(0,) * n] = 1
    return psi


def stabilizer_vector(gens) -> np.ndarray:
    """Normalized joint +1 eigenvector of the given Pauli literals, as a tensor."""
    ops = [g if isinstance(g, PauliOperator) else PauliOperator.from_label(g) for g in gens]
    n = ops[0].n
    proj = np.eye(2 ** n, dtype=complex)
    for g in ops:
        proj = proj @ (np.eye(2 ** n) + pauli_matrix(g)) / 2
    col = int(np.argmax(np.linalg.norm(proj, axis=0)))
    v = proj[:, col]
    v = v / np.linalg.norm(v)
    return v.reshape((2,) * n)


def source_vector(src: PureSource, width) -> np.ndarray:
    if src.generators is not None:
        return stabilizer_vector(src.generators)
    return apply_circuit(zero_vector(width), src.prep)


def _edge_components(edge):
    width = len(edge.vertices)
    if isinstance(edge.source, PureSource):
        return [(1.0, source_vector(edge.source, width), ())]
    return [(float(c.weight), source_vector(c.source, width), c.labels) for c in edge.source.components]


def _assemble(pieces, total):
    """Tensor ``(vector, positions)`` pieces into one ``total``-qubit tensor."""
    psi = np.array(1, dtype=complex)
    order = []
    for vec, positions in pieces:
        psi = np.multiply.outer(psi, vec)
        order.extend(positions)
    return np.transpose(psi, np.argsort(order))


def statevector_run(spec: NetworkSpec, bound=None) -> dict[str, float]:
    """Float outcome distribution by dense simulation of every mixture component."""
    validate(spec)
    total = spec.total_qubits
    bound = max_qubits() if bound is None else bound
    if total > bound:
        raise TooManyQubits(f"{total} qubits exceed the oracle bound {bound}")
    assembler = KeyAssembler(spec)
    anc = [q for qs in spec.ancilla_indices().values() for q in qs]
    ancilla_pieces = [(np.array([1, 0], dtype=complex), [q]) for q in anc]
    circuit = spec.combined_circuit()
    per_edge = [_edge_components(e) for e in spec.edges]
    acc: dict[str, float] = {}
    for choice in itertools.product(*per_edge):
        weight = 1.0
        labels: dict[str, str] = {}
        pieces = []
        for e, (w, vec, labs) in zip(spec.edges, choice):
            weight *= w
            pieces.append((vec, list(e.vertices)))
            for party, symbols in labs:
                labels[party] = labels.get(party, "") + symbols
        psi = apply_circuit(_assemble(pieces + ancilla_pieces, total), circuit)
        probs = np.abs(psi.reshape(-1)) ** 2
        idx = np.nonzero(probs > 1e-15)[0]
        # dense index: qubit 0 is the most significant bit; keys want bit q = qubit q
        points = np.zeros(len(idx), dtype=np.uint64)
        for q in range(total):
            bit = (idx >> (total - 1 - q)) & 1
            points |= bit.astype(np.uint64) << np.uint64(q)
        for key, p in zip(assembler.keys(points, labels), probs[idx]):
            acc[key] = acc.get(key, 0.0) + weight * float(p)
    return acc


def max_deviation(exact: OutcomeDistribution, approx: dict[str, float]) -> float:
    keys = set(exact.probs) | set(approx)
    return max((abs(float(exact[k]) - approx.get(k, 0.0)) for k in keys), default=0.0)


def density_matrix(components) -> np.ndarray:
    """``sum_i w_i |psi_i><psi_i|`` for ``(weight, generator literals)`` components."""
    rho = None
    for w, gens in components:
        v = stabilizer_vector(gens).reshape(-1)
        term = float(w) * np.outer(v, v.conj())
        rho = term if rho is None else rho + term
    return rho


def schmidt_rank(state, left, tol=1e-9, bound=None) -> int:
    """Rank of the amplitude matrix split as ``left`` | rest."""
    if not isinstance(state, DenseState):
        arr = np.asarray(state, dtype=complex)
        state = DenseState(int(round(np.log2(arr.size))), arr.reshape(-1))
    bound = max_qubits() if bound is None else bound
    if state.n > bound:
        raise TooManyQubits(f"{state.n} qubits exceed the oracle bound {bound}")
    left = list(left)
    right = [q for q in range(state.n) if q not in set(left)]
    mat = np.transpose(state.tensor(), left + right).reshape(2 ** len(left), 2 ** len(right))
    sv = np.linalg.svd(mat, compute_uv=False)
    return int(np.sum(sv > tol))


# -- channels ------------------------------------------------------------------

def channel_dim(ch: np.ndarray) -> int:
    d = int(round(np.sqrt(ch.shape[0])))
    if ch.shape != (d * d, d * d):
        raise ValueError(f"superoperator must be d^2 x d^2, got {ch.shape}")
    return d


def unitary_channel(u: np.ndarray) -> np.ndarray:
    # vec(U rho U^dag) = (conj(U) kron U) vec(rho) under column stacking
    return np.kron(u.conj(), u)


def kraus_channel(kraus) -> np.ndarray:
    return sum(np.kron(k.conj(), k) for k in kraus)


def dephasing(d) -> np.ndarray:
    m = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        m[i + d * i, i + d * i] = 1
    return m


def classical_channel(t: np.ndarray) -> np.ndarray:
    """Stochastic matrix ``t[i, j] = Pr(i | j)`` acting on diagonals; coherences erased."""
    d = t.shape[0]
    m = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            m[i + d * i, j + d * j] = t[i, j]
    return m


def random_channel(d, rng: np.random.Generator, n_kraus=None) -> np.ndarray:
    """Random CPTP map from a random isometry ``C^d -> C^d (x) C^r``."""
    r = n_kraus or d
    g = rng.normal(size=(d * r, d)) + 1j * rng.normal(size=(d * r, d))
    q, _ = np.linalg.qr(g)
    kraus = [q[k * d:(k + 1) * d, :] for k in range(r)]
    return kraus_channel(kraus)


def random_stochastic(d, rng: np.random.Generator) -> np.ndarray:
    t = rng.random((d, d))
    return t / t.sum(axis=0, keepdims=True)


def choi(ch: np.ndarray) -> np.ndarray:
    """``J = sum_kl |k><l| (x) E(|k><l|)``."""
    d = channel_dim(ch)
    j = np.zeros((d * d, d * d), dtype=complex)
    for k in range(d):
        for l in range(d):
            out = ch[:, k + d * l].reshape(d, d, order="F")
            j[k * d:(k + 1) * d, l * d:(l + 1) * d] = out
    return j


def check_channel(ch: np.ndarray, tol=MATRIX_TOL):
    d = channel_dim(ch)
    trace_rows = ch[[i + d * i for i in range(d)], :].sum(axis=0)
    if np.max(np.abs(trace_rows - _trace_row(d))) > tol:
        raise NotTracePreserving("trace of output differs from trace of input")
    j = choi(ch)
    if np.max(np.abs(j - j.conj().T)) > tol:
        raise NotCompletelyPositive("Choi matrix is not Hermitian")
    if np.linalg.eigvalsh(j).min() < -tol:
        raise NotCompletelyPositive("Choi matrix has a negative eigenvalue")


def _trace_row(d):
    """``vec(I)^T``: the linear functional ``rho -> tr(rho)``."""
    row = np.zeros(d * d)
    row[[i + d * i for i in range(d)]] = 1
    return row


def check_classically_simulatable(ch: np.ndarray, tol=MATRIX_TOL) -> bool:
    """True iff ``Delta . E == Delta . E . Delta`` (after validating the channel)."""
    check_channel(ch, tol)
    delta = dephasing(channel_dim(ch))
    lhs = delta @ ch
    return bool(np.max(np.abs(lhs - lhs @ delta)) <= tol)


def load_channel(path) -> np.ndarray:
    text = Path(path).read_text(encoding="utf-8")
    return parse_channel(text)


def parse_channel(text) -> np.ndarray:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    numbered = [(i + 1, ln) for i, ln in enumerate(lines) if ln]
    if not numbered:
        raise ParseError("empty channel file", 1)
    lineno, head = numbered[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != "dim" or not parts[1].isdigit() or int(parts[1]) < 1:
        raise ParseError("expected 'dim d'", lineno)
    d = int(parts[1])
    values = []
    for lineno, ln in numbered[1:]:
        for tok in ln.split():
            try:
                values.append(float(tok))
            except ValueError:
                raise ParseError(f"bad number {tok!r}", lineno) from None
    need = 2 * d ** 4
    if len(values) != need:
        raise ParseError(f"expected {need} numbers ({d ** 4} re/im pairs), got {len(values)}", numbered[-1][0])
    arr = np.array(values).reshape(-1, 2)
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(d * d, d * d)


def dump_channel(ch: np.ndarray) -> str:
    d = channel_dim(ch)
    lines = [f"dim {d}"]
    for row in ch:
        lines.append(" ".join(f"{z.real:.17g} {z.imag:.17g}" for z in row))
    return "\n".join(lines) + "\n"
