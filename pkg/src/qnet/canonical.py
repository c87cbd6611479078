"""Bell-pair normal form of bipartite stabilizer states and canonical 2-networks.

Any stabilizer state on ``L u R`` is mapped by a Clifford ``U_L (x) U_R`` to a
product of Bell pairs ``|Phi+>`` across the cut and ``|0>`` on the remaining
qubits.  The reduction below works on the stabilizer group directly:

* an element supported on one side only is turned into ``+Z_t`` for a
  single qubit ``t`` on that side, which is then split off as ``|0>``;
* otherwise two generators with anticommuting left parts exist; their left
  parts become ``X_t, Z_t`` and their right parts ``X_r, Z_r``, so the group
  contains ``+XX, +ZZ`` on ``(t, r)`` and that pair is split off.

Each step finalizes at least one qubit, so the loop ends after at most
``|L| + |R|`` rounds.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import gf2
from .errors import BadPartition, MixedSourcePresent, NotTwoNetwork
from .network import Edge, NetworkSpec, Party, PureSource, validate
from .pauli import CliffordCircuit, Gate, PauliOperator, commutes, conjugate, multiply, restrict
from .stabilizer import StabilizerTableau

BELL_GENERATORS = ("+XX", "+ZZ")
ZERO_GENERATORS = ("+Z",)


@dataclass(frozen=True)
class BipartiteDecomposition:
    circuit_left: CliffordCircuit
    circuit_right: CliffordCircuit
    pairs: tuple[tuple[int, int], ...]  # (left qubit, right qubit), each carrying |Phi+>
    singles: tuple[int, ...]            # qubits left in |0>

    @property
    def bell_count(self):
        return len(self.pairs)

    @property
    def circuit(self):
        return self.circuit_left + self.circuit_right

    def target_generators(self, n):
        """Stabilizer generators of the normal form on ``n`` qubits."""
        out = []
        for a, b in self.pairs:
            both = (1 << a) | (1 << b)
            out += [PauliOperator(n, 0, both, 0), PauliOperator(n, 0, 0, both)]
        out += [PauliOperator.single(n, q, "Z") for q in self.singles]
        return out


class _Reducer:
    def __init__(self, gens, left, right):
        self.n = gens[0].n
        self.gens = list(gens)
        self.free = {"L": set(left), "R": set(right)}
        self.gates = {"L": [], "R": []}
        self.pairs, self.singles = [], []

    def apply(self, side, name, *qubits):
        gate = Gate(name, qubits)
        self.gates[side].append(gate)
        c = CliffordCircuit((gate,))
        self.gens = [conjugate(g, c) for g in self.gens]

    def letter(self, p, q):
        return "IXZY"[((p.x >> q) & 1) | (((p.z >> q) & 1) << 1)]

    def to_x(self, side, p, qubits):
        """Single-qubit gates turning ``p`` into X on every site of ``qubits`` it touches."""
        for q in qubits:
            ch = self.letter(p, q)
            if ch == "Z":
                self.apply(side, "H", q)
            elif ch == "Y":
                self.apply(side, "S", q)

    def reduce_to_x(self, side, index):
        """Map the ``side`` part of generator ``index`` to a single ``X_t``; return ``t``."""
        qubits = sorted(q for q in self.free[side] if (self.gens[index].support >> q) & 1)
        self.to_x(side, self.gens[index], qubits)
        t = qubits[0]
        for q in qubits[1:]:
            self.apply(side, "CX", t, q)
        return t

    def reduce_to_z(self, side, index):
        """Map the ``side`` part of generator ``index`` to a single ``Z_t``; return ``t``."""
        qubits = sorted(q for q in self.free[side] if (self.gens[index].support >> q) & 1)
        for q in qubits:
            ch = self.letter(self.gens[index], q)
            if ch == "Y":
                self.apply(side, "S", q)
            if ch != "Z":
                self.apply(side, "H", q)
        t = qubits[0]
        for q in qubits[1:]:
            self.apply(side, "CX", q, t)
        return t

    def reduce_partner(self, side, index, t):
        """Map the ``side`` part of generator ``index`` to ``Z_t``, keeping ``X_t`` fixed."""
        for q in sorted(self.free[side] - {t}):
            ch = self.letter(self.gens[index], q)
            if ch == "X":
                self.apply(side, "H", q)
            elif ch == "Y":
                self.apply(side, "S", q)
                self.apply(side, "H", q)
            if ch != "I":
                self.apply(side, "CX", q, t)
        if self.letter(self.gens[index], t) == "Y":
            # H S H fixes X and sends Y to Z (up to sign).
            for name in ("H", "S", "H"):
                self.apply(side, name, t)
        assert self.letter(self.gens[index], t) == "Z"

    def eliminate(self, columns):
        """Row-reduce generators on the given (qubit) columns; return rows that vanish there."""
        mask = sum(1 << q for q in columns)
        rows = list(self.gens)
        done = []
        for q in sorted(columns):
            for bit_of in (lambda r: (r.x >> q) & 1, lambda r: (r.z >> q) & 1):
                idx = next((i for i, r in enumerate(rows) if bit_of(r)), None)
                if idx is None:
                    continue
                pivot = rows.pop(idx)
                rows = [multiply(r, pivot) if bit_of(r) else r for r in rows]
                done.append(pivot)
        self.gens = done + rows
        return [len(done) + i for i, r in enumerate(rows) if r.support & ~mask and not r.support & mask]

    def clear(self, keep, qubits):
        """Drop the finalized generators ``keep``; multiply them out of the rest.

        The others commute with every kept generator, so on ``qubits`` they
        match a product of kept generators (``I``, ``Z_t``, or one of
        ``XX, ZZ, YY`` on a pair).
        """
        mask = sum(1 << q for q in qubits)
        kept = [self.gens[k] for k in keep]
        combos = [PauliOperator.identity(self.n)]
        for g in kept:
            combos += [multiply(c, g) for c in combos]
        out = []
        for i, g in enumerate(self.gens):
            if i in keep:
                continue
            match = next(c for c in combos if (c.x ^ g.x) & mask == 0 and (c.z ^ g.z) & mask == 0)
            g = multiply(g, match)
            assert not g.support & mask
            out.append(g)
        self.gens = out

    def split_local(self, side):
        other = "R" if side == "L" else "L"
        local = self.eliminate(self.free[other])
        if not local:
            return False
        i = local[0]
        t = self.reduce_to_z(side, i)
        if self.gens[i].sign_bit:
            self.apply(side, "X", t)
        assert self.gens[i] == PauliOperator.single(self.n, t, "Z")
        self.clear([i], [t])
        self.free[side].discard(t)
        self.singles.append(t)
        return True

    def split_pair(self):
        lmask = sum(1 << q for q in self.free["L"])
        left_parts = [PauliOperator(self.n, 0, g.x & lmask, g.z & lmask) for g in self.gens]
        pair = next(
            ((i, j) for i in range(len(self.gens)) for j in range(i + 1, len(self.gens))
             if not commutes(left_parts[i], left_parts[j])),
            None,
        )
        assert pair is not None, "no local element and no anticommuting pair"
        i, j = pair
        t = self.reduce_to_x("L", i)
        self.reduce_partner("L", j, t)
        r = self.reduce_to_x("R", i)
        self.reduce_partner("R", j, r)
        if self.gens[i].sign_bit:
            self.apply("L", "Z", t)
        if self.gens[j].sign_bit:
            self.apply("L", "X", t)
        both = (1 << t) | (1 << r)
        assert self.gens[i] == PauliOperator(self.n, 0, both, 0)
        assert self.gens[j] == PauliOperator(self.n, 0, 0, both)
        self.clear([i, j], [t, r])
        self.free["L"].discard(t)
        self.free["R"].discard(r)
        self.pairs.append((t, r))

    def run(self):
        while self.free["L"] or self.free["R"]:
            if self.split_local("L") or self.split_local("R"):
                continue
            self.split_pair()


def decompose_bipartite(src, left, right) -> BipartiteDecomposition:
    """Local circuits taking ``src`` (indices ``0..m-1``) to Bell pairs and ``|0>`` qubits."""
    t = src if isinstance(src, StabilizerTableau) else src.tableau(len(left) + len(right))
    left, right = sorted(left), sorted(right)
    if set(left) & set(right) or sorted(left + right) != list(range(t.n)):
        raise BadPartition(f"{left} | {right} is not a partition of 0..{t.n - 1}")
    red = _Reducer(t.stabilizers, left, right)
    red.run()
    return BipartiteDecomposition(
        CliffordCircuit(tuple(red.gates["L"])),
        CliffordCircuit(tuple(red.gates["R"])),
        tuple(red.pairs),
        tuple(sorted(red.singles)),
    )


def schmidt_exponent(t: StabilizerTableau, left) -> int:
    """``log2`` of the Schmidt rank across ``left``, from the rank of the right projection."""
    right = [q for q in range(t.n) if q not in set(left)]
    local = gf2.rank([restrict(g, right).symplectic() for g in t.stabilizers], 2 * len(right))
    # dim(proj_R S) = |R| + bell_count
    return local - len(right)


def _unique(name, taken):
    while name in taken:
        name += "_"
    taken.add(name)
    return name


def canonicalize(spec: NetworkSpec):
    """Equivalent network of Bell edges and one-vertex ``|0>`` edges.

    Returns ``(canonical_spec, layout)``.  Every qubit keeps its index
    (ancillas become vertices with the same index), so ``layout`` is the
    identity map from canonical qubit to original qubit and output keys line
    up without reordering.
    """
    k = validate(spec)
    if spec.has_mixed:
        raise MixedSourcePresent("canonicalize needs pure sources")
    if k > 2:
        raise NotTwoNetwork(f"network has k={k}")
    owner = spec.owner()
    total = spec.total_qubits
    taken = {e.name for e in spec.edges}
    edges = []
    prefix = {p.name: [] for p in spec.parties}

    for e in spec.edges:
        verts = list(e.vertices)
        first = owner[verts[0]]
        left = [i for i, v in enumerate(verts) if owner[v] == first]
        right = [i for i, v in enumerate(verts) if owner[v] != first]
        dec = decompose_bipartite(e.source.tableau(len(verts)), left, right)
        if right:
            second = owner[verts[right[0]]]
            prefix[second].extend(dec.circuit_right.inverse().relabel(verts).gates)
        prefix[first].extend(dec.circuit_left.inverse().relabel(verts).gates)
        if len(verts) == 2 and dec.bell_count == 1 and not dec.singles and not len(dec.circuit):
            edges.append(e if e.source.generators == BELL_GENERATORS else
                         Edge(e.name, e.vertices, PureSource(generators=BELL_GENERATORS)))
            continue
        if len(verts) == 1 and not len(dec.circuit) and e.source.generators == ZERO_GENERATORS:
            edges.append(e)
            continue
        for i, (a, b) in enumerate(dec.pairs):
            name = _unique(f"{e.name}.b{i}", taken)
            edges.append(Edge(name, (verts[a], verts[b]), PureSource(generators=BELL_GENERATORS)))
        for i, a in enumerate(dec.singles):
            name = _unique(f"{e.name}.z{i}", taken)
            edges.append(Edge(name, (verts[a],), PureSource(generators=ZERO_GENERATORS)))

    anc = spec.ancilla_indices()
    parties = []
    for p in spec.parties:
        for q in anc[p.name]:
            edges.append(Edge(_unique(f"anc{q}", taken), (q,), PureSource(generators=ZERO_GENERATORS)))
        circuit = CliffordCircuit(tuple(prefix[p.name])) + p.circuit
        parties.append(Party(p.name, tuple(p.vertices) + tuple(anc[p.name]), 0, circuit, p.post, p.post_file))
    layout = {q: q for q in range(total)}
    return NetworkSpec(total, tuple(edges), tuple(parties)), layout
