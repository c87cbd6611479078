"""Seeded random networks for property tests and the acceptance corpus."""

from __future__ import annotations

import random
from fractions import Fraction

from .network import Edge, MixedComponent, MixedSource, NetworkSpec, Party, PureSource
from .pauli import CliffordCircuit, make_gate
from .stabilizer import apply_circuit, zero_state

BELL = PureSource(generators=("+XX", "+ZZ"))
ZERO = PureSource(generators=("+Z",))

SINGLE = ("H", "S", "X", "Y", "Z")
DOUBLE = ("CX", "CZ")
KINDS = ("canonical", "two", "k", "mixed")


def random_circuit(rng: random.Random, qubits, max_gates=40, min_gates=0) -> CliffordCircuit:
    qubits = list(qubits)
    if not qubits:
        return CliffordCircuit()
    gates = []
    for _ in range(rng.randint(min_gates, max_gates)):
        if len(qubits) > 1 and rng.random() < 0.4:
            a, b = rng.sample(qubits, 2)
            gates.append(make_gate(rng.choice(DOUBLE), a, b))
        else:
            gates.append(make_gate(rng.choice(SINGLE), rng.choice(qubits)))
    return CliffordCircuit(tuple(gates))


def random_source(rng: random.Random, width, as_generators=None) -> PureSource:
    """Random pure stabilizer source, as a prep circuit or as generator literals."""
    prep = random_circuit(rng, range(width), max_gates=6 * width + 4)
    if as_generators is None:
        as_generators = rng.random() < 0.5
    if not as_generators:
        return PureSource(prep=prep)
    t = apply_circuit(zero_state(width), prep)
    return PureSource(generators=tuple(t.labels()))


def _parties(rng, names, owned, ancillas, max_gates, total_vertices):
    parties, nxt = [], total_vertices
    for name in names:
        qubits = sorted(owned[name]) + list(range(nxt, nxt + ancillas[name]))
        nxt += ancillas[name]
        parties.append(Party(name, tuple(owned[name]), ancillas[name], random_circuit(rng, qubits, max_gates)))
    return tuple(parties)


def random_canonical_network(rng: random.Random, max_gates=40) -> NetworkSpec:
    """2-4 parties, 1-4 Bell edges across distinct parties, 0-2 degenerate vertices per party."""
    names = [f"P{i}" for i in range(rng.randint(2, 4))]
    owned = {p: [] for p in names}
    edges, v = [], 0
    for i in range(rng.randint(1, 4)):
        a, b = rng.sample(names, 2)
        edges.append(Edge(f"e{i}", (v, v + 1), BELL))
        owned[a].append(v)
        owned[b].append(v + 1)
        v += 2
    ancillas = {}
    for p in names:
        extra = rng.randint(0, 2)
        as_anc = sum(rng.random() < 0.5 for _ in range(extra))
        for _ in range(extra - as_anc):
            edges.append(Edge(f"z{v}", (v,), ZERO))
            owned[p].append(v)
            v += 1
        ancillas[p] = as_anc
    return NetworkSpec(v, tuple(edges), _parties(rng, names, owned, ancillas, max_gates, v))


def random_two_network(rng: random.Random, max_side=3, max_gates=30) -> NetworkSpec:
    """General bipartite pure sources (up to ``max_side`` | ``max_side``) and ancillas."""
    names = [f"P{i}" for i in range(rng.randint(2, 3))]
    owned = {p: [] for p in names}
    edges, v = [], 0
    for i in range(rng.randint(1, 3)):
        a, b = rng.sample(names, 2)
        la, lb = rng.randint(0, max_side), rng.randint(0, max_side)
        if la + lb == 0:
            la = 1
        size = la + lb
        verts = list(range(v, v + size))
        rng.shuffle(verts)
        owned[a].extend(verts[:la])
        owned[b].extend(verts[la:])
        edges.append(Edge(f"e{i}", tuple(range(v, v + size)), random_source(rng, size)))
        v += size
    for p in names:
        owned[p].sort()
    ancillas = {p: rng.randint(0, 2) for p in names}
    return NetworkSpec(v, tuple(edges), _parties(rng, names, owned, ancillas, max_gates, v))


def ghz_source(width) -> PureSource:
    gates = ["H 0"] + [f"CX 0 {j}" for j in range(1, width)]
    return PureSource(prep=CliffordCircuit.parse(";".join(gates)))


def random_k_network(rng: random.Random, max_teleported=7, max_gates=20) -> NetworkSpec:
    """At least one hyperedge of size 3-4 spread over as many parties; small extra edges."""
    names = [f"P{i}" for i in range(rng.randint(3, 4))]
    owned = {p: [] for p in names}
    edges, v, budget = [], 0, max_teleported
    size = rng.randint(3, min(4, len(names)))
    holders = rng.sample(names, size)
    src = ghz_source(size) if rng.random() < 0.4 else random_source(rng, size)
    edges.append(Edge("h0", tuple(range(v, v + size)), src))
    for j, p in enumerate(holders):
        owned[p].append(v + j)
    v += size
    budget -= size
    i = 1
    while budget > 0 and rng.random() < 0.7:
        width = rng.randint(1, min(2, budget))
        verts = tuple(range(v, v + width))
        for q in verts:
            owned[rng.choice(names)].append(q)
        edges.append(Edge(f"h{i}", verts, random_source(rng, width)))
        v += width
        budget -= width
        i += 1
    ancillas = {p: int(rng.random() < 0.25) for p in names}
    return NetworkSpec(v, tuple(edges), _parties(rng, names, owned, ancillas, max_gates, v))


def random_mixed_network(rng: random.Random, max_qubits=12, max_gates=25) -> NetworkSpec:
    """Pure and mixed sources (with classical labels) within ``max_qubits`` total qubits."""
    names = [f"P{i}" for i in range(rng.randint(2, 3))]
    owned = {p: [] for p in names}
    edges, v = [], 0
    budget = max_qubits - len(names)  # leave room for ancillas
    i = 0
    while True:
        width = rng.randint(1, 3)
        if v + width > budget or (i and rng.random() < 0.3):
            break
        verts = tuple(range(v, v + width))
        for q in verts:
            owned[rng.choice(names)].append(q)
        if rng.random() < 0.5:
            count = rng.randint(1, 3)
            cuts = sorted(rng.sample(range(1, 12), count - 1)) if count > 1 else []
            bounds = [0] + cuts + [12]
            recipients = rng.sample(names, rng.randint(0, len(names)))
            comps = []
            for c in range(count):
                labels = tuple((p, str(c)) for p in recipients)
                comps.append(MixedComponent(Fraction(bounds[c + 1] - bounds[c], 12), random_source(rng, width), labels))
            source = MixedSource(tuple(comps))
        else:
            source = random_source(rng, width)
        edges.append(Edge(f"m{i}", verts, source))
        v += width
        i += 1
    if not edges:
        edges.append(Edge("m0", (0,), random_source(rng, 1)))
        owned[names[0]].append(0)
        v = 1
    room = max_qubits - v
    ancillas = {}
    for p in names:
        ancillas[p] = rng.randint(0, min(1, room))
        room -= ancillas[p]
    return NetworkSpec(v, tuple(edges), _parties(rng, names, owned, ancillas, max_gates, v))


def generate(kind, seed) -> NetworkSpec:
    rng = random.Random(seed)
    if kind == "canonical":
        return random_canonical_network(rng)
    if kind == "two":
        return random_two_network(rng)
    if kind == "k":
        return random_k_network(rng)
    if kind == "mixed":
        return random_mixed_network(rng)
    raise ValueError(f"unknown corpus kind {kind!r}")


def corpus(kind, count, seed=0):
    rng = random.Random(seed)
    return [generate(kind, rng.randrange(2 ** 32)) for _ in range(count)]
