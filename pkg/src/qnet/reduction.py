"""Teleportation reduction of k-networks to 2-networks.

Every source is moved to a new party ``C_<edge>`` and its qubits are
teleported to the original owners through fresh Bell pairs.  ``C_<edge>``
performs a Bell measurement on each (source qubit, Bell half) pair (``CX``
source -> half, then ``H`` on the source) and, like every party, measures
all its qubits.  Outcome ``00`` on a pair is the projection onto ``|Phi+>``,
in which case the qubit arrives uncorrected; post-selecting every ``C``
party on all zeros therefore reproduces the original correlation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .distribution import OutcomeDistribution, condition, format_fraction
from .network import Edge, NetworkSpec, Party, PureSource, run_quantum, validate
from .pauli import CliffordCircuit, Gate

BELL = PureSource(generators=("+XX", "+ZZ"))


@dataclass(frozen=True)
class ReductionMapping:
    """Where everything went.  Vertex indices of the original are unchanged."""

    source_qubits: dict[str, tuple[int, ...]]   # edge -> fresh qubits carrying the source
    bell_pairs: dict[str, tuple[tuple[int, int], ...]]  # edge -> (C half, original vertex)
    ancillas: dict[int, int]                     # old ancilla index -> new index
    relay_parties: dict[str, str]                # edge -> name of its C party
    original_parties: tuple[str, ...]

    @property
    def teleported(self):
        return sum(len(q) for q in self.source_qubits.values())


@dataclass(frozen=True)
class ReductionReport:
    equal: bool
    postselect_prob: Fraction
    expected_prob: Fraction
    k_before: int
    k_after: int
    extension: bool    # True when mixed sources were reduced componentwise
    mapping: ReductionMapping

    def as_dict(self):
        return {
            "equal": self.equal,
            "postselect_prob": format_fraction(self.postselect_prob),
            "expected_prob": format_fraction(self.expected_prob),
            "k_before": self.k_before,
            "k_after": self.k_after,
            "extension": self.extension,
        }


def _fresh_name(base, taken):
    name = base
    while name in taken:
        name += "_"
    taken.add(name)
    return name


def teleport_reduce(spec: NetworkSpec):
    """Return ``(reduced_spec, mapping)``; ``validate(reduced_spec) == 2`` for pure inputs."""
    validate(spec)
    nxt = spec.n
    edges, relays = [], []
    source_qubits, bell_pairs, relay_names = {}, {}, {}
    taken_parties = {p.name for p in spec.parties}
    taken_edges = {e.name for e in spec.edges}
    for e in spec.edges:
        m = len(e.vertices)
        src = tuple(range(nxt, nxt + m))
        halves = tuple(range(nxt + m, nxt + 2 * m))
        nxt += 2 * m
        source_qubits[e.name] = src
        bell_pairs[e.name] = tuple(zip(halves, e.vertices))
        edges.append(Edge(e.name, src, e.source))
        for j, (t, v) in enumerate(bell_pairs[e.name]):
            edges.append(Edge(_fresh_name(f"{e.name}.t{j}", taken_edges), (t, v), BELL))
        gates = []
        for s, t in zip(src, halves):
            gates += [Gate("CX", (s, t)), Gate("H", (s,))]
        name = _fresh_name(f"C_{e.name}", taken_parties)
        relay_names[e.name] = name
        relays.append(Party(name, src + halves, 0, CliffordCircuit(tuple(gates))))

    old_anc = spec.ancilla_indices()
    shift = nxt - spec.n
    ancillas = {q: q + shift for qs in old_anc.values() for q in qs}
    parties = []
    for p in spec.parties:
        mapping = {v: v for v in p.vertices}
        mapping.update({q: ancillas[q] for q in old_anc[p.name]})
        parties.append(Party(p.name, p.vertices, p.ancillas, p.circuit.relabel(mapping), p.post, p.post_file))
    reduced = NetworkSpec(nxt, tuple(edges), tuple(parties) + tuple(relays))
    return reduced, ReductionMapping(
        source_qubits, bell_pairs, ancillas, relay_names, tuple(p.name for p in spec.parties)
    )


def postselect(reduced_dist: OutcomeDistribution, mapping: ReductionMapping):
    """Condition on every relay party reading all zeros and drop their bits."""
    positions = []
    for name in mapping.relay_parties.values():
        sl = reduced_dist.party_slice(name)
        positions.extend(range(sl.start, sl.stop))
    cond, prob = condition(reduced_dist, positions, "0" * len(positions))
    return cond.marginal_parties(mapping.original_parties), prob


def verify_reduction(spec: NetworkSpec) -> ReductionReport:
    k_before = validate(spec)
    reduced, mapping = teleport_reduce(spec)
    k_after = validate(reduced)
    original = run_quantum(spec)
    recovered, prob = postselect(run_quantum(reduced), mapping)
    return ReductionReport(
        equal=recovered == original and recovered.groups == original.groups,
        postselect_prob=prob,
        expected_prob=Fraction(1, 4 ** mapping.teleported),
        k_before=k_before,
        k_after=k_after,
        extension=spec.has_mixed,
        mapping=mapping,
    )
