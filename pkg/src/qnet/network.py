"""Network model and the exact stabilizer pipeline for network correlations.

Qubit layout shared by every module: vertex ``v`` is qubit ``v``; ancillas
follow all vertices, grouped by party in party order.  A party's raw output
is its owned vertices in ascending order, then its ancillas, then the
classical labels it receives from mixed sources (in edge order).  If the
party has a post-processing table, the raw string is replaced by its entry.
"""

from __future__ import annotations

import functools
import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

import numpy as np

from .distribution import OutcomeDistribution, condition  # noqa: F401  (re-export)
from .errors import (
    BadWeights,
    CircuitOutOfScope,
    OverlappingEdges,
    UncoveredVertex,
    ValidationError,
    WrongCount,
)
from .pauli import CliffordCircuit
from .stabilizer import (
    StabilizerTableau,
    apply_circuit,
    place,
    state_from_generators,
    z_support,
    zero_state,
)


class OverlappingParties(ValidationError):
    pass


@dataclass(frozen=True)
class PureSource:
    """A stabilizer state given by generator literals or a preparation circuit on |0...0>."""

    generators: tuple[str, ...] | None = None
    prep: CliffordCircuit | None = None

    def __post_init__(self):
        if (self.generators is None) == (self.prep is None):
            raise ValueError("PureSource needs exactly one of generators or prep")
        if self.generators is not None:
            object.__setattr__(self, "generators", tuple(self.generators))

    def tableau(self, width) -> StabilizerTableau:
        return _source_tableau(self, width)


@functools.lru_cache(maxsize=4096)
def _source_tableau(source, width):
    if source.generators is not None:
        t = state_from_generators(source.generators)
        if t.n != width:
            raise WrongCount(f"generators have width {t.n}, edge has {width} vertices")
        return t
    if source.prep.width() > width:
        raise CircuitOutOfScope(f"prep circuit {source.prep} wider than edge ({width})")
    return apply_circuit(zero_state(width), source.prep)


@dataclass(frozen=True)
class MixedComponent:
    weight: Fraction
    source: PureSource
    labels: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "weight", Fraction(self.weight))
        if isinstance(self.labels, Mapping):
            object.__setattr__(self, "labels", tuple(self.labels.items()))
        else:
            object.__setattr__(self, "labels", tuple(tuple(x) for x in self.labels))


@dataclass(frozen=True)
class MixedSource:
    components: tuple[MixedComponent, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))


Source = Union[PureSource, MixedSource]


@dataclass(frozen=True)
class Edge:
    name: str
    vertices: tuple[int, ...]
    source: Source

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(int(v) for v in self.vertices))

    @property
    def mixed(self):
        return isinstance(self.source, MixedSource)

    def components(self):
        """``[(weight, tableau, labels)]``; a pure source is one component of weight 1."""
        width = len(self.vertices)
        if isinstance(self.source, PureSource):
            return [(Fraction(1), self.source.tableau(width), ())]
        return [(c.weight, c.source.tableau(width), c.labels) for c in self.source.components]

    def label_parties(self):
        if not self.mixed or not self.source.components:
            return ()
        return tuple(p for p, _ in self.source.components[0].labels)


@dataclass(frozen=True)
class Party:
    name: str
    vertices: tuple[int, ...] = ()
    ancillas: int = 0
    circuit: CliffordCircuit = field(default_factory=CliffordCircuit)
    post: tuple[tuple[str, str], ...] | None = None
    post_file: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(int(v) for v in self.vertices)))
        if isinstance(self.post, Mapping):
            object.__setattr__(self, "post", tuple(sorted(self.post.items())))

    @functools.cached_property
    def post_map(self):
        return dict(self.post) if self.post is not None else None


@dataclass(frozen=True)
class NetworkSpec:
    n: int
    edges: tuple[Edge, ...]
    parties: tuple[Party, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "parties", tuple(self.parties))

    @property
    def total_qubits(self):
        return self.n + sum(p.ancillas for p in self.parties)

    def ancilla_indices(self):
        """``{party_name: [global ancilla indices]}``."""
        out, nxt = {}, self.n
        for p in self.parties:
            out[p.name] = list(range(nxt, nxt + p.ancillas))
            nxt += p.ancillas
        return out

    def party_qubits(self):
        """``{party_name: [owned vertices ascending] + [ancillas]}``."""
        anc = self.ancilla_indices()
        return {p.name: list(p.vertices) + anc[p.name] for p in self.parties}

    def owner(self):
        return {v: p.name for p in self.parties for v in p.vertices}

    def party(self, name):
        for p in self.parties:
            if p.name == name:
                return p
        raise KeyError(name)

    def edge(self, name):
        for e in self.edges:
            if e.name == name:
                return e
        raise KeyError(name)

    def label_widths(self):
        """``{party_name: total label width}`` received from mixed sources."""
        widths = {p.name: 0 for p in self.parties}
        for e in self.edges:
            if e.mixed and e.source.components:
                for party, symbols in e.source.components[0].labels:
                    widths[party] += len(symbols)
        return widths

    @property
    def has_mixed(self):
        return any(e.mixed for e in self.edges)

    def combined_circuit(self):
        c = CliffordCircuit()
        for p in self.parties:
            c = c + p.circuit
        return c

    def output_groups(self):
        qubits = self.party_qubits()
        labels = self.label_widths()
        groups = []
        for p in self.parties:
            if p.post is not None and p.post:
                width = len(next(iter(p.post_map.values())))
            else:
                width = len(qubits[p.name]) + labels[p.name]
            groups.append((p.name, width))
        return tuple(groups)


# -- validation --------------------------------------------------------------

def validate(spec: NetworkSpec) -> int:
    """Check every structural invariant and return ``k``.

    ``k`` is the largest number of distinct parties any single source reaches,
    counting both vertex owners and recipients of its classical labels.
    """
    if spec.n < 0:
        raise ValidationError("negative vertex count")
    names = [p.name for p in spec.parties]
    if len(set(names)) != len(names):
        raise ValidationError(f"duplicate party names in {names}")
    edge_names = [e.name for e in spec.edges]
    if len(set(edge_names)) != len(edge_names):
        raise ValidationError(f"duplicate edge names in {edge_names}")

    seen = {}
    for e in spec.edges:
        if not e.vertices:
            raise ValidationError(f"edge {e.name} has no vertices")
        for v in e.vertices:
            if not 0 <= v < spec.n:
                raise UncoveredVertex(f"edge {e.name} names vertex {v} outside 0..{spec.n - 1}")
            if v in seen:
                raise OverlappingEdges(f"edges {seen[v]} and {e.name} share vertex {v}")
            seen[v] = e.name
    for v in range(spec.n):
        if v not in seen:
            raise UncoveredVertex(f"vertex {v} belongs to no edge")

    owner = {}
    for p in spec.parties:
        for v in p.vertices:
            if not 0 <= v < spec.n:
                raise UncoveredVertex(f"party {p.name} owns vertex {v} outside 0..{spec.n - 1}")
            if v in owner:
                raise OverlappingParties(f"parties {owner[v]} and {p.name} both own vertex {v}")
            owner[v] = p.name
        if p.ancillas < 0:
            raise ValidationError(f"party {p.name} has negative ancilla count")
    for v in range(spec.n):
        if v not in owner:
            raise UncoveredVertex(f"vertex {v} is owned by no party")

    qubits = spec.party_qubits()
    for p in spec.parties:
        allowed = set(qubits[p.name])
        stray = p.circuit.qubits - allowed
        if stray:
            raise CircuitOutOfScope(f"party {p.name} circuit touches qubits {sorted(stray)} it does not hold")

    label_recipients = {}
    for e in spec.edges:
        if isinstance(e.source, PureSource):
            e.source.tableau(len(e.vertices))
            continue
        comps = e.source.components
        if not comps:
            raise BadWeights(f"edge {e.name}: mixed source has no components")
        if any(c.weight <= 0 for c in comps):
            raise BadWeights(f"edge {e.name}: weights must be positive")
        if sum(c.weight for c in comps) != 1:
            raise BadWeights(f"edge {e.name}: weights sum to {sum(c.weight for c in comps)}")
        shape = [(party, len(sym)) for party, sym in comps[0].labels]
        for c in comps:
            c.source.tableau(len(e.vertices))
            if [(party, len(sym)) for party, sym in c.labels] != shape:
                raise ValidationError(f"edge {e.name}: components disagree on label layout")
        for party, _ in shape:
            if party not in names:
                raise ValidationError(f"edge {e.name} labels unknown party {party}")
        label_recipients[e.name] = {party for party, _ in shape}

    labels = spec.label_widths()
    for p in spec.parties:
        if p.post is None:
            continue
        raw = len(qubits[p.name]) + labels[p.name]
        outs = {len(v) for v in p.post_map.values()}
        if any(len(k) != raw for k in p.post_map) or len(outs) > 1:
            raise ValidationError(f"party {p.name}: post table shape does not match raw width {raw}")

    k = 0
    for e in spec.edges:
        reach = {owner[v] for v in e.vertices} | label_recipients.get(e.name, set())
        k = max(k, len(reach))
    return k


# -- key assembly ------------------------------------------------------------

class KeyAssembler:
    """Turns measured basis points (bit ``q`` = qubit ``q``) into outcome keys."""

    def __init__(self, spec: NetworkSpec):
        qubits = spec.party_qubits()
        self.parties = spec.parties
        self.order = np.array(
            [q for p in spec.parties for q in qubits[p.name]], dtype=np.uint64
        )
        self.bounds = []
        start = 0
        for p in spec.parties:
            w = len(qubits[p.name])
            self.bounds.append((start, start + w))
            start += w
        self.groups = spec.output_groups()
        self.simple = not spec.has_mixed and all(p.post is None for p in spec.parties)

    def raw_strings(self, points: np.ndarray) -> list[str]:
        if len(self.order) == 0:
            return [""] * len(points)
        bits = ((points[:, None] >> self.order[None, :]) & np.uint64(1)).astype(np.uint8)
        bits += ord("0")
        width = bits.shape[1]
        return np.ascontiguousarray(bits).view(f"S{width}").ravel().astype(str).tolist()

    def keys(self, points: np.ndarray, labels: Mapping[str, str] | None = None) -> list[str]:
        raws = self.raw_strings(points)
        if self.simple:
            return raws
        labels = labels or {}
        out = []
        for raw in raws:
            parts = []
            for p, (a, b) in zip(self.parties, self.bounds):
                seg = raw[a:b] + labels.get(p.name, "")
                if p.post is not None:
                    seg = p.post_map[seg]
                parts.append(seg)
            out.append("".join(parts))
        return out


def component_selections(spec: NetworkSpec):
    """Yield ``(weight, [(tableau, vertices)], labels_by_party)`` over all mixtures."""
    per_edge = [e.components() for e in spec.edges]
    for choice in itertools.product(*per_edge):
        weight = Fraction(1)
        labels = {}
        pieces = []
        for e, (w, t, labs) in zip(spec.edges, choice):
            weight *= w
            pieces.append((t, e.vertices))
            for party, symbols in labs:
                labels[party] = labels.get(party, "") + symbols
        yield weight, pieces, labels


def run_quantum(spec: NetworkSpec) -> OutcomeDistribution:
    """Exact outcome distribution of the network."""
    validate(spec)
    total = spec.total_qubits
    assembler = KeyAssembler(spec)
    anc = spec.ancilla_indices()
    ancilla_pieces = [(zero_state(1), [q]) for p in spec.parties for q in anc[p.name]]
    circuit = spec.combined_circuit()
    acc: dict[str, Fraction] = {}
    for weight, pieces, labels in component_selections(spec):
        if total == 0:
            key = assembler.keys(np.zeros(1, dtype=np.uint64), labels)[0]
            acc[key] = acc.get(key, Fraction(0)) + weight
            continue
        state = apply_circuit(place(pieces + ancilla_pieces, total), circuit)
        support = z_support(state)
        share = weight / support.size
        # Keys within one component only collide after post-processing.
        counts = Counter(assembler.keys(support.points(), labels))
        for key, c in counts.items():
            p = share * c if c != 1 else share
            acc[key] = acc[key] + p if key in acc else p
    return OutcomeDistribution(acc, assembler.groups)


def final_state(spec: NetworkSpec, selection: Sequence[int] | None = None) -> StabilizerTableau:
    """Post-circuit tableau for one component selection (default: first of each)."""
    total = spec.total_qubits
    anc = spec.ancilla_indices()
    pieces = []
    for i, e in enumerate(spec.edges):
        comps = e.components()
        idx = 0 if selection is None else selection[i]
        pieces.append((comps[idx][1], e.vertices))
    pieces += [(zero_state(1), [q]) for p in spec.parties for q in anc[p.name]]
    return apply_circuit(place(pieces, total), spec.combined_circuit())
