"""Local hidden-variable models for canonical Clifford 2-networks.

A canonical network has only two kinds of sources: Bell pairs |Phi+> shared
by two different parties, and single |0> qubits (one-vertex edges or party
ancillas, called degenerate vertices).  For such a network every measured
bit ``b_k`` is simulated by an affine GF(2) function of hidden bits attached
to the sources the owning party touches:

    B_k = sum_e cX(k,e) X_e + cY(k,e) Y_e + cZ(k,e) Z_e + const_k   (mod 2)

where the coefficients count (mod 2) how often the Heisenberg-picture
observable ``g_k = U^dag Z_k U`` acts as X, Y, Z on the qubits of ``e``, and
``const_k`` records whether ``g_k`` anticommutes with a sign-fixing Pauli.

Two ways of drawing the hidden bits are offered:

``TWOBIT`` (default)
    ``X_e, Z_e`` uniform and ``Y_e = X_e xor Z_e`` (the product of the two
    values written as +-1).  A degenerate vertex has ``Z = 0`` so ``Y = X``.
``TRIO``
    ``X_e, Y_e, Z_e`` independent and uniform; a degenerate vertex draws
    ``X, Y`` independently with ``Z = 0``.

With ``TWOBIT`` the parity of any subset of outputs depends only on the
x/z bits of the product observable on each edge, which is what membership
in the Bell-pair stabilizer group depends on, so the model is exact.  With
``TRIO`` a ``Y`` built as ``X*Z`` from two different observables of the same
party is counted as one X, one Y and one Z, and that parity becomes uniform
even when the quantum parity is fixed; ``TRIO`` is kept so that difference
can be demonstrated.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import gf2
from .distribution import OutcomeDistribution
from .errors import (
    EnumerationTooLarge,
    Infeasible,
    MixedSourcePresent,
    NotCanonical,
    ParseError,
    ShapeMismatch,
    TooLong,
)
from .network import NetworkSpec, validate
from .pauli import PauliOperator, commutes, conjugate, product, supports
from .stabilizer import Membership, StabilizerTableau, membership, place, zero_state

DEFAULT_MAX_ASSIGNMENTS = 2 ** 30
DEFAULT_MAX_SPECTRUM_BITS = 24

_BELL = PauliOperator.from_label("+XX"), PauliOperator.from_label("+ZZ")
_ZERO = PauliOperator.from_label("+Z")


class Variant(enum.Enum):
    TRIO = "trio"
    TWOBIT = "twobit"


@dataclass(frozen=True)
class EdgeVariables:
    """Hidden-variable declarations: Bell edges carry a trio, degenerate vertices a pair."""

    bell: tuple[tuple[str, tuple[int, int]], ...]
    degenerate: tuple[tuple[str, int], ...]

    def names(self):
        return [name for name, _ in self.bell] + [name for name, _ in self.degenerate]


@dataclass(frozen=True)
class ResponseFunction:
    qubit: int
    party: str
    const: int
    terms: tuple[tuple[str, str], ...]  # (variable name, "X" | "Y" | "Z"), coefficient 1


@dataclass(frozen=True)
class LocalModel:
    variables: EdgeVariables
    outputs: tuple[ResponseFunction, ...]  # in outcome-key order
    groups: tuple[tuple[str, int], ...]
    posts: tuple[tuple[str, tuple[tuple[str, str], ...] | None], ...] = ()

    def dumps(self):
        lines = []
        for name, (a, b) in self.variables.bell:
            lines.append(f"edge {name} vertices={a},{b}")
        for name, q in self.variables.degenerate:
            lines.append(f"degenerate {name} vertex={q}")
        for r in self.outputs:
            terms = " ".join(f"{v}.{letter}" for v, letter in r.terms)
            lines.append(f"out {r.qubit} party={r.party} const={r.const} terms= {terms}".rstrip())
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text):
        bell, degenerate, outputs = [], [], []
        for lineno, line in enumerate(text.splitlines(), 1):
            tokens = line.split()
            if not tokens or tokens[0].startswith("#"):
                continue
            try:
                if tokens[0] == "edge":
                    a, b = tokens[2].removeprefix("vertices=").split(",")
                    bell.append((tokens[1], (int(a), int(b))))
                elif tokens[0] == "degenerate":
                    degenerate.append((tokens[1], int(tokens[2].removeprefix("vertex="))))
                elif tokens[0] == "out":
                    party = tokens[2].removeprefix("party=")
                    const = int(tokens[3].removeprefix("const="))
                    if tokens[4] != "terms=":
                        raise ValueError("missing terms=")
                    terms = tuple(tuple(t.rsplit(".", 1)) for t in tokens[5:])
                    outputs.append(ResponseFunction(int(tokens[1]), party, const, terms))
                else:
                    raise ValueError(f"unknown directive {tokens[0]!r}")
            except (ValueError, IndexError) as exc:
                raise ParseError(str(exc), lineno) from None
        groups = []
        for r in outputs:
            if groups and groups[-1][0] == r.party:
                groups[-1] = (r.party, groups[-1][1] + 1)
            else:
                groups.append((r.party, 1))
        return cls(EdgeVariables(tuple(bell), tuple(degenerate)), tuple(outputs), tuple(groups))


# -- canonical form ----------------------------------------------------------

def _check_canonical(spec: NetworkSpec):
    validate(spec)
    if spec.has_mixed:
        names = [e.name for e in spec.edges if e.mixed]
        raise MixedSourcePresent(f"mixed sources on edges {names}; the local model needs pure sources")
    owner = spec.owner()
    for e in spec.edges:
        t = e.source.tableau(len(e.vertices))
        if len(e.vertices) == 2:
            a, b = e.vertices
            if owner[a] == owner[b]:
                raise NotCanonical(f"edge {e.name} has both ends at party {owner[a]}")
            if any(membership(t, g) is not Membership.PLUS for g in _BELL):
                raise NotCanonical(f"edge {e.name} does not carry |Phi+>")
        elif len(e.vertices) == 1:
            if membership(t, _ZERO) is not Membership.PLUS:
                raise NotCanonical(f"edge {e.name} does not carry |0>")
        else:
            raise NotCanonical(f"edge {e.name} has {len(e.vertices)} vertices")


def network_state(spec: NetworkSpec) -> StabilizerTableau:
    """Stabilizer of the distributed state before local gates, ancillas included."""
    anc = spec.ancilla_indices()
    pieces = [(e.source.tableau(len(e.vertices)), e.vertices) for e in spec.edges]
    pieces += [(zero_state(1), [q]) for p in spec.parties for q in anc[p.name]]
    return place(pieces, spec.total_qubits)


def conjugated_observables(spec: NetworkSpec) -> list[PauliOperator]:
    """``g_k = U^dag Z_k U`` for every qubit ``k``, with ``U`` the product of party circuits."""
    _check_canonical(spec)
    total = spec.total_qubits
    inverse = spec.combined_circuit().inverse()
    gs = [conjugate(PauliOperator.single(total, k, "Z"), inverse) for k in range(total)]
    qubits = spec.party_qubits()
    home = {q: name for name, qs in qubits.items() for q in qs}
    for k, g in enumerate(gs):
        assert g.is_real
        assert all(home[q] == home[k] for q in range(total) if (g.support >> q) & 1)
    return gs


def _swap(p: PauliOperator):
    # dot(w, _swap(g)) is the symplectic product of w with g.
    return p.z | (p.x << p.n)


def sign_fixing_pauli(gs, stab: StabilizerTableau) -> PauliOperator:
    """A Pauli ``g0`` that anticommutes with exactly the ``g_S`` for which ``-g_S`` stabilizes."""
    n = stab.n
    stab_words = [_swap(s) for s in stab.stabilizers]
    # Row k of C holds <g_k, s_j> over j; g_S lies in +-stab iff S.C == 0.
    rows = []
    for g in gs:
        w = g.symplectic()
        rows.append(sum(gf2.dot(w, sw) << j for j, sw in enumerate(stab_words)))
    basis = gf2.left_kernel(rows, len(stab_words))
    eqs, rhs = [], []
    for subset in basis:
        g_s = product((g for i, g in enumerate(gs) if (subset >> i) & 1), n)
        m = membership(stab, g_s)
        if m is Membership.NONMEMBER:
            raise Infeasible(f"kernel element {subset:b} is not in +-stab")
        eqs.append(_swap(g_s))
        rhs.append(int(m is Membership.MINUS))
    word = gf2.solve(eqs, rhs, 2 * n)
    if word is None:
        raise Infeasible("no sign-fixing Pauli satisfies the constraints")
    return PauliOperator(n, 0, word & ((1 << n) - 1), word >> n)


def synthesize(spec: NetworkSpec) -> LocalModel:
    gs = conjugated_observables(spec)
    stab = network_state(spec)
    g0 = sign_fixing_pauli(gs, stab)

    bell, degenerate = [], []
    for e in spec.edges:
        if len(e.vertices) == 2:
            bell.append((e.name, tuple(e.vertices)))
        else:
            degenerate.append((e.name, e.vertices[0]))
    taken = {e.name for e in spec.edges}
    anc = spec.ancilla_indices()
    for p in spec.parties:
        for q in anc[p.name]:
            name = f"anc{q}"
            while name in taken:
                name += "_"
            taken.add(name)
            degenerate.append((name, q))
    variables = EdgeVariables(tuple(bell), tuple(degenerate))

    qubits = spec.party_qubits()
    outputs = []
    for p in spec.parties:
        for k in qubits[p.name]:
            phi_x, phi_y, phi_z = supports(gs[k])
            terms = []
            for name, verts in bell:
                for letter, phi in (("X", phi_x), ("Y", phi_y), ("Z", phi_z)):
                    if len(phi.intersection(verts)) % 2:
                        terms.append((name, letter))
            for name, q in degenerate:
                for letter, phi in (("X", phi_x), ("Y", phi_y)):
                    if q in phi:
                        terms.append((name, letter))
            const = 0 if commutes(gs[k], g0) else 1
            outputs.append(ResponseFunction(k, p.name, const, tuple(terms)))
    groups = tuple((p.name, len(qubits[p.name])) for p in spec.parties)
    posts = tuple((p.name, p.post) for p in spec.parties)
    model = LocalModel(variables, tuple(outputs), groups, posts)
    check_locality(model, spec)
    return model


def check_locality(model: LocalModel, spec: NetworkSpec):
    """Every term of an output must name a source its party actually holds."""
    held = spec.party_qubits()
    reach = {}
    for name, verts in model.variables.bell:
        reach[name] = set(verts)
    for name, q in model.variables.degenerate:
        reach[name] = {q}
    for r in model.outputs:
        mine = set(held[r.party])
        for var, _ in r.terms:
            if not reach[var] & mine:
                raise AssertionError(f"output {r.qubit} of {r.party} reads foreign variable {var}")


# -- evaluation --------------------------------------------------------------

def _value_table(kind, variant):
    """Hidden-variable values ``{"X": .., "Y": .., "Z": ..}`` with equal weights."""
    if kind == "bell":
        if variant is Variant.TRIO:
            return [dict(X=x, Y=y, Z=z) for x, y, z in itertools.product((0, 1), repeat=3)]
        return [dict(X=x, Y=x ^ z, Z=z) for x, z in itertools.product((0, 1), repeat=2)]
    if variant is Variant.TRIO:
        return [dict(X=x, Y=y, Z=0) for x, y in itertools.product((0, 1), repeat=2)]
    return [dict(X=x, Y=x, Z=0) for x in (0, 1)]


def assignment_count(model: LocalModel, variant=Variant.TWOBIT) -> int:
    variant = Variant(variant)
    nb, nd = len(model.variables.bell), len(model.variables.degenerate)
    if variant is Variant.TRIO:
        return 8 ** nb * 4 ** nd
    return 4 ** nb * 2 ** nd


def _variable_tables(model, variant):
    kinds = [(n, "bell") for n, _ in model.variables.bell]
    kinds += [(n, "deg") for n, _ in model.variables.degenerate]
    uses = {}
    for i, r in enumerate(model.outputs):
        for var, letter in r.terms:
            uses.setdefault(var, []).append((i, letter))
    tables = []
    for name, kind in kinds:
        masks = []
        for value in _value_table(kind, variant):
            m = 0
            for i, letter in uses.get(name, ()):
                if value[letter]:
                    m ^= 1 << i
            masks.append(m)
        tables.append(masks)
    return tables


def _to_distribution(model, counts, denominator):
    width = len(model.outputs)
    posts = {name: (dict(post) if post is not None else None) for name, post in model.posts}
    acc = {}
    for mask, c in counts.items():
        raw = "".join("1" if (mask >> i) & 1 else "0" for i in range(width))
        if any(posts.values()):
            parts, start = [], 0
            for name, w in model.groups:
                seg = raw[start:start + w]
                start += w
                post = posts.get(name)
                parts.append(post[seg] if post else seg)
            raw = "".join(parts)
        acc[raw] = acc.get(raw, Fraction(0)) + Fraction(c, denominator)
    groups = model.groups
    if any(posts.values()):
        groups = tuple(
            (name, len(next(iter(posts[name].values()))) if posts.get(name) else w)
            for name, w in model.groups
        )
    return OutcomeDistribution(acc, groups)


def evaluate(
    model: LocalModel,
    variant=Variant.TWOBIT,
    max_assignments=DEFAULT_MAX_ASSIGNMENTS,
    method="factored",
) -> OutcomeDistribution:
    """Exact output distribution, summing over every hidden-variable assignment.

    ``method="factored"`` performs the sum one source at a time (sources are
    independent and outputs are XORs of per-source contributions), so its cost
    tracks the support size.  ``method="enumerate"`` walks every joint
    assignment and is only practical for small models.
    """
    variant = Variant(variant)
    total = assignment_count(model, variant)
    if total > max_assignments:
        raise EnumerationTooLarge(f"{total} assignments exceed the bound {max_assignments}")
    const = sum(r.const << i for i, r in enumerate(model.outputs))
    tables = _variable_tables(model, variant)
    if method == "enumerate":
        counts = {}
        for choice in itertools.product(*tables):
            m = const
            for part in choice:
                m ^= part
            counts[m] = counts.get(m, 0) + 1
        return _to_distribution(model, counts, total)
    if method != "factored":
        raise ValueError(f"unknown method {method!r}")
    counts = {const: 1}
    for masks in tables:
        nxt = {}
        for m, c in counts.items():
            for part in masks:
                key = m ^ part
                nxt[key] = nxt.get(key, 0) + c
        counts = nxt
    return _to_distribution(model, counts, total)


# -- parity spectra ----------------------------------------------------------

def _integer_vector(d: OutcomeDistribution, max_bits, denominator=None):
    if d.width > max_bits:
        raise TooLong(f"outcome length {d.width} exceeds spectrum bound {max_bits}")
    if not d.is_binary():
        raise ShapeMismatch("parity spectra need pure bit-string outcomes")
    if denominator is None:
        denominator = math.lcm(*(p.denominator for p in d.probs.values()))
    big = denominator >= 2 ** 40
    vec = np.zeros(1 << d.width, dtype=object if big else np.int64)
    for key, p in d.probs.items():
        idx = sum(1 << i for i, ch in enumerate(key) if ch == "1")
        vec[idx] = p.numerator * (denominator // p.denominator)
    return vec, denominator


def _walsh_hadamard(vec):
    vec = vec.copy()
    h = 1
    n = len(vec)
    while h < n:
        view = vec.reshape(-1, 2, h)
        a = view[:, 0, :].copy()
        b = view[:, 1, :]
        view[:, 0, :] = a + b
        view[:, 1, :] = a - b
        h *= 2
    return vec


def parity_spectrum(d: OutcomeDistribution, max_bits=DEFAULT_MAX_SPECTRUM_BITS):
    """``{S: Pr[XOR of bits in S == 0]}`` with ``S`` a bitmask over key positions."""
    vec, den = _integer_vector(d, max_bits)
    corr = _walsh_hadamard(vec)
    # Pr[B_S = 0] = (1 + E[(-1)^B_S]) / 2
    return {s: Fraction(den + int(c), 2 * den) for s, c in enumerate(corr.tolist())}


def equal_distributions(d1, d2, method="parity", max_bits=DEFAULT_MAX_SPECTRUM_BITS) -> bool:
    if d1.width != d2.width:
        raise ShapeMismatch(f"outcome lengths differ: {d1.width} vs {d2.width}")
    if method == "direct":
        return d1.probs == d2.probs
    if method != "parity":
        raise ValueError(f"unknown method {method!r}")
    den = math.lcm(*(p.denominator for p in itertools.chain(d1.probs.values(), d2.probs.values())))
    v1, _ = _integer_vector(d1, max_bits, den)
    v2, _ = _integer_vector(d2, max_bits, den)
    return bool(np.array_equal(_walsh_hadamard(v1), _walsh_hadamard(v2)))


def bridge_violations(spec: NetworkSpec, variant=Variant.TWOBIT, max_outputs=8):
    """Subsets ``S`` where the model parity disagrees with membership of ``g_S``.

    Membership PLUS must give ``Pr[B_S = 0] = 1``, MINUS gives 0 and
    NONMEMBER gives 1/2.  Returns ``[(S, probability, membership), ...]``
    with ``S`` a bitmask over output positions; empty means the bridge holds.
    """
    gs = conjugated_observables(spec)
    stab = network_state(spec)
    model = synthesize(spec)
    if any(post is not None for _, post in model.posts):
        raise ShapeMismatch("bridge check needs raw outputs (no post-processing tables)")
    width = len(model.outputs)
    if width > max_outputs:
        raise TooLong(f"{width} outputs exceed the exhaustive bound {max_outputs}")
    spectrum = parity_spectrum(evaluate(model, variant))
    expected = {Membership.PLUS: Fraction(1), Membership.MINUS: Fraction(0), Membership.NONMEMBER: Fraction(1, 2)}
    bad = []
    for s in range(1 << width):
        g_s = product((gs[r.qubit] for i, r in enumerate(model.outputs) if (s >> i) & 1), stab.n)
        m = membership(stab, g_s)
        if spectrum[s] != expected[m]:
            bad.append((s, spectrum[s], m))
    return bad
