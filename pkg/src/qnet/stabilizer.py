"""Stabilizer states: construction, Clifford evolution, membership, Z-basis statistics."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import gf2
from .errors import (
    Dependent,
    DimensionError,
    GateIndexError,
    ImaginarySign,
    NonCommuting,
    WrongCount,
)
from .pauli import PauliOperator, commutes, conjugate, embed, multiply


class Membership(enum.Enum):
    PLUS = "+"
    MINUS = "-"
    NONMEMBER = "0"


@dataclass(frozen=True)
class StabilizerTableau:
    n: int
    stabilizers: tuple[PauliOperator, ...]
    destabilizers: tuple[PauliOperator, ...]

    def __str__(self):
        return "\n".join(str(g) for g in self.stabilizers)

    def dump(self):
        """Debug dump: generators first, then destabilizers."""
        lines = [str(g) for g in self.stabilizers]
        lines += [str(d) for d in self.destabilizers]
        return "\n".join(lines)

    def labels(self):
        return [str(g) for g in self.stabilizers]


def _complete_destabilizers(n, gens):
    """Symplectic partners for a Lagrangian generator set."""
    # d_i must anticommute with g_i only: solve <g_j, d> = delta_ij.
    swapped = [g.z | (g.x << n) for g in gens]
    destabs = []
    for i in range(n):
        word = gf2.solve(swapped, [int(j == i) for j in range(n)], 2 * n)
        destabs.append(PauliOperator(n, 0, word & ((1 << n) - 1), word >> n))
    # Gram-Schmidt: make destabilizers pairwise commute.
    fixed = []
    for i, d in enumerate(destabs):
        for j, prev in enumerate(fixed):
            if not commutes(d, prev):
                d = multiply(d, gens[j]).bare()
        fixed.append(d)
    return tuple(fixed)


def _as_pauli(g):
    return g if isinstance(g, PauliOperator) else PauliOperator.from_label(g)


def state_from_generators(gens: Sequence) -> StabilizerTableau:
    ops = [_as_pauli(g) for g in gens]
    if not ops:
        raise WrongCount("no generators given")
    n = ops[0].n
    if len(ops) != n or any(g.n != n for g in ops):
        widths = sorted({g.n for g in ops})
        raise WrongCount(f"need exactly n generators of width n; got {len(ops)} of widths {widths}")
    for g in ops:
        if not g.is_real:
            raise ImaginarySign(f"generator {g} has an imaginary phase")
    for i in range(n):
        for j in range(i + 1, n):
            if not commutes(ops[i], ops[j]):
                raise NonCommuting(f"{ops[i]} and {ops[j]} anticommute")
    if gf2.rank([g.symplectic() for g in ops], 2 * n) < n:
        raise Dependent("generators are not independent")
    return StabilizerTableau(n, tuple(ops), _complete_destabilizers(n, ops))


def zero_state(n: int) -> StabilizerTableau:
    if n < 1:
        raise DimensionError("zero_state needs n >= 1")
    stabs = tuple(PauliOperator.single(n, q, "Z") for q in range(n))
    destabs = tuple(PauliOperator.single(n, q, "X") for q in range(n))
    return StabilizerTableau(n, stabs, destabs)


def apply_circuit(t: StabilizerTableau, c) -> StabilizerTableau:
    if c.width() > t.n:
        raise GateIndexError(f"circuit touches qubit {c.width() - 1} of a {t.n}-qubit state")
    return StabilizerTableau(
        t.n,
        tuple(conjugate(g, c) for g in t.stabilizers),
        tuple(conjugate(d, c) for d in t.destabilizers),
    )


def tensor(a: StabilizerTableau, b: StabilizerTableau) -> StabilizerTableau:
    n = a.n + b.n
    left = range(a.n)
    right = range(a.n, n)
    return StabilizerTableau(
        n,
        tuple(embed(g, left, n) for g in a.stabilizers)
        + tuple(embed(g, right, n) for g in b.stabilizers),
        tuple(embed(d, left, n) for d in a.destabilizers)
        + tuple(embed(d, right, n) for d in b.destabilizers),
    )


def place(parts, n) -> StabilizerTableau:
    """Tensor ``(tableau, positions)`` pieces onto disjoint positions of ``n`` qubits."""
    stabs, destabs = [], []
    for t, positions in parts:
        stabs.extend(embed(g, positions, n) for g in t.stabilizers)
        destabs.extend(embed(d, positions, n) for d in t.destabilizers)
    if len(stabs) != n:
        raise WrongCount(f"pieces cover {len(stabs)} of {n} qubits")
    return StabilizerTableau(n, tuple(stabs), tuple(destabs))


def membership(t: StabilizerTableau, p: PauliOperator) -> Membership:
    if p.n != t.n:
        raise DimensionError(f"operator width {p.n} vs state width {t.n}")
    if not p.is_real:
        raise ImaginarySign(f"{p} is not real-signed")
    if not all(commutes(p, g) for g in t.stabilizers):
        return Membership.NONMEMBER
    # p = prod of the generators whose destabilizer anticommutes with p.
    acc = PauliOperator.identity(t.n)
    for g, d in zip(t.stabilizers, t.destabilizers):
        if not commutes(p, d):
            acc = multiply(acc, g)
    assert acc.x == p.x and acc.z == p.z
    return Membership.PLUS if acc.phase == p.phase else Membership.MINUS


@dataclass(frozen=True)
class AffineSubspace:
    """``{offset ^ XOR(subset of basis)}`` inside Z_2^n."""

    n: int
    offset: int
    basis: tuple[int, ...]

    @property
    def size(self):
        return 1 << len(self.basis)

    def points(self) -> np.ndarray:
        pts = np.array([self.offset], dtype=np.uint64)
        for v in self.basis:
            pts = np.concatenate([pts, pts ^ np.uint64(v)])
        return pts

    def contains(self, point):
        v = point ^ self.offset
        return gf2.span_contains(list(self.basis), v, self.n)


def z_constraints(t: StabilizerTableau):
    """Independent ``(mask, parity)`` pairs: XOR of outcome bits in mask equals parity."""
    rows = list(t.stabilizers)
    for q in range(t.n):
        bit = 1 << q
        idx = next((i for i, r in enumerate(rows) if r.x & bit), None)
        if idx is None:
            continue
        pivot = rows.pop(idx)
        rows = [multiply(r, pivot) if r.x & bit else r for r in rows]
    # What remains is an independent generating set of the Z-type subgroup.
    return [(r.z, r.sign_bit) for r in rows]


def z_support(t: StabilizerTableau) -> AffineSubspace:
    cons = z_constraints(t)
    masks = [m for m, _ in cons]
    offset = gf2.solve(masks, [s for _, s in cons], t.n)
    assert offset is not None, "stabilizer constraints are always consistent"
    return AffineSubspace(t.n, offset, tuple(gf2.nullspace(masks, t.n)))


def z_distribution(t: StabilizerTableau):
    """Exact computational-basis distribution over all ``t.n`` qubits."""
    from .distribution import OutcomeDistribution

    support = z_support(t)
    weight = Fraction(1, support.size)
    probs = {}
    for point in support.points().tolist():
        key = "".join("1" if (point >> q) & 1 else "0" for q in range(t.n))
        probs[key] = weight
    return OutcomeDistribution(probs, (("", t.n),))
