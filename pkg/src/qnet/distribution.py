"""Exact outcome distributions over party-grouped symbol strings."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .errors import ShapeMismatch, ZeroProbabilityEvent


class OutcomeDistribution:
    """Map from outcome key to exact probability.

    A key is a flat string: each party's segment in party order, with widths
    given by ``groups``, a tuple of ``(party_name, width)``.  Bits are ``0``/``1``;
    classical labels and post-processed answers may use other characters.
    Zero-probability keys are never stored.
    """

    __slots__ = ("probs", "groups", "width")

    def __init__(self, probs: Mapping[str, Fraction], groups):
        self.groups = tuple((str(name), int(w)) for name, w in groups)
        self.width = sum(w for _, w in self.groups)
        clean = {}
        width = self.width
        for key, p in probs.items():
            if type(p) is not Fraction:
                p = Fraction(p)
            if p.numerator < 0:
                raise ValueError(f"negative probability for {key!r}")
            if len(key) != width:
                raise ShapeMismatch(f"key {key!r} has length {len(key)}, expected {width}")
            if p.numerator:
                clean[key] = p
        self.probs = clean

    @classmethod
    def point_mass(cls, key, groups=None):
        return cls({key: Fraction(1)}, groups or (("", len(key)),))

    def __repr__(self):
        items = ", ".join(f"{k}: {v}" for k, v in sorted(self.probs.items())[:8])
        more = "" if len(self.probs) <= 8 else ", ..."
        return f"OutcomeDistribution({{{items}{more}}})"

    def __len__(self):
        return len(self.probs)

    def __getitem__(self, key):
        return self.probs.get(key, Fraction(0))

    def __iter__(self):
        return iter(self.probs)

    def items(self):
        return self.probs.items()

    def __eq__(self, other):
        if not isinstance(other, OutcomeDistribution):
            return NotImplemented
        return self.width == other.width and self.probs == other.probs

    def total(self):
        return sum(self.probs.values(), Fraction(0))

    @property
    def party_names(self):
        return [name for name, _ in self.groups]

    def party_slice(self, name):
        start = 0
        for party, w in self.groups:
            if party == name:
                return slice(start, start + w)
            start += w
        raise KeyError(name)

    def segments(self, key):
        out, start = {}, 0
        for party, w in self.groups:
            out[party] = key[start:start + w]
            start += w
        return out

    def is_binary(self):
        return all(set(k) <= {"0", "1"} for k in self.probs)

    def marginal(self, positions):
        """Distribution of the characters at ``positions`` (ungrouped)."""
        positions = list(positions)
        acc = {}
        for key, p in self.probs.items():
            sub = "".join(key[i] for i in positions)
            acc[sub] = acc.get(sub, Fraction(0)) + p
        return OutcomeDistribution(acc, (("", len(positions)),))

    def marginal_parties(self, names):
        """Keep only the named parties' segments (in the given order)."""
        positions, groups = [], []
        for name in names:
            sl = self.party_slice(name)
            positions.extend(range(sl.start, sl.stop))
            groups.append((name, sl.stop - sl.start))
        d = self.marginal(positions)
        return OutcomeDistribution(d.probs, groups)

    def relabel_groups(self, groups):
        return OutcomeDistribution(self.probs, groups)


def condition(d: OutcomeDistribution, positions, values):
    """Condition on ``key[positions[i]] == values[i]``.

    Returns ``(conditional, probability_of_event)``; the conditional keeps the
    full key shape.
    """
    positions = list(positions)
    values = [str(v) for v in values]
    if len(positions) != len(values):
        raise ShapeMismatch("positions and values differ in length")
    for i in positions:
        if not 0 <= i < d.width:
            raise ShapeMismatch(f"position {i} outside key width {d.width}")
    kept = {
        k: p for k, p in d.probs.items()
        if all(k[i] == v for i, v in zip(positions, values))
    }
    prob = sum(kept.values(), Fraction(0))
    if prob == 0:
        raise ZeroProbabilityEvent(f"event {dict(zip(positions, values))} has probability 0")
    return OutcomeDistribution({k: p / prob for k, p in kept.items()}, d.groups), prob


def total_variation(d1, d2) -> float:
    """TV distance; either argument may be an OutcomeDistribution or a float dict."""
    p = d1.probs if isinstance(d1, OutcomeDistribution) else d1
    q = d2.probs if isinstance(d2, OutcomeDistribution) else d2
    keys = set(p) | set(q)
    return 0.5 * sum(abs(float(p.get(k, 0)) - float(q.get(k, 0))) for k in keys)


def format_fraction(p: Fraction) -> str:
    p = Fraction(p)
    return f"{p.numerator}/{p.denominator}"


def parse_fraction(text: str) -> Fraction:
    num, sep, den = text.partition("/")
    if not sep:
        raise ValueError(f"expected num/den, got {text!r}")
    return Fraction(int(num), int(den))
