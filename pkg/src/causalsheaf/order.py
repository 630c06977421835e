"""Finite pre-orders and partial orders on named events.

Orders are stored as fully closed (reflexive-transitive) boolean matrices over
the canonical event ordering, which is lexicographic in the event names.  All
values are immutable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations

from .errors import EnumerationLimitError, OrderError

# Lowerset enumeration is exponential in the number of events.
MAX_LOWERSET_EVENTS = 16
# Order enumeration is exponential in the square of the number of events.
MAX_ENUMERATION_EVENTS = 5


class CausalRelationship(enum.Enum):
    """The four possible relationships of two distinct events in a pre-order."""

    UNRELATED = "unrelated"
    PRECEDES = "precedes"
    SUCCEEDS = "succeeds"
    INDEFINITE = "indefinite"


def _canonical_events(events) -> tuple[str, ...]:
    evs = list(events)
    if not all(isinstance(e, str) and e for e in evs):
        raise OrderError("event names must be non-empty strings")
    if len(set(evs)) != len(evs):
        raise OrderError("event names must be distinct")
    return tuple(sorted(evs))


@dataclass(frozen=True)
class Preorder:
    """A reflexive-transitive relation on a finite set of named events.

    ``matrix[i][j]`` holds iff ``events[i] <= events[j]``.  Antisymmetry is not
    required; use :meth:`is_partial_order` to test for it.
    """

    events: tuple[str, ...]
    matrix: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        n = len(self.events)
        if self.events != _canonical_events(self.events):
            raise OrderError("events must be given in canonical (sorted) order")
        if len(self.matrix) != n or any(len(row) != n for row in self.matrix):
            raise OrderError("relation matrix has wrong shape")
        for i in range(n):
            if not self.matrix[i][i]:
                raise OrderError("relation must be reflexive")
            for j in range(n):
                if self.matrix[i][j]:
                    for k in range(n):
                        if self.matrix[j][k] and not self.matrix[i][k]:
                            raise OrderError("relation must be transitive")

    # -- queries ---------------------------------------------------------

    def index(self, event: str) -> int:
        try:
            return self.events.index(event)
        except ValueError:
            raise OrderError(f"unknown event {event!r}") from None

    def leq(self, x: str, y: str) -> bool:
        """Whether x <= y."""
        return self.matrix[self.index(x)][self.index(y)]

    def pairs(self) -> frozenset[tuple[str, str]]:
        """The full closed relation as a set of (x, y) pairs with x <= y."""
        return frozenset(
            (self.events[i], self.events[j])
            for i in range(len(self.events))
            for j in range(len(self.events))
            if self.matrix[i][j]
        )

    def is_partial_order(self) -> bool:
        n = len(self.events)
        return not any(
            self.matrix[i][j] and self.matrix[j][i]
            for i in range(n)
            for j in range(i + 1, n)
        )

    def is_discrete(self) -> bool:
        n = len(self.events)
        return not any(
            self.matrix[i][j] for i in range(n) for j in range(n) if i != j
        )

    def refines(self, other: "Preorder") -> bool:
        """Whether this relation is contained in ``other``'s (same events)."""
        if self.events != other.events:
            raise OrderError("refinement comparison needs identical event sets")
        n = len(self.events)
        return all(
            other.matrix[i][j]
            for i in range(n)
            for j in range(n)
            if self.matrix[i][j]
        )


def closure(events, generators) -> Preorder:
    """Reflexive-transitive closure of the given generating pairs."""
    evs = _canonical_events(events)
    n = len(evs)
    idx = {e: i for i, e in enumerate(evs)}
    rel = [[i == j for j in range(n)] for i in range(n)]
    for x, y in generators:
        if x not in idx or y not in idx:
            raise OrderError(f"generator ({x!r}, {y!r}) names an unknown event")
        rel[idx[x]][idx[y]] = True
    # Floyd-Warshall style transitive closure.
    for k in range(n):
        for i in range(n):
            if rel[i][k]:
                row_i, row_k = rel[i], rel[k]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    return Preorder(evs, tuple(tuple(row) for row in rel))


def discrete_order(events) -> Preorder:
    return closure(events, [])


def indiscrete_order(events) -> Preorder:
    evs = _canonical_events(events)
    return closure(evs, [(x, y) for x in evs for y in evs])


def chain_order(events_in_chain) -> Preorder:
    """Total order with the events in the given (not necessarily sorted) sequence."""
    seq = list(events_in_chain)
    return closure(seq, list(zip(seq, seq[1:])))


def classify(po: Preorder, x: str, y: str) -> CausalRelationship:
    """One of the four causal relationships of two distinct events."""
    if x == y:
        raise OrderError("classify needs two distinct events")
    xy, yx = po.leq(x, y), po.leq(y, x)
    if xy and yx:
        return CausalRelationship.INDEFINITE
    if xy:
        return CausalRelationship.PRECEDES
    if yx:
        return CausalRelationship.SUCCEEDS
    return CausalRelationship.UNRELATED


def downset(po: Preorder, event: str) -> frozenset[str]:
    """All events <= the given one (always a lowerset)."""
    i = po.index(event)
    return frozenset(e for j, e in enumerate(po.events) if po.matrix[j][i])


def is_lowerset(po: Preorder, members) -> bool:
    members = frozenset(members)
    if not members <= set(po.events):
        raise OrderError("lowerset members must be events of the order")
    return all(downset(po, e) <= members for e in members)


def largest_lowerset_within(po: Preorder, members) -> frozenset[str]:
    """The largest lowerset contained in the given event set."""
    members = frozenset(members)
    return frozenset(e for e in members if downset(po, e) <= members)


def lowersets(po: Preorder) -> tuple[frozenset[str], ...]:
    """All lowersets, ordered by size then canonical member tuple.

    For pre-orders, events in mutually indefinite causal order appear wholly
    or not at all (their downsets contain each other).
    """
    n = len(po.events)
    if n > MAX_LOWERSET_EVENTS:
        raise EnumerationLimitError(
            f"lowerset enumeration capped at {MAX_LOWERSET_EVENTS} events, got {n}"
        )
    down_masks = []
    for i in range(n):
        mask = 0
        for j in range(n):
            if po.matrix[j][i]:
                mask |= 1 << j
        down_masks.append(mask)
    found = []
    for mask in range(1 << n):
        ok = True
        m = mask
        while m:
            i = (m & -m).bit_length() - 1
            if down_masks[i] & ~mask:
                ok = False
                break
            m &= m - 1
        if ok:
            found.append(frozenset(po.events[i] for i in range(n) if mask >> i & 1))
    found.sort(key=lambda s: (len(s), tuple(sorted(s))))
    return tuple(found)


def _transitive_masks(rows: list[int], n: int) -> bool:
    # rows[i] is the bitmask of {j : i <= j}; transitive iff i <= j implies
    # row[j] subset of row[i].
    for i in range(n):
        m = rows[i]
        while m:
            j = (m & -m).bit_length() - 1
            if rows[j] & ~rows[i]:
                return False
            m &= m - 1
    return True


def enumerate_preorders(events) -> list[Preorder]:
    """All labeled pre-orders on the given events (reflexive-transitive)."""
    evs = _canonical_events(events)
    n = len(evs)
    if n > MAX_ENUMERATION_EVENTS:
        raise EnumerationLimitError(
            f"(pre)order enumeration capped at {MAX_ENUMERATION_EVENTS} events, got {n}"
        )
    off_diag = [(i, j) for i in range(n) for j in range(n) if i != j]
    out = []
    for bits in range(1 << len(off_diag)):
        rows = [1 << i for i in range(n)]
        for b, (i, j) in enumerate(off_diag):
            if bits >> b & 1:
                rows[i] |= 1 << j
        if _transitive_masks(rows, n):
            matrix = tuple(
                tuple(bool(rows[i] >> j & 1) for j in range(n)) for i in range(n)
            )
            out.append(Preorder(evs, matrix))
    return out


def enumerate_posets(events) -> list[Preorder]:
    """All labeled partial orders on the given events."""
    return [po for po in enumerate_preorders(events) if po.is_partial_order()]


def indefinite_pairs(po: Preorder) -> list[tuple[str, str]]:
    """All unordered pairs of events in mutually indefinite causal order."""
    return [
        (x, y)
        for x, y in combinations(po.events, 2)
        if classify(po, x, y) is CausalRelationship.INDEFINITE
    ]
