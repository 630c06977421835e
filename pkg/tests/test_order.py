"""Pre-order and lowerset machinery.

Frozen counts: 2 events give 4 pre-orders / 3 posets, 3 events give 29 / 19
(brute force over off-diagonal relations with a transitivity filter).
"""

import random

import pytest

from causalsheaf import order as O
from causalsheaf.errors import EnumerationLimitError, OrderError


def diamond():
    return O.closure("ABCD", [("C", "A"), ("C", "B"), ("A", "D"), ("B", "D")])


class TestClosure:
    def test_empty_generators_give_discrete(self):
        po = O.closure("AB", [])
        assert po.pairs() == frozenset({("A", "A"), ("B", "B")})

    def test_diamond_derives_transitive_pair(self):
        po = diamond()
        assert po.leq("C", "D")
        assert not po.leq("D", "C")
        assert not po.leq("A", "B")

    def test_two_cycle_is_a_preorder(self):
        po = O.closure("AB", [("A", "B"), ("B", "A")])
        assert po.leq("A", "B") and po.leq("B", "A")
        assert not po.is_partial_order()

    def test_unknown_generator_event_rejected(self):
        with pytest.raises(OrderError):
            O.closure("AB", [("A", "Z")])

    def test_idempotent(self):
        po = diamond()
        again = O.closure(po.events, po.pairs())
        assert again == po


class TestClassify:
    def test_four_cases(self):
        po = diamond()
        assert O.classify(po, "A", "B") is O.CausalRelationship.UNRELATED
        assert O.classify(po, "C", "D") is O.CausalRelationship.PRECEDES
        assert O.classify(po, "D", "C") is O.CausalRelationship.SUCCEEDS
        cyc = O.closure("AB", [("A", "B"), ("B", "A")])
        assert O.classify(cyc, "A", "B") is O.CausalRelationship.INDEFINITE

    def test_equal_events_rejected(self):
        with pytest.raises(OrderError):
            O.classify(diamond(), "A", "A")


class TestLowersets:
    def test_diamond_has_the_six(self):
        lows = O.lowersets(diamond())
        assert [sorted(s) for s in lows] == [
            [],
            ["C"],
            ["A", "C"],
            ["B", "C"],
            ["A", "B", "C"],
            ["A", "B", "C", "D"],
        ]

    def test_discrete_is_full_powerset(self):
        assert len(O.lowersets(O.discrete_order("AB"))) == 4

    def test_indiscrete_is_all_or_nothing(self):
        po = O.indiscrete_order("ABC")
        assert [sorted(s) for s in O.lowersets(po)] == [[], ["A", "B", "C"]]

    def test_closed_under_union_and_intersection(self):
        for po in O.enumerate_preorders("ABC"):
            lows = set(O.lowersets(po))
            for a in lows:
                for b in lows:
                    assert a | b in lows
                    assert a & b in lows

    def test_downsets_are_lowersets(self):
        po = diamond()
        lows = set(O.lowersets(po))
        for e in po.events:
            assert O.downset(po, e) in lows

    def test_refinement_monotonicity(self):
        rng = random.Random(7)
        pres = O.enumerate_preorders("ABC")
        for _ in range(60):
            a, b = rng.choice(pres), rng.choice(pres)
            if a.refines(b):
                assert set(O.lowersets(b)) <= set(O.lowersets(a))

    def test_event_cap(self):
        many = [f"E{i:02d}" for i in range(17)]
        with pytest.raises(EnumerationLimitError):
            O.lowersets(O.discrete_order(many))


class TestDownset:
    def test_diamond(self):
        po = diamond()
        assert sorted(O.downset(po, "D")) == ["A", "B", "C", "D"]
        assert sorted(O.downset(po, "C")) == ["C"]

    def test_discrete_singleton(self):
        assert O.downset(O.discrete_order("AB"), "A") == frozenset({"A"})

    def test_unknown_event(self):
        with pytest.raises(OrderError):
            O.downset(diamond(), "Z")


class TestEnumeration:
    @pytest.mark.parametrize(
        "events,n_pre,n_pos",
        [("A", 1, 1), ("AB", 4, 3), ("ABC", 29, 19)],
    )
    def test_counts(self, events, n_pre, n_pos):
        assert len(O.enumerate_preorders(events)) == n_pre
        assert len(O.enumerate_posets(events)) == n_pos

    def test_no_duplicates_and_closed(self):
        pres = O.enumerate_preorders("ABC")
        assert len(set(pres)) == len(pres)

    def test_posets_are_the_never_indefinite_preorders(self):
        pres = O.enumerate_preorders("ABC")
        pos = set(O.enumerate_posets("ABC"))
        for po in pres:
            indefinite = any(
                O.classify(po, x, y) is O.CausalRelationship.INDEFINITE
                for k, x in enumerate(po.events)
                for y in po.events[k + 1:]
            )
            assert (po in pos) == (not indefinite)

    def test_cap(self):
        with pytest.raises(EnumerationLimitError):
            O.enumerate_preorders("ABCDEF")
