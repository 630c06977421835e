"""Causal fractions against every (pre)order.

The causal fraction of a table against an order is the largest lambda such
that lambda times some order-causal model fits under the table entrywise.
Sweeping all labeled (pre)orders on the events classifies which causal
structures can explain any part of the observed correlations.
"""

from fractions import Fraction

from causalsheaf import (
    CausalScenario,
    ConditionalDistribution,
    causal_fraction,
    chain_order,
    closure,
    indiscrete_order,
    sweep,
)

HALF = Fraction(1, 2)

support = {
    ("0", "0", "0"): [("0", "0", "0"), ("1", "1", "1")],
    ("0", "0", "1"): [("0", "1", "1"), ("1", "0", "0")],
    ("0", "1", "0"): [("0", "0", "1"), ("1", "1", "0")],
    ("0", "1", "1"): [("0", "1", "0"), ("1", "0", "1")],
    ("1", "0", "0"): [("0", "1", "0"), ("1", "0", "1")],
    ("1", "0", "1"): [("0", "0", "1"), ("1", "1", "0")],
    ("1", "1", "0"): [("0", "1", "1"), ("1", "0", "0")],
    ("1", "1", "1"): [("0", "0", "0"), ("1", "1", "1")],
}
sc = CausalScenario.make(
    closure("ABC", [("C", "A"), ("C", "B"), ("A", "B"), ("B", "A")]),
    {e: ("0", "1") for e in "ABC"},
    {e: ("0", "1") for e in "ABC"},
)
box = ConditionalDistribution.make(
    sc, {ji: {o: HALF for o in outs} for ji, outs in support.items()}
)

print("fraction for the chain A<B<C:   ", causal_fraction(box, chain_order("ABC")).value)
print("fraction for the indiscrete one:", causal_fraction(box, indiscrete_order("ABC")).value)

results = sweep(box, posets_only=True)
print(f"\nall {len(results)} partial orders give:",
      sorted({fr.value for fr in results.values()}))

results = sweep(box)
ones = [po for po, fr in results.items() if fr.value == 1]
print(f"\n{len(results)} pre-orders swept; fraction 1 for {len(ones)} of them:")
for po in ones:
    strict = sorted((x, y) for x, y in po.pairs() if x != y)
    print("  relation:", strict)
print("no definite causal order explains any part of this box,")
print("while one party acting before an indefinite pair explains all of it.")
