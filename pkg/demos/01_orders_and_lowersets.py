"""Causal (pre)orders and their lowersets.

Events come with a reflexive-transitive relation built from generating
pairs; the lowersets (downward-closed event sets) are the regions over
which marginals make sense.  Pre-orders may put two events in indefinite
causal order, and such events enter or leave a lowerset together.
"""

from causalsheaf import (
    CausalRelationship,
    classify,
    closure,
    discrete_order,
    downset,
    enumerate_posets,
    enumerate_preorders,
    indiscrete_order,
    lowersets,
)

# Four events in a diamond: C first, then A and B in parallel, then D.
diamond = closure("ABCD", [("C", "A"), ("C", "B"), ("A", "D"), ("B", "D")])
print("diamond relation:", sorted(p for p in diamond.pairs() if p[0] != p[1]))
print("C <= D is derived by transitivity:", diamond.leq("C", "D"))
print("A vs B:", classify(diamond, "A", "B").value)
print("downset of D:", sorted(downset(diamond, "D")))

print("\nthe diamond's six lowersets:")
for low in lowersets(diamond):
    print("  ", sorted(low) or "{}")

# A pre-order may relate two events both ways: indefinite causal order.
cyclic = closure("AB", [("A", "B"), ("B", "A")])
print("\nA vs B in the 2-cycle:", classify(cyclic, "A", "B").value)
print("its lowersets are all-or-nothing:", [sorted(s) for s in lowersets(cyclic)])

# Indefinite blocks shrink the lowerset lattice.
print("\nlowerset counts on three events:")
for name, po in [
    ("discrete", discrete_order("ABC")),
    ("chain A<B<C", closure("ABC", [("A", "B"), ("B", "C")])),
    ("indiscrete", indiscrete_order("ABC")),
]:
    print(f"  {name:12s} {len(lowersets(po))}")

# Everything labeled, nothing up to isomorphism: the sweep analyses need
# to know which event sits where.
print("\nlabeled (pre)orders on small event sets:")
for events in ("AB", "ABC"):
    print(
        f"  {events}: {len(enumerate_preorders(events))} pre-orders, "
        f"{len(enumerate_posets(events))} partial orders"
    )
