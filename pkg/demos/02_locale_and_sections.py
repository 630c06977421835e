"""The locale of inputs and the causal sections over it.

A locale element picks a non-empty subset of inputs at every event of some
lowerset.  A causal section on an element maps its joint inputs to joint
outputs so that each event's output reads only inputs at or below it; the
per-event factorized form makes that structure explicit.
"""

from causalsheaf import (
    CausalScenario,
    closure,
    count_gluings,
    count_sections,
    element,
    enumerate_sections,
    factorize,
    from_table,
    glue,
    join,
    leq,
    meet,
    restrict,
    top,
    varphi,
)

diamond = closure("ABCD", [("C", "A"), ("C", "B"), ("A", "D"), ("B", "D")])
sc = CausalScenario.make(
    diamond,
    {e: ("0", "1") for e in "ABCD"},
    {e: ("0", "1") for e in "ABCD"},
)

u = element(sc, {"C": ("0",), "A": ("0", "1")})
v = element(sc, {"C": ("1",), "B": ("0", "1")})
print("u:", dict(zip(sc.events, u.subsets)))
print("v:", dict(zip(sc.events, v.subsets)))
print("u <= top:", leq(u, top(sc)))
print("varphi(u):", sorted(varphi(u)))

# Disjoint input subsets at the shared past event C empty the meet out.
m, j = meet(u, v), join(u, v)
print("meet support:", sorted(m.support) or "{}")
print("join support:", sorted(j.support), "with C subset", j.subset_of("C"))

# Section counting: the factorized form multiplies per-event table sizes.
print("\nsections on the diamond top:", count_sections(top(sc)), "= 2^26")
small = element(sc, {"C": ("0", "1"), "A": ("0", "1")})
print("sections on {C,A} with full inputs:", count_sections(small))

# A section whose final output is the XOR of the middle inputs.
table = {}
for ji in top(sc).joint_inputs():  # (i_A, i_B, i_C, i_D)
    table[ji] = ("0", "0", ji[2], str(int(ji[0]) ^ int(ji[1])))
xor_section = from_table(top(sc), table)
print("\nXOR section factor domains:")
for event in "ABCD":
    print(f"  {event}: {len(factorize(xor_section).table_of(event))} cells")

# Restriction forgets events outside the target and inputs outside it.
print("restricted to {C,A}:", restrict(xor_section, small).as_table())

# Gluing compatible sections: always possible, not always uniquely.
f = restrict(xor_section, u)
g = next(enumerate_sections(v))
h = glue(f, g)
print("\nglue lives on:", sorted(h.domain.support))
print("gluings compatible pairs admit here:", count_gluings(u, v))
