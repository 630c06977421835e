"""Locality as exact linear programming.

A model is local when some weighting of deterministic causal sections
reproduces it exactly.  The decision runs an exact rational simplex over
one variable per section, so "no" answers are certificates, not round-off.
"""

from fractions import Fraction

from causalsheaf import (
    CausalScenario,
    ConditionalDistribution,
    convex_mix,
    discrete_order,
    enumerate_sections,
    is_local,
    top,
)

HALF = Fraction(1, 2)

sc = CausalScenario.make(
    discrete_order("AB"),
    {e: ("0", "1") for e in "AB"},
    {e: ("0", "1") for e in "AB"},
)

# Perfectly correlated fair bits: local, with the obvious decomposition.
rows = {ji: {("0", "0"): HALF, ("1", "1"): HALF} for ji in sc.joint_inputs()}
correlated = ConditionalDistribution.make(sc, rows)
cert = is_local(correlated)
print("correlated bits local:", cert.local)
for section, weight in cert.weights:
    print(f"  weight {weight}: outputs {[section(ji) for ji in sorted(rows)]}")

# The PR box: no-signalling but not reproducible by causal sections.
pr_rows = {}
for ji in sc.joint_inputs():
    i_a, i_b = int(ji[0]), int(ji[1])
    pr_rows[ji] = {
        (oa, ob): HALF
        for oa in "01"
        for ob in "01"
        if int(oa) ^ int(ob) == (i_a & i_b)
    }
pr = ConditionalDistribution.make(sc, pr_rows)
print("\nPR box local:", is_local(pr).local)

# Any mixture of sections is local by construction, and the returned
# decomposition reproduces the table exactly (re-verified internally).
sections = list(enumerate_sections(top(sc)))
mix = convex_mix({sections[3]: Fraction(1, 3), sections[10]: Fraction(2, 3)})
cert = is_local(mix)
print("\nrandom-ish mixture local:", cert.local)
print("decomposition weights:", sorted(w for _, w in cert.weights))

# Possibilistic tables use the Boolean semiring; no LP is involved there.
from causalsheaf import BOOLEAN

bool_rows = {ji: {o: True for o in row} for ji, row in pr_rows.items()}
pr_bool = ConditionalDistribution.make(sc, bool_rows, BOOLEAN)
print("\npossibilistic PR box local:", is_local(pr_bool).local)
