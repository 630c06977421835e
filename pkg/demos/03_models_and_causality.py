"""Empirical models and the causality equations.

A table of joint-output weights per joint input is causal for an order when
every lowerset marginal ignores the inputs outside the lowerset.  The same
table can be causal for one order and signalling for another; restriction
and input fixing derive smaller tables from it.
"""

from fractions import Fraction

from causalsheaf import (
    CausalScenario,
    ConditionalDistribution,
    check_causality,
    check_no_signalling,
    closure,
    discrete_order,
    fix_inputs,
    restrict_model,
)

HALF = Fraction(1, 2)

# The three-party box: A, B and C each flip a shared bit pattern around.
# Rows are (i_A, i_B, i_C); each row puts weight 1/2 on two joint outputs.
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

c_first = closure("ABC", [("C", "A"), ("C", "B"), ("A", "B"), ("B", "A")])
sc = CausalScenario.make(
    c_first, {e: ("0", "1") for e in "ABC"}, {e: ("0", "1") for e in "ABC"}
)
box = ConditionalDistribution.make(
    sc, {ji: {o: HALF for o in outs} for ji, outs in support.items()}
)

print("causal for 'C first, A and B indefinite':", check_causality(box).ok)
verdict = check_causality(box, discrete_order("ABC"))
print("causal for the discrete order:", verdict.ok)
v = verdict.violations[0]
print(
    "first violated equation: marginal on", sorted(v.lowerset),
    "differs between inputs", v.input_a, "and", v.input_b,
    f"({v.lhs} vs {v.rhs})",
)

print("\nmarginal at C (a fair coin):", restrict_model(box, {"C"}).as_dict())

# Fixing the first party's input leaves a no-signalling two-party model.
fixed = fix_inputs(box, {"C": "0"}, discard={"C"})
print("\nfix i_C = 0, discard o_C:")
for ji, row in fixed.as_dict().items():
    print("  ", ji, dict(sorted(row.items())))
print("no-signalling:", check_no_signalling(fixed).ok)
