"""Realizing an empirical model with quantum instruments.

A diagram wires classically controlled Kraus families along a causal order:
a Bell-pair source feeding two non-demolition measurements feeding a parity
measurement.  Evaluation composes operator branches, and the resulting
probabilities snap to exact rationals forming a causal empirical model.
"""

from causalsheaf import (
    check_causality,
    diamond_builtin,
    evaluate,
    evaluate_raw,
    restrict_model,
    validate,
)

diagram = diamond_builtin()
print("validation issues:", validate(diagram) or "none")

raw = evaluate_raw(diagram)
worst = max(abs(s - 1) for s in raw.row_sums().values())
print(f"row sums deviate from 1 by at most {worst:.1e}")

model = evaluate(diagram)  # snapped to exact rationals
table = model.distribution
print("causal for the diamond order:", check_causality(table).ok)

print("\nmarginal at the source C (input selects the hidden parity):")
for ji, row in restrict_model(table, {"C"}).as_dict().items():
    print("  i_C =", ji[0], dict(sorted(row.items())))

print("\nthree-party marginal rows (i_A, i_B, i_C) with matched middle inputs:")
cab = restrict_model(table, {"A", "B", "C"}).as_dict()
for ji in sorted(cab):
    if ji[0] == ji[1]:
        cells = {k: str(v) for k, v in sorted(cab[ji].items())}
        print("  ", ji, cells)

print("\nfull-table row (0,0,0,0): parity measurement is deterministic:")
row = table.row(("0", "0", "0", "0"))
for o, w in sorted(row.items()):
    print("  ", o, str(w))
