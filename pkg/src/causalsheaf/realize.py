"""A minimal quantum-instrument diagram engine.

Instruments are classically controlled Kraus families wired into a DAG that
respects a causal order; evaluating a diagram composes the operator chains
branch by branch and yields the joint conditional probability table, which
snaps to an exact empirical model when the probabilities are close to
small-denominator rationals.

Amplitudes are complex doubles; exact arithmetic starts only after snapping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from . import locale as locale_mod
from . import models as models_mod
from . import order as order_mod
from .errors import DiagramError, ScenarioError, SnapError
from .locale import CausalScenario
from .models import ConditionalDistribution, EmpiricalModel
from .order import Preorder

COMPLETENESS_ATOL = 1e-9
SNAP_MAX_DENOMINATOR = 1024
SNAP_ATOL = 1e-9


@dataclass(frozen=True, eq=False)
class Wire:
    """An internal quantum wire from one event's instrument to a later one's."""

    name: str
    source: str
    target: str
    dim: int


@dataclass(frozen=True, eq=False)
class Instrument:
    """The device at one event: per classical input, a Kraus family split by
    classical output.

    Each operator maps the tensor product of the incoming wire spaces (in
    ``in_wires`` order) to that of the outgoing ones; an outcome may carry
    several operators (a demolition parity measurement needs one per state
    of the discarded subspace).  Completeness per input,
    sum of K^dagger K over outputs and branches = identity, is what makes
    the diagram's table normalized.
    """

    event: str
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    in_wires: tuple[str, ...]
    out_wires: tuple[str, ...]
    kraus: dict

    def ops(self, classical_input: str, classical_output: str) -> tuple[np.ndarray, ...]:
        return self.kraus[(classical_input, classical_output)]

    @classmethod
    def make(cls, event, inputs, outputs, in_wires, out_wires, kraus: dict) -> "Instrument":
        packed = {}
        for i in inputs:
            for o in outputs:
                ops = kraus.get((i, o), ())
                mats = tuple(np.asarray(k, dtype=complex) for k in ops)
                for m in mats:
                    m.flags.writeable = False
                packed[(i, o)] = mats
        return cls(event, tuple(inputs), tuple(outputs), tuple(in_wires), tuple(out_wires), packed)


@dataclass(frozen=True, eq=False)
class Diagram:
    """Instruments over a definite causal scenario, wired along the order."""

    scenario: CausalScenario
    wires: tuple[Wire, ...]
    instruments: dict

    def wire(self, name: str) -> Wire:
        for w in self.wires:
            if w.name == name:
                return w
        raise DiagramError(f"unknown wire {name!r}")


def _tensor_dim(diagram: Diagram, wire_names) -> int:
    return math.prod(diagram.wire(n).dim for n in wire_names)


def validate(diagram: Diagram) -> list[str]:
    """Itemized violations; an empty list means the diagram is valid."""
    issues = []
    scenario = diagram.scenario
    order = scenario.order
    if not order.is_partial_order():
        issues.append("scenario order must be a partial order")
        return issues
    if set(diagram.instruments) != set(scenario.events):
        issues.append("instruments must cover exactly the scenario events")
        return issues
    names = [w.name for w in diagram.wires]
    if len(set(names)) != len(names):
        issues.append("wire names must be unique")
    for w in diagram.wires:
        if w.source not in scenario.events or w.target not in scenario.events:
            issues.append(f"wire {w.name!r} touches an unknown event")
            continue
        if w.dim < 1:
            issues.append(f"wire {w.name!r} has non-positive dimension")
        if not (order.leq(w.source, w.target) and w.source != w.target):
            issues.append(
                f"wire {w.name!r} from {w.source!r} to {w.target!r} does not "
                "point to a strictly later event"
            )
    for e in scenario.events:
        inst = diagram.instruments[e]
        if inst.event != e:
            issues.append(f"instrument at {e!r} names event {inst.event!r}")
        if inst.inputs != scenario.inputs_of(e) or inst.outputs != scenario.outputs_of(e):
            issues.append(f"instrument at {e!r} disagrees with the scenario alphabets")
        incoming = {w.name for w in diagram.wires if w.target == e}
        outgoing = {w.name for w in diagram.wires if w.source == e}
        if set(inst.in_wires) != incoming or len(inst.in_wires) != len(incoming):
            issues.append(f"instrument at {e!r} must consume exactly its incoming wires")
            continue
        if set(inst.out_wires) != outgoing or len(inst.out_wires) != len(outgoing):
            issues.append(f"instrument at {e!r} must produce exactly its outgoing wires")
            continue
        d_in = _tensor_dim(diagram, inst.in_wires)
        d_out = _tensor_dim(diagram, inst.out_wires)
        for i in inst.inputs:
            total = np.zeros((d_in, d_in), dtype=complex)
            any_op = False
            for o in inst.outputs:
                for k in inst.ops(i, o):
                    if k.shape != (d_out, d_in):
                        issues.append(
                            f"operator at {e!r} for ({i!r}, {o!r}) has shape "
                            f"{k.shape}, expected {(d_out, d_in)}"
                        )
                        break
                    total += k.conj().T @ k
                    any_op = True
            if not any_op:
                issues.append(f"instrument at {e!r} has no operators for input {i!r}")
            elif not np.allclose(total, np.eye(d_in), atol=COMPLETENESS_ATOL):
                issues.append(
                    f"instrument at {e!r} violates completeness at input {i!r}"
                )
    return issues


def require_valid(diagram: Diagram):
    issues = validate(diagram)
    if issues:
        raise DiagramError("; ".join(issues))


def topological_events(diagram: Diagram) -> tuple[str, ...]:
    """Canonical linear extension of the order: smallest available name first."""
    order = diagram.scenario.order
    remaining = list(diagram.scenario.events)
    out = []
    while remaining:
        for e in remaining:
            if all(not order.leq(x, e) for x in remaining if x != e):
                out.append(e)
                remaining.remove(e)
                break
        else:
            raise DiagramError("order admits no linear extension")
    return tuple(out)


def _branch_amplitude(diagram: Diagram, topo, joint, branch) -> complex:
    state = np.ones((), dtype=complex)
    open_wires: list[str] = []
    for e in topo:
        inst = diagram.instruments[e]
        i, o = joint[e]
        k = inst.ops(i, o)[branch[e]]
        positions = [open_wires.index(w) for w in inst.in_wires]
        n = state.ndim
        state = np.moveaxis(state, positions, range(n - len(positions), n))
        rest = state.shape[: n - len(positions)]
        d_in = _tensor_dim(diagram, inst.in_wires)
        state = state.reshape(rest + (d_in,)) if positions else state.reshape(rest + (1,))
        state = state @ k.T
        out_dims = tuple(diagram.wire(w).dim for w in inst.out_wires)
        state = state.reshape(rest + out_dims) if out_dims else state.reshape(rest)
        open_wires = [w for w in open_wires if w not in inst.in_wires]
        open_wires.extend(inst.out_wires)
    if open_wires:
        raise DiagramError("evaluation left open wires; diagram has boundary")
    return complex(state)


@dataclass(frozen=True, eq=False)
class RealizedTable:
    """The float-valued conditional probability table of a diagram."""

    scenario: CausalScenario
    table: dict

    def value(self, ji, jo) -> float:
        return self.table[tuple(ji)].get(tuple(jo), 0.0)

    def row_sums(self) -> dict:
        return {ji: sum(row.values()) for ji, row in self.table.items()}

    def causality_violations(self, order: Preorder | None = None, atol: float = SNAP_ATOL) -> list:
        """Causality equations checked in floating point within a tolerance."""
        order = self.scenario.order if order is None else order
        evs = self.scenario.events
        inputs = sorted(self.table)
        bad = []
        for a in range(len(inputs)):
            for b in range(a + 1, len(inputs)):
                ji, jj = inputs[a], inputs[b]
                agree = {e for k, e in enumerate(evs) if ji[k] == jj[k]}
                low = order_mod.largest_lowerset_within(order, agree)
                if not low:
                    continue
                sel = [evs.index(e) for e in sorted(low)]
                lhs: dict = {}
                rhs: dict = {}
                for o, p in self.table[ji].items():
                    key = tuple(o[k] for k in sel)
                    lhs[key] = lhs.get(key, 0.0) + p
                for o, p in self.table[jj].items():
                    key = tuple(o[k] for k in sel)
                    rhs[key] = rhs.get(key, 0.0) + p
                for key in set(lhs) | set(rhs):
                    if abs(lhs.get(key, 0.0) - rhs.get(key, 0.0)) > atol:
                        bad.append((low, key, ji, jj))
        return bad

    def snap(self, max_denominator: int = SNAP_MAX_DENOMINATOR, atol: float = SNAP_ATOL) -> EmpiricalModel:
        """Snap every probability to the nearest small-denominator rational
        and validate the result as an empirical model."""
        rows = {}
        for ji, row in self.table.items():
            snapped = {}
            for jo, p in row.items():
                q = Fraction(p).limit_denominator(max_denominator)
                if abs(float(q) - p) > atol:
                    raise SnapError(
                        f"probability {p!r} at {ji}|{jo} has no rational within "
                        f"{atol} with denominator <= {max_denominator}"
                    )
                if q:
                    snapped[jo] = q
            rows[ji] = snapped
        cd = ConditionalDistribution.make(self.scenario, rows)
        return EmpiricalModel(cd)


def evaluate_raw(diagram: Diagram, topo=None) -> RealizedTable:
    """The diagram's table before snapping.

    For each joint input and joint output, the probability is the sum of
    squared amplitudes over one operator choice per event and branch.
    """
    require_valid(diagram)
    scenario = diagram.scenario
    topo = topological_events(diagram) if topo is None else tuple(topo)
    if sorted(topo) != sorted(scenario.events):
        raise DiagramError("topological order must cover exactly the events")
    for k, e in enumerate(topo):
        for later in topo[k + 1:]:
            if scenario.order.leq(later, e) and later != e:
                raise DiagramError("given order is not a linear extension")
    table = {}
    for ji in scenario.joint_inputs():
        row = {}
        for jo in scenario.joint_outputs():
            joint = {e: (ji[k], jo[k]) for k, e in enumerate(scenario.events)}
            branch_counts = {
                e: len(diagram.instruments[e].ops(*joint[e])) for e in topo
            }
            if any(c == 0 for c in branch_counts.values()):
                continue
            p = 0.0
            for combo in product(*(range(branch_counts[e]) for e in topo)):
                amp = _branch_amplitude(diagram, topo, joint, dict(zip(topo, combo)))
                p += abs(amp) ** 2
            if p > 0.0:
                row[jo] = p
        table[ji] = row
    return RealizedTable(scenario, table)


def evaluate(diagram: Diagram) -> EmpiricalModel:
    """Evaluate and snap to an exact empirical model."""
    return evaluate_raw(diagram).snap()


# -- the diamond construction ---------------------------------------------

_KET0 = np.array([1, 0], dtype=complex)
_KET1 = np.array([0, 1], dtype=complex)
_KETP = np.array([1, 1], dtype=complex) / np.sqrt(2)
_KETM = np.array([1, -1], dtype=complex) / np.sqrt(2)

_BELL = {
    # (zz parity, xx parity) -> state on the two wire qubits
    ("0", "0"): (np.kron(_KET0, _KET0) + np.kron(_KET1, _KET1)) / np.sqrt(2),
    ("0", "1"): (np.kron(_KET0, _KET0) - np.kron(_KET1, _KET1)) / np.sqrt(2),
    ("1", "0"): (np.kron(_KET0, _KET1) + np.kron(_KET1, _KET0)) / np.sqrt(2),
    ("1", "1"): (np.kron(_KET0, _KET1) - np.kron(_KET1, _KET0)) / np.sqrt(2),
}


def _nondemolition(basis) -> dict:
    k0, k1 = basis
    return {"0": np.outer(k0, k0.conj()), "1": np.outer(k1, k1.conj())}


def diamond_builtin() -> Diagram:
    """Four events in a diamond: a Bell-pair source whose input selects the
    ZZ parity and whose output follows the XX parity, non-demolition Z or X
    measurements at the two middle events, and a demolition ZZ or XX parity
    measurement at the final event."""
    po = order_mod.closure("ABCD", [("C", "A"), ("C", "B"), ("A", "D"), ("B", "D")])
    alphabets = {e: ("0", "1") for e in "ABCD"}
    scenario = CausalScenario.make(po, alphabets, alphabets)
    wires = (
        Wire("ca", "C", "A", 2),
        Wire("cb", "C", "B", 2),
        Wire("ad", "A", "D", 2),
        Wire("bd", "B", "D", 2),
    )
    # C prepares one of the four Bell states with a fair classical output.
    c_kraus = {
        (i, o): [_BELL[(i, o)].reshape(4, 1) / np.sqrt(2)]
        for i in "01"
        for o in "01"
    }
    z_meas = _nondemolition((_KET0, _KET1))
    x_meas = _nondemolition((_KETP, _KETM))
    ab_kraus = {
        ("0", o): [z_meas[o]] for o in "01"
    } | {
        ("1", o): [x_meas[o]] for o in "01"
    }
    # D measures a parity and discards: two operator branches per outcome.
    def parity_branches(b0, b1):
        vecs = [np.kron(a, b) for a in (b0, b1) for b in (b0, b1)]
        even = [v.conj().reshape(1, 4) for v, par in zip(vecs, (0, 1, 1, 0)) if par == 0]
        odd = [v.conj().reshape(1, 4) for v, par in zip(vecs, (0, 1, 1, 0)) if par == 1]
        return even, odd

    zz_even, zz_odd = parity_branches(_KET0, _KET1)
    xx_even, xx_odd = parity_branches(_KETP, _KETM)
    d_kraus = {
        ("0", "0"): zz_even,
        ("0", "1"): zz_odd,
        ("1", "0"): xx_even,
        ("1", "1"): xx_odd,
    }
    instruments = {
        "C": Instrument.make("C", "01", "01", (), ("ca", "cb"), c_kraus),
        "A": Instrument.make("A", "01", "01", ("ca",), ("ad",), ab_kraus),
        "B": Instrument.make("B", "01", "01", ("cb",), ("bd",), ab_kraus),
        "D": Instrument.make("D", "01", "01", ("ad", "bd"), (), d_kraus),
    }
    return Diagram(scenario, wires, instruments)
