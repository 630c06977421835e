"""Empirical models as causal conditional distributions.

A conditional distribution is a normalized table of joint-output weights per
joint input over a lowerset of events.  Causality is the requirement that
every lowerset marginal is independent of the inputs outside the lowerset;
it is checked as a reduced system of linear equations, and models over the
full event set that pass the check are empirical models.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import distributions as dist_mod
from . import locale as locale_mod
from . import order as order_mod
from . import sections as sections_mod
from .distributions import NONNEG_RATIONAL, SectionDistribution, Semiring
from .errors import NormalizationError, NotCausalError, OrderError, ScenarioError
from .locale import CausalScenario
from .order import Preorder


@dataclass(frozen=True)
class ConditionalDistribution:
    """Normalized joint-output weights conditional on joint inputs over a
    lowerset.  Rows and cells are stored sparsely (missing cells are zero)
    with canonical key order; joint keys are per-event symbols over the
    sorted support."""

    scenario: CausalScenario
    support: frozenset[str]
    semiring: Semiring
    rows: tuple[tuple[tuple[str, ...], tuple[tuple[tuple[str, ...], object], ...]], ...]

    def __post_init__(self):
        if not order_mod.is_lowerset(self.scenario.order, self.support):
            raise OrderError("a conditional distribution lives over a lowerset")
        evs = self.support_events()
        expected = list(product(*(self.scenario.inputs_of(e) for e in evs)))
        if [ji for ji, _ in self.rows] != expected:
            raise ScenarioError("rows must cover every joint input, in canonical order")
        outputs = list(product(*(self.scenario.outputs_of(e) for e in evs)))
        out_pos = {o: k for k, o in enumerate(outputs)}
        for ji, row in self.rows:
            seen = set()
            for o, w in row:
                if o not in out_pos:
                    raise ScenarioError(f"unknown joint output {o} in row {ji}")
                if o in seen:
                    raise ScenarioError(f"duplicate cell {o} in row {ji}")
                seen.add(o)
                self.semiring.validate(w)
                if w == self.semiring.zero:
                    raise ScenarioError("zero cells must be omitted")
            if list(row) != sorted(row, key=lambda kv: out_pos[kv[0]]):
                raise ScenarioError("row cells must be in canonical output order")
            total = self.semiring.sum(w for _, w in row)
            if total != self.semiring.one:
                raise NormalizationError(f"row {ji} sums to {total}, not one")

    @classmethod
    def make(cls, scenario, rows: dict, semiring=NONNEG_RATIONAL, support=None):
        support = frozenset(scenario.events if support is None else support)
        evs = tuple(sorted(support))
        inputs = list(product(*(scenario.inputs_of(e) for e in evs)))
        outputs = list(product(*(scenario.outputs_of(e) for e in evs)))
        out_pos = {o: k for k, o in enumerate(outputs)}
        missing = set(inputs) - set(rows)
        if missing:
            raise ScenarioError(f"missing rows for joint inputs {sorted(missing)}")
        packed = []
        for ji in inputs:
            row = rows[ji]
            cells = tuple(
                (o, w)
                for o, w in sorted(row.items(), key=lambda kv: out_pos[kv[0]])
                if w != semiring.zero
            )
            packed.append((ji, cells))
        return cls(scenario, support, semiring, tuple(packed))

    def support_events(self) -> tuple[str, ...]:
        return tuple(sorted(self.support))

    def row(self, ji) -> dict[tuple[str, ...], object]:
        ji = tuple(ji)
        for key, row in self.rows:
            if key == ji:
                return dict(row)
        raise ScenarioError(f"no row for joint input {ji}")

    def value(self, ji, jo):
        row = self.row(ji)
        return row.get(tuple(jo), self.semiring.zero)

    def as_dict(self) -> dict:
        return {ji: dict(row) for ji, row in self.rows}

    def marginal(self, ji, events) -> dict[tuple[str, ...], object]:
        """Output marginal of one row onto a subset of the support events."""
        evs = self.support_events()
        sel = [evs.index(e) for e in sorted(events)]
        acc: dict[tuple, object] = {}
        for o, w in self.row(ji).items():
            key = tuple(o[k] for k in sel)
            acc[key] = self.semiring.add(acc.get(key, self.semiring.zero), w)
        return acc


@dataclass(frozen=True)
class Violation:
    """One failed causality equation: the two marginals that should agree."""

    lowerset: frozenset[str]
    marginal_output: tuple[str, ...]
    input_a: tuple[str, ...]
    input_b: tuple[str, ...]
    lhs: object
    rhs: object


@dataclass(frozen=True)
class CausalityVerdict:
    order: Preorder
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def check_causality(d: ConditionalDistribution, order: Preorder | None = None) -> CausalityVerdict:
    """Check the causality equations of a distribution against an order.

    The full equation system is highly redundant; it suffices to fix the
    canonical total order on joint inputs, take each pair once, and impose
    only the largest lowerset on which the pair agrees (equations for smaller
    lowersets follow by summing, and the empty lowerset is row normalization).
    """
    order = d.scenario.order if order is None else order
    if frozenset(order.events) != d.support:
        raise ScenarioError("order events must match the distribution's support")
    evs = d.support_events()
    inputs = [ji for ji, _ in d.rows]
    violations = []
    for a in range(len(inputs)):
        for b in range(a + 1, len(inputs)):
            ji, jj = inputs[a], inputs[b]
            agree = {e for k, e in enumerate(evs) if ji[k] == jj[k]}
            low = order_mod.largest_lowerset_within(order, agree)
            if not low:
                continue
            lhs = d.marginal(ji, low)
            rhs = d.marginal(jj, low)
            for o in sorted(set(lhs) | set(rhs)):
                l = lhs.get(o, d.semiring.zero)
                r = rhs.get(o, d.semiring.zero)
                if l != r:
                    violations.append(Violation(low, o, ji, jj, l, r))
    return CausalityVerdict(order, tuple(violations))


def check_no_signalling(d: ConditionalDistribution) -> CausalityVerdict:
    """Causality against the discrete order: the classic no-signalling check."""
    return check_causality(d, order_mod.discrete_order(d.support_events()))


@dataclass(frozen=True)
class EmpiricalModel:
    """A conditional distribution over all events that passed causality
    validation for its scenario's order."""

    distribution: ConditionalDistribution

    def __post_init__(self):
        d = self.distribution
        if d.support != frozenset(d.scenario.events):
            raise ScenarioError("an empirical model covers all events")
        verdict = check_causality(d)
        if not verdict.ok:
            raise NotCausalError(
                f"table violates {len(verdict.violations)} causality equation(s); "
                f"first: {verdict.violations[0]}"
            )

    @property
    def scenario(self):
        return self.distribution.scenario


def restrict_model(d: ConditionalDistribution, lowerset, order: Preorder | None = None) -> ConditionalDistribution:
    """Restriction to a sub-lowerset by output marginalization.

    The marginal row must be independent of the discarded inputs; this is
    verified by comparing all extensions of each restricted input, and a
    disagreement means the distribution was not causal to begin with.
    """
    order = d.scenario.order if order is None else order
    low = frozenset(lowerset)
    if not order_mod.is_lowerset(order, low):
        raise OrderError(f"{sorted(low)} is not a lowerset of the order")
    if not low <= d.support:
        raise ScenarioError("restriction target exceeds the support")
    evs = d.support_events()
    sel = [evs.index(e) for e in sorted(low)]
    rows: dict[tuple, dict] = {}
    witness: dict[tuple, tuple] = {}
    for ji, _ in d.rows:
        key = tuple(ji[k] for k in sel)
        marg = d.marginal(ji, low)
        marg = {o: w for o, w in marg.items() if w != d.semiring.zero}
        if key not in rows:
            rows[key] = marg
            witness[key] = ji
        elif rows[key] != marg:
            raise NotCausalError(
                f"marginal on {sorted(low)} depends on discarded inputs: "
                f"{witness[key]} vs {ji}"
            )
    return ConditionalDistribution.make(d.scenario, rows, d.semiring, support=low)


def fix_inputs(
    d: ConditionalDistribution,
    assignment: dict[str, str],
    discard=(),
    order: Preorder | None = None,
) -> ConditionalDistribution:
    """Fix inputs on a lowerset and marginalize over discarded outputs.

    The assignment's domain must be a lowerset and the distribution causal
    for the order.  The result lives on a reduced scenario: discarded events
    disappear; fixed events that are kept become output-only columns (their
    input alphabet shrinks to the assigned value); rows are indexed by the
    joint inputs of the unfixed events.
    """
    order = d.scenario.order if order is None else order
    if d.support != frozenset(d.scenario.events):
        raise ScenarioError("fix_inputs needs a distribution over all events")
    fixed = frozenset(assignment)
    discard = frozenset(discard)
    if not order_mod.is_lowerset(order, fixed):
        raise OrderError(f"assignment domain {sorted(fixed)} is not a lowerset")
    if not discard <= fixed:
        raise ScenarioError("only fixed events can be discarded")
    verdict = check_causality(d, order)
    if not verdict.ok:
        raise NotCausalError(
            f"distribution is not causal for the order; first violation: "
            f"{verdict.violations[0]}"
        )
    evs = d.support_events()
    for e, v in assignment.items():
        if v not in d.scenario.inputs_of(e):
            raise ScenarioError(f"{v!r} is not an input of event {e!r}")

    remaining = [e for e in evs if e not in discard]
    kept_idx = [evs.index(e) for e in remaining]
    reduced_order = _induced_order(order, remaining)
    reduced = CausalScenario.make(
        reduced_order,
        {
            e: ((assignment[e],) if e in fixed else d.scenario.inputs_of(e))
            for e in remaining
        },
        {e: d.scenario.outputs_of(e) for e in remaining},
    )

    rows: dict[tuple, dict] = {}
    for ji in product(*(reduced.inputs_of(e) for e in remaining)):
        by_event = dict(zip(remaining, ji))
        by_event.update(assignment)
        full_ji = tuple(by_event[e] for e in evs)
        acc: dict[tuple, object] = {}
        for o, w in d.row(full_ji).items():
            key = tuple(o[k] for k in kept_idx)
            acc[key] = d.semiring.add(acc.get(key, d.semiring.zero), w)
        rows[ji] = acc
    return ConditionalDistribution.make(reduced, rows, d.semiring)


def _induced_order(order: Preorder, events) -> Preorder:
    evs = tuple(sorted(events))
    pairs = [
        (x, y) for x in evs for y in evs if order.leq(x, y)
    ]
    return order_mod.closure(evs, pairs)


def reduce_to_support(d: ConditionalDistribution) -> ConditionalDistribution:
    """Rebase a partially supported distribution onto the sub-scenario of its
    support (induced order, restricted alphabets).  Serialization uses this
    so written tables always cover their scenario's full event set."""
    if d.support == frozenset(d.scenario.events):
        return d
    evs = d.support_events()
    reduced = CausalScenario.make(
        _induced_order(d.scenario.order, evs),
        {e: d.scenario.inputs_of(e) for e in evs},
        {e: d.scenario.outputs_of(e) for e in evs},
    )
    return ConditionalDistribution(reduced, frozenset(evs), d.semiring, d.rows)


@dataclass(frozen=True)
class CompatibleFamily:
    """A family over the global cover: one section distribution per joint
    input, based at the corresponding singleton element."""

    scenario: CausalScenario
    elements: tuple[tuple[tuple[str, ...], SectionDistribution], ...]

    def element(self, ji) -> SectionDistribution:
        ji = tuple(ji)
        for key, d in self.elements:
            if key == ji:
                return d
        raise ScenarioError(f"no family element for joint input {ji}")


class FamilyIncompatibleError(NotCausalError):
    """Two family elements disagree after marginalizing to their meet."""

    def __init__(self, input_a, input_b, meet_element):
        self.input_a = input_a
        self.input_b = input_b
        self.meet_element = meet_element
        super().__init__(
            f"family elements at {input_a} and {input_b} disagree on their meet"
        )


def to_compatible_family(model: EmpiricalModel) -> CompatibleFamily:
    """Present an empirical model as its compatible family of row
    distributions on singleton-domain sections."""
    d = model.distribution
    scenario = d.scenario
    out = []
    for ji, row in d.rows:
        base = locale_mod.singleton_element(scenario, ji)
        weights = {
            sections_mod.from_table(base, {ji: o}): w for o, w in row
        }
        out.append((ji, SectionDistribution.make(base, weights, d.semiring)))
    return CompatibleFamily(scenario, tuple(out))


def from_compatible_family(family: CompatibleFamily) -> EmpiricalModel:
    """Rebuild the empirical model, rejecting incompatible families.

    Compatibility is pairwise: the two elements must marginalize equally to
    the meet of their singleton base elements.
    """
    scenario = family.scenario
    expected = scenario.joint_inputs()
    keys = [ji for ji, _ in family.elements]
    if keys != expected:
        raise ScenarioError("family must be indexed by all joint inputs, in order")
    semiring = family.elements[0][1].semiring
    for ji, dist in family.elements:
        base = locale_mod.singleton_element(scenario, ji)
        if dist.base != base:
            raise ScenarioError(f"family element at {ji} has the wrong base")
        if dist.semiring != semiring:
            raise ScenarioError("family elements must share one semiring")
    for a in range(len(expected)):
        for b in range(a + 1, len(expected)):
            ji, jj = expected[a], expected[b]
            da, db = family.element(ji), family.element(jj)
            m = locale_mod.meet(da.base, db.base)
            if dist_mod.marginalize(da, m) != dist_mod.marginalize(db, m):
                raise FamilyIncompatibleError(ji, jj, m)
    evs = scenario.events
    rows = {}
    for ji, dist in family.elements:
        rows[ji] = {f(ji): w for f, w in dist.weights}
    cd = ConditionalDistribution.make(scenario, rows, semiring)
    return EmpiricalModel(cd)
