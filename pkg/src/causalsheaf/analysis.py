"""Exact rational linear programming and the causal analyses built on it:
locality via deterministic hidden-variable decomposition, and the causal
fraction of a table with respect to an arbitrary (pre)order.

The simplex is dense, exact and deterministic (Bland's anti-cycling rule);
certificates and witnesses are re-verified against the defining constraints
before being returned, so the solver is never trusted bare.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import locale as locale_mod
from . import order as order_mod
from . import sections as sections_mod
from .distributions import BOOLEAN, NONNEG_RATIONAL
from .errors import (
    EnumerationLimitError,
    NotCausalError,
    ScenarioError,
    ScopeError,
)
from .models import ConditionalDistribution, check_causality
from .order import Preorder

try:  # pure speed-up; Fraction is the reference arithmetic
    from gmpy2 import mpq as _q
except ImportError:  # pragma: no cover
    _q = Fraction

SECTION_BUDGET = 10**6
SWEEP_MAX_EVENTS = 4


@dataclass
class ExactLP:
    """maximize objective . x subject to eq/ub rows and x >= 0."""

    names: list[str]
    objective: list[Fraction]
    eq_rows: list[tuple[list[Fraction], Fraction]]
    ub_rows: list[tuple[list[Fraction], Fraction]]

    def __post_init__(self):
        n = len(self.names)
        if len(self.objective) != n or any(
            len(row) != n for row, _ in [*self.eq_rows, *self.ub_rows]
        ):
            raise ScenarioError("LP rows and objective must match the variable count")


@dataclass(frozen=True)
class LPResult:
    status: str  # optimal | infeasible | unbounded
    value: Fraction | None
    solution: tuple[Fraction, ...] | None


def _pivot(rows, obj, basis, r, c):
    piv = rows[r][c]
    rows[r] = [v / piv for v in rows[r]]
    prow = rows[r]
    for i, row in enumerate(rows):
        if i != r and row[c]:
            f = row[c]
            rows[i] = [a - f * b for a, b in zip(row, prow)]
    if obj[c]:
        f = obj[c]
        for j, b in enumerate(prow):
            if b:
                obj[j] -= f * b
    basis[r] = c


def _bland_min(rows, obj, basis, n_cols):
    """Minimize with Bland's rule; obj is the reduced-cost row (rhs last)."""
    while True:
        enter = next((j for j in range(n_cols) if obj[j] < 0), None)
        if enter is None:
            return "optimal"
        leave, best = None, None
        for i, row in enumerate(rows):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    leave, best = i, ratio
        if leave is None:
            return "unbounded"
        _pivot(rows, obj, basis, leave, enter)


def lp_solve(lp: ExactLP) -> LPResult:
    """Exact two-phase simplex over the rationals."""
    n = len(lp.names)
    n_slack = len(lp.ub_rows)
    rows = []
    negated = []
    for coeffs, rhs in lp.ub_rows:
        rows.append([_q(c) for c in coeffs] + [_q(0)] * n_slack + [_q(rhs)])
    for k in range(n_slack):
        rows[k][n + k] = _q(1)
    for coeffs, rhs in lp.eq_rows:
        rows.append([_q(c) for c in coeffs] + [_q(0)] * n_slack + [_q(rhs)])
    for i, row in enumerate(rows):
        if row[-1] < 0:
            rows[i] = [-v for v in row]
            negated.append(i)
    # Basic columns: positive slacks where available, artificials elsewhere.
    basis = []
    art_cols = []
    width = n + n_slack
    for i, row in enumerate(rows):
        if i < n_slack and i not in negated:
            basis.append(n + i)
        else:
            art_cols.append(width)
            basis.append(width)
            width += 1
    for i, b in enumerate(basis):
        if b >= n + n_slack:
            rows[i] = rows[i][:-1] + [_q(0)] * len(art_cols) + [rows[i][-1]]
            rows[i][b] = _q(1)
        else:
            rows[i] = rows[i][:-1] + [_q(0)] * len(art_cols) + [rows[i][-1]]
    # Phase 1: minimize the sum of artificials.
    obj = [_q(0)] * (width + 1)
    for c in art_cols:
        obj[c] = _q(1)
    for i, b in enumerate(basis):
        if b in art_cols:
            obj = [a - v for a, v in zip(obj, rows[i])]
    status = _bland_min(rows, obj, basis, width)
    if -obj[-1] > 0:
        return LPResult("infeasible", None, None)
    # Drive leftover artificials out of the basis; drop redundant rows.
    art_set = set(art_cols)
    keep = []
    for i in range(len(rows)):
        if basis[i] in art_set:
            c = next(
                (j for j in range(n + n_slack) if rows[i][j] != 0), None
            )
            if c is None:
                continue
            _pivot(rows, obj, basis, i, c)
        keep.append(i)
    rows = [rows[i] for i in keep]
    basis = [basis[i] for i in keep]
    # Phase 2: minimize the negated objective, artificial columns frozen out.
    width2 = n + n_slack
    rows = [row[:width2] + [row[-1]] for row in rows]
    basis2 = basis
    cost = [_q(-c) for c in lp.objective] + [_q(0)] * n_slack + [_q(0)]
    obj = list(cost)
    for i, b in enumerate(basis2):
        if cost[b] != 0:
            obj = [a - cost[b] * v for a, v in zip(obj, rows[i])]
    status = _bland_min(rows, obj, basis2, width2)
    if status == "unbounded":
        return LPResult("unbounded", None, None)
    solution = [Fraction(0)] * n
    for i, b in enumerate(basis2):
        if b < n:
            solution[b] = Fraction(rows[i][-1])
    value = sum(
        (c * x for c, x in zip(lp.objective, solution)), start=Fraction(0)
    )
    return LPResult("optimal", value, tuple(solution))


# -- locality ------------------------------------------------------------


@dataclass(frozen=True)
class LocalityCertificate:
    """Either a hidden-variable decomposition or an infeasibility verdict."""

    local: bool
    weights: tuple[tuple[sections_mod.CausalSection, object], ...] | None

    def __bool__(self):
        return self.local

    def as_dict(self):
        return dict(self.weights) if self.weights is not None else None


def _require_causal(d: ConditionalDistribution, order: Preorder):
    verdict = check_causality(d, order)
    if not verdict.ok:
        raise NotCausalError(
            f"model violates the causality equations; first: {verdict.violations[0]}"
        )


def _reconstruct(d, weights) -> bool:
    """Exact re-multiplication of a decomposition against the table."""
    semiring = d.semiring
    for ji, _ in d.rows:
        row: dict[tuple, object] = {}
        for f, w in weights:
            o = f(ji)
            row[o] = semiring.add(row.get(o, semiring.zero), w)
        row = {o: w for o, w in row.items() if w != semiring.zero}
        if row != d.row(ji):
            return False
    return True


def is_local(d, order: Preorder | None = None) -> LocalityCertificate:
    """Decide locality: existence of a weighting of causal deterministic
    sections reproducing the table exactly.

    Rational models go through the exact LP over one variable per section on
    the top element; Boolean models are decided directly from the support.
    The returned decomposition is re-verified by re-multiplication.
    Accepts a ConditionalDistribution or an EmpiricalModel.
    """
    if hasattr(d, "distribution"):
        d = d.distribution
    order = d.scenario.order if order is None else order
    if not order.is_partial_order():
        raise ScopeError("locality is defined for partial orders only")
    if d.support != frozenset(d.scenario.events):
        raise ScenarioError("locality asks for a model over all events")
    scenario = d.scenario
    if scenario.order != order:
        scenario = locale_mod.CausalScenario(order, scenario.inputs, scenario.outputs)
        d = ConditionalDistribution(scenario, d.support, d.semiring, d.rows)
    _require_causal(d, order)
    top = locale_mod.top(scenario)
    n_sections = sections_mod.count_sections(top)
    if n_sections > SECTION_BUDGET:
        raise EnumerationLimitError(
            f"{n_sections} candidate sections exceed the locality budget of {SECTION_BUDGET}"
        )
    if d.semiring == BOOLEAN:
        return _boolean_is_local(d, top)

    secs = list(sections_mod.enumerate_sections(top))
    inputs = [ji for ji, _ in d.rows]
    outputs = scenario.joint_outputs()
    cell_index = {
        (ji, jo): k
        for k, (ji, jo) in enumerate(product(inputs, outputs))
    }
    eq_rows = []
    for (ji, jo), k in cell_index.items():
        coeffs = [Fraction(0)] * len(secs)
        for s_idx, f in enumerate(secs):
            if f(ji) == jo:
                coeffs[s_idx] = Fraction(1)
        eq_rows.append((coeffs, Fraction(d.value(ji, jo))))
    eq_rows.append(([Fraction(1)] * len(secs), Fraction(1)))
    lp = ExactLP(
        names=[f"p{k}" for k in range(len(secs))],
        objective=[Fraction(0)] * len(secs),
        eq_rows=eq_rows,
        ub_rows=[],
    )
    res = lp_solve(lp)
    if res.status == "infeasible":
        return LocalityCertificate(False, None)
    weights = tuple(
        (f, w) for f, w in zip(secs, res.solution) if w != 0
    )
    if not _reconstruct(d, weights):
        raise AssertionError("internal error: decomposition failed re-verification")
    return LocalityCertificate(True, weights)


def _boolean_is_local(d: ConditionalDistribution, top) -> LocalityCertificate:
    # Any section consistent with the support may take weight True; the model
    # is local iff their deltas OR together to exactly the support.
    consistent = [
        f
        for f in sections_mod.enumerate_sections(top)
        if all(d.value(ji, f(ji)) for ji, _ in d.rows)
    ]
    covered = {ji: set() for ji, _ in d.rows}
    for f in consistent:
        for ji in covered:
            covered[ji].add(f(ji))
    for ji, _ in d.rows:
        if set(d.row(ji)) != covered[ji]:
            return LocalityCertificate(False, None)
    weights = tuple((f, True) for f in consistent)
    if not _reconstruct(d, weights):
        raise AssertionError("internal error: boolean decomposition failed re-verification")
    return LocalityCertificate(True, weights)


# -- causal fraction ------------------------------------------------------


@dataclass(frozen=True)
class CausalFraction:
    """The largest weight of an order-causal model dominated by the table,
    with the scaled causal table achieving it.

    ``semantics`` records what "causal" meant: the sheaf-backed notion for
    partial orders, or the bare equation system for proper pre-orders (the
    only notion available there)."""

    value: Fraction
    witness: tuple[tuple[tuple[str, ...], tuple[tuple[tuple[str, ...], Fraction], ...]], ...]
    semantics: str = "sheaf-causal"

    def witness_dict(self):
        return {ji: dict(row) for ji, row in self.witness}


def _causality_equation_rows(d, order, var_of):
    """Reduced causality equations over the pruned cell variables.

    One equation set per input pair under the canonical total order, imposed
    only on the largest lowerset where the pair agrees.
    """
    evs = d.support_events()
    inputs = [ji for ji, _ in d.rows]
    rows = {}
    for a in range(len(inputs)):
        for b in range(a + 1, len(inputs)):
            ji, jj = inputs[a], inputs[b]
            agree = {e for k, e in enumerate(evs) if ji[k] == jj[k]}
            low = order_mod.largest_lowerset_within(order, agree)
            if not low:
                continue
            sel = [evs.index(e) for e in sorted(low)]
            groups: dict[tuple, dict[int, Fraction]] = {}
            for jx, sign in ((ji, Fraction(1)), (jj, Fraction(-1))):
                for o in d.row(jx):
                    key = tuple(o[k] for k in sel)
                    var = var_of[(jx, o)]
                    grp = groups.setdefault(key, {})
                    grp[var] = grp.get(var, Fraction(0)) + sign
            for key, grp in groups.items():
                canon = tuple(sorted((v, c) for v, c in grp.items() if c != 0))
                if canon:
                    rows[canon] = None
    return list(rows)


def causal_fraction(d, order: Preorder) -> CausalFraction:
    """Largest lambda with lambda-weighted order-causal table below the model.

    Maximizes lambda over tables x with 0 <= x <= d entrywise, every row of x
    summing to lambda, and x satisfying the causality equations of the order.
    Cells where the model vanishes are pruned (x is forced to zero there).
    The witness is re-verified against all defining constraints.
    """
    if hasattr(d, "distribution"):
        d = d.distribution
    if d.support != frozenset(d.scenario.events):
        raise ScenarioError("the causal fraction asks for a table over all events")
    if frozenset(order.events) != d.support:
        raise ScenarioError("order events must match the table's events")
    if d.semiring not in (NONNEG_RATIONAL,):
        raise ScenarioError("the causal fraction needs a non-negative rational table")

    cells = [(ji, o) for ji, row in d.rows for o, _ in row]
    var_of = {cell: k for k, cell in enumerate(cells)}
    lam = len(cells)
    n = lam + 1
    ub_rows = []
    for (ji, o), k in var_of.items():
        coeffs = [Fraction(0)] * n
        coeffs[k] = Fraction(1)
        ub_rows.append((coeffs, Fraction(d.value(ji, o))))
    eq_rows = []
    for ji, row in d.rows:
        coeffs = [Fraction(0)] * n
        for o, _ in row:
            coeffs[var_of[(ji, o)]] = Fraction(1)
        coeffs[lam] = Fraction(-1)
        eq_rows.append((coeffs, Fraction(0)))
    for canon in _causality_equation_rows(d, order, var_of):
        coeffs = [Fraction(0)] * n
        for var, c in canon:
            coeffs[var] = c
        eq_rows.append((coeffs, Fraction(0)))
    objective = [Fraction(0)] * n
    objective[lam] = Fraction(1)
    lp = ExactLP(
        names=[f"x{k}" for k in range(lam)] + ["lam"],
        objective=objective,
        eq_rows=eq_rows,
        ub_rows=ub_rows,
    )
    res = lp_solve(lp)
    if res.status != "optimal":
        raise AssertionError(f"internal error: fraction LP reported {res.status}")
    value = res.value
    witness_rows = []
    for ji, row in d.rows:
        cells_here = tuple(
            (o, res.solution[var_of[(ji, o)]])
            for o, _ in row
            if res.solution[var_of[(ji, o)]] != 0
        )
        witness_rows.append((ji, cells_here))
    semantics = "sheaf-causal" if order.is_partial_order() else "equation-causal"
    fraction = CausalFraction(value, tuple(witness_rows), semantics)
    _verify_fraction_witness(d, order, fraction)
    return fraction


def _verify_fraction_witness(d, order, fraction: CausalFraction):
    """Constraint recheck: bounds, equal row sums, causality equations."""
    lam = fraction.value
    if not 0 <= lam <= 1:
        raise AssertionError("internal error: fraction outside [0, 1]")
    w = fraction.witness_dict()
    evs = d.support_events()
    lows = order_mod.lowersets(order)
    for ji, _ in d.rows:
        row = w.get(ji, {})
        total = Fraction(0)
        for o, x in row.items():
            if x < 0 or x > d.value(ji, o):
                raise AssertionError("internal error: witness violates bounds")
            total += x
        if total != lam:
            raise AssertionError("internal error: witness row sum differs from lambda")

    def marginal(ji, low):
        sel = [evs.index(e) for e in sorted(low)]
        acc = {}
        for o, x in w.get(ji, {}).items():
            key = tuple(o[k] for k in sel)
            acc[key] = acc.get(key, Fraction(0)) + x
        return {k: v for k, v in acc.items() if v}

    inputs = [ji for ji, _ in d.rows]
    for low in lows:
        if not low:
            continue
        sel = [evs.index(e) for e in sorted(low)]
        for a in range(len(inputs)):
            for b in range(a + 1, len(inputs)):
                ji, jj = inputs[a], inputs[b]
                if any(ji[k] != jj[k] for k in sel):
                    continue
                if marginal(ji, low) != marginal(jj, low):
                    raise AssertionError(
                        "internal error: witness violates a causality equation"
                    )


def sweep(d: ConditionalDistribution, posets_only: bool = False):
    """Causal fraction against every labeled (pre)order on the table's events.

    Returns a mapping ordered by relation size then relation matrix.
    """
    events = d.support_events()
    if len(events) > SWEEP_MAX_EVENTS:
        raise EnumerationLimitError(
            f"sweep capped at {SWEEP_MAX_EVENTS} events, got {len(events)}"
        )
    orders = (
        order_mod.enumerate_posets(events)
        if posets_only
        else order_mod.enumerate_preorders(events)
    )
    orders.sort(key=lambda po: (sum(sum(row) for row in po.matrix), po.matrix))
    return {po: causal_fraction(d, po) for po in orders}
