"""Causal sections: functions from joint inputs to joint outputs whose
output at an event depends only on inputs at events below it.

Sections are stored factorized, one table per event over the product of the
input subsets on its downset.  That keeps the representation exponentially
smaller than the flat table and makes assembled sections causal by
construction; the flat table is materialized on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from . import locale as locale_mod
from . import order as order_mod
from .errors import EnumerationLimitError, NotCausalError, ScenarioError, ScopeError
from .locale import CausalScenario, LocaleElement

ENUMERATION_CAP = 10**7


def _require_partial(scenario: CausalScenario):
    if not scenario.order.is_partial_order():
        raise ScopeError(
            "causal sections are defined for partial orders only; "
            "this scenario has events in indefinite causal order"
        )


@lru_cache(maxsize=None)
def _downset_events(scenario: CausalScenario, event: str) -> tuple[str, ...]:
    return tuple(sorted(order_mod.downset(scenario.order, event)))


def _flat_index(positions, sizes) -> int:
    idx = 0
    for p, n in zip(positions, sizes):
        idx = idx * n + p
    return idx


@lru_cache(maxsize=None)
def _factor_layout(domain: LocaleElement, event: str):
    """(downset events, per-event subsets, sizes, symbol->position dicts)."""
    devs = _downset_events(domain.scenario, event)
    subs = tuple(domain.subset_of(e) for e in devs)
    sizes = tuple(len(s) for s in subs)
    pos = tuple({s: i for i, s in enumerate(sub)} for sub in subs)
    return devs, subs, sizes, pos


@dataclass(frozen=True)
class CausalSection:
    """A causal function on a locale element, stored per-event.

    ``factors[k]`` is the output table of the k-th support event (canonical
    order): a flat tuple over the product of the domain's input subsets on
    that event's downset, first event most significant.
    """

    domain: LocaleElement
    factors: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        _require_partial(self.domain.scenario)
        evs = self.support_events()
        if len(self.factors) != len(evs):
            raise ScenarioError("one factor per support event required")
        for e, table in zip(evs, self.factors):
            _, _, sizes, _ = _factor_layout(self.domain, e)
            if len(table) != math.prod(sizes):
                raise ScenarioError(f"factor for {e!r} has wrong size")
            outputs = set(self.domain.scenario.outputs_of(e))
            if any(o not in outputs for o in table):
                raise ScenarioError(f"factor for {e!r} uses unknown outputs")

    def support_events(self) -> tuple[str, ...]:
        return self.domain.support_events

    def factor_of(self, event: str) -> tuple[str, ...]:
        return self.factors[self.support_events().index(event)]

    def __call__(self, joint_input) -> tuple[str, ...]:
        """Joint output for a joint input given over the sorted support."""
        evs = self.support_events()
        if len(joint_input) != len(evs):
            raise ScenarioError("joint input length does not match support")
        value = dict(zip(evs, joint_input))
        out = []
        for e, table in zip(evs, self.factors):
            devs, _, sizes, pos = _factor_layout(self.domain, e)
            positions = [pos[k][value[d]] for k, d in enumerate(devs)]
            out.append(table[_flat_index(positions, sizes)])
        return tuple(out)

    def as_table(self) -> dict[tuple[str, ...], tuple[str, ...]]:
        """The flat mapping from joint inputs to joint outputs."""
        return {ji: self(ji) for ji in self.domain.joint_inputs()}


@dataclass(frozen=True)
class SectionFactorization:
    """Explicit per-event functions: event -> (downset joint input -> output)."""

    domain: LocaleElement
    tables: tuple[tuple[tuple[tuple[str, ...], str], ...], ...]

    def table_of(self, event: str) -> dict[tuple[str, ...], str]:
        evs = tuple(sorted(self.domain.support))
        return dict(self.tables[evs.index(event)])


def factorize(section: CausalSection) -> SectionFactorization:
    """Expand the per-event tables into explicit input-tuple keyed functions."""
    dom = section.domain
    out = []
    for e, table in zip(section.support_events(), section.factors):
        devs, subs, sizes, _ = _factor_layout(dom, e)
        entries = tuple(
            (cell, table[_flat_index(positions, sizes)])
            for cell, positions in zip(
                product(*subs), product(*(range(n) for n in sizes))
            )
        )
        out.append(entries)
    return SectionFactorization(dom, tuple(out))


def assemble(factorization: SectionFactorization) -> CausalSection:
    """Rebuild a section from explicit per-event functions."""
    dom = factorization.domain
    evs = tuple(sorted(dom.support))
    if len(factorization.tables) != len(evs):
        raise ScenarioError("factor count does not match the domain's support")
    factors = []
    for e, entries in zip(evs, factorization.tables):
        devs, subs, sizes, pos = _factor_layout(dom, e)
        got = dict(entries)
        expected = list(product(*subs))
        if set(got) != set(expected):
            raise ScenarioError(f"factor domain for {e!r} inconsistent with the element")
        flat = [None] * math.prod(sizes)
        for cell, value in got.items():
            positions = [pos[k][cell[k]] for k in range(len(devs))]
            flat[_flat_index(positions, sizes)] = value
        factors.append(tuple(flat))
    return CausalSection(dom, tuple(factors))


def is_causal(domain: LocaleElement, table: dict) -> bool:
    """Whether a flat table satisfies the causality condition.

    The table must be total on the domain's joint inputs; the output at each
    event must agree for any two inputs agreeing on that event's downset.
    """
    _require_partial(domain.scenario)
    evs = tuple(sorted(domain.support))
    inputs = domain.joint_inputs()
    if set(table) != set(inputs):
        raise ScenarioError("table is not total on the domain's joint inputs")
    for k, e in enumerate(evs):
        devs = _downset_events(domain.scenario, e)
        sel = [evs.index(d) for d in devs]
        seen: dict[tuple, str] = {}
        for ji in inputs:
            key = tuple(ji[i] for i in sel)
            o = table[ji][k]
            if seen.setdefault(key, o) != o:
                return False
    return True


def from_table(domain: LocaleElement, table: dict) -> CausalSection:
    """Build the factorized section for a causal flat table."""
    if not is_causal(domain, table):
        raise NotCausalError("table violates the causality condition")
    evs = tuple(sorted(domain.support))
    factors = []
    for k, e in enumerate(evs):
        devs, subs, sizes, pos = _factor_layout(domain, e)
        sel = [evs.index(d) for d in devs]
        flat = [None] * math.prod(sizes)
        for ji, jo in table.items():
            positions = [pos[i][ji[s]] for i, s in enumerate(sel)]
            flat[_flat_index(positions, sizes)] = jo[k]
        factors.append(tuple(flat))
    return CausalSection(domain, tuple(factors))


def _fresh_section(domain: LocaleElement, factors) -> CausalSection:
    # internal fast path for factors that are correct by construction
    # (restriction gathers and gluings); skips __post_init__ revalidation
    section = object.__new__(CausalSection)
    object.__setattr__(section, "domain", domain)
    object.__setattr__(section, "factors", factors)
    return section


@lru_cache(maxsize=None)
def _restriction_plan(target: LocaleElement, source: LocaleElement):
    """For each support event of ``target``, the source flat index of every
    target factor cell.  Requires target <= source."""
    plans = []
    for e in sorted(target.support):
        devs, subs, _, _ = _factor_layout(target, e)
        _, _, src_sizes, src_pos = _factor_layout(source, e)
        idxs = tuple(
            _flat_index([src_pos[k][cell[k]] for k in range(len(devs))], src_sizes)
            for cell in product(*subs)
        )
        plans.append(idxs)
    return tuple(plans)


def restrict(section: CausalSection, target: LocaleElement) -> CausalSection:
    """Restriction of a section to an element below its domain."""
    if not locale_mod.leq(target, section.domain):
        raise ScenarioError("restriction target must be below the section's domain")
    src_events = section.support_events()
    plans = _restriction_plan(target, section.domain)
    factors = []
    for e, plan in zip(target.support_events, plans):
        src = section.factors[src_events.index(e)]
        factors.append(tuple(src[i] for i in plan))
    return _fresh_section(target, tuple(factors))


@dataclass(frozen=True)
class Incompatible:
    """Witness that two sections disagree on the meet of their domains."""

    meet: LocaleElement
    event: str
    cell: tuple[str, ...]
    left: str
    right: str

    def __bool__(self):
        return False


def glue(f: CausalSection, g: CausalSection):
    """Glue two compatible sections onto the join of their domains.

    The result takes its values from ``f`` where the f-side factor cell lies
    within f's domain, from ``g`` where it lies within g's domain; factor
    cells covered by neither (which arise when the two domains offer
    different inputs at comparable events) are filled with the first output
    symbol, making the result one canonical section among all that restrict
    correctly.  Returns an :class:`Incompatible` witness when the sections
    disagree on the meet of their domains.
    """
    if f.domain.scenario != g.domain.scenario:
        raise ScenarioError("glue needs sections over one scenario")
    scenario = f.domain.scenario
    m = locale_mod.meet(f.domain, g.domain)
    fm, gm = restrict(f, m), restrict(g, m)
    if fm != gm:
        m_events = tuple(sorted(m.support))
        for e, tf, tg in zip(m_events, fm.factors, gm.factors):
            if tf != tg:
                devs, subs, sizes, _ = _factor_layout(m, e)
                for cell, positions in zip(
                    product(*subs), product(*(range(n) for n in sizes))
                ):
                    i = _flat_index(positions, sizes)
                    if tf[i] != tg[i]:
                        return Incompatible(m, e, cell, tf[i], tg[i])
    w = locale_mod.join(f.domain, g.domain)
    f_events, g_events = f.support_events(), g.support_events()
    factors = []
    for e in sorted(w.support):
        devs, subs, sizes, _ = _factor_layout(w, e)
        in_f = e in f.domain.support
        in_g = e in g.domain.support
        f_sets = [set(f.domain.subset_of(d)) for d in devs] if in_f else None
        g_sets = [set(g.domain.subset_of(d)) for d in devs] if in_g else None
        if in_f:
            _, _, f_sizes, f_pos = _factor_layout(f.domain, e)
            f_table = f.factors[f_events.index(e)]
        if in_g:
            _, _, g_sizes, g_pos = _factor_layout(g.domain, e)
            g_table = g.factors[g_events.index(e)]
        default = scenario.outputs_of(e)[0]
        flat = []
        for cell in product(*subs):
            if in_f and all(s in f_sets[k] for k, s in enumerate(cell)):
                flat.append(
                    f_table[_flat_index([f_pos[k][s] for k, s in enumerate(cell)], f_sizes)]
                )
            elif in_g and all(s in g_sets[k] for k, s in enumerate(cell)):
                flat.append(
                    g_table[_flat_index([g_pos[k][s] for k, s in enumerate(cell)], g_sizes)]
                )
            else:
                flat.append(default)
        factors.append(tuple(flat))
    return _fresh_section(w, tuple(factors))


def count_gluings(u: LocaleElement, v: LocaleElement) -> int:
    """How many sections on join(u, v) restrict to a given compatible pair.

    The count is the same for every compatible pair: factor cells of the join
    pinned by neither side may be filled freely.  It is 1 exactly when the
    pair admits a unique gluing.
    """
    locale_mod._same_scenario(u, v)
    scenario = u.scenario
    w = locale_mod.join(u, v)
    total = 1
    for e in sorted(w.support):
        devs, subs, _, _ = _factor_layout(w, e)
        in_u = e in u.support
        in_v = e in v.support
        u_sets = [set(u.subset_of(d)) for d in devs] if in_u else None
        v_sets = [set(v.subset_of(d)) for d in devs] if in_v else None
        n_out = len(scenario.outputs_of(e))
        for cell in product(*subs):
            covered = (
                in_u and all(s in u_sets[k] for k, s in enumerate(cell))
            ) or (in_v and all(s in v_sets[k] for k, s in enumerate(cell)))
            if not covered:
                total *= n_out
    return total


def count_sections(domain: LocaleElement) -> int:
    """Number of causal sections on the element (exact big integer)."""
    _require_partial(domain.scenario)
    total = 1
    for e in sorted(domain.support):
        _, _, sizes, _ = _factor_layout(domain, e)
        total *= len(domain.scenario.outputs_of(e)) ** math.prod(sizes)
    return total


def enumerate_sections(domain: LocaleElement):
    """All causal sections on the element, lexicographic over factor tables.

    Factor tables vary fastest at the last support event and, within a
    factor, at the last cell.  Refuses when the count exceeds the cap.
    """
    total = count_sections(domain)
    if total > ENUMERATION_CAP:
        raise EnumerationLimitError(
            f"{total} sections exceed the enumeration cap of {ENUMERATION_CAP}"
        )
    evs = tuple(sorted(domain.support))
    spaces = []
    for e in evs:
        _, _, sizes, _ = _factor_layout(domain, e)
        spaces.append((domain.scenario.outputs_of(e), math.prod(sizes)))

    def tables_for(outputs, n_cells):
        for combo in product(outputs, repeat=n_cells):
            yield combo

    for factors in product(*(tables_for(o, n) for o, n in spaces)):
        yield _fresh_section(domain, tuple(factors))
