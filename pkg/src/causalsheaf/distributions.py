"""Semiring-generic distributions over causal sections.

The probabilistic default is exact non-negative rationals; Booleans give
possibilistic models.  Floating point never enters here: realization snaps
to rationals at its own boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import locale as locale_mod
from . import sections as sections_mod
from .errors import NormalizationError, ScenarioError
from .locale import LocaleElement
from .sections import CausalSection


@dataclass(frozen=True)
class Semiring:
    """A commutative semiring of weights."""

    name: str
    zero: object
    one: object
    add: Callable
    mul: Callable
    validate: Callable

    def __repr__(self):
        return f"Semiring({self.name})"

    def sum(self, values):
        total = self.zero
        for v in values:
            total = self.add(total, v)
        return total


def _check_nonneg_rational(v):
    if not isinstance(v, (Fraction, int)) or isinstance(v, bool):
        raise ScenarioError(f"expected a rational, got {type(v).__name__}")
    if v < 0:
        raise ScenarioError(f"negative weight {v} in the non-negative rationals")
    return Fraction(v)


def _check_rational(v):
    if not isinstance(v, (Fraction, int)) or isinstance(v, bool):
        raise ScenarioError(f"expected a rational, got {type(v).__name__}")
    return Fraction(v)


def _check_boolean(v):
    if not isinstance(v, bool):
        raise ScenarioError(f"expected a boolean, got {type(v).__name__}")
    return v


NONNEG_RATIONAL = Semiring(
    "nonneg-rational",
    Fraction(0),
    Fraction(1),
    lambda a, b: a + b,
    lambda a, b: a * b,
    _check_nonneg_rational,
)

RATIONAL = Semiring(
    "rational",
    Fraction(0),
    Fraction(1),
    lambda a, b: a + b,
    lambda a, b: a * b,
    _check_rational,
)

BOOLEAN = Semiring(
    "boolean",
    False,
    True,
    lambda a, b: a or b,
    lambda a, b: a and b,
    _check_boolean,
)

SEMIRINGS = {s.name: s for s in (NONNEG_RATIONAL, RATIONAL, BOOLEAN)}


@dataclass(frozen=True)
class SectionDistribution:
    """A finitely supported, normalized weighting of sections on one element.

    Stored sparsely: absent sections weigh zero.
    """

    base: LocaleElement
    semiring: Semiring
    weights: tuple[tuple[CausalSection, object], ...]

    def __post_init__(self):
        seen = set()
        for f, w in self.weights:
            if f.domain != self.base:
                raise ScenarioError("supported section lives on a different element")
            self.semiring.validate(w)
            if f in seen:
                raise ScenarioError("duplicate section in support")
            seen.add(f)
        total = self.semiring.sum(w for _, w in self.weights)
        if total != self.semiring.one:
            raise NormalizationError(f"weights sum to {total}, not one")

    @classmethod
    def make(cls, base, mapping, semiring=NONNEG_RATIONAL) -> "SectionDistribution":
        items = tuple(
            (f, w) for f, w in sorted(mapping.items(), key=lambda kv: kv[0].factors)
            if w != semiring.zero
        )
        return cls(base, semiring, items)

    def weight(self, f: CausalSection):
        for g, w in self.weights:
            if g == f:
                return w
        return self.semiring.zero

    def support(self) -> tuple[CausalSection, ...]:
        return tuple(f for f, _ in self.weights)


def marginalize(d: SectionDistribution, target: LocaleElement) -> SectionDistribution:
    """Pushforward along section restriction to an element below the base."""
    if not locale_mod.leq(target, d.base):
        raise ScenarioError("marginalization target must be below the base")
    acc: dict[CausalSection, object] = {}
    for f, w in d.weights:
        g = sections_mod.restrict(f, target)
        acc[g] = d.semiring.add(acc.get(g, d.semiring.zero), w)
    return SectionDistribution.make(target, acc, d.semiring)


def delta(f: CausalSection, semiring=NONNEG_RATIONAL):
    """The deterministic conditional distribution of a causal function.

    Requires a section on the top element (full inputs over all events); the
    resulting table has ``one`` exactly where the function's output sits.
    """
    from . import models as models_mod

    scenario = f.domain.scenario
    if f.domain != locale_mod.top(scenario):
        raise ScenarioError("delta needs a section on the top element")
    rows = {
        ji: {f(ji): semiring.one} for ji in scenario.joint_inputs()
    }
    return models_mod.ConditionalDistribution.make(scenario, rows, semiring=semiring)


def convex_mix(weights: dict, semiring=NONNEG_RATIONAL):
    """The mixture of delta distributions under a normalized weighting."""
    from . import models as models_mod

    if not weights:
        raise NormalizationError("a mixture needs at least one section")
    sections = list(weights)
    scenario = sections[0].domain.scenario
    top = locale_mod.top(scenario)
    for f in sections:
        if f.domain != top:
            raise ScenarioError("mixture sections must live on the top element")
    total = semiring.sum(semiring.validate(w) for w in weights.values())
    if total != semiring.one:
        raise NormalizationError(f"mixture weights sum to {total}, not one")
    rows: dict[tuple, dict[tuple, object]] = {}
    for ji in scenario.joint_inputs():
        row: dict[tuple, object] = {}
        for f, w in weights.items():
            o = f(ji)
            row[o] = semiring.add(row.get(o, semiring.zero), w)
        rows[ji] = row
    return models_mod.ConditionalDistribution.make(scenario, rows, semiring=semiring)
