"""The locale of inputs of a causal scenario.

Elements are families of non-empty input subsets indexed by a lowerset of the
event order.  The order, meets, joins and covers follow the lattice structure
of such families; ``varphi`` embeds the locale into the powerset of the
disjoint union of all inputs, and is an isomorphism exactly for discrete
orders.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

from . import order as order_mod
from .errors import OrderError, ScenarioError
from .order import Preorder


@dataclass(frozen=True)
class CausalScenario:
    """Events with a (pre)order plus finite input/output alphabets per event.

    ``inputs[k]`` / ``outputs[k]`` are the alphabets of ``order.events[k]``,
    kept in their given order, which is the canonical symbol order used for
    all serialization.
    """

    order: Preorder
    inputs: tuple[tuple[str, ...], ...]
    outputs: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        n = len(self.order.events)
        if len(self.inputs) != n or len(self.outputs) != n:
            raise ScenarioError("inputs/outputs must cover exactly the events")
        for alphabet in (*self.inputs, *self.outputs):
            if not alphabet:
                raise ScenarioError("input and output alphabets must be non-empty")
            if len(set(alphabet)) != len(alphabet):
                raise ScenarioError("alphabet symbols must be distinct")

    @classmethod
    def make(cls, order: Preorder, inputs: dict, outputs: dict) -> "CausalScenario":
        missing = set(order.events) ^ set(inputs)
        if missing or set(order.events) ^ set(outputs):
            raise ScenarioError(f"events of order and alphabets differ: {sorted(missing)}")
        return cls(
            order,
            tuple(tuple(inputs[e]) for e in order.events),
            tuple(tuple(outputs[e]) for e in order.events),
        )

    @property
    def events(self) -> tuple[str, ...]:
        return self.order.events

    def event_index(self, event: str) -> int:
        return self.order.index(event)

    def inputs_of(self, event: str) -> tuple[str, ...]:
        return self.inputs[self.event_index(event)]

    def outputs_of(self, event: str) -> tuple[str, ...]:
        return self.outputs[self.event_index(event)]

    def joint_inputs(self, events=None) -> list[tuple[str, ...]]:
        """All joint inputs over the given events (default all), in canonical order."""
        evs = self.events if events is None else tuple(sorted(events))
        return list(product(*(self.inputs_of(e) for e in evs)))

    def joint_outputs(self, events=None) -> list[tuple[str, ...]]:
        evs = self.events if events is None else tuple(sorted(events))
        return list(product(*(self.outputs_of(e) for e in evs)))


@dataclass(frozen=True)
class LocaleElement:
    """A family of non-empty input subsets over a lowerset of events.

    ``subsets[k]`` is the subset at ``scenario.events[k]``, as a tuple in the
    scenario's symbol order; the empty tuple marks events outside the support.
    """

    scenario: CausalScenario
    subsets: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if len(self.subsets) != len(self.scenario.events):
            raise ScenarioError("one input subset slot per event required")
        for k, sub in enumerate(self.subsets):
            alphabet = self.scenario.inputs[k]
            pos = {s: i for i, s in enumerate(alphabet)}
            if any(s not in pos for s in sub):
                raise ScenarioError(f"subset at {self.scenario.events[k]!r} not within inputs")
            if list(sub) != sorted(set(sub), key=pos.get):
                raise ScenarioError("subsets must be duplicate-free and in alphabet order")
        if not order_mod.is_lowerset(self.scenario.order, self.support):
            raise OrderError(f"support {sorted(self.support)} is not a lowerset")

    @cached_property
    def support(self) -> frozenset[str]:
        # cached_property writes through __dict__, which frozen allows
        return frozenset(
            e for e, sub in zip(self.scenario.events, self.subsets) if sub
        )

    @cached_property
    def support_events(self) -> tuple[str, ...]:
        return tuple(sorted(self.support))

    def subset_of(self, event: str) -> tuple[str, ...]:
        return self.subsets[self.scenario.event_index(event)]

    def is_bottom(self) -> bool:
        return not self.support

    def joint_inputs(self) -> list[tuple[str, ...]]:
        """Product of the subsets over the support, events in canonical order."""
        evs = sorted(self.support)
        return list(product(*(self.subset_of(e) for e in evs)))


def element(scenario: CausalScenario, subsets: dict) -> LocaleElement:
    """Build an element from an event -> iterable-of-inputs mapping."""
    unknown = set(subsets) - set(scenario.events)
    if unknown:
        raise ScenarioError(f"unknown events in subsets: {sorted(unknown)}")
    per_event = []
    for k, e in enumerate(scenario.events):
        chosen = set(subsets.get(e, ()))
        if chosen - set(scenario.inputs[k]):
            raise ScenarioError(f"unknown inputs at {e!r}: {sorted(chosen)}")
        per_event.append(tuple(s for s in scenario.inputs[k] if s in chosen))
    return LocaleElement(scenario, tuple(per_event))


def top(scenario: CausalScenario) -> LocaleElement:
    return LocaleElement(scenario, scenario.inputs)


def bottom(scenario: CausalScenario) -> LocaleElement:
    return LocaleElement(scenario, tuple(() for _ in scenario.events))


def singleton_element(scenario: CausalScenario, joint_input, events=None) -> LocaleElement:
    """The element with singleton subsets {i_e} over the given events."""
    evs = list(scenario.events if events is None else sorted(events))
    if len(evs) != len(joint_input):
        raise ScenarioError("joint input length does not match events")
    return element(scenario, dict(zip(evs, ((s,) for s in joint_input))))


def _same_scenario(u: LocaleElement, v: LocaleElement):
    if u.scenario != v.scenario:
        raise ScenarioError("locale operations need elements of one scenario")


def leq(v: LocaleElement, u: LocaleElement) -> bool:
    """Whether v <= u: support contained and subsets pointwise contained."""
    _same_scenario(v, u)
    return all(set(a) <= set(b) for a, b in zip(v.subsets, u.subsets))


def meet(u: LocaleElement, v: LocaleElement) -> LocaleElement:
    """Greatest lower bound.

    Pointwise intersection, dropping events where it is empty; the surviving
    event set need not be downward closed (an event below a survivor may have
    been dropped), so it is further pruned to the largest lowerset it
    contains.  Without that pruning the result can fail to be an element at
    all, e.g. on a two-event chain with disjoint subsets at the bottom event.
    """
    _same_scenario(u, v)
    scenario = u.scenario
    inter = [
        tuple(s for s in a if s in set(b)) for a, b in zip(u.subsets, v.subsets)
    ]
    survivors = {e for e, sub in zip(scenario.events, inter) if sub}
    keep = order_mod.largest_lowerset_within(scenario.order, survivors)
    final = tuple(
        sub if e in keep else () for e, sub in zip(scenario.events, inter)
    )
    return LocaleElement(scenario, final)


def join(u: LocaleElement, v: LocaleElement) -> LocaleElement:
    """Least upper bound: pointwise union over the union of supports."""
    _same_scenario(u, v)
    scenario = u.scenario
    unions = []
    for k, (a, b) in enumerate(zip(u.subsets, v.subsets)):
        members = set(a) | set(b)
        unions.append(tuple(s for s in scenario.inputs[k] if s in members))
    return LocaleElement(scenario, tuple(unions))


@dataclass(frozen=True)
class CoverSet:
    """A candidate cover: a target element together with a set of parts."""

    target: LocaleElement
    parts: frozenset[LocaleElement]


def is_cover(cover: CoverSet) -> bool:
    """Whether the parts cover the target: pointwise union equals the target.

    Raises if some part is not below the target.
    """
    target = cover.target
    for part in cover.parts:
        if not leq(part, target):
            raise ScenarioError("cover part is not below the target")
    for k in range(len(target.scenario.events)):
        union = set()
        for part in cover.parts:
            union |= set(part.subsets[k])
        if union != set(target.subsets[k]):
            return False
    return True


def cover_induced_by(scenario: CausalScenario, joint_inputs, events=None) -> CoverSet:
    """The cover made of singleton-subset elements, one per joint input.

    The covered object has, at each event, exactly the input values occurring
    in the given joint inputs.
    """
    evs = list(scenario.events if events is None else sorted(events))
    joint_inputs = list(joint_inputs)
    if not joint_inputs:
        raise ScenarioError("a cover needs at least one joint input")
    parts = frozenset(
        singleton_element(scenario, ji, evs) for ji in joint_inputs
    )
    covered = {
        e: {ji[k] for ji in joint_inputs} for k, e in enumerate(evs)
    }
    return CoverSet(element(scenario, covered), parts)


def global_cover(scenario: CausalScenario) -> CoverSet:
    """The global cover induced by the set of all joint inputs."""
    return cover_induced_by(scenario, scenario.joint_inputs())


def varphi(u: LocaleElement) -> frozenset[tuple[str, str]]:
    """The embedding into the powerset of disjoint-union inputs: {(i, event)}."""
    return frozenset(
        (s, e)
        for e, sub in zip(u.scenario.events, u.subsets)
        for s in sub
    )


def varphi_inverse(scenario: CausalScenario, pairs) -> LocaleElement:
    """Inverse of ``varphi`` where it exists.

    The implied support must be a lowerset; on discrete orders every subset
    of input/event pairs qualifies, which is what makes ``varphi`` a locale
    isomorphism there.
    """
    by_event: dict[str, set[str]] = {}
    for s, e in pairs:
        if e not in scenario.events:
            raise ScenarioError(f"unknown event {e!r} in pair set")
        if s not in scenario.inputs_of(e):
            raise ScenarioError(f"unknown input {s!r} at event {e!r}")
        by_event.setdefault(e, set()).add(s)
    return element(scenario, by_event)


def enumerate_elements(scenario: CausalScenario) -> list[LocaleElement]:
    """Every locale element, for exhaustive small-scenario testing.

    Ordered by (support size, support, subsets).
    """
    out = []
    for low in order_mod.lowersets(scenario.order):
        evs = sorted(low)
        choices = []
        for e in evs:
            alphabet = scenario.inputs_of(e)
            non_empty = [
                tuple(s for k, s in enumerate(alphabet) if mask >> k & 1)
                for mask in range(1, 1 << len(alphabet))
            ]
            choices.append(non_empty)
        for combo in product(*choices):
            out.append(element(scenario, dict(zip(evs, combo))))
    return out
