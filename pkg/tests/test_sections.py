"""Causal sections: causality checking, restriction, gluing, enumeration.

Gluing of a compatible pair always exists and restricts correctly, but it is
not unique in general: on any non-discrete order, suitable pairs leave
factor cells of the join unpinned (count_gluings counts the freedom).  The
brute-force census here documents both facts.
"""


import math
import random

import pytest

from causalsheaf import locale as L
from causalsheaf import order as O
from causalsheaf import sections as S
from causalsheaf.errors import EnumerationLimitError, NotCausalError, ScenarioError, ScopeError

from conftest import binary_scenario, scenario_for


class TestIsCausal:
    def test_constant_function_is_causal(self, diamond_scenario):
        top = L.top(diamond_scenario)
        table = {ji: ("0", "0", "0", "0") for ji in top.joint_inputs()}
        assert S.is_causal(top, table)

    def test_reading_the_other_party_is_not(self, discrete_ab):
        top = L.top(discrete_ab)
        table = {ji: (ji[1], "0") for ji in top.joint_inputs()}
        assert not S.is_causal(top, table)

    def test_diamond_xor_at_the_top_event(self, diamond_scenario):
        top = L.top(diamond_scenario)
        table = {}
        for ji in top.joint_inputs():
            i_a, i_b = int(ji[0]), int(ji[1])
            table[ji] = ("0", "0", "0", str(i_a ^ i_b))
        # independent statement of the quantified condition
        evs = sorted(top.support)
        for k, e in enumerate(evs):
            dev = sorted(O.downset(diamond_scenario.order, e))
            sel = [evs.index(d) for d in dev]
            for ji in table:
                for jj in table:
                    if all(ji[i] == jj[i] for i in sel):
                        assert table[ji][k] == table[jj][k]
        assert S.is_causal(top, table)
        f = S.from_table(top, table)
        assert f.as_table() == table

    def test_partial_table_rejected(self, discrete_ab):
        top = L.top(discrete_ab)
        table = {("0", "0"): ("0", "0")}
        with pytest.raises(ScenarioError):
            S.is_causal(top, table)

    def test_preorders_are_out_of_scope(self):
        sc = binary_scenario("AB", [("A", "B"), ("B", "A")])
        with pytest.raises(ScopeError):
            S.count_sections(L.top(sc))


class TestRestrict:
    def test_identity_restriction(self, diamond_scenario):
        top = L.top(diamond_scenario)
        f = next(S.enumerate_sections(L.element(diamond_scenario, {"C": ("0", "1")})))
        assert S.restrict(f, f.domain) == f

    def test_diamond_restriction_drops_d_keeps_a(self, diamond_scenario):
        top = L.top(diamond_scenario)
        table = {}
        for ji in top.joint_inputs():
            i_a, i_b, i_c = int(ji[0]), int(ji[1]), int(ji[2])
            table[ji] = (str(i_a ^ i_c), "0", "0", str(i_a ^ i_b))
        f = S.from_table(top, table)
        ca = L.element(diamond_scenario, {"C": ("0", "1"), "A": ("0", "1")})
        g = S.restrict(f, ca)
        for ji in ca.joint_inputs():  # (i_A, i_C)
            i_a, i_c = int(ji[0]), int(ji[1])
            assert g(ji) == (str(i_a ^ i_c), "0")

    def test_functoriality_on_random_chains(self):
        rng = random.Random(11)
        sc = binary_scenario("ABC", [("A", "B"), ("B", "C")])
        elements = L.enumerate_elements(sc)
        for _ in range(200):
            u = rng.choice(elements)
            below_u = [w for w in elements if L.leq(w, u)]
            v = rng.choice(below_u)
            w = rng.choice([x for x in elements if L.leq(x, v)])
            count = S.count_sections(u)
            f = _section_by_index(u, rng.randrange(count))
            assert S.restrict(S.restrict(f, v), w) == S.restrict(f, w)

    def test_target_must_be_below(self, diamond_scenario):
        u = L.element(diamond_scenario, {"C": ("0",)})
        f = next(S.enumerate_sections(u))
        with pytest.raises(ScenarioError):
            S.restrict(f, L.top(diamond_scenario))


def _section_by_index(domain, k):
    """Decode the k-th section in enumeration order without enumerating:
    mixed radix, last factor and last cell least significant."""
    shapes = []
    for e in sorted(domain.support):
        outs = domain.scenario.outputs_of(e)
        n_cells = math.prod(
            len(domain.subset_of(d))
            for d in O.downset(domain.scenario.order, e)
        )
        shapes.append((outs, n_cells))
    assert 0 <= k < S.count_sections(domain)
    rem = k
    rev = []
    for outs, n_cells in reversed(shapes):
        idx = rem % len(outs) ** n_cells
        rem //= len(outs) ** n_cells
        cells = []
        for _ in range(n_cells):
            cells.append(outs[idx % len(outs)])
            idx //= len(outs)
        rev.append(tuple(reversed(cells)))
    return S.CausalSection(domain, tuple(reversed(rev)))


class TestGlue:
    def test_glue_with_self(self, discrete_ab):
        f = next(S.enumerate_sections(L.top(discrete_ab)))
        assert S.glue(f, f) == f

    def test_glue_with_own_restriction(self, diamond_scenario):
        top = L.top(diamond_scenario)
        ca = L.element(diamond_scenario, {"C": ("0", "1"), "A": ("0", "1")})
        fs = S.enumerate_sections(L.element(diamond_scenario, {"C": ("0", "1")}))
        f = _section_by_index(L.top(diamond_scenario), 12345)
        assert S.glue(f, S.restrict(f, ca)) == f

    def test_diamond_full_support_pair_glues_uniquely(self, diamond_scenario):
        sc = diamond_scenario
        ca = L.element(sc, {"C": ("0", "1"), "A": ("0", "1")})
        cb = L.element(sc, {"C": ("0", "1"), "B": ("0", "1")})
        assert S.count_gluings(ca, cb) == 1
        f = _section_by_index(ca, 37)
        g = _section_by_index(cb, 11)
        m = L.meet(ca, cb)
        if S.restrict(f, m) != S.restrict(g, m):
            # align g's C-factor with f's to make the pair compatible
            g = S.CausalSection(cb, (g.factors[0], f.factors[1]))
        h = S.glue(f, g)
        assert isinstance(h, S.CausalSection)
        assert S.restrict(h, ca) == f and S.restrict(h, cb) == g

    def test_incompatible_pair_reports_witness(self, diamond_scenario):
        sc = diamond_scenario
        c = L.element(sc, {"C": ("0", "1")})
        f = S.from_table(c, {("0",): ("0",), ("1",): ("0",)})
        g_base = L.element(sc, {"C": ("0", "1"), "A": ("0",)})
        # keys/values over sorted support (A, C); g's C-output 1 clashes with f
        g = S.from_table(g_base, {("0", "0"): ("0", "1"), ("0", "1"): ("0", "1")})
        out = S.glue(f, g)
        assert isinstance(out, S.Incompatible)
        assert out.event == "C"
        assert not out

    def test_two_chain_gluing_freedom(self):
        # mixed inputs on a chain leave cells free: existence without uniqueness
        sc = binary_scenario("AC", [("C", "A")])
        u = L.element(sc, {"C": ("0",), "A": ("0", "1")})
        v = L.element(sc, {"C": ("1",)})
        assert S.count_gluings(u, v) == 4
        f = _section_by_index(u, 3)
        g = _section_by_index(v, 1)
        w = L.join(u, v)
        extensions = [
            h
            for h in S.enumerate_sections(w)
            if S.restrict(h, u) == f and S.restrict(h, v) == g
        ]
        assert len(extensions) == 4
        assert S.glue(f, g) in extensions

    def test_gluing_census_on_a_three_event_order(self):
        # every compatible pair has exactly count_gluings extensions, and the
        # canonical gluing is one of them
        sc = binary_scenario("ABC", [("A", "B")])
        elements = L.enumerate_elements(sc)
        rng = random.Random(5)
        for _ in range(40):
            u, v = rng.choice(elements), rng.choice(elements)
            w = L.join(u, v)
            if S.count_sections(w) > 512:
                continue
            m = L.meet(u, v)
            census: dict = {}
            for h in S.enumerate_sections(w):
                census.setdefault((S.restrict(h, u), S.restrict(h, v)), []).append(h)
            free = S.count_gluings(u, v)
            for (f, g), hs in census.items():
                assert S.restrict(f, m) == S.restrict(g, m)
                assert len(hs) == free
                assert S.glue(f, g) in hs
            n_compatible = (
                S.count_sections(u) * S.count_sections(v) // S.count_sections(m)
            )
            assert len(census) == n_compatible


class TestEnumerationAndCounting:
    def test_empty_domain_has_one_section(self, diamond_scenario):
        bot = L.bottom(diamond_scenario)
        assert S.count_sections(bot) == 1
        (only,) = list(S.enumerate_sections(bot))
        assert only.as_table() == {(): ()}

    def test_diamond_top_count(self, diamond_scenario):
        assert S.count_sections(L.top(diamond_scenario)) == 2**26

    def test_discrete_top_enumeration(self, discrete_ab):
        top = L.top(discrete_ab)
        secs = list(S.enumerate_sections(top))
        assert len(secs) == 16 == S.count_sections(top)
        assert len(set(secs)) == 16
        for f in secs:
            assert S.is_causal(top, f.as_table())

    def test_counts_match_lengths_on_assorted_elements(self, diamond_scenario):
        for subsets in (
            {"C": ("0",)},
            {"C": ("0", "1"), "A": ("1",)},
            {"C": ("0", "1"), "A": ("0", "1"), "B": ("0",)},
        ):
            u = L.element(diamond_scenario, subsets)
            assert S.count_sections(u) == len(list(S.enumerate_sections(u)))

    def test_enumeration_cap(self, diamond_scenario):
        with pytest.raises(EnumerationLimitError):
            next(S.enumerate_sections(L.top(diamond_scenario)))

    def test_enumeration_is_deterministic(self, discrete_ab):
        top = L.top(discrete_ab)
        assert list(S.enumerate_sections(top)) == list(S.enumerate_sections(top))


class TestFactorization:
    def test_discrete_factors_are_per_event_functions(self, discrete_ab):
        top = L.top(discrete_ab)
        f = _section_by_index(top, 9)
        fact = S.factorize(f)
        for e in "AB":
            table = fact.table_of(e)
            assert set(table) == {("0",), ("1",)}
        assert S.assemble(fact) == f

    def test_diamond_factor_domains(self, diamond_scenario):
        top = L.top(diamond_scenario)
        table = {ji: ("0", "0", "0", "0") for ji in top.joint_inputs()}
        fact = S.factorize(S.from_table(top, table))
        sizes = {e: len(fact.table_of(e)) for e in "ABCD"}
        assert sizes == {"C": 2, "A": 4, "B": 4, "D": 16}

    def test_round_trips(self, diamond_scenario):
        u = L.element(diamond_scenario, {"C": ("0", "1"), "B": ("0",)})
        rng = random.Random(2)
        for _ in range(20):
            f = _section_by_index(u, rng.randrange(S.count_sections(u)))
            assert S.assemble(S.factorize(f)) == f

    def test_constant_section_has_constant_factors(self, diamond_scenario):
        top = L.top(diamond_scenario)
        table = {ji: ("1", "1", "1", "1") for ji in top.joint_inputs()}
        fact = S.factorize(S.from_table(top, table))
        for e in "ABCD":
            assert set(fact.table_of(e).values()) == {"1"}

    def test_from_table_rejects_non_causal(self, discrete_ab):
        top = L.top(discrete_ab)
        table = {ji: (ji[1], "0") for ji in top.joint_inputs()}
        with pytest.raises(NotCausalError):
            S.from_table(top, table)
