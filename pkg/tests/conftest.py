"""Shared builders for the test suite."""

import random
from fractions import Fraction

import pytest

from causalsheaf import locale as locale_mod
from causalsheaf import models as models_mod
from causalsheaf import order as order_mod
from causalsheaf import sections as sections_mod


def binary_scenario(events, generators=()):
    po = order_mod.closure(events, generators)
    alphabets = {e: ("0", "1") for e in po.events}
    return locale_mod.CausalScenario.make(po, alphabets, alphabets)


def scenario_for(po, n_inputs=2, n_outputs=2):
    ins = {e: tuple(str(k) for k in range(n_inputs)) for e in po.events}
    outs = {e: tuple(str(k) for k in range(n_outputs)) for e in po.events}
    return locale_mod.CausalScenario.make(po, ins, outs)


def random_rational_row(rng: random.Random, outputs, denom=24):
    weights = [rng.randrange(0, denom + 1) for _ in outputs]
    if sum(weights) == 0:
        weights[rng.randrange(len(outputs))] = 1
    total = sum(weights)
    return {o: Fraction(w, total) for o, w in zip(outputs, weights) if w}


def random_table(rng: random.Random, scenario):
    outputs = scenario.joint_outputs()
    rows = {ji: random_rational_row(rng, outputs) for ji in scenario.joint_inputs()}
    return models_mod.ConditionalDistribution.make(scenario, rows)


@pytest.fixture
def diamond_order():
    return order_mod.closure("ABCD", [("C", "A"), ("C", "B"), ("A", "D"), ("B", "D")])


@pytest.fixture
def diamond_scenario(diamond_order):
    alphabets = {e: ("0", "1") for e in "ABCD"}
    return locale_mod.CausalScenario.make(diamond_order, alphabets, alphabets)


@pytest.fixture
def discrete_ab():
    return binary_scenario("AB")


BFW_SUPPORT = {
    ("0", "0", "0"): [("0", "0", "0"), ("1", "1", "1")],
    ("0", "0", "1"): [("0", "1", "1"), ("1", "0", "0")],
    ("0", "1", "0"): [("0", "0", "1"), ("1", "1", "0")],
    ("0", "1", "1"): [("0", "1", "0"), ("1", "0", "1")],
    ("1", "0", "0"): [("0", "1", "0"), ("1", "0", "1")],
    ("1", "0", "1"): [("0", "0", "1"), ("1", "1", "0")],
    ("1", "1", "0"): [("0", "1", "1"), ("1", "0", "0")],
    ("1", "1", "1"): [("0", "0", "0"), ("1", "1", "1")],
}


def bfw_model():
    """The three-party box: rows (i_A,i_B,i_C), half weight on two outputs."""
    sc = binary_scenario("ABC", [("C", "A"), ("C", "B"), ("A", "B"), ("B", "A")])
    half = Fraction(1, 2)
    rows = {ji: {o: half for o in outs} for ji, outs in BFW_SUPPORT.items()}
    return models_mod.ConditionalDistribution.make(sc, rows)


def pr_box():
    sc = binary_scenario("AB")
    half = Fraction(1, 2)
    rows = {}
    for ji in sc.joint_inputs():
        i_a, i_b = int(ji[0]), int(ji[1])
        rows[ji] = {
            (oa, ob): half
            for oa in "01"
            for ob in "01"
            if int(oa) ^ int(ob) == (i_a & i_b)
        }
    return models_mod.ConditionalDistribution.make(sc, rows)


# -- independent oracles shared by unit and acceptance tests -----------------

def echelon(rows):
    """Fraction Gaussian elimination; returns (reduced rows, pivot columns)."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    width = len(rows[0])
    for c in range(width):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c]
        rows[r] = [v / inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def solve_exact(matrix_rows, rhs):
    """Unique exact solution of A x = b, or None if singular/inconsistent."""
    n = len(matrix_rows[0])
    aug = [list(row) + [b] for row, b in zip(matrix_rows, rhs)]
    rows, pivots = echelon(aug)
    if n in pivots or len(pivots) < n:
        return None
    x = [Fraction(0)] * n
    for row, c in zip(rows, pivots):
        x[c] = row[-1]
    return x


def brute_force_locality(d):
    """Locality by basis enumeration with rational Gaussian elimination.

    Columns are the deltas of the support-consistent sections (a section with
    a zero-probability output at some input is forced to weight zero); the
    model is local iff some column basis solves the cell equations with
    non-negative weights.  Returns a decomposition dict or None.
    """
    from itertools import combinations

    top = locale_mod.top(d.scenario)
    secs = [
        f
        for f in sections_mod.enumerate_sections(top)
        if all(d.value(ji, f(ji)) != 0 for ji, _ in d.rows)
    ]
    if not secs:
        return None
    inputs = [ji for ji, _ in d.rows]
    outputs = d.scenario.joint_outputs()
    rows = []
    rhs = []
    for ji in inputs:
        for jo in outputs:
            rows.append([Fraction(1) if f(ji) == jo else Fraction(0) for f in secs])
            rhs.append(Fraction(d.value(ji, jo)))
    rows.append([Fraction(1)] * len(secs))
    rhs.append(Fraction(1))
    aug = [row + [b] for row, b in zip(rows, rhs)]
    reduced, pivots = echelon(aug)
    if len(aug[0]) - 1 in pivots:
        return None
    r = len(reduced)
    red_rows = [row[:-1] for row in reduced]
    red_rhs = [row[-1] for row in reduced]
    for subset in combinations(range(len(secs)), r):
        sub = [[row[j] for j in subset] for row in red_rows]
        x = solve_exact(sub, red_rhs)
        if x is None or any(v < 0 for v in x):
            continue
        return {secs[j]: v for j, v in zip(subset, x) if v}
    return None


def reproduces(d, weights):
    """Exact re-multiplication of a decomposition against the table."""
    for ji, _ in d.rows:
        row = {}
        for f, w in weights.items():
            row[f(ji)] = row.get(f(ji), Fraction(0)) + w
        if {o: w for o, w in row.items() if w} != d.row(ji):
            return False
    return True


def full_quantified_violations(d, order):
    """The unreduced causality equations: every lowerset, every agreeing
    ordered pair of joint inputs, every marginal output."""
    from itertools import product

    evs = d.support_events()
    inputs = [ji for ji, _ in d.rows]
    bad = []
    for low in order_mod.lowersets(order):
        sel = [evs.index(e) for e in sorted(low)]
        outs = list(product(*(d.scenario.outputs_of(e) for e in sorted(low))))
        for ji in inputs:
            for jj in inputs:
                if any(ji[k] != jj[k] for k in sel):
                    continue
                for o_mark in outs:
                    lhs = sum(
                        (w for o, w in d.row(ji).items()
                         if tuple(o[k] for k in sel) == o_mark),
                        Fraction(0),
                    )
                    rhs = sum(
                        (w for o, w in d.row(jj).items()
                         if tuple(o[k] for k in sel) == o_mark),
                        Fraction(0),
                    )
                    if lhs != rhs:
                        bad.append((low, o_mark, ji, jj))
    return bad


def random_diagram(rng, max_events=3, wire_dim=2):
    """A random valid diagram: random poset, random wiring along it, random
    isometry-completed Kraus families split over the outputs."""
    import math as _math

    import numpy as np

    from causalsheaf import realize as R

    n = rng.randrange(2, max_events + 1) if rng.random() < 0.85 else 1
    events = sorted(rng.sample(["P", "Q", "S", "T"], n))
    posets = order_mod.enumerate_posets(events)
    connected = [po for po in posets if not po.is_discrete()]
    po = rng.choice(connected or posets) if rng.random() < 0.85 else rng.choice(posets)
    alphabets = {e: ("0", "1") for e in events}
    scenario = locale_mod.CausalScenario.make(po, alphabets, alphabets)
    wires = []
    for x in events:
        for y in events:
            if x != y and po.leq(x, y) and rng.random() < 0.9:
                wires.append(R.Wire(f"w{len(wires)}", x, y, wire_dim))
    wires = tuple(wires)

    def random_isometry(d_in, d_total):
        raw = np.array(
            [[complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(d_in)]
             for _ in range(d_total)]
        )
        q, _ = np.linalg.qr(raw)
        return q[:, :d_in]

    instruments = {}
    for e in events:
        in_w = tuple(w.name for w in wires if w.target == e)
        out_w = tuple(w.name for w in wires if w.source == e)
        d_in = wire_dim ** len(in_w)
        d_out = wire_dim ** len(out_w)
        kraus = {}
        for i in alphabets[e]:
            branches = max(1, _math.ceil(d_in / (d_out * 2)))
            v = random_isometry(d_in, d_out * 2 * branches)
            blocks = [v[k * d_out:(k + 1) * d_out, :] for k in range(2 * branches)]
            kraus[(i, "0")] = blocks[:branches]
            kraus[(i, "1")] = blocks[branches:]
        instruments[e] = R.Instrument.make(e, "01", "01", in_w, out_w, kraus)
    return R.Diagram(scenario, wires, instruments)
