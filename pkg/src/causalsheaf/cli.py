"""Command-line front end: ingest scenarios, models and diagrams; run the
causality check, locality decision, causal fraction, order sweeps,
realization and input fixing; emit canonical model files.

Exit codes: 0 the queried property holds (or the value was computed), 1 the
property fails (violations or NONLOCAL printed), 2 usage or format errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import analysis, models, order as order_mod, realize
from .distributions import NONNEG_RATIONAL
from .errors import CausalSheafError, FormatError
from .locale import CausalScenario
from .models import ConditionalDistribution
from .order import Preorder


def parse_rational(text: str) -> Fraction:
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {text!r}: {exc}") from None
    if value < 0:
        raise FormatError(f"negative weight {text!r}")
    return value


def format_rational(value: Fraction) -> str:
    return str(value)


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON: {exc}") from None


def scenario_from_dict(data: dict) -> CausalScenario:
    try:
        events = data["events"]
        generators = [tuple(pair) for pair in data.get("order", [])]
        inputs = {e: tuple(v) for e, v in data["inputs"].items()}
        outputs = {e: tuple(v) for e, v in data["outputs"].items()}
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed scenario: {exc}") from None
    po = order_mod.closure(events, generators)
    return CausalScenario.make(po, inputs, outputs)


def scenario_to_dict(scenario: CausalScenario) -> dict:
    pairs = sorted(
        (x, y) for x, y in scenario.order.pairs() if x != y
    )
    return {
        "events": list(scenario.events),
        "order": [list(p) for p in pairs],
        "inputs": {e: list(scenario.inputs_of(e)) for e in scenario.events},
        "outputs": {e: list(scenario.outputs_of(e)) for e in scenario.events},
    }


def load_scenario(path: str) -> CausalScenario:
    return scenario_from_dict(_load_json(path))


def _split_joint(key: str, arity: int, what: str) -> tuple[str, ...]:
    parts = tuple(key.split(","))
    if len(parts) != arity:
        raise FormatError(f"{what} key {key!r} must have {arity} comma-joined symbols")
    return parts


def model_from_dict(data: dict, base_dir: Path) -> ConditionalDistribution:
    if not isinstance(data, dict) or "scenario" not in data or "rows" not in data:
        raise FormatError("a model file needs 'scenario' and 'rows'")
    ref = data["scenario"]
    if isinstance(ref, str):
        scenario = scenario_from_dict(_load_json(str(base_dir / ref)))
    else:
        scenario = scenario_from_dict(ref)
    n = len(scenario.events)
    rows = {}
    for ikey, row in data["rows"].items():
        ji = _split_joint(ikey, n, "row")
        cells = {}
        for okey, val in row.items():
            jo = _split_joint(okey, n, "cell")
            cells[jo] = parse_rational(val)
        rows[ji] = cells
    try:
        return ConditionalDistribution.make(scenario, rows, NONNEG_RATIONAL)
    except CausalSheafError:
        raise
    except Exception as exc:  # noqa: BLE001 - surfaced as a format problem
        raise FormatError(f"malformed model: {exc}") from None


def load_model(path: str) -> ConditionalDistribution:
    return model_from_dict(_load_json(path), Path(path).resolve().parent)


def model_to_dict(d: ConditionalDistribution) -> dict:
    d = models.reduce_to_support(d)
    rows = {}
    for ji, row in d.rows:
        rows[",".join(ji)] = {
            ",".join(o): format_rational(w) for o, w in row
        }
    return {
        "events": list(d.support_events()),
        "scenario": scenario_to_dict(d.scenario),
        "rows": rows,
    }


def dump_model(d: ConditionalDistribution) -> str:
    return json.dumps(model_to_dict(d), indent=2) + "\n"


def parse_order_spec(spec: str, events) -> Preorder:
    events = tuple(sorted(events))
    if spec == "discrete":
        return order_mod.discrete_order(events)
    if spec == "indiscrete":
        return order_mod.indiscrete_order(events)
    if spec.startswith("chain:"):
        chain = [e.strip() for e in spec[len("chain:"):].split("<")]
        if sorted(chain) != list(events):
            raise FormatError(f"chain spec must name each of {list(events)} once")
        return order_mod.chain_order(chain)
    data = _load_json(spec)
    generators = data["order"] if isinstance(data, dict) else data
    try:
        pairs = [tuple(p) for p in generators]
    except TypeError:
        raise FormatError(f"{spec} does not hold generator pairs") from None
    return order_mod.closure(events, pairs)


def diagram_from_dict(data: dict, base_dir: Path) -> realize.Diagram:
    try:
        ref = data["scenario"]
        if isinstance(ref, str):
            scenario = scenario_from_dict(_load_json(str(base_dir / ref)))
        else:
            scenario = scenario_from_dict(ref)
        wires = tuple(
            realize.Wire(w["name"], w["source"], w["target"], int(w["dim"]))
            for w in data.get("wires", [])
        )
        instruments = {}
        for event, spec in data.get("instruments", {}).items():
            kraus = {}
            for entry in spec.get("kraus", []):
                ops = [
                    [[complex(re, im) for re, im in row] for row in mat]
                    for mat in entry["operators"]
                ]
                kraus[(entry["input"], entry["output"])] = ops
            instruments[event] = realize.Instrument.make(
                event,
                scenario.inputs_of(event),
                scenario.outputs_of(event),
                tuple(spec.get("in_wires", ())),
                tuple(spec.get("out_wires", ())),
                kraus,
            )
    except CausalSheafError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed diagram: {exc}") from None
    return realize.Diagram(scenario, wires, instruments)


def load_diagram(path: str) -> realize.Diagram:
    if path in ("diamond", "builtin:diamond"):
        return realize.diamond_builtin()
    return diagram_from_dict(_load_json(path), Path(path).resolve().parent)


def _events_header(events) -> str:
    return "events: " + ",".join(events)


def _check_match(scenario: CausalScenario, d: ConditionalDistribution):
    if scenario.events != d.scenario.events:
        raise FormatError("scenario and model disagree on the events")
    if scenario.inputs != d.scenario.inputs or scenario.outputs != d.scenario.outputs:
        raise FormatError("scenario and model disagree on the alphabets")


def cmd_check(args) -> int:
    scenario = load_scenario(args.scenario)
    d = load_model(args.model)
    _check_match(scenario, d)
    order = scenario.order
    if args.order_override:
        order = parse_order_spec(args.order_override, scenario.events)
    verdict = models.check_causality(d, order)
    print(_events_header(d.support_events()))
    if verdict.ok:
        print("causal")
        return 0
    for v in verdict.violations:
        print(
            f"violated: lowerset={{{','.join(sorted(v.lowerset))}}} "
            f"marginal={','.join(v.marginal_output)} "
            f"i={','.join(v.input_a)} j={','.join(v.input_b)} "
            f"lhs={format_rational(v.lhs)} rhs={format_rational(v.rhs)}"
        )
    return 1


def cmd_local(args) -> int:
    scenario = load_scenario(args.scenario)
    d = load_model(args.model)
    _check_match(scenario, d)
    d = ConditionalDistribution(scenario, d.support, d.semiring, d.rows)
    cert = analysis.is_local(d)
    print(_events_header(d.support_events()))
    if not cert.local:
        print("NONLOCAL")
        return 1
    for f, w in cert.weights:
        outs = " ".join(
            ",".join(ji) + "->" + ",".join(f(ji)) for ji in f.domain.joint_inputs()
        )
        print(f"weight {format_rational(w)}: {outs}")
    return 0


def cmd_fraction(args) -> int:
    scenario = load_scenario(args.scenario)
    d = load_model(args.model)
    _check_match(scenario, d)
    order = parse_order_spec(args.order, scenario.events)
    fraction = analysis.causal_fraction(d, order)
    print(_events_header(d.support_events()))
    if fraction.semantics != "sheaf-causal":
        print(f"# {fraction.semantics}", file=sys.stderr)
    print(format_rational(fraction.value))
    return 0


def _relation_label(po: Preorder) -> str:
    strict = sorted((x, y) for x, y in po.pairs() if x != y)
    return ";".join(f"{x}<={y}" for x, y in strict) if strict else "discrete"


def cmd_sweep(args) -> int:
    d = load_model(args.model)
    if args.events is not None and args.events != len(d.support_events()):
        raise FormatError(
            f"--events {args.events} does not match the model's "
            f"{len(d.support_events())} events"
        )
    results = analysis.sweep(d, posets_only=args.posets_only)
    print(_events_header(d.support_events()))
    if not args.posets_only:
        print("# pre-order rows are equation-causal", file=sys.stderr)
    for po, fraction in results.items():
        print(f"{format_rational(fraction.value)}\t{_relation_label(po)}")
    return 0


def cmd_realize(args) -> int:
    diagram = load_diagram(args.diagram)
    model = realize.evaluate(diagram)
    d = model.distribution
    if args.restrict:
        lowerset = set(args.restrict.split(","))
        d = models.restrict_model(d, lowerset)
    sys.stdout.write(dump_model(d))
    return 0


def cmd_fix(args) -> int:
    d = load_model(args.model)
    assignment = {}
    for item in args.assign or []:
        if "=" not in item:
            raise FormatError(f"--assign needs EVENT=INPUT, got {item!r}")
        event, value = item.split("=", 1)
        assignment[event] = value
    discard = set(args.discard.split(",")) if args.discard else set()
    fixed = models.fix_inputs(d, assignment, discard)
    sys.stdout.write(dump_model(fixed))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="causalsheaf",
        description="causal conditional distributions over finite (pre)orders",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check the causality equations")
    p.add_argument("scenario")
    p.add_argument("model")
    p.add_argument("--order-override", metavar="SPEC")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("local", help="decide locality by exact LP")
    p.add_argument("scenario")
    p.add_argument("model")
    p.set_defaults(func=cmd_local)

    p = sub.add_parser("fraction", help="causal fraction against an order")
    p.add_argument("scenario")
    p.add_argument("model")
    p.add_argument("--order", required=True, metavar="SPEC")
    p.set_defaults(func=cmd_fraction)

    p = sub.add_parser("sweep", help="causal fraction over all labeled (pre)orders")
    p.add_argument("model")
    p.add_argument("--events", type=int)
    p.add_argument("--posets-only", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("realize", help="evaluate an instrument diagram to a model")
    p.add_argument("diagram", help="diagram file or 'diamond' for the builtin")
    p.add_argument("--restrict", metavar="EVENTS", help="comma-joined lowerset")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("fix", help="fix inputs on a lowerset, marginalize outputs")
    p.add_argument("model")
    p.add_argument("--assign", action="append", metavar="EVENT=INPUT")
    p.add_argument("--discard", metavar="EVENTS")
    p.set_defaults(func=cmd_fix)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except CausalSheafError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
