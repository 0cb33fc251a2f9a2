"""Command-line driver.

Exit codes: 0 success, 1 error or failed check, 2 no supervisor exists.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .composition import Simulator
from .dot import to_dot
from .modelio import (ModelParseError, decode_sidecar, emit_model, load_model,
                      networked_events)
from .netplant import (TICK_RULES, AssumptionError, BuildDiagnostics,
                       NetworkConfig, build_networked_plant)
from .pipeline import (EXIT_FAIL, EXIT_OK, header,
                       plant_with_requirement, run_pipeline, verify_supervisor)
from .synthesis import BAD_SETS, SynthesisOptions
from .tdes import complete, natural_projection, sync_product, validate


def _network_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--nc", type=int, default=1, help="control delay in ticks")
    p.add_argument("--no", type=int, default=1, help="observation delay in ticks")
    p.add_argument("--lmax", type=int, default=1, help="control channel capacity")
    p.add_argument("--mmax", type=int, default=1, help="observation channel capacity")
    p.add_argument("--control-channel", choices=("fifo", "non-fifo"), default="fifo")
    p.add_argument("--tick-rule", choices=TICK_RULES, default="guarded")
    p.add_argument("--no-forcible-enabling", action="store_true",
                   help="do not treat enabling events as forcible")
    p.add_argument("--bad-set", choices=BAD_SETS, default="both")
    p.add_argument("--strict-assumptions", action="store_true",
                   help="fail instead of warning when a channel assumption is violated")
    p.add_argument("--depth", type=int, default=10, help="recorded in the report header; all checks are exact")


def _config(args) -> NetworkConfig:
    return NetworkConfig(args.nc, args.no, args.lmax, args.mmax,
                         fifo_control=args.control_channel == "fifo",
                         tick_rule=args.tick_rule,
                         enabling_forcible=not args.no_forcible_enabling,
                         strict=args.strict_assumptions)


def _options(args) -> SynthesisOptions:
    return SynthesisOptions(enabling_forcible=not args.no_forcible_enabling, bad_set=args.bad_set)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_pair(args):
    g, events = load_model(args.plant)
    r = None
    if getattr(args, "requirement", None):
        r, r_events = load_model(args.requirement)
        for ev in r_events:
            if ev.name not in events or events[ev.name] != ev:
                raise ValueError(f"requirement event {ev.name!r} disagrees with the plant declaration")
    return g, events, r


def cmd_validate(args) -> int:
    g, events = load_model(args.plant)
    problems = validate(g, events)
    for msg in problems:
        print(msg)
    if not problems:
        print(f"{g.name}: {len(g)} states, {len(events)} events, ok")
    return EXIT_FAIL if problems else EXIT_OK


def cmd_project(args) -> int:
    g, events = load_model(args.plant)
    keep = {e for e in args.events.split(",") if e} | {"tick"}
    p = natural_projection(g, keep, name=f"{g.name}_proj")
    _emit(emit_model(p, events), args.output)
    return EXIT_OK


def cmd_product(args) -> int:
    g, events, r = _load_pair(args)
    _emit(emit_model(sync_product(g, r, name=f"{g.name}_{r.name}"), events), args.output)
    return EXIT_OK


def cmd_complete(args) -> int:
    r, events = load_model(args.requirement)
    _emit(emit_model(complete(r), events), args.output)
    return EXIT_OK


def cmd_netplant(args) -> int:
    g, events, r = _load_pair(args)
    cfg = _config(args)
    plant = plant_with_requirement(g, r, events) if r is not None else g
    diag = BuildDiagnostics()
    np = build_networked_plant(plant, events, cfg, diag)
    nevents = networked_events(events, cfg.enabling_forcible)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "np.tdes").write_text(emit_model(np, nevents))
        (out / "np.decode.json").write_text(decode_sidecar(np))
        unc = frozenset(e.name for e in nevents if not e.controllable)
        forc = frozenset(e.name for e in nevents if e.forcible)
        (out / "np.dot").write_text(to_dot(np, unc, forc))
    else:
        sys.stdout.write(emit_model(np, nevents))
    for w in diag.warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(f"networked plant: {len(np)} states, {len(np.transitions)} transitions", file=sys.stderr)
    return EXIT_OK


def cmd_synth(args) -> int:
    g, events, r = _load_pair(args)
    result = run_pipeline(g, events, _config(args), _options(args), r)
    result.report.header["depth"] = args.depth
    result.artifacts["report.json"] = result.report.to_json()
    if args.out:
        result.write(args.out)
    lines = result.outcome.log_lines()
    start = next(i for i, line in enumerate(lines) if line.startswith("result:"))
    for line in lines[start:]:
        print(line)
    for check in result.report.results:
        print(f"{check.check}: {check.verdict}")
    return result.exit_code


def cmd_verify(args) -> int:
    g, events, r = _load_pair(args)
    ns, _ = load_model(args.supervisor)
    cfg = _config(args)
    nsp, report = verify_supervisor(ns, g, events, cfg, r)
    report.header.update({k: v for k, v in header(cfg, _options(args), g, events).items()
                          if k.startswith("assumption")})
    report.header["depth"] = args.depth
    _emit(report.to_json(), args.output)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_simulate(args) -> int:
    g, events, r = _load_pair(args)
    ns, _ = load_model(args.supervisor)
    plant = plant_with_requirement(g, r, events) if r is not None else g
    sim = Simulator(ns, plant, events, _config(args))
    word = args.trace.split() if args.trace else []
    try:
        sim.run(word)
    finally:
        for line in sim.trace:
            print(line)
    print(f"enabled: {' '.join(sim.enabled())}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netsup", description="Networked supervisory control synthesis")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a model file")
    p.add_argument("--plant", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("project", help="natural projection onto a set of events")
    p.add_argument("--plant", required=True)
    p.add_argument("--events", required=True, help="comma-separated events to keep (tick is always kept)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("product", help="synchronous product of plant and requirement")
    p.add_argument("--plant", required=True)
    p.add_argument("--requirement", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("complete", help="complete a requirement with a dead state")
    p.add_argument("--requirement", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("netplant", help="build the networked plant")
    p.add_argument("--plant", required=True)
    p.add_argument("--requirement")
    p.add_argument("--out", help="directory for np.tdes, np.decode.json, np.dot")
    _network_flags(p)
    p.set_defaults(func=cmd_netplant)

    p = sub.add_parser("synth", help="synthesize and verify a networked supervisor")
    p.add_argument("--plant", required=True)
    p.add_argument("--requirement")
    p.add_argument("--out", help="artifact directory")
    _network_flags(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify", help="verify a given supervisor against a plant")
    p.add_argument("--plant", required=True)
    p.add_argument("--supervisor", required=True)
    p.add_argument("--requirement")
    p.add_argument("-o", "--output")
    _network_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="replay events on the supervised plant")
    p.add_argument("--plant", required=True)
    p.add_argument("--supervisor", required=True)
    p.add_argument("--requirement")
    p.add_argument("--trace", default="", help="space-separated events")
    _network_flags(p)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ModelParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (AssumptionError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
