"""End-to-end run: plant (and optional requirement) to verified supervisor."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .composition import compose
from .dot import to_dot
from .events import TICK, EventTable
from .modelio import decode_sidecar, emit_model, networked_events
from .netplant import (BuildDiagnostics, NetworkConfig, build_networked_plant,
                       check_assumption1, check_assumption2, required_mmax)
from .synthesis import SynthesisOptions, SynthesisOutcome, synthesize
from .tdes import Tdes, complete, sync_product
from .verification import VerificationReport, verify_all

EXIT_OK, EXIT_FAIL, EXIT_NO_RESULT = 0, 1, 2


@dataclass
class PipelineResult:
    plant: Tdes
    np: Tdes
    outcome: SynthesisOutcome
    nsp: Tdes | None
    report: VerificationReport
    artifacts: dict[str, str] = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        if not self.outcome.found:
            return EXIT_NO_RESULT
        return EXIT_OK if self.report.passed else EXIT_FAIL

    def write(self, outdir) -> list[Path]:
        out = Path(outdir)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for name in sorted(self.artifacts):
            p = out / name
            p.write_text(self.artifacts[name])
            written.append(p)
        return written


def plant_with_requirement(g: Tdes, r: Tdes, events: EventTable) -> Tdes:
    """``G || R`` with ``R`` completed by a dead state."""
    extra = r.alphabet - g.alphabet
    if extra:
        raise ValueError(f"requirement uses events outside the plant: {sorted(extra)}")
    return sync_product(g, complete(r), name=f"{g.name}_{r.name}")


def _dot_for(t: Tdes, events: EventTable, nevents: EventTable) -> str:
    unc = frozenset(e.name for e in nevents if not e.controllable)
    forc = frozenset(e.name for e in nevents if e.forcible)
    return to_dot(t, unc, forc)


def header(cfg: NetworkConfig, opts: SynthesisOptions, g: Tdes, events: EventTable) -> dict:
    ok1, w1 = check_assumption1(g, events, cfg)
    need_l, ok2 = check_assumption2(g, events, cfg)
    need_m, okm = required_mmax(g, events, cfg)
    return {
        "plant": g.name,
        "config": cfg.as_dict(),
        "bad_set": opts.bad_set,
        "uncon_rule": opts.uncon_rule,
        "assumption_initial_ticks": {"ok": ok1, "witness": list(w1 or ())},
        "assumption_control_capacity": {"ok": ok2, "required_lmax": _num(need_l)},
        "observation_capacity": {"ok": okm, "required_mmax": _num(need_m)},
    }


def _num(x):
    return x if x != float("inf") else "inf"


def run_pipeline(g: Tdes, events: EventTable, cfg: NetworkConfig,
                 opts: SynthesisOptions | None = None, requirement: Tdes | None = None) -> PipelineResult:
    opts = opts or SynthesisOptions(enabling_forcible=cfg.enabling_forcible)
    plant = plant_with_requirement(g, requirement, events) if requirement is not None else g
    diag = BuildDiagnostics()
    np = build_networked_plant(plant, events, cfg, diag)
    outcome = synthesize(np, events, opts)
    nevents = networked_events(events, opts.enabling_forcible)

    report = VerificationReport(header(cfg, opts, plant, events))
    report.header["np_states"] = len(np)
    report.header["np_diagnostics"] = diag.as_dict()
    report.header["synthesis_iterations"] = len(outcome.iterations)
    report.header["result"] = "supervisor" if outcome.found else "no result"

    art: dict[str, str] = {}
    if requirement is not None:
        art["plant_requirement.tdes"] = emit_model(plant, events)
    art["np.tdes"] = emit_model(np, nevents)
    art["np.decode.json"] = decode_sidecar(np)
    art["np.dot"] = _dot_for(np, events, nevents)
    art["synthesis.log"] = "\n".join(outcome.log_lines()) + "\n"

    nsp = None
    if outcome.found:
        ns = outcome.supervisor
        comp_diag = BuildDiagnostics()
        nsp = compose(ns, plant, events, cfg, comp_diag)
        report.header["ns_states"] = len(ns)
        report.header["nsp_states"] = len(nsp)
        report.header["nsp_diagnostics"] = comp_diag.as_dict()
        report.results = verify_all(nsp, plant, events, opts.enabling_forcible, requirement)
        art["ns.tdes"] = emit_model(ns, nevents)
        art["ns.decode.json"] = decode_sidecar(ns)
        art["ns.dot"] = _dot_for(ns, events, nevents)
        art["nsp.tdes"] = emit_model(nsp, nevents)
        art["nsp.decode.json"] = decode_sidecar(nsp)
    art["report.json"] = report.to_json()
    return PipelineResult(plant, np, outcome, nsp, report, art)


def verify_supervisor(ns: Tdes, g: Tdes, events: EventTable, cfg: NetworkConfig,
                      requirement: Tdes | None = None) -> tuple[Tdes, VerificationReport]:
    plant = plant_with_requirement(g, requirement, events) if requirement is not None else g
    expected = events.supervisor_alphabet | {TICK}
    if not ns.alphabet <= expected:
        raise ValueError(f"supervisor alphabet has foreign events: {sorted(ns.alphabet - expected)}")
    nsp = compose(ns, plant, events, cfg)
    report = VerificationReport({"plant": plant.name, "supervisor": ns.name,
                                 "config": cfg.as_dict(), "nsp_states": len(nsp)})
    report.results = verify_all(nsp, plant, events, cfg.enabling_forcible, requirement)
    return nsp, report
