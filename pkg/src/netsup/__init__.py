"""Networked supervisory control synthesis for timed discrete-event systems."""
from .channels import ControlChannel, ObservationChannel
from .composition import NspState, Simulator, compose, simulate_step
from .events import TICK, Event, EventTable
from .modelio import (ModelParseError, emit_model, load_model, networked_events,
                      parse_model, save_model)
from .netplant import (TICK_RULES, AssumptionError, NetworkConfig, NpState,
                       build_networked_plant, check_assumption1,
                       check_assumption2, required_mmax)
from .observation import ObsRelation, obs_relation
from .pipeline import run_pipeline, verify_supervisor
from .synthesis import SynthesisOptions, SynthesisOutcome, synthesize
from .tdes import (Tdes, complete, is_nonblocking, is_timelock_free,
                   language_equal, language_included, minimize,
                   natural_projection, sync_product)
from .verification import (VerificationReport, oracle_max_permissive,
                           verify_controllability, verify_nonblocking,
                           verify_all, verify_safety, verify_tlf)

__version__ = "0.1.0"
