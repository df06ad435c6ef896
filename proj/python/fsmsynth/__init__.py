"""Guarded-FSM synthesis from LTL specifications and test scenarios."""

from ._fsmsynth import (
    Alphabet,
    ConformanceResult,
    Formula,
    Fsm,
    ParseError,
    Scenario,
    ScenarioStep,
    SynthesisResult,
    ValidationError,
    Verdict,
    check,
    fsm_from_json,
    generate_contract,
    load_ltl,
    parse_ltl,
    parse_scenarios,
    run_scenario,
    synthesize,
    validate_fsm,
)

__all__ = [
    "Alphabet",
    "ConformanceResult",
    "Formula",
    "Fsm",
    "ParseError",
    "Scenario",
    "ScenarioStep",
    "SynthesisResult",
    "ValidationError",
    "Verdict",
    "check",
    "fsm_from_json",
    "generate_contract",
    "load_ltl",
    "parse_ltl",
    "parse_scenarios",
    "run_scenario",
    "synthesize",
    "validate_fsm",
]
