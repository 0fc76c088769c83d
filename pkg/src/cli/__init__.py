"""Experiment specs, runner and the cogfeed CLI."""

from src.cli.experiments import ExperimentResult, manifest_hash, overlay_table, run_experiment
from src.cli.specs import ExperimentKind, ExperimentSpec, ParamOverrides, SweepGrid

__all__ = [
    "ExperimentKind",
    "ExperimentResult",
    "ExperimentSpec",
    "ParamOverrides",
    "SweepGrid",
    "manifest_hash",
    "overlay_table",
    "run_experiment",
]
