"""
Experiments
===========

Seeded experiment ensembles and result tables.
"""
from experiments.runner import (
    ExperimentConfig,
    derive_seed,
    emit_anytime_table,
    run_experiment,
    run_particle_sweep,
)

__all__ = ["ExperimentConfig", "derive_seed", "emit_anytime_table", "run_experiment", "run_particle_sweep"]
