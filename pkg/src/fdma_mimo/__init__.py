"""Sparse recovery for FDMA MIMO pulse-Doppler radar."""

from .config import RadarConfig, SynthesisMode, Target, TargetScene, build_config, validate_config
from .dictionaries import build_dictionaries
from .harness import ExperimentSpec, HitReport, run_experiment
from .recovery import RecoveryResult, omp2d, omp3d, recover

__all__ = [
    "RadarConfig", "SynthesisMode", "Target", "TargetScene", "build_config", "validate_config",
    "build_dictionaries", "ExperimentSpec", "HitReport", "run_experiment",
    "RecoveryResult", "omp2d", "omp3d", "recover",
]

__version__ = "0.1.0"
