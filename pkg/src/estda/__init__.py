"""Estimation-of-distribution algorithms with Gaussian and Student's t models.

Four optimizers share one loop (:func:`estda.engine.run_eda`):
``gaussian_eda``, ``gmm_eda``, ``estda`` and ``emstda``.  Benchmark problems
live in :mod:`estda.objectives` and batch experiments in
:mod:`estda.harness`.
"""

from .distributions import EllipticalParams, fit_gaussian_ml, fit_student_t_ml
from .engine import ALGORITHMS, EdaConfig, RunRecord, run_eda
from .errors import (
    ConfigError,
    DegeneratePopulationError,
    DimensionError,
    EdaError,
    InsufficientDataError,
    NumericDegeneracyError,
)
from .mixtures import MixtureModel, fit_mixture
from .objectives import FUNCTION_NAMES, get_function

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "ConfigError",
    "DegeneratePopulationError",
    "DimensionError",
    "EdaConfig",
    "EdaError",
    "EllipticalParams",
    "FUNCTION_NAMES",
    "InsufficientDataError",
    "MixtureModel",
    "NumericDegeneracyError",
    "RunRecord",
    "fit_gaussian_ml",
    "fit_mixture",
    "fit_student_t_ml",
    "get_function",
    "run_eda",
]
