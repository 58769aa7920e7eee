"""The generic EDA loop and its four model variants.

Every iteration samples ``N`` individuals from the current model, evaluates
them, updates the best-so-far solution, keeps the ``M`` best (truncation
selection) and refits the model to them:

* ``gaussian_eda``: single Gaussian, sample mean and covariance;
* ``estda``: single Student's t, weighted by the recorded gamma scales;
* ``gmm_eda``: Gaussian mixture, EM with component deletion;
* ``emstda``: Student's t mixture, EM with component deletion.
"""

import dataclasses
import logging
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import mixtures
from .distributions import EllipticalParams, fit_gaussian_ml, fit_student_t_ml
from .errors import ConfigError, DegeneratePopulationError, EdaError, RunFailure
from .mixtures import MixtureModel, fit_mixture, sample_mixture

__all__ = [
    "ALGORITHMS",
    "EdaConfig",
    "RunRecord",
    "RunState",
    "check_model",
    "draw_population",
    "eda_iterate",
    "initialize_model",
    "initialize_state",
    "run_eda",
    "seeded_streams",
    "truncation_select",
]

log = logging.getLogger(__name__)

ALGORITHMS = ("estda", "emstda", "gaussian_eda", "gmm_eda")
MIXTURE_ALGORITHMS = ("gmm_eda", "emstda")
BOUNDS_POLICIES = ("resample", "clamp")
INIT_MEANS = ("center", "uniform")


@dataclass(frozen=True)
class EdaConfig:
    """Hyperparameters of one EDA run.

    The defaults are the two-dimensional settings of the reference
    experiments: ``N=1000``, ``M=200``, ``v=5``, 50 iterations, two EM steps
    per iteration and weight floor 0.02.
    """

    algorithm: str = "estda"
    population_size: int = 1000
    selection_size: int = 200
    dof: float = 5.0
    initial_components: int = 5
    weight_floor: float = 0.02
    max_iterations: int = 50
    em_iterations: int = 2
    seed: int = 0
    bounds_policy: str = "resample"
    max_resample: int = 10
    em_normalizer: str = "standard"
    em_tol: Optional[float] = None
    init_mean: str = "center"
    init_width_fraction: float = 0.25

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")
        for name in ("population_size", "selection_size", "initial_components",
                     "max_iterations", "em_iterations"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be at least 1, got {getattr(self, name)}")
        if self.selection_size >= self.population_size:
            raise ConfigError(
                f"selection size M={self.selection_size} must be smaller than "
                f"population size N={self.population_size}"
            )
        if not self.dof > 0:
            raise ConfigError(f"dof must be positive, got {self.dof}")
        if not 0 < self.weight_floor < 1:
            raise ConfigError(f"weight floor must lie in (0, 1), got {self.weight_floor}")
        if self.weight_floor * self.initial_components > 1:
            raise ConfigError(
                f"weight floor {self.weight_floor} times {self.initial_components} components "
                "exceeds 1; every component would be deleted"
            )
        if self.bounds_policy not in BOUNDS_POLICIES:
            raise ConfigError(f"bounds policy must be one of {BOUNDS_POLICIES}")
        if self.em_normalizer not in mixtures.NORMALIZERS:
            raise ConfigError(f"EM normalizer must be one of {mixtures.NORMALIZERS}")
        if self.init_mean not in INIT_MEANS:
            raise ConfigError(f"init_mean must be one of {INIT_MEANS}")
        if not self.init_width_fraction > 0:
            raise ConfigError("init_width_fraction must be positive")

    @property
    def is_mixture(self):
        return self.algorithm in MIXTURE_ALGORITHMS

    @property
    def uses_t(self):
        return self.algorithm in ("estda", "emstda")

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def to_dict(self):
        return dataclasses.asdict(self)


@dataclass
class RunState:
    model: object
    best_point: np.ndarray
    best_value: float
    iteration: int = 0
    survival_components: int = 1
    selected_points: Optional[np.ndarray] = field(default=None, repr=False)


@dataclass
class RunRecord:
    """Outcome of one run: per-iteration traces and the final best solution."""

    algorithm: str
    function: str
    dimension: int
    seed: int
    config: dict
    best_value_trace: np.ndarray
    survival_component_trace: np.ndarray
    final_best_point: np.ndarray
    final_best_value: float
    duration: float = 0.0
    failed: bool = False
    error: Optional[str] = None

    def to_dict(self):
        return {
            "algorithm": self.algorithm,
            "function": self.function,
            "dimension": self.dimension,
            "seed": self.seed,
            "config": self.config,
            "best_value_trace": [float(v) for v in self.best_value_trace],
            "survival_component_trace": [int(v) for v in self.survival_component_trace],
            "final_best_point": [float(v) for v in self.final_best_point],
            "final_best_value": float(self.final_best_value),
            "duration": self.duration,
            "failed": self.failed,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        data["best_value_trace"] = np.asarray(data["best_value_trace"], dtype=float)
        data["survival_component_trace"] = np.asarray(data["survival_component_trace"], dtype=int)
        data["final_best_point"] = np.asarray(data["final_best_point"], dtype=float)
        return cls(**data)


def _box_widths(fn):
    return np.asarray(fn.upper_bounds, dtype=float) - np.asarray(fn.lower_bounds, dtype=float)


def initialize_model(cfg, fn, rng):
    """Starting model for ``cfg.algorithm`` on the search box of ``fn``.

    Single models are centred in the box (or placed uniformly at random with
    ``init_mean="uniform"``) with per-axis standard deviation
    ``init_width_fraction`` times the box width, a quarter by default.
    Mixtures place ``L`` equally weighted components uniformly in the box,
    shrinking the per-axis spread by ``L ** (1/d)``.
    """
    lo = np.asarray(fn.lower_bounds, dtype=float)
    hi = np.asarray(fn.upper_bounds, dtype=float)
    d = lo.size
    dof = cfg.dof if cfg.uses_t else np.inf
    sd = _box_widths(fn) * cfg.init_width_fraction
    if not cfg.is_mixture:
        mean = (lo + hi) / 2 if cfg.init_mean == "center" else rng.uniform(lo, hi)
        return EllipticalParams(mean, np.diag(sd**2), dof)
    L = cfg.initial_components
    means = rng.uniform(lo, hi, size=(L, d))
    scale = np.diag((sd / L ** (1.0 / d)) ** 2)
    family = mixtures.STUDENT_T if cfg.uses_t else mixtures.GAUSSIAN
    comps = [EllipticalParams(mu, scale, dof) for mu in means]
    return MixtureModel(family, np.full(L, 1.0 / L), comps, dof)


def _draw(model, rng, n, tau_rng):
    if isinstance(model, MixtureModel):
        X, _ = sample_mixture(model, rng, n)
        return X, np.ones(n)
    return model.sample(rng, n, tau_rng)


def draw_population(model, fn, rng, n, policy="resample", max_resample=10, tau_rng=None):
    """Draw ``n`` individuals and bring them inside the box of ``fn``.

    With ``policy="resample"`` out-of-box individuals are redrawn up to
    ``max_resample`` times before being clamped.  Returns ``(X, tau)``; a
    clamped individual keeps the gamma scale of its last draw.  Gamma scales
    of a single t model are drawn from ``tau_rng`` when it is given.
    """
    lo = np.asarray(fn.lower_bounds, dtype=float)
    hi = np.asarray(fn.upper_bounds, dtype=float)
    X, tau = _draw(model, rng, n, tau_rng)
    if policy == "resample":
        for _ in range(max_resample):
            out = np.flatnonzero(np.any((X < lo) | (X > hi), axis=1))
            if out.size == 0:
                break
            X[out], tau[out] = _draw(model, rng, out.size, tau_rng)
    np.clip(X, lo, hi, out=X)
    return X, tau


def truncation_select(points, values, M):
    """Indices, points and values of the ``M`` smallest objective values.

    Output is sorted ascending by value; ties go to the lower draw index.
    Non-finite values are treated as ``+inf``.
    """
    points = np.asarray(points, dtype=float)
    values = np.asarray(values, dtype=float)
    if values.shape[0] != points.shape[0]:
        raise ValueError("points and values must have the same length")
    if M > values.size:
        raise ValueError(f"cannot select {M} of {values.size} individuals")
    finite = np.isfinite(values)
    if finite.sum() < M:
        raise DegeneratePopulationError(
            f"only {int(finite.sum())} finite objective values, need {M}"
        )
    keyed = np.where(finite, values, np.inf)
    idx = np.argsort(keyed, kind="stable")[:M]
    return points[idx], values[idx], idx


def check_model(model):
    """True if every location and scale is finite and the scales are PD."""
    comps = model.components if isinstance(model, MixtureModel) else (model,)
    for c in comps:
        if not (np.all(np.isfinite(c.mean)) and np.all(np.isfinite(c.scale))):
            return False
        if np.any(np.linalg.eigvalsh(c.scale) <= 0):
            return False
    return True


def _n_components(model):
    return model.n_components if isinstance(model, MixtureModel) else 1


def initialize_state(cfg, fn, rng, tau_rng=None):
    model = initialize_model(cfg, fn, rng)
    X, _ = draw_population(model, fn, rng, 1, cfg.bounds_policy, cfg.max_resample, tau_rng)
    value = float(fn.evaluate_batch(X)[0])
    if not np.isfinite(value):
        value = np.inf
    return RunState(model, X[0], value, 0, _n_components(model))


def _refit(state, cfg, X_sel, tau_sel):
    if cfg.algorithm == "gaussian_eda":
        return fit_gaussian_ml(X_sel)
    if cfg.algorithm == "estda":
        return fit_student_t_ml(X_sel, cfg.dof, tau_sel)
    model, _ = fit_mixture(
        state.model, X_sel, cfg.em_iterations, cfg.weight_floor,
        cfg.em_normalizer, tol=cfg.em_tol, track=False,
    )
    return model


def eda_iterate(state, cfg, fn, rng, tau_rng=None):
    """One sample-evaluate-select-refit cycle; returns the next state."""
    X, tau = draw_population(
        state.model, fn, rng, cfg.population_size, cfg.bounds_policy, cfg.max_resample,
        tau_rng,
    )
    y = fn.evaluate_batch(X)
    X_sel, y_sel, idx = truncation_select(X, y, cfg.selection_size)
    best_point, best_value = state.best_point, state.best_value
    if y_sel[0] < best_value:
        best_point, best_value = X_sel[0].copy(), float(y_sel[0])
    model = _refit(state, cfg, X_sel, tau[idx])
    return RunState(
        model=model,
        best_point=best_point,
        best_value=best_value,
        iteration=state.iteration + 1,
        survival_components=_n_components(model),
        selected_points=X_sel,
    )


def seeded_streams(seed):
    """Main and gamma-scale generators derived from one seed.

    Keeping the gamma draws on their own stream means a t-based run and a
    Gaussian run with the same seed see the same normal draws.
    """
    main, aux = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(main), np.random.default_rng(aux)


def run_eda(cfg, fn, callback=None):
    """Run ``cfg.max_iterations`` iterations from streams seeded by ``cfg.seed``.

    ``callback(state)`` is invoked after every iteration.  A failing
    iteration ends the run early; the returned record is marked failed and
    holds the partial traces.
    """
    if cfg.selection_size < 2:
        raise ConfigError("selection size must be at least 2 to refit a model")
    rng, tau_rng = seeded_streams(cfg.seed)
    start = time.perf_counter()
    best_trace, comp_trace = [], []
    failed, error = False, None
    state = initialize_state(cfg, fn, rng, tau_rng)
    for k in range(cfg.max_iterations):
        try:
            state = eda_iterate(state, cfg, fn, rng, tau_rng)
        except (EdaError, np.linalg.LinAlgError, FloatingPointError) as exc:
            failure = RunFailure(str(exc), k + 1)
            log.warning("%s on %s (seed %d) failed: %s", cfg.algorithm, fn.name, cfg.seed, failure)
            failed, error = True, str(failure)
            break
        best_trace.append(state.best_value)
        comp_trace.append(state.survival_components)
        if callback is not None:
            callback(state)
    return RunRecord(
        algorithm=cfg.algorithm,
        function=fn.name,
        dimension=fn.dimension,
        seed=cfg.seed,
        config=cfg.to_dict(),
        best_value_trace=np.asarray(best_trace, dtype=float),
        survival_component_trace=np.asarray(comp_trace, dtype=int),
        final_best_point=np.asarray(state.best_point, dtype=float),
        final_best_value=float(state.best_value),
        duration=time.perf_counter() - start,
        failed=failed,
        error=error,
    )
