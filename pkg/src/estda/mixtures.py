"""Finite mixtures of Gaussian or Student's t components fitted by EM.

Each EM step computes responsibilities under the current model, sets the new
weights to their column means, deletes components lighter than the weight
floor ``W`` (renormalizing the survivors), and then re-estimates the
surviving locations and scales.  The Student's t step down-weights points
far from a component through the factor ``(v + d) / (v + maha)``.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .distributions import EllipticalParams, regularize_scale
from .errors import DimensionError, NumericDegeneracyError

__all__ = [
    "GAUSSIAN",
    "STUDENT_T",
    "EmDiagnostics",
    "MixtureModel",
    "em_step",
    "em_step_gaussian",
    "em_step_student_t",
    "fit_mixture",
    "mixture_log_likelihood",
    "prune_components",
    "responsibilities",
    "sample_mixture",
]

log = logging.getLogger(__name__)

GAUSSIAN = "gaussian"
STUDENT_T = "student_t"
NORMALIZERS = ("standard", "as-printed")


@dataclass(frozen=True, eq=False)
class MixtureModel:
    """Weighted components of one family sharing the degrees of freedom."""

    family: str
    weights: np.ndarray
    components: tuple
    dof: float = np.inf

    def __post_init__(self):
        if self.family not in (GAUSSIAN, STUDENT_T):
            raise ValueError(f"unknown mixture family {self.family!r}")
        w = np.array(self.weights, dtype=float).reshape(-1)
        comps = tuple(self.components)
        if len(comps) == 0 or len(comps) != w.size:
            raise ValueError("need one weight per component and at least one component")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-9:
            raise ValueError(f"weights must be nonnegative and sum to 1, got {w}")
        dof = np.inf if self.family == GAUSSIAN else float(self.dof)
        if not dof > 0:
            raise ValueError(f"degrees of freedom must be positive, got {dof}")
        comps = tuple(
            c if c.dof == dof else EllipticalParams(c.mean, c.scale, dof) for c in comps
        )
        w = w / w.sum()
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "dof", dof)

    @property
    def n_components(self):
        return len(self.components)

    @property
    def dim(self):
        return self.components[0].dim

    def component_logpdf(self, X):
        """``(M, L)`` array of component log densities."""
        return np.column_stack([c.logpdf(X) for c in self.components])


@dataclass
class EmDiagnostics:
    """Flags raised while fitting; collected rather than raised."""

    underflow_rows: int = 0
    pruned: int = 0
    prune_fallbacks: int = 0
    replaced_components: int = 0
    loglik: list = field(default_factory=list)

    def merge(self, other):
        self.underflow_rows += other.underflow_rows
        self.pruned += other.pruned
        self.prune_fallbacks += other.prune_fallbacks
        self.replaced_components += other.replaced_components


def _as_samples(m, samples):
    X = np.atleast_2d(np.asarray(samples, dtype=float))
    if X.shape[1] != m.dim:
        raise DimensionError(f"expected samples of dimension {m.dim}, got {X.shape[1]}")
    if X.shape[0] == 0:
        raise DimensionError("samples must be nonempty")
    return X


def _responsibilities(m, X):
    """Return the responsibility table and the mask of fallback rows."""
    with np.errstate(divide="ignore"):
        logw = np.log(m.weights)
    joint = m.component_logpdf(X) + logw
    row_max = joint.max(axis=1, keepdims=True)
    bad = ~np.isfinite(row_max[:, 0])
    row_max[bad] = 0.0
    with np.errstate(invalid="ignore"):
        R = np.exp(joint - row_max)
        R /= R.sum(axis=1, keepdims=True)
    if np.any(bad):
        R[bad] = m.weights
    return R, bad


def responsibilities(m, samples):
    """Posterior component probabilities for each sample, one row per sample.

    Rows for which every weighted component density underflows fall back to
    the prior weights.
    """
    R, _ = _responsibilities(m, _as_samples(m, samples))
    return R


def _prune_mask(weights, W):
    keep = weights >= W
    fallback = not keep.any()
    if fallback:
        keep = np.zeros_like(keep)
        keep[int(np.argmax(weights))] = True
    return keep, fallback


def prune_components(m, W):
    """Drop components with weight below ``W`` and renormalize the rest.

    If every weight is below ``W`` the heaviest component is kept alone.
    """
    keep, fallback = _prune_mask(m.weights, W)
    if fallback:
        log.warning("all mixture weights below floor %g; keeping the heaviest component", W)
    if keep.all():
        return m
    w = m.weights[keep]
    comps = [c for c, k in zip(m.components, keep) if k]
    return MixtureModel(m.family, w / w.sum(), comps, m.dof)


def _scatter_fallback(X, dof):
    mu = X.mean(axis=0)
    D = X - mu
    return EllipticalParams(mu, regularize_scale(D.T @ D / X.shape[0]), dof)


def em_step(m, samples, W=0.02, normalizer="standard"):
    """One expectation step with pruning followed by one maximization step.

    Parameters
    ----------
    m : MixtureModel
    samples : (M, d) array
    W : float
        Weight floor for component deletion.
    normalizer : {"standard", "as-printed"}
        Denominator of the Gaussian location/scale updates.  ``"standard"``
        divides by the summed responsibilities of the component;
        ``"as-printed"`` divides by the sample count ``M``.

    Returns
    -------
    model : MixtureModel
    diag : EmDiagnostics
    """
    if normalizer not in NORMALIZERS:
        raise ValueError(f"normalizer must be one of {NORMALIZERS}, got {normalizer!r}")
    X = _as_samples(m, samples)
    M, d = X.shape
    diag = EmDiagnostics()

    R, bad = _responsibilities(m, X)
    diag.underflow_rows = int(bad.sum())
    w_new = R.mean(axis=0)
    keep, fallback = _prune_mask(w_new, W)
    diag.prune_fallbacks = int(fallback)
    diag.pruned = int((~keep).sum())
    idx = np.flatnonzero(keep)
    w_new = w_new[idx] / w_new[idx].sum()

    comps = []
    for l in idx:
        r = R[:, l]
        old = m.components[l]
        try:
            if m.family == GAUSSIAN:
                denom = r.sum() if normalizer == "standard" else M
                mu = r @ X / denom
                D = X - mu
                S = (D * r[:, None]).T @ D / denom
            else:
                v = m.dof
                u = (v + d) / (v + old.maha(X))
                ru = r * u
                mu = ru @ X / ru.sum()
                D = X - mu
                S = (D * ru[:, None]).T @ D / r.sum()
            new = EllipticalParams(mu, regularize_scale(S), m.dof)
            new.chol
        except (NumericDegeneracyError, FloatingPointError, ValueError):
            diag.replaced_components += 1
            new = _scatter_fallback(X, m.dof)
        comps.append(new)
    return MixtureModel(m.family, w_new, comps, m.dof), diag


def em_step_gaussian(m, samples, W=0.02, normalizer="standard"):
    if m.family != GAUSSIAN:
        raise ValueError("em_step_gaussian needs a Gaussian mixture")
    return em_step(m, samples, W, normalizer)[0]


def em_step_student_t(m, samples, W=0.02):
    if m.family != STUDENT_T:
        raise ValueError("em_step_student_t needs a Student's t mixture")
    return em_step(m, samples, W)[0]


def _max_rel_change(a, b):
    if a.n_components != b.n_components:
        return np.inf
    change = np.max(np.abs(a.weights - b.weights))
    for ca, cb in zip(a.components, b.components):
        for pa, pb in ((ca.mean, cb.mean), (ca.scale, cb.scale)):
            scale = max(np.max(np.abs(pa)), 1e-12)
            change = max(change, np.max(np.abs(pa - pb)) / scale)
    return change


def fit_mixture(m, samples, em_iters=2, W=0.02, normalizer="standard", tol=None, track=True):
    """Run ``em_iters`` EM steps, optionally stopping early on small changes.

    ``tol`` is a relative parameter-change threshold; ``None`` disables it.
    When ``track`` is set the returned diagnostics carry the log-likelihood
    before the first step and after each step.
    """
    if em_iters < 1:
        raise ValueError(f"em_iters must be at least 1, got {em_iters}")
    X = _as_samples(m, samples)
    diag = EmDiagnostics()
    if track:
        diag.loglik.append(mixture_log_likelihood(m, X))
    for _ in range(em_iters):
        new, step_diag = em_step(m, X, W, normalizer)
        diag.merge(step_diag)
        if track:
            diag.loglik.append(mixture_log_likelihood(new, X))
        converged = tol is not None and _max_rel_change(m, new) < tol
        m = new
        if converged:
            break
    return m, diag


def sample_mixture(m, rng, size=None):
    """Draw from the mixture; returns ``(X, labels)``.

    With ``size=None`` a single point is returned instead.
    """
    n = 1 if size is None else int(size)
    labels = rng.choice(m.n_components, size=n, p=m.weights)
    X = np.empty((n, m.dim))
    for l, comp in enumerate(m.components):
        rows = np.flatnonzero(labels == l)
        if rows.size:
            X[rows], _ = comp.sample(rng, rows.size)
    if size is None:
        return X[0]
    return X, labels


def mixture_log_likelihood(m, samples):
    X = _as_samples(m, samples)
    with np.errstate(divide="ignore"):
        logw = np.log(m.weights)
    return float(np.sum(logsumexp(m.component_logpdf(X) + logw, axis=1)))
