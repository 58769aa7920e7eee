"""Multivariate Gaussian and Student's t models.

Both families are represented by :class:`EllipticalParams`; ``dof=inf`` marks
the Gaussian.  A single Cholesky factor of the scale matrix is computed once
per parameter set and reused for sampling, Mahalanobis distances and the
log-determinant.

Student's t draws are generated as a gamma scale mixture of Gaussians,
``tau ~ Gamma(shape=v/2, rate=v/2)`` and ``x ~ N(mu, Sigma/tau)``, and the
``tau`` of every draw is returned so the weighted ML update can reuse it.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.linalg import solve_triangular
from scipy.special import gammaln

from .errors import DimensionError, InsufficientDataError, NumericDegeneracyError

__all__ = [
    "EllipticalParams",
    "ScaledDraw",
    "cholesky_factor",
    "fit_gaussian_ml",
    "fit_student_t_ml",
    "gaussian_log_density",
    "log_density",
    "mahalanobis_sq",
    "regularize_scale",
    "sample",
    "sample_gaussian",
    "sample_student_t",
    "student_t_log_density",
]

JITTER_REL = 1e-9
JITTER_FLOOR = 1e-12
RETRY_REL = 1e-6
_LOG_2PI = np.log(2 * np.pi)


def regularize_scale(S):
    """Symmetrize ``S`` and add a small multiple of the identity.

    The ridge is ``1e-9 * trace(S) / d``, floored at ``1e-12``.
    """
    S = np.atleast_2d(np.asarray(S, dtype=float))
    if not np.all(np.isfinite(S)):
        raise NumericDegeneracyError("scale matrix has non-finite entries")
    S = 0.5 * (S + S.T)
    d = S.shape[0]
    ridge = max(JITTER_REL * np.trace(S) / d, JITTER_FLOOR)
    return S + ridge * np.eye(d)


def cholesky_factor(S):
    """Lower Cholesky factor of ``S``, retrying once with a larger ridge."""
    S = np.atleast_2d(np.asarray(S, dtype=float))
    if not np.all(np.isfinite(S)):
        raise NumericDegeneracyError("scale matrix has non-finite entries")
    try:
        return np.linalg.cholesky(S)
    except np.linalg.LinAlgError:
        pass
    d = S.shape[0]
    ridge = max(RETRY_REL * abs(np.trace(S)) / d, RETRY_REL)
    try:
        return np.linalg.cholesky(S + ridge * np.eye(d))
    except np.linalg.LinAlgError as exc:
        raise NumericDegeneracyError("scale matrix is not positive definite") from exc


@dataclass(frozen=True, eq=False)
class EllipticalParams:
    """Location, scale matrix and degrees of freedom of an elliptical model.

    ``dof=np.inf`` denotes the Gaussian family.  Arrays are copied and made
    read-only on construction.
    """

    mean: np.ndarray
    scale: np.ndarray
    dof: float = np.inf

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(-1)
        scale = np.array(self.scale, dtype=float).reshape(mean.size, mean.size)
        if not (self.dof > 0):
            raise ValueError(f"degrees of freedom must be positive, got {self.dof}")
        if not np.all(np.isfinite(mean)):
            raise NumericDegeneracyError("mean has non-finite entries")
        mean.flags.writeable = False
        scale.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "dof", float(self.dof))

    @property
    def dim(self):
        return self.mean.size

    @property
    def is_gaussian(self):
        return np.isinf(self.dof)

    @cached_property
    def chol(self):
        L = cholesky_factor(self.scale)
        L.flags.writeable = False
        return L

    @cached_property
    def log_det(self):
        return 2.0 * float(np.sum(np.log(np.diag(self.chol))))

    def maha(self, X):
        """Squared Mahalanobis distances of the rows of ``X``."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.dim:
            raise DimensionError(f"expected points of dimension {self.dim}, got {X.shape[1]}")
        if not np.all(np.isfinite(X)):
            raise NumericDegeneracyError("points have non-finite entries")
        Z = solve_triangular(self.chol, (X - self.mean).T, lower=True, check_finite=False)
        with np.errstate(over="ignore"):  # very distant points give +inf
            return np.sum(Z**2, axis=0)

    def logpdf(self, X):
        """Log density at the rows of ``X``."""
        m = self.maha(X)
        d = self.dim
        if self.is_gaussian:
            return -0.5 * (d * _LOG_2PI + self.log_det + m)
        v = self.dof
        return (
            gammaln(0.5 * (v + d))
            - gammaln(0.5 * v)
            - 0.5 * d * np.log(np.pi * v)
            - 0.5 * self.log_det
            - 0.5 * (v + d) * np.log1p(m / v)
        )

    def sample(self, rng, size, tau_rng=None):
        """Draw ``size`` points; returns ``(X, tau)``.

        ``tau`` is all ones for the Gaussian family.  The gamma scales come
        from ``tau_rng`` when given, so that the normal draws of a t sampler
        can share a stream with a Gaussian sampler.
        """
        Z = rng.standard_normal((size, self.dim))
        if self.is_gaussian:
            tau = np.ones(size)
        else:
            half = 0.5 * self.dof
            tau = (rng if tau_rng is None else tau_rng).gamma(shape=half, scale=1.0 / half, size=size)
        X = self.mean + (Z @ self.chol.T) / np.sqrt(tau)[:, None]
        return X, tau


@dataclass(frozen=True)
class ScaledDraw:
    point: np.ndarray
    gamma_scale: float

    def __post_init__(self):
        if not (self.gamma_scale > 0):
            raise ValueError(f"gamma scale must be positive, got {self.gamma_scale}")


def mahalanobis_sq(x, mu, scale):
    """``(x - mu)^T scale^{-1} (x - mu)`` via a Cholesky solve."""
    x = np.asarray(x, dtype=float)
    p = EllipticalParams(mu, scale)
    if x.shape != p.mean.shape:
        raise DimensionError(f"point shape {x.shape} does not match mean shape {p.mean.shape}")
    return float(p.maha(x[None, :])[0])


def gaussian_log_density(x, p):
    if not p.is_gaussian:
        raise ValueError("gaussian_log_density needs dof=inf")
    return float(p.logpdf(np.asarray(x, dtype=float)[None, :])[0])


def student_t_log_density(x, p):
    if p.is_gaussian:
        raise ValueError("student_t_log_density needs a finite dof")
    return float(p.logpdf(np.asarray(x, dtype=float)[None, :])[0])


def log_density(x, p):
    """Log density of either family, vectorized over rows of ``x``."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        return float(p.logpdf(x[None, :])[0])
    return p.logpdf(x)


def sample(p, rng, size):
    return p.sample(rng, size)


def sample_gaussian(p, rng):
    if not p.is_gaussian:
        raise ValueError("sample_gaussian needs dof=inf")
    X, _ = p.sample(rng, 1)
    return X[0]


def sample_student_t(p, rng):
    if p.is_gaussian:
        raise ValueError("sample_student_t needs a finite dof")
    X, tau = p.sample(rng, 1)
    return ScaledDraw(X[0], float(tau[0]))


def _as_samples(samples):
    X = np.asarray(samples, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise DimensionError(f"samples must be a 2-D array, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise NumericDegeneracyError("samples have non-finite entries")
    return X


def fit_gaussian_ml(samples):
    """Sample mean and unbiased (``M - 1``) scatter of ``samples``."""
    X = _as_samples(samples)
    M = X.shape[0]
    if M < 2:
        raise InsufficientDataError(f"need at least 2 samples, got {M}")
    mu = X.mean(axis=0)
    D = X - mu
    return EllipticalParams(mu, regularize_scale(D.T @ D / (M - 1)))


def fit_student_t_ml(draws, v, gamma_scales=None):
    """Gamma-weighted mean and scatter of recorded t draws.

    Parameters
    ----------
    draws : sequence of ScaledDraw, or array of points
        When an array is passed, ``gamma_scales`` must hold the matching
        ``tau`` values.
    v : float
        Degrees of freedom of the returned model (not re-estimated).
    """
    if gamma_scales is None:
        X = _as_samples([dr.point for dr in draws])
        tau = np.array([dr.gamma_scale for dr in draws], dtype=float)
    else:
        X = _as_samples(draws)
        tau = np.asarray(gamma_scales, dtype=float)
    if tau.shape != (X.shape[0],):
        raise DimensionError("need one gamma scale per draw")
    if X.shape[0] < 2:
        raise InsufficientDataError(f"need at least 2 draws, got {X.shape[0]}")
    total = tau.sum()
    if not np.all(np.isfinite(tau)) or np.any(tau < 0) or not total > 0:
        raise NumericDegeneracyError("gamma scales must be finite, nonnegative and not all zero")
    mu = tau @ X / total
    D = X - mu
    S = (D * tau[:, None]).T @ D / total
    return EllipticalParams(mu, regularize_scale(S), v)
