"""Benchmark objective functions for global minimization.

Every function is implemented in batch form: it takes an ``(n, d)`` array and
returns ``n`` values.  :func:`evaluate` wraps the batch form for one point.

The registry covers seventeen functions.  Most of them are two dimensional;
Ackley, Rastrigin, Michalewicz, Griewank, Levy, Schwefel, Perm and Rosenbrock
accept any dimension.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DimensionError

__all__ = [
    "BenchmarkFunction",
    "FUNCTION_NAMES",
    "PRESET_DIMENSIONS",
    "bounds",
    "catalog",
    "evaluate",
    "get_function",
    "known_optimum",
]


@dataclass(frozen=True)
class BenchmarkFunction:
    """A named objective with its search box and documented optimum.

    ``known_min_value`` is ``None`` for dimensions where no reference optimum
    is tabulated (e.g. Michalewicz in 3D).
    """

    name: str
    dimension: int
    lower_bounds: np.ndarray
    upper_bounds: np.ndarray
    known_min_value: Optional[float]
    known_min_points: tuple = ()
    batch: Callable[[np.ndarray], np.ndarray] = field(repr=False, default=None)

    def __call__(self, x):
        return evaluate(self, x)

    def evaluate_batch(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.dimension:
            raise DimensionError(
                f"{self.name} expects points of dimension {self.dimension}, "
                f"got array of shape {X.shape}"
            )
        return self.batch(X)


def ackley(X, a=20.0, b=0.2, c=2 * np.pi):
    d = X.shape[1]
    r = np.sqrt(np.sum(X**2, axis=1) / d)
    s = np.sum(np.cos(c * X), axis=1) / d
    return -a * np.exp(-b * r) - np.exp(s) + a + np.e


# Shekel's foxholes: 5x5 grid with spacing 16.
_DEJONG_A1 = np.tile([-32.0, -16.0, 0.0, 16.0, 32.0], 5)
_DEJONG_A2 = np.repeat([-32.0, -16.0, 0.0, 16.0, 32.0], 5)


def dejong5(X):
    i = np.arange(1, 26)
    terms = 1.0 / (
        i
        + (X[:, :1] - _DEJONG_A1) ** 6
        + (X[:, 1:2] - _DEJONG_A2) ** 6
    )
    return 1.0 / (0.002 + terms.sum(axis=1))


def easom(X):
    x1, x2 = X[:, 0], X[:, 1]
    return -np.cos(x1) * np.cos(x2) * np.exp(-((x1 - np.pi) ** 2) - (x2 - np.pi) ** 2)


def rastrigin(X):
    d = X.shape[1]
    return 10.0 * d + np.sum(X**2 - 10.0 * np.cos(2 * np.pi * X), axis=1)


def michalewicz(X, m=10):
    i = np.arange(1, X.shape[1] + 1)
    return -np.sum(np.sin(X) * np.sin(i * X**2 / np.pi) ** (2 * m), axis=1)


def levy13(X):
    x1, x2 = X[:, 0], X[:, 1]
    return (
        np.sin(3 * np.pi * x1) ** 2
        + (x1 - 1) ** 2 * (1 + np.sin(3 * np.pi * x2) ** 2)
        + (x2 - 1) ** 2 * (1 + np.sin(2 * np.pi * x2) ** 2)
    )


def crossintray(X):
    x1, x2 = X[:, 0], X[:, 1]
    g = np.sin(x1) * np.sin(x2) * np.exp(np.abs(100.0 - np.hypot(x1, x2) / np.pi))
    return -0.0001 * (np.abs(g) + 1.0) ** 0.1


def dropwave(X):
    r2 = X[:, 0] ** 2 + X[:, 1] ** 2
    return -(1.0 + np.cos(12.0 * np.sqrt(r2))) / (0.5 * r2 + 2.0)


def eggholder(X):
    x1, x2 = X[:, 0], X[:, 1]
    return -(x2 + 47.0) * np.sin(np.sqrt(np.abs(x2 + x1 / 2.0 + 47.0))) - x1 * np.sin(
        np.sqrt(np.abs(x1 - (x2 + 47.0)))
    )


def griewank(X):
    i = np.arange(1, X.shape[1] + 1)
    return np.sum(X**2, axis=1) / 4000.0 - np.prod(np.cos(X / np.sqrt(i)), axis=1) + 1.0


def holdertable(X):
    x1, x2 = X[:, 0], X[:, 1]
    return -np.abs(
        np.sin(x1) * np.cos(x2) * np.exp(np.abs(1.0 - np.hypot(x1, x2) / np.pi))
    )


def levy(X):
    w = 1.0 + (X - 1.0) / 4.0
    head = np.sin(np.pi * w[:, 0]) ** 2
    mid = np.sum((w[:, :-1] - 1) ** 2 * (1 + 10 * np.sin(np.pi * w[:, :-1] + 1) ** 2), axis=1)
    tail = (w[:, -1] - 1) ** 2 * (1 + np.sin(2 * np.pi * w[:, -1]) ** 2)
    return head + mid + tail


def schaffer2(X):
    x1, x2 = X[:, 0], X[:, 1]
    num = np.sin(x1**2 - x2**2) ** 2 - 0.5
    return 0.5 + num / (1.0 + 0.001 * (x1**2 + x2**2)) ** 2


def schwefel(X):
    d = X.shape[1]
    return 418.9829 * d - np.sum(X * np.sin(np.sqrt(np.abs(X))), axis=1)


def shubert(X):
    i = np.arange(1, 6)
    s1 = np.sum(i * np.cos((i + 1) * X[:, :1] + i), axis=1)
    s2 = np.sum(i * np.cos((i + 1) * X[:, 1:2] + i), axis=1)
    return s1 * s2


def perm0db(X, beta=10.0):
    d = X.shape[1]
    j = np.arange(1, d + 1, dtype=float)
    total = np.zeros(X.shape[0])
    for i in range(1, d + 1):
        inner = np.sum((j + beta) * (X**i - 1.0 / j**i), axis=1)
        total += inner**2
    return total


def rosenbrock(X):
    return np.sum(100.0 * (X[:, 1:] - X[:, :-1] ** 2) ** 2 + (X[:, :-1] - 1) ** 2, axis=1)


def _box(lo, hi, d):
    return np.full(d, float(lo)), np.full(d, float(hi))


def _fixed_2d(name, d):
    if d != 2:
        raise DimensionError(f"{name} is only defined in two dimensions, got d={d}")


_MICHALEWICZ_MIN = {2: -1.8013, 5: -4.687658, 10: -9.66015}
_QUAD = np.array([[1, 1], [1, -1], [-1, 1], [-1, -1]], dtype=float)


def _build(name, d, perm_beta=10.0, michalewicz_m=10):
    """Return (batch, lower, upper, fmin, points) for ``name`` in dimension ``d``."""
    zeros = (np.zeros(d),)
    ones = (np.ones(d),)
    if name == "ackley":
        return (ackley, *_box(-32.768, 32.768, d), 0.0, zeros)
    if name == "dejong5":
        _fixed_2d(name, d)
        return (dejong5, *_box(-65.536, 65.536, d), 0.998003838, (np.array([-32.0, -32.0]),))
    if name == "easom":
        _fixed_2d(name, d)
        return (easom, *_box(-100, 100, d), -1.0, (np.array([np.pi, np.pi]),))
    if name == "rastrigin":
        return (rastrigin, *_box(-5.12, 5.12, d), 0.0, zeros)
    if name == "michalewicz":
        pts = (np.array([2.20, 1.57]),) if d == 2 else ()

        def batch(X):
            return michalewicz(X, m=michalewicz_m)

        return (batch, *_box(0.0, np.pi, d), _MICHALEWICZ_MIN.get(d), pts)
    if name == "levy13":
        _fixed_2d(name, d)
        return (levy13, *_box(-10, 10, d), 0.0, ones)
    if name == "crossintray":
        _fixed_2d(name, d)
        return (crossintray, *_box(-10, 10, d), -2.06261, tuple(1.3491 * _QUAD))
    if name == "dropwave":
        _fixed_2d(name, d)
        return (dropwave, *_box(-5.12, 5.12, d), -1.0, zeros)
    if name == "eggholder":
        _fixed_2d(name, d)
        return (eggholder, *_box(-512, 512, d), -959.6407, (np.array([512.0, 404.2319]),))
    if name == "griewank":
        return (griewank, *_box(-600, 600, d), 0.0, zeros)
    if name == "holdertable":
        _fixed_2d(name, d)
        pts = tuple(_QUAD * np.array([8.05502, 9.66459]))
        return (holdertable, *_box(-10, 10, d), -19.2085, pts)
    if name == "levy":
        return (levy, *_box(-10, 10, d), 0.0, ones)
    if name == "schaffer2":
        _fixed_2d(name, d)
        return (schaffer2, *_box(-100, 100, d), 0.0, zeros)
    if name == "schwefel":
        return (schwefel, *_box(-500, 500, d), 0.0, (np.full(d, 420.9687),))
    if name == "shubert":
        _fixed_2d(name, d)
        return (shubert, *_box(-10, 10, d), -186.7309, ())
    if name == "perm0db":

        def batch(X):
            return perm0db(X, beta=perm_beta)

        return (batch, *_box(-d, d, d), 0.0, (1.0 / np.arange(1, d + 1),))
    if name == "rosenbrock":
        return (rosenbrock, *_box(-5, 10, d), 0.0, ones)
    raise KeyError(f"unknown benchmark function {name!r}; choose from {', '.join(FUNCTION_NAMES)}")


FUNCTION_NAMES = (
    "ackley",
    "dejong5",
    "easom",
    "rastrigin",
    "michalewicz",
    "levy13",
    "crossintray",
    "dropwave",
    "eggholder",
    "griewank",
    "holdertable",
    "levy",
    "schaffer2",
    "schwefel",
    "shubert",
    "perm0db",
    "rosenbrock",
)

# Dimensions used by the experiment presets.
PRESET_DIMENSIONS = {name: (2,) for name in FUNCTION_NAMES}
PRESET_DIMENSIONS["rastrigin"] = (2, 5, 10)
PRESET_DIMENSIONS["michalewicz"] = (2, 5, 10)


def get_function(name, dimension=2, *, perm_beta=10.0, michalewicz_m=10):
    """Build a :class:`BenchmarkFunction` by its lowercase identifier.

    Parameters
    ----------
    name : str
        One of :data:`FUNCTION_NAMES`.
    dimension : int
        Problem dimension.  Fixed two-dimensional functions reject anything
        other than 2.
    perm_beta : float
        The ``beta`` constant of the Perm 0,d,beta function.
    michalewicz_m : int
        Steepness parameter of the Michalewicz function.
    """
    if dimension < 1:
        raise DimensionError(f"dimension must be positive, got {dimension}")
    batch, lo, hi, fmin, pts = _build(name, int(dimension), perm_beta, michalewicz_m)
    return BenchmarkFunction(
        name=name,
        dimension=int(dimension),
        lower_bounds=lo,
        upper_bounds=hi,
        known_min_value=fmin,
        known_min_points=tuple(np.asarray(p, dtype=float) for p in pts),
        batch=batch,
    )


def evaluate(fn, x):
    """Evaluate ``fn`` at a single point and return a float."""
    x = np.asarray(x, dtype=float)
    if x.shape != (fn.dimension,):
        raise DimensionError(
            f"{fn.name} expects a vector of length {fn.dimension}, got shape {x.shape}"
        )
    return float(fn.batch(x[None, :])[0])


def bounds(fn):
    return fn.lower_bounds.copy(), fn.upper_bounds.copy()


def known_optimum(fn):
    return fn.known_min_value, [p.copy() for p in fn.known_min_points]


def catalog():
    """List ``(name, preset dimensions)`` for every registered function."""
    return [(name, PRESET_DIMENSIONS[name]) for name in FUNCTION_NAMES]
