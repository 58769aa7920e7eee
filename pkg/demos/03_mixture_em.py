"""Fitting a t mixture by EM, and watching light components disappear.

We start with four components for data that only has two clusters.  After
each EM step, components whose weight drops under the floor W are deleted
and the remaining weights renormalized.
"""
import numpy as np

from estda.distributions import EllipticalParams
from estda.mixtures import STUDENT_T, MixtureModel, em_step, mixture_log_likelihood

rng = np.random.default_rng(1)
X = np.vstack([
    rng.standard_t(4, size=(300, 2)) + [-4.0, 0.0],
    rng.standard_t(4, size=(300, 2)) + [4.0, 1.0],
])

starts = [[-3.0, 1.0], [3.0, -1.0], [0.0, 8.0], [9.0, 9.0]]
model = MixtureModel(
    STUDENT_T, np.full(4, 0.25), [EllipticalParams(m, 4 * np.eye(2), 5.0) for m in starts], 5.0
)

for step in range(1, 7):
    model, diag = em_step(model, X, W=0.02)
    print(f"step {step}: {model.n_components} components, weights {np.round(model.weights, 3)}, "
          f"loglik {mixture_log_likelihood(model, X):.2f}, pruned {diag.pruned}")

for c in model.components:
    print("  mean", np.round(c.mean, 2))
