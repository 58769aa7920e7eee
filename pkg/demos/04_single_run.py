"""One ESTDA run on the Ackley function, iteration by iteration.

The callback sees the state after every sample-select-refit cycle, so we
can watch the search distribution shrink onto the optimum at the origin.
"""
import numpy as np

from estda import EdaConfig, get_function, run_eda

fn = get_function("ackley")
cfg = EdaConfig(algorithm="estda", dof=5.0, max_iterations=30, seed=3)


def show(state):
    if state.iteration % 5 == 0:
        spread = np.sqrt(np.diag(state.model.scale))
        print(f"iter {state.iteration:2d}  best {state.best_value:.3e}  "
              f"centre {np.array2string(state.model.mean, formatter={'float': '{:.1e}'.format})}  "
              f"scale sd {np.array2string(spread, formatter={'float': '{:.1e}'.format})}")


record = run_eda(cfg, fn, callback=show)
print("\nfinal best point", record.final_best_point, "value", record.final_best_value)
print(f"took {record.duration:.2f} s")
