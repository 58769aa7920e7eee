"""A small four-way comparison on two test functions.

Ten seeded runs per algorithm keep this quick; the reference protocol uses
thirty (``estda-run --preset paper-table1``).  The score counts, for each
problem, the algorithm with the uniquely best mean.
"""
from estda.engine import ALGORITHMS
from estda.harness import ExperimentSpec, Variant, run_experiment, score_table

spec = ExperimentSpec(
    problems=[("easom", 2), ("griewank", 2)],
    variants=[Variant.plain(a) for a in ALGORITHMS],
    run_count=10,
)
summaries, records = run_experiment(spec)

for s in summaries:
    print(f"{s.function:9s} {s.algorithm:13s} mean best {s.mean_best: .4f} +- {s.spread_best:.4f}")
print("\nscores:", score_table(summaries))

comps = records[("easom", 2, "emstda")][0].survival_component_trace
print("surviving t-mixture components in the first Easom run:", comps[:10], "...")
