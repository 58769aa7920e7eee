"""Command line front end for seeded experiment batches.

Examples
--------
Thirty ESTDA runs on 2D Ackley with the reference settings::

    estda-run --function ackley --dim 2 --algorithm estda --dof 5 --out results/

The full 2D/5D comparison table::

    estda-run --preset paper-table1 --out results/

A ``--config`` JSON file may hold the same settings as a flat object whose
keys are the flag names (``"weight-floor"`` or ``"weight_floor"``); flags
given on the command line take precedence.
"""

import argparse
import dataclasses
import json
import logging
import sys

from .engine import ALGORITHMS, BOUNDS_POLICIES, INIT_MEANS, EdaConfig
from .errors import ConfigError, EdaError
from .harness import (
    PRESETS,
    SELECT_FRACTION,
    ExperimentAborted,
    ExperimentSpec,
    Variant,
    emit_density_comparison,
    preset_spec,
    run_experiment,
    score_table,
)
from .mixtures import NORMALIZERS
from .objectives import FUNCTION_NAMES

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RUN = 3
EXIT_IO = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser():
    p = _Parser(prog="estda-run", description="Run seeded EDA experiment batches.")
    p.add_argument("--config", help="flat JSON file of option values")
    p.add_argument("--function", choices=FUNCTION_NAMES)
    p.add_argument("--dim", type=int)
    p.add_argument("--algorithm", action="append", choices=ALGORITHMS,
                   help="repeatable; default is all four")
    p.add_argument("--pop", type=int, help="population size N")
    p.add_argument("--select-frac", type=float, help="selection size as a fraction of N")
    p.add_argument("--dof", type=float)
    p.add_argument("--components", type=int, help="initial mixture components L")
    p.add_argument("--weight-floor", type=float)
    p.add_argument("--iters", type=int)
    p.add_argument("--em-iters", type=int)
    p.add_argument("--runs", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--preset", choices=PRESETS)
    p.add_argument("--allow-large", action="store_true", default=None)
    p.add_argument("--bounds-policy", choices=BOUNDS_POLICIES)
    p.add_argument("--em-normalizer", choices=NORMALIZERS)
    p.add_argument("--init-mean", choices=INIT_MEANS,
                   help="start single models at the box centre (default) or a uniform point")
    p.add_argument("--init-width", type=float,
                   help="initial per-axis standard deviation as a fraction of the box width")
    p.add_argument("--spread", choices=("stddev", "stderr"))
    p.add_argument("--workers", type=int)
    p.add_argument("--density-dofs", type=float, nargs="+",
                   help="also write the unit-variance density comparison for these dofs")
    return p


_CONFIG_KEYS = {
    "pop": "population_size",
    "components": "initial_components",
    "weight_floor": "weight_floor",
    "iters": "max_iterations",
    "em_iters": "em_iterations",
    "bounds_policy": "bounds_policy",
    "em_normalizer": "em_normalizer",
    "dof": "dof",
    "init_mean": "init_mean",
    "init_width": "init_width_fraction",
}


# Config-file keys that name EdaConfig fields directly.
_PASSTHROUGH = {f.name for f in dataclasses.fields(EdaConfig)} - {"algorithm", "seed"}


def _load_config(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a flat JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def parse_cli(argv=None):
    """Parse flags (and an optional config file) into an :class:`ExperimentSpec`."""
    ns = build_parser().parse_args(argv)
    opts = _load_config(ns.config) if ns.config else {}
    opts.update({k: v for k, v in vars(ns).items() if v is not None and k != "config"})
    if isinstance(opts.get("algorithm"), str):
        opts["algorithm"] = [opts["algorithm"]]

    config = {k: v for k, v in opts.items() if k in _PASSTHROUGH}
    for key, field_name in _CONFIG_KEYS.items():
        if key in opts:
            config[field_name] = opts[key]

    common = dict(
        select_fraction=float(opts.get("select_frac", SELECT_FRACTION)),
        density_dofs=opts.get("density_dofs"),
        run_count=int(opts.get("runs", 30)),
        base_seed=int(opts.get("seed", 0)),
        out_dir=opts.get("out"),
        spread=opts.get("spread", "stddev"),
        workers=int(opts.get("workers", 1)),
    )
    allow_large = bool(opts.get("allow_large", False))

    if "preset" in opts:
        spec = preset_spec(opts["preset"], allow_large=allow_large, config=config, **common)
        if "algorithm" in opts:
            spec.variants = [v for v in spec.variants if v.algorithm in opts["algorithm"]]
    else:
        if "function" not in opts:
            raise ConfigError("either --function or --preset is required")
        algorithms = opts.get("algorithm") or list(ALGORITHMS)
        spec = ExperimentSpec(
            problems=[(opts["function"], int(opts.get("dim", 2)))],
            variants=[Variant.plain(a) for a in algorithms],
            config=config,
            allow_large=allow_large,
            **common,
        )

    return spec


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    try:
        spec = parse_cli(argv)
        if spec.density_dofs and spec.out_dir:
            emit_density_comparison(spec.density_dofs, f"{spec.out_dir}/density_comparison.csv")
        summaries, _ = run_experiment(spec)
    except ConfigError as exc:
        print(f"estda-run: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ExperimentAborted as exc:
        print(f"estda-run: experiment aborted: {exc}", file=sys.stderr)
        return EXIT_RUN
    except EdaError as exc:
        print(f"estda-run: run error: {exc}", file=sys.stderr)
        return EXIT_RUN
    except OSError as exc:
        print(f"estda-run: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    for s in summaries:
        print(f"{s.function:12s} {s.dimension:2d}D {s.algorithm:14s} "
              f"{s.mean_best: .6g} +- {s.spread_best:.4g} ({s.spread_kind}, n={s.run_count})")
    if len(spec.variants) > 1 and len(spec.problems) > 1:
        print("scores:", score_table(summaries))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
