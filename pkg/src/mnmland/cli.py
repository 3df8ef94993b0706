"""Command-line front end.

Subcommands: ``generate``, ``simulate``, ``sweep``, ``front`` and ``mi``.
Every subcommand also reads a JSON or TOML file given with ``--config``;
keys mirror the long flag names (``-`` or ``_``) either at the top level or
under a table named after the subcommand. Explicit flags win over the file.

Exit status: 0 success, 2 invalid parameters, 3 size guard, 4 I/O error.
Failures print one JSON line ``{"error": ..., "type": ..., "exit_code": ...}``
on stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import textio
from .analysis import SweepConfig, mi_matrix, run_simulation, run_sweep
from .distribution import DistributionTable, boltzmann, univariate_approximation
from .errors import NormalizationError, ParameterError, ResourceError
from .landscape import NmLandscape, generate_landscape
from .mop import full_table, make_bi_objective
from .pareto import pareto_front

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

EXIT_OK = 0
EXIT_PARAMETER = 2
EXIT_RESOURCE = 3
EXIT_IO = 4

# (sigma, m1, m2) of the published figure panels, all with N = 10
FIGURE_PRESETS: dict[tuple[int, str], tuple[float, int, int]] = {
    (1, "1"): (1.0, 1, 1),
    (1, "2"): (19.0, 1, 1),
    (1, "3"): (1.0, 2, 2),
    (1, "4"): (19.0, 2, 2),
    (2, "left"): (36.0, 1, 2),
    (2, "right"): (36.0, 2, 3),
}

DEFAULTS: dict[str, dict[str, Any]] = {
    "generate": {"n": 10, "m": 2, "sigma": 1.0, "seed": 0, "out": None},
    "simulate": {
        "n": 10, "m1": 2, "m2": 2, "sigma": 1.0, "seed": 0, "temperature": 1.0,
        "raw": False, "landscape": None, "figure": None, "row": None, "panel": None,
        "out": "simulation", "format": "csv",
    },
    "sweep": {
        "n": 10, "m": list(range(1, 10)), "sigma": [float(2 * i + 1) for i in range(10)],
        "models": 10, "base_seed": 0, "temperature": 1.0, "objective": 2, "raw": False,
        "no_front_metrics": False, "distinct_decimals": 3, "workers": 1, "out": "sweep",
    },
    "front": {
        "table": None, "n": 10, "m1": 2, "m2": 2, "sigma": 1.0, "seed": 0,
        "temperature": 1.0, "raw": False, "source": "objectives", "method": "auto",
        "out": None,
    },
    "mi": {
        "distribution": None, "landscape": None, "n": 10, "m": 2, "sigma": 1.0, "seed": 0,
        "objective": 2, "temperature": 1.0, "raw": False, "approximation": False, "out": None,
    },
}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        _report(ParameterError(message), EXIT_PARAMETER)
        raise SystemExit(EXIT_PARAMETER)


def _report(exc: BaseException, code: int) -> None:
    line = {"error": str(exc), "type": type(exc).__name__, "exit_code": code}
    print(json.dumps(line), file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    # no defaults here: unset flags must not hide values from --config
    parser = _Parser(prog="mnmland", description=__doc__.splitlines()[0],
                     argument_default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON or TOML file with default flag values")

    p = sub.add_parser("generate", help="write a landscape as JSON", argument_default=argparse.SUPPRESS)
    common(p)
    p.add_argument("--n", type=int, help="number of variables N")
    p.add_argument("--m", type=int, help="maximum interaction order M")
    p.add_argument("--sigma", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output file (default: stdout)")

    p = sub.add_parser("simulate", help="run the full simulation on one bi-objective problem",
                       argument_default=argparse.SUPPRESS)
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--m1", type=int, help="maximum order of objective 1")
    p.add_argument("--m2", type=int, help="maximum order of objective 2")
    p.add_argument("--sigma", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--landscape", help="parent landscape JSON instead of --n/--sigma/--seed")
    p.add_argument("--temperature", type=float)
    p.add_argument("--raw", action="store_true", help="Boltzmann on raw, not normalized, values")
    p.add_argument("--figure", type=int, choices=(1, 2), help="use a figure preset")
    p.add_argument("--row", choices=("1", "2", "3", "4"), help="figure 1 row")
    p.add_argument("--panel", choices=("left", "right"), help="figure 2 panel")
    p.add_argument("--out", help="output directory")
    p.add_argument("--format", choices=("csv", "json"))

    p = sub.add_parser("sweep", help="mutual information and front metrics over an (M, sigma) grid",
                       argument_default=argparse.SUPPRESS)
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int, nargs="+", help="maximum orders to sweep")
    p.add_argument("--sigma", type=float, nargs="+", help="sigma values to sweep")
    p.add_argument("--models", type=int, help="models per cell")
    p.add_argument("--base-seed", dest="base_seed", type=int)
    p.add_argument("--temperature", type=float)
    p.add_argument("--objective", type=int, choices=(1, 2))
    p.add_argument("--raw", action="store_true")
    p.add_argument("--no-front-metrics", dest="no_front_metrics", action="store_true")
    p.add_argument("--distinct-decimals", dest="distinct_decimals", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="output directory")

    p = sub.add_parser("front", help="Pareto front of a table or of a generated problem",
                       argument_default=argparse.SUPPRESS)
    common(p)
    p.add_argument("--table", help="CSV with header solution_index,f1,...,fm")
    p.add_argument("--n", type=int)
    p.add_argument("--m1", type=int)
    p.add_argument("--m2", type=int)
    p.add_argument("--sigma", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--temperature", type=float)
    p.add_argument("--raw", action="store_true")
    p.add_argument("--source", choices=("objectives", "boltzmann", "product"))
    p.add_argument("--method", choices=("auto", "pairwise", "sweep"))
    p.add_argument("--out", help="output file (default: stdout)")

    p = sub.add_parser("mi", help="pairwise mutual information of a distribution",
                       argument_default=argparse.SUPPRESS)
    common(p)
    p.add_argument("--distribution", help="CSV with header solution_index,p")
    p.add_argument("--landscape", help="landscape JSON (objective built from it)")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--sigma", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--objective", type=int, choices=(1, 2))
    p.add_argument("--temperature", type=float)
    p.add_argument("--raw", action="store_true")
    p.add_argument("--approximation", action="store_true",
                   help="analyse the univariate product approximation instead")
    p.add_argument("--out", help="output file (default: stdout)")
    return parser


def load_config(path: str | Path, command: str) -> dict[str, Any]:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        if path.suffix.lower() == ".toml":
            data = tomllib.loads(text)
        else:
            data = json.loads(text)
    except (ValueError, tomllib.TOMLDecodeError) as exc:
        raise ParameterError(f"cannot parse config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ParameterError(f"config file {path} must hold a table/object")
    section = data.get(command)
    if isinstance(section, dict):
        data = {k: v for k, v in data.items() if not isinstance(v, dict)} | section
    known = DEFAULTS[command]
    out = {}
    for key, value in data.items():
        if isinstance(value, dict):
            continue
        name = key.replace("-", "_")
        if name not in known:
            raise ParameterError(f"unknown key {key!r} in config file for {command!r}")
        out[name] = value
    return out


def resolve(args: argparse.Namespace) -> dict[str, Any]:
    """Defaults, then config file values, then explicit flags."""
    given = vars(args).copy()
    command = given.pop("command")
    settings = dict(DEFAULTS[command])
    config_path = given.pop("config", None)
    if config_path is not None:
        settings.update(load_config(config_path, command))
    settings.update(given)
    return settings


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        textio.atomic_write_text(out, text)


def _read_csv_table(path: str, first: str) -> tuple[np.ndarray, list[str]]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        if not header or header[0] != first:
            raise ParameterError(f"{path}: expected header starting with {first!r}")
        try:
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
        except ValueError as exc:
            raise ParameterError(f"{path}: {exc}") from exc
    if data.shape[0] == 0:
        raise ParameterError(f"{path}: no rows")
    index = data[:, 0].astype(np.int64)
    if not np.array_equal(index, np.arange(data.shape[0])):
        raise ParameterError(f"{path}: rows must be ordered by solution_index 0..S-1")
    return data[:, 1:], header[1:]


def cmd_generate(s: dict[str, Any]) -> int:
    landscape = generate_landscape(s["n"], s["m"], s["sigma"], s["seed"])
    _write(landscape.to_json(), s["out"])
    return EXIT_OK


def _simulation_problem(s: dict[str, Any]):
    if s["figure"] is not None:
        key = (int(s["figure"]), str(s["row"] if s["figure"] == 1 else s["panel"]))
        if key not in FIGURE_PRESETS:
            raise ParameterError("--figure 1 needs --row 1..4, --figure 2 needs --panel left|right")
        s["sigma"], s["m1"], s["m2"] = FIGURE_PRESETS[key]
        s["n"] = 10
    if s["landscape"] is not None:
        parent = NmLandscape.from_json(Path(s["landscape"]).read_text(encoding="utf-8"))
    else:
        parent = generate_landscape(s["n"], max(s["m1"], s["m2"]), s["sigma"], s["seed"])
    return make_bi_objective(parent, s["m1"], s["m2"])


SIMULATION_FILES = (
    "objectives.csv",
    "boltzmann_f1.csv", "boltzmann_f2.csv",
    "marginals_f1.csv", "marginals_f2.csv",
    "product_f1.csv", "product_f2.csv",
    "front_true.csv", "front_boltzmann.csv", "front_factorized.csv",
    "front_comparison.json",
)


def cmd_simulate(s: dict[str, Any]) -> int:
    problem = _simulation_problem(s)
    sim = run_simulation(problem, s["temperature"], normalize=not s["raw"])
    out = Path(s["out"])
    comparison = {
        "true_vs_factorized": sim.comparison.to_dict(),
        "true_vs_boltzmann": sim.boltzmann_comparison.to_dict(),
        "factorization_linf": sim.factorization_gaps(),
        "front_sizes": {
            "true": sim.true_front.size,
            "boltzmann": sim.boltzmann_front.size,
            "factorized": sim.factorized_front.size,
        },
        "problem": problem.metadata(),
        "temperature": sim.temperature,
        "normalized": sim.table.normalized,
    }
    textio.atomic_write_text(out / "front_comparison.json", textio.dumps(comparison))
    if s["format"] == "json":
        bundle = {
            "problem": problem.metadata(),
            "temperature": sim.temperature,
            "objectives": sim.table.to_dict(),
            "boltzmann": [d.probs for d in sim.boltzmann],
            "marginals": [m.p_one for m in sim.marginals],
            "products": [d.probs for d in sim.products],
            "fronts": {
                "true": sim.true_front.member_indices,
                "boltzmann": sim.boltzmann_front.member_indices,
                "factorized": sim.factorized_front.member_indices,
            },
        }
        textio.atomic_write_text(out / "simulation.json", textio.dumps(bundle))
        return EXIT_OK
    textio.atomic_write_text(out / "objectives.csv", sim.table.to_csv())
    for k in range(problem.n_objectives):
        textio.atomic_write_text(out / f"boltzmann_f{k + 1}.csv", sim.boltzmann[k].to_csv())
        textio.atomic_write_text(out / f"marginals_f{k + 1}.csv", sim.marginals[k].to_csv())
        textio.atomic_write_text(out / f"product_f{k + 1}.csv", sim.products[k].to_csv())
    textio.atomic_write_text(out / "front_true.csv", sim.true_front.to_csv())
    textio.atomic_write_text(out / "front_boltzmann.csv", sim.boltzmann_front.to_csv())
    textio.atomic_write_text(out / "front_factorized.csv", sim.factorized_front.to_csv())
    return EXIT_OK


def cmd_sweep(s: dict[str, Any]) -> int:
    config = SweepConfig(
        n_vars=s["n"],
        m_grid=tuple(s["m"]),
        sigma_grid=tuple(s["sigma"]),
        models_per_cell=s["models"],
        base_seed=s["base_seed"],
        temperature=s["temperature"],
        objective=s["objective"],
        normalize=not s["raw"],
        front_metrics=not s["no_front_metrics"],
        distinct_decimals=s["distinct_decimals"],
    )
    result = run_sweep(config, workers=s["workers"])
    out = Path(s["out"])
    textio.atomic_write_text(out / "sweep_records.csv", result.records_csv())
    textio.atomic_write_text(out / "sweep_cells.csv", result.cells_csv())
    textio.atomic_write_text(out / "sweep_plot.json", textio.dumps(result.plot_data()))
    return EXIT_OK


def cmd_front(s: dict[str, Any]) -> int:
    if s["table"] is not None:
        values, _ = _read_csv_table(s["table"], "solution_index")
    else:
        parent = generate_landscape(s["n"], max(s["m1"], s["m2"]), s["sigma"], s["seed"])
        problem = make_bi_objective(parent, s["m1"], s["m2"])
        table = full_table(problem, normalize=not s["raw"])
        values = table.values
        if s["source"] != "objectives":
            dists = [boltzmann(table.column(k), s["temperature"]) for k in range(table.n_objectives)]
            if s["source"] == "product":
                dists = [univariate_approximation(d) for d in dists]
            values = np.column_stack([d.probs for d in dists])
    front = pareto_front(values, method=s["method"])
    _write(front.to_csv(), s["out"])
    return EXIT_OK


def cmd_mi(s: dict[str, Any]) -> int:
    if s["distribution"] is not None:
        probs, _ = _read_csv_table(s["distribution"], "solution_index")
        if probs.shape[1] != 1:
            raise ParameterError("distribution CSV must have exactly the columns solution_index,p")
        dist = DistributionTable(probs[:, 0])
    else:
        if s["landscape"] is not None:
            parent = NmLandscape.from_json(Path(s["landscape"]).read_text(encoding="utf-8"))
        else:
            parent = generate_landscape(s["n"], s["m"], s["sigma"], s["seed"])
        m = parent.max_order
        table = full_table(make_bi_objective(parent, m, m), normalize=not s["raw"])
        dist = boltzmann(table.column(s["objective"] - 1), s["temperature"])
    if s["approximation"]:
        dist = univariate_approximation(dist)
    _write(mi_matrix(dist).to_csv(), s["out"])
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "front": cmd_front,
    "mi": cmd_mi,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        settings = resolve(args)
        return COMMANDS[args.command](settings)
    except ResourceError as exc:
        _report(exc, EXIT_RESOURCE)
        return EXIT_RESOURCE
    except (ParameterError, NormalizationError) as exc:
        _report(exc, EXIT_PARAMETER)
        return EXIT_PARAMETER
    except OSError as exc:
        _report(exc, EXIT_IO)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
