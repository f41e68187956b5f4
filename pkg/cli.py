# -*- coding: utf-8 -*-
"""
Command-line front end.

    python cli.py spectrum --n 4 --delta 1.0
    python cli.py paths --n 8 --j 0
    python cli.py selection --n 4
    python cli.py lindblad --beta-list 2,4 --g 0.05
    python cli.py fidelity --beta-list 1,2,5 --big-delta 1

Parameters come from built-in defaults, then an optional flat JSON file
(--config), then flags; flags mirror keys with '-' for '_'.
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence

from config import DEFAULT_COUPLING, DEFAULT_DELTA, DEFAULT_FIT_WINDOW, DEFAULT_N, WORKERS, setup_logging
from encoded_logic import optimal_delta, optimal_delta_numeric
from helpers import InvalidArgumentError, NumericalError, SupercoherenceError, UsageError, format_spin
from open_system import ModelTemplate, beta_from_kelvin, temperature_sweep
from results import FORMATS, ExperimentConfig, ResultTable, build_meta, emit_results, rows_from_dicts
from selection_rules import selection_suite
from spin_operators import SystemSpec, parse_form, spectrum
from spin_paths import enumerate_paths, irrep_multiplicity, irrep_multiplicity_from_spectrum

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


@dataclass(frozen=True)
class Param:
    kind: str
    default: Any
    help: str


def _as_int(value) -> int:
    if isinstance(value, bool):
        raise ValueError("boolean")
    if isinstance(value, float):
        if not value.is_integer():
            raise ValueError("not an integer")
        return int(value)
    return int(value)


def _as_float(value) -> float:
    if isinstance(value, bool):
        raise ValueError("boolean")
    return float(value)


def _as_complex(value) -> str:
    if isinstance(value, bool):
        raise ValueError("boolean")
    text = str(value).replace(" ", "")
    complex(text)
    return text


def _split(value) -> List:
    if isinstance(value, (list, tuple)):
        items = []
        for item in value:
            items.extend(_split(item) if isinstance(item, str) else [item])
        return items
    if isinstance(value, str):
        return [part for part in value.split(",") if part.strip()]
    return [value]


def _as_float_list(value) -> List[float]:
    items = [_as_float(v) for v in _split(value)]
    if not items:
        raise ValueError("empty list")
    return items


def _as_str_list(value) -> List[str]:
    items = [str(v).strip() for v in _split(value)]
    if not items:
        raise ValueError("empty list")
    return items


CONVERTERS: Dict[str, Callable[[Any], Any]] = {
    "int": _as_int,
    "float": _as_float,
    "str": str,
    "complex": _as_complex,
    "float_list": _as_float_list,
    "str_list": _as_str_list,
}

SCHEMA: Dict[str, Dict[str, Param]] = {
    "spectrum": {
        "n": Param("int", DEFAULT_N, "number of qubits"),
        "delta": Param("float", DEFAULT_DELTA, "exchange scale Delta"),
        "form": Param("str", "spin-squared", "spin-squared or pairwise-heisenberg"),
    },
    "paths": {
        "n": Param("int", DEFAULT_N, "number of qubits"),
        "j": Param("str", "0", "final total spin, e.g. 0, 1/2, 3/2"),
    },
    "selection": {
        "n": Param("int", DEFAULT_N, "number of qubits (at most 8)"),
        "axes": Param("str_list", ["x", "y", "z"], "comma-separated axes"),
    },
    "lindblad": {
        "n": Param("int", DEFAULT_N, "number of qubits (only 4)"),
        "delta": Param("float", DEFAULT_DELTA, "exchange scale Delta"),
        "beta": Param("float", None, "single inverse temperature"),
        "beta_list": Param("float_list", None, "inverse temperatures (default beta*Delta = 2..6)"),
        "temperature_k": Param("float_list", None, "temperatures in kelvin (Delta in meV)"),
        "g": Param("float", DEFAULT_COUPLING, "bath coupling for every qubit and axis"),
        "gamma0": Param("float", None, "rate of the J = 1, 2 diagonal blocks (default g^2)"),
        "t_final": Param("float", None, "upper bound on the fit window"),
        "dt": Param("float", None, "integration step"),
        "fit_window": Param("float", DEFAULT_FIT_WINDOW, "fit window in units of the fastest rate"),
        "amp_a": Param("complex", "1", "logical amplitude of |0_L>"),
        "amp_b": Param("complex", "0", "logical amplitude of |1_L>"),
        "workers": Param("int", WORKERS, "worker threads for the sweep"),
    },
    "fidelity": {
        "beta_list": Param("float_list", [1.0, 2.0, 5.0], "inverse temperatures"),
        "temperature_k": Param("float_list", None, "temperatures in kelvin (Delta in meV)"),
        "big_delta": Param("float", 1.0, "gap Delta"),
        "delta_grid": Param("float", None, "grid step for delta (default 1e-3 Delta)"),
    },
}

DEFAULT_FORMAT = {"selection": "json"}


class UsageParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message):
        raise UsageError(message)


def build_parser() -> UsageParser:
    parser = UsageParser(prog="supercoherence", description="Supercoherent qubit experiments")
    subparsers = parser.add_subparsers(dest="subcommand", parser_class=UsageParser)
    for name, params in SCHEMA.items():
        sub = subparsers.add_parser(name, help=f"{name} experiment")
        sub.add_argument("--out", default=None, help="output path (default stdout)")
        sub.add_argument("--format", choices=FORMATS, default=None)
        sub.add_argument("--config", default=None, help="flat JSON file of parameters")
        sub.add_argument("--verbose", action="store_true")
        for key, param in params.items():
            sub.add_argument(f"--{key.replace('_', '-')}", dest=key, default=argparse.SUPPRESS, help=param.help)
    return parser


def _convert(subcommand: str, key: str, value) -> Any:
    param = SCHEMA[subcommand].get(key)
    if param is None:
        raise UsageError(f"unknown key {key!r} for {subcommand}")
    if value is None:
        return None
    try:
        return CONVERTERS[param.kind](value)
    except (TypeError, ValueError) as e:
        raise UsageError(f"malformed value for {key!r}: {value!r}") from e


def _read_config_file(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise UsageError(f"config file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise UsageError(f"config file {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise UsageError(f"config file {path} must hold a flat JSON object")
    return data


def parse_config(argv: Optional[Sequence[str]] = None) -> ExperimentConfig:
    """Defaults, then the config file, then flags."""
    args = build_parser().parse_args(list(sys.argv[1:] if argv is None else argv))
    subcommand = args.subcommand
    if subcommand is None:
        raise UsageError(f"a subcommand is required: {', '.join(SCHEMA)}")
    schema = SCHEMA[subcommand]

    parameters = {key: param.default for key, param in schema.items()}
    if args.config:
        for key, value in _read_config_file(args.config).items():
            parameters[key] = _convert(subcommand, key, value)
    for key in schema:
        if key in vars(args):
            parameters[key] = _convert(subcommand, key, getattr(args, key))

    fmt = args.format or DEFAULT_FORMAT.get(subcommand, "csv")
    return ExperimentConfig(subcommand, parameters, args.out, fmt, args.verbose)


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------

def _run_spectrum(p: Dict[str, Any]) -> ResultTable:
    levels = spectrum(SystemSpec(p["n"], p["delta"]), parse_form(p["form"]))
    rows = [[format_spin(lv.j), lv.energy, lv.multiplicity] for lv in levels]
    return ResultTable(["j", "energy", "multiplicity"], rows)


def _run_paths(p: Dict[str, Any]) -> ResultTable:
    n = p["n"]
    paths = enumerate_paths(n, p["j"])
    multiplicity = irrep_multiplicity(n, p["j"])
    rows = [
        [n, format_spin(path.j), multiplicity, path.label, format_spin(path.o_value) if path.n > 1 else ""]
        for path in paths
    ]
    table = ResultTable(["n", "J", "multiplicity", "path", "o_value"], rows)
    table.meta["multiplicity"] = {
        "enumerated": len(paths),
        "catalan": multiplicity,
        "spectral": irrep_multiplicity_from_spectrum(n, p["j"]) if paths else 0,
    }
    return table


def _run_selection(p: Dict[str, Any]) -> ResultTable:
    columns = ["check", "axis", "qubit", "residual", "threshold", "passed"]
    records = selection_suite(p["n"], p["axes"], verbose=logger.isEnabledFor(logging.DEBUG))
    table = ResultTable(columns, rows_from_dicts(records, columns))
    table.meta["all_passed"] = all(r["passed"] for r in records)
    return table


def _betas(p: Dict[str, Any], default: Optional[List[float]] = None) -> List[float]:
    given = [k for k in ("beta", "beta_list", "temperature_k") if p.get(k) is not None]
    if len(given) > 1:
        raise UsageError(f"give only one of {', '.join(given)}")
    if p.get("beta") is not None:
        return [p["beta"]]
    if p.get("beta_list") is not None:
        return list(p["beta_list"])
    if p.get("temperature_k") is not None:
        return [beta_from_kelvin(t) for t in p["temperature_k"]]
    if default is None:
        raise UsageError("no inverse temperature given")
    return default


def _run_lindblad(p: Dict[str, Any]) -> ResultTable:
    if p["n"] != 4:
        raise UsageError(f"lindblad supports only n = 4, got n={p['n']}")
    delta = p["delta"]
    betas = _betas(p, [x / delta for x in (2.0, 3.0, 4.0, 5.0, 6.0)])
    template = ModelTemplate(
        spec=SystemSpec(p["n"], delta),
        g=p["g"],
        gamma0=p["gamma0"],
        amplitudes=(complex(p["amp_a"]), complex(p["amp_b"])),
        fit_window=p["fit_window"],
        dt=p["dt"],
        t_final=p["t_final"],
    )
    return temperature_sweep(template, betas, workers=p["workers"])


def _run_fidelity(p: Dict[str, Any]) -> ResultTable:
    big_delta = p["big_delta"]
    step = p["delta_grid"] if p["delta_grid"] is not None else 1e-3 * big_delta
    params = dict(p)
    if params.get("temperature_k") is not None:
        params["beta_list"] = None
    rows = []
    for beta in _betas(params):
        numeric, value = optimal_delta_numeric(beta, big_delta, step)
        rows.append([beta, numeric, optimal_delta(beta), value])
    return ResultTable(["beta", "delta_opt_numeric", "delta_opt_analytic", "F_at_opt"], rows)


RUNNERS: Dict[str, Callable[[Dict[str, Any]], ResultTable]] = {
    "spectrum": _run_spectrum,
    "paths": _run_paths,
    "selection": _run_selection,
    "lindblad": _run_lindblad,
    "fidelity": _run_fidelity,
}


def run_experiment(config: ExperimentConfig) -> ResultTable:
    """Run one experiment; identical configs give identical tables."""
    logger.info(f"Running {config.subcommand} with {config.parameters}")
    try:
        table = RUNNERS[config.subcommand](config.parameters)
    except SupercoherenceError as e:
        raise type(e)(f"{config.subcommand}: {e}") from e
    extra = table.meta
    table.meta = build_meta(config.subcommand, config.parameters, config.fmt, extra)
    logger.info(f"{config.subcommand} produced {len(table.rows)} rows")
    return table


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = parse_config(argv)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    setup_logging(config.verbose)
    try:
        table = run_experiment(config)
        emit_results(table, config.fmt, config.out)
    except InvalidArgumentError as e:
        logger.error(str(e))
        return EXIT_USAGE
    except NumericalError as e:
        logger.error(str(e))
        return EXIT_NUMERICAL
    except OSError as e:
        logger.error(str(e))
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
