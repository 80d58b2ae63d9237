"""``spinwire`` command-line entry point.

Exit codes: 0 success, 1 usage/validation error, 2 numerical failure,
3 verification failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Callable, Sequence

import numpy as np

from ._io import dumps_json, format_float, write_atomic
from .analytic import fidelity_integral_series
from .config import COMMANDS, ConfigError, RunConfig, build_config, read_config_file, read_environment
from .dynamics import ExcitationState, evolve, transfer_amplitudes
from .errors import NumericalFailure, SpinwireError
from .model import build_single_excitation
from .spectral import eigendecompose
from .sweep import b_invariance_scan, maximize_fidelity, sweep_td
from .verify import run_verification

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_VERIFY = 0, 1, 2, 3

# flag -> config key
_FLAGS = {
    "--n": ("n_sites", "number of sites N"),
    "--j": ("j_coupling", "exchange coupling J"),
    "--d": ("d_coupling", "DM coupling D"),
    "--b": ("b_field", "uniform field B"),
    "--field": ("field", "per-site field, comma separated (overrides --b)"),
    "--alpha": ("alpha", "time-scale factor"),
    "--method": ("method", "exact | analytic (fidelity)"),
    "--t-min": ("t_min", None),
    "--t-max": ("t_max", None),
    "--t-steps": ("t_steps", "number of time points, endpoints included"),
    "--d-min": ("d_min", None),
    "--d-max": ("d_max", None),
    "--d-steps": ("d_steps", None),
    "--nodes": ("nodes", "starting quadrature node count"),
    "--tol": ("tolerance", "quadrature relative refinement tolerance"),
    "--max-refinements": ("max_refinements", None),
    "--b-values": ("b_values", "bscan field values, comma separated"),
    "--budget": ("budget", "optimize evaluation budget"),
    "--n-max": ("n_max", "verify: largest N for the oracle"),
    "--trials": ("trials", "verify: random parameter sets per N"),
    "--source": ("source", "evolve: initial site"),
    "--target": ("target", "evolve: read-out site (default N)"),
    "--seed": ("seed", None),
    "--output": ("output", "output path (default stdout)"),
    "--format": ("format", "csv | json"),
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="spinwire",
        description="Single-qubit state transfer on a DM spin chain.",
        allow_abbrev=False,
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name, allow_abbrev=False)
        p.add_argument("--config", help="key = value configuration file")
        for flag, (key, help_text) in _FLAGS.items():
            p.add_argument(flag, dest=key, default=argparse.SUPPRESS, help=help_text)
        p.add_argument("-o", dest="output", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
        if name == "verify":
            p.add_argument(
                "--no-analytic", dest="analytic", action="store_const", const="false",
                default=argparse.SUPPRESS, help="skip the analytic-vs-exact comparison",
            )
    return parser


def parse_config(
    argv: Sequence[str], environ: dict[str, str] | None = None
) -> RunConfig:
    """Merge defaults, ``--config`` file, ``SPINWIRE_*`` variables and flags."""
    ns = vars(_build_parser().parse_args(list(argv)))
    command = ns.pop("command")
    config_path = ns.pop("config", None)
    file_values = read_config_file(config_path) if config_path else {}
    env_values = read_environment(os.environ if environ is None else environ)
    return build_config(command, file_values, env_values, ns)


def _amplitude_csv(times, amplitudes, nodes=None) -> tuple[list[str], list[list]]:
    columns = ["t", "F_re", "F_im", "F_abs"] + (["nodes_used"] if nodes is not None else [])
    rows = []
    for i, (t, f) in enumerate(zip(times, amplitudes)):
        row = [t, f.real, f.imag, abs(f)]
        if nodes is not None:
            row.append(nodes[i])
        rows.append(row)
    return columns, rows


def _cmd_spectrum(cfg: RunConfig):
    decomp = eigendecompose(build_single_excitation(cfg.params()))
    rows = [[k, lam] for k, lam in enumerate(decomp.eigenvalues, start=1)]
    return ["k", "eigenvalue"], rows


def _cmd_fidelity(cfg: RunConfig):
    params = cfg.params()
    times = cfg.t_axis()
    if cfg.method == "analytic":
        results = fidelity_integral_series(params, times, cfg.quadrature())
        return _amplitude_csv(
            times, [r.amplitude for r in results], [r.nodes_used for r in results]
        )
    decomp = eigendecompose(build_single_excitation(params))
    return _amplitude_csv(times, transfer_amplitudes(decomp, times, params.alpha))


def _cmd_evolve(cfg: RunConfig):
    params = cfg.params()
    decomp = eigendecompose(build_single_excitation(params))
    target = cfg.target or params.n_sites
    if not 1 <= target <= params.n_sites:
        raise ConfigError(f"target must be in [1, {params.n_sites}], got {target}")
    initial = ExcitationState.at_site(params.n_sites, cfg.source)
    times = cfg.t_axis()
    amps = [evolve(decomp, initial, t, params.alpha).amplitudes[target - 1] for t in times]
    return _amplitude_csv(times, amps)


def _cmd_sweep(cfg: RunConfig):
    grid = sweep_td(cfg.params(), cfg.t_axis(), cfg.d_axis())
    rows = [
        [t, d, grid.values[i, j]]
        for i, t in enumerate(grid.t_axis)
        for j, d in enumerate(grid.d_axis)
    ]
    return ["t", "D", "F_abs"], rows


def _cmd_optimize(cfg: RunConfig):
    result = maximize_fidelity(
        cfg.params(), (cfg.t_min, cfg.t_max), (cfg.d_min, cfg.d_max), cfg.budget
    )
    return result.to_dict()


def _cmd_bscan(cfg: RunConfig):
    return b_invariance_scan(cfg.params(), cfg.b_values, cfg.t_axis()).to_dict()


def _cmd_verify(cfg: RunConfig):
    return run_verification(
        n_max=cfg.n_max,
        trials_per_n=cfg.trials,
        seed=cfg.seed,
        analytic_params=cfg.params() if cfg.analytic else None,
        analytic_times=cfg.t_axis(),
        quad=cfg.quadrature(),
    )


_TABLE_COMMANDS: dict[str, Callable] = {
    "spectrum": _cmd_spectrum,
    "evolve": _cmd_evolve,
    "fidelity": _cmd_fidelity,
    "sweep": _cmd_sweep,
}
_REPORT_COMMANDS: dict[str, Callable] = {
    "optimize": _cmd_optimize,
    "bscan": _cmd_bscan,
    "verify": _cmd_verify,
}


def _render_cell(value) -> str:
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format_float(value)


def render_csv(columns: list[str], rows: list[list]) -> str:
    lines = [",".join(columns)]
    lines.extend(",".join(_render_cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _emit(cfg: RunConfig, text: str, stdout) -> None:
    if cfg.output:
        write_atomic(cfg.output, text)
        if cfg.output_format == "csv":
            # CSV carries no metadata block, so the effective config goes alongside
            write_atomic(cfg.output + ".config", cfg.to_text())
    else:
        stdout.write(text)


def run(cfg: RunConfig, stdout=None) -> int:
    """Execute one configured command. Returns the process exit code."""
    stdout = stdout or sys.stdout
    if cfg.command in _TABLE_COMMANDS:
        columns, rows = _TABLE_COMMANDS[cfg.command](cfg)
        if cfg.output_format == "csv":
            text = render_csv(columns, rows)
        else:
            payload = {
                "config": cfg.as_dict(),
                "columns": columns,
                "rows": [[v if isinstance(v, (int, np.integer)) else float(v) for v in r]
                         for r in rows],
            }
            text = dumps_json(payload)
        _emit(cfg, text, stdout)
        return EXIT_OK

    report = _REPORT_COMMANDS[cfg.command](cfg)
    payload = dict(report)
    payload["config"] = cfg.as_dict()
    _emit(cfg, dumps_json(payload), stdout)
    if cfg.command == "verify" and not report["passed"]:
        return EXIT_VERIFY
    return EXIT_OK


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stderr = stderr or sys.stderr
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except (_UsageError, SpinwireError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    try:
        return run(cfg, stdout)
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=stderr)
        return EXIT_NUMERICAL
    except SpinwireError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
