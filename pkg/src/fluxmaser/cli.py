"""Batch command-line runner producing reproducible CSV tables.

Subcommands map one-to-one onto the standard result sets: level/amplitude
sweeps (``fig2``), adiabaticity sweeps (``fig3``), steady-state photon
distributions (``fig4``), direct time integration (``evolve``), device-scale
estimates (``estimate-device``) and a generic combined sweep (``sweep``).

Every CSV starts with comment lines carrying the tool version and a content
hash of the resolved configuration; floats are rendered with a fixed number
of significant digits and rows are emitted in a fixed order, so identical
configs produce byte-identical files regardless of worker count.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import replace
from multiprocessing import get_context

import numpy as np

from . import __version__
from .circuit import CircuitParams, PhaseGrid, assemble_hamiltonian
from .config import RunConfig, config_digest, load_config
from .device import CavityParams, device_report, format_device_report
from .errors import ConfigError, StabilityError
from .lindblad import evolve as lindblad_evolve
from .lindblad import fock_state
from .maser import MaserConfig, steady_state_atomic, steady_state_sqc
from .spectrum import lowest_eigenpairs
from .transitions import adiabatic_k, transition_element
from .errors import DegenerateGapError

WORKERS_ENV = "FLUXMASER_WORKERS"
MAX_FAILURE_FRACTION = 0.01


def _fmt(value: float, digits: int) -> str:
    return format(float(value), f".{digits}g")


def _write_csv(path: str, comments: list[str], header: list[str], rows: list[list[str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for line in comments:
            handle.write(f"# {line}\n")
        handle.write(",".join(header) + "\n")
        for row in rows:
            handle.write(",".join(row) + "\n")


def _resolve_workers(flag: int | None, cfg: RunConfig) -> int:
    if flag is not None:
        return max(1, flag)
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ConfigError(f"{WORKERS_ENV} must be an integer, got {env!r}") from exc
    if cfg.output.workers is not None:
        return max(1, cfg.output.workers)
    return os.cpu_count() or 1


def _parallel_map(func, tasks, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]
    ctx = get_context("fork" if sys.platform != "win32" else "spawn")
    with ctx.Pool(processes=min(workers, len(tasks))) as pool:
        return pool.map(func, tasks, chunksize=1)


def _f_axis(cfg: RunConfig) -> np.ndarray:
    sweep = cfg.sweep
    return np.linspace(sweep.f_start, sweep.f_stop, sweep.f_points)


def _point_spectrum(args):
    gamma, ej_over_ec, ej_freq, n_p, n_q, sector, k, seed, f, f_s = args
    params = CircuitParams(gamma=gamma, ej_over_ec=ej_over_ec, f=f, f_s=f_s, ej_freq=ej_freq)
    op = assemble_hamiltonian(params, PhaseGrid(n_p=n_p, n_q=n_q), sector=sector)
    return lowest_eigenpairs(op, k, seed=seed)


def _fig2_point(task):
    idx, args = task
    try:
        spec = _point_spectrum(args)
        levels = spec.levels[:4]
        row = (
            [args[8]]
            + list(levels)
            + [
                transition_element(spec, 0, 1),
                transition_element(spec, 0, 2),
                transition_element(spec, 1, 2),
            ]
        )
        return idx, row, None
    except Exception as exc:  # worker boundary: report, do not kill the sweep
        return idx, None, f"f={args[8]:.6g}: {type(exc).__name__}: {exc}"


def _fig3_point(task):
    idx, args = task
    try:
        spec = _point_spectrum(args)
        out = [args[8], args[9]]
        for pair in ((0, 1), (1, 2)):
            try:
                out.append(adiabatic_k(spec, *pair))
            except DegenerateGapError:
                out.append(math.nan)
        return idx, out, None
    except Exception as exc:
        return idx, None, f"f={args[8]:.6g} f_s={args[9]:.6g}: {type(exc).__name__}: {exc}"


def _sweep_point(task):
    idx, args = task
    try:
        spec = _point_spectrum(args)
        row = [args[8], args[9]]
        row += [spec.gap(0, 1), spec.gap(0, 2), spec.gap(1, 2)]
        row += [
            transition_element(spec, 0, 1),
            transition_element(spec, 0, 2),
            transition_element(spec, 1, 2),
        ]
        for pair in ((0, 1), (1, 2)):
            try:
                row.append(adiabatic_k(spec, *pair))
            except DegenerateGapError:
                row.append(math.nan)
        return idx, row, None
    except Exception as exc:
        return idx, None, f"f={args[8]:.6g} f_s={args[9]:.6g}: {type(exc).__name__}: {exc}"


def _spectrum_args(cfg: RunConfig, f: float, f_s: float) -> tuple:
    c = cfg.circuit
    s = cfg.sweep
    return (c.gamma, c.ej_over_ec, c.ej_freq, c.n_p, c.n_q, c.sector, s.k, s.seed, float(f), float(f_s))


def _run_points(point_fn, tasks, workers, out_dir, stem, digits, comments, header, k_columns=()):
    """Execute sweep tasks, collect rows in index order, write CSV + sidecar log."""
    results = _parallel_map(point_fn, tasks, workers)
    results.sort(key=lambda item: item[0])
    failures = [msg for _, row, msg in results if row is None]
    rows = []
    for _, row, _msg in results:
        if row is None:
            continue
        rendered = []
        for col_name, value in zip(header, row):
            if col_name in k_columns and math.isnan(value):
                rendered.append("crossing")
            else:
                rendered.append(_fmt(value, digits))
        rows.append(rendered)
    csv_path = os.path.join(out_dir, f"{stem}.csv")
    _write_csv(csv_path, comments, header, rows)
    if failures:
        log_path = os.path.join(out_dir, f"{stem}_failures.log")
        with open(log_path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write("\n".join(failures) + "\n")
        print(f"warning: {len(failures)} point(s) failed; see {log_path}", file=sys.stderr)
    return len(failures), len(tasks)


def _base_comments(cfg: RunConfig, units: str) -> list[str]:
    return [
        f"tool_version: {__version__}",
        f"config_sha256: {config_digest(cfg)}",
        f"units: {units}",
    ]


def cmd_fig2(cfg: RunConfig, out_dir: str, workers: int) -> int:
    f_axis = _f_axis(cfg)
    digits = cfg.output.digits
    total_failed = total_points = 0
    for f_s in cfg.sweep.f_s_values:
        tasks = [(i, _spectrum_args(cfg, f, f_s)) for i, f in enumerate(f_axis)]
        header = ["f", "E0", "E1", "E2", "E3", "t_01", "t_02", "t_12"]
        comments = _base_comments(cfg, "levels in E_J; amplitudes in I_c*Phi_w0") + [
            f"f_s: {f_s:g}"
        ]
        failed, count = _run_points(
            _fig2_point, tasks, workers, out_dir, f"fig2_fs_{f_s:g}", digits, comments, header
        )
        total_failed += failed
        total_points += count
    if total_failed > MAX_FAILURE_FRACTION * total_points:
        print(
            f"error: {total_failed}/{total_points} sweep points failed (> {MAX_FAILURE_FRACTION:.0%})",
            file=sys.stderr,
        )
        return 2
    return 0


def cmd_fig3(cfg: RunConfig, out_dir: str, workers: int) -> int:
    f_axis = _f_axis(cfg)
    tasks = []
    idx = 0
    for f_s in cfg.sweep.ramp_f_s_values:
        for f in f_axis:
            tasks.append((idx, _spectrum_args(cfg, f, f_s)))
            idx += 1
    header = ["f", "f_s", "K_01", "K_12"]
    comments = _base_comments(cfg, "K in ns; 'crossing' marks gaps below the degeneracy floor")
    failed, count = _run_points(
        _fig3_point, tasks, workers, out_dir, "fig3", cfg.output.digits, comments, header,
        k_columns={"K_01", "K_12"},
    )
    if failed > MAX_FAILURE_FRACTION * count:
        print(f"error: {failed}/{count} sweep points failed", file=sys.stderr)
        return 2
    return 0


def cmd_sweep(cfg: RunConfig, out_dir: str, workers: int) -> int:
    f_axis = _f_axis(cfg)
    digits = cfg.output.digits
    header = ["f", "f_s", "gap_01", "gap_02", "gap_12", "t_01", "t_02", "t_12", "K_01", "K_12"]
    total_failed = total_points = 0
    for f_s in cfg.sweep.f_s_values:
        tasks = [(i, _spectrum_args(cfg, f, f_s)) for i, f in enumerate(f_axis)]
        comments = _base_comments(cfg, "gaps in E_J; amplitudes in I_c*Phi_w0; K in ns") + [
            f"f_s: {f_s:g}"
        ]
        failed, count = _run_points(
            _sweep_point, tasks, workers, out_dir, f"sweep_fs_{f_s:g}", digits, comments, header,
            k_columns={"K_01", "K_12"},
        )
        total_failed += failed
        total_points += count
    if total_failed > MAX_FAILURE_FRACTION * total_points:
        print(f"error: {total_failed}/{total_points} sweep points failed", file=sys.stderr)
        return 2
    return 0


def cmd_fig4(cfg: RunConfig, out_dir: str) -> int:
    digits = cfg.output.digits
    for n_t, tau_over_pi in cfg.maser.cases:
        mcfg = MaserConfig.from_interaction_time(
            n_t, tau_over_pi * math.pi, n_th=cfg.maser.n_th, n_max=cfg.maser.n_max
        )
        sqc = steady_state_sqc(mcfg)
        atomic = steady_state_atomic(mcfg)
        size = max(sqc.p.size, atomic.p.size)
        p_sqc = np.pad(sqc.p, (0, size - sqc.p.size))
        p_atomic = np.pad(atomic.p, (0, size - atomic.p.size))
        for name, total in (("sqc", p_sqc.sum()), ("atomic", p_atomic.sum())):
            if abs(total - 1.0) > 1e-9:
                print(f"error: {name} distribution sums to {total!r}", file=sys.stderr)
                return 2
        comments = _base_comments(cfg, "probabilities") + [
            f"n_t: {n_t:g}",
            f"tau_int_over_pi: {tau_over_pi:g}",
            f"n_th: {cfg.maser.n_th:g}",
            f"flags: sqc(unstable={sqc.unstable}, truncation_limited={sqc.truncation_limited}) "
            f"atomic(unstable={atomic.unstable}, truncation_limited={atomic.truncation_limited})",
        ]
        rows = [
            [str(n), _fmt(p_sqc[n], digits), _fmt(p_atomic[n], digits)] for n in range(size)
        ]
        stem = f"fig4_Nt_{n_t:g}_tau_{tau_over_pi:g}pi"
        _write_csv(os.path.join(out_dir, f"{stem}.csv"), comments, ["n", "p_sqc", "p_atomic"], rows)
    return 0


def cmd_evolve(cfg: RunConfig, out_dir: str) -> int:
    ev = cfg.evolve
    mcfg = MaserConfig.from_interaction_time(
        ev.n_t, ev.tau_int_over_pi * math.pi, n_th=ev.n_th, n_max=ev.n_max
    )
    rho0 = fock_state(0, mcfg.n_max)
    trajectory = lindblad_evolve(rho0, mcfg, ev.t_final, ev.dt, record_every=ev.record_every)
    reference = steady_state_sqc(mcfg, auto_extend=False)
    final_diag = np.real(np.diag(trajectory.rho_final))
    deviation = float(np.max(np.abs(final_diag - reference.p)))

    digits = cfg.output.digits
    n_levels = min(ev.trajectory_levels, mcfg.n_max + 1)
    header = ["t", "trace"] + [f"p_{n}" for n in range(n_levels)] + ["mean_n"]
    comments = _base_comments(cfg, "time in photon lifetimes") + [
        f"n_t: {ev.n_t:g}",
        f"tau_int_over_pi: {ev.tau_int_over_pi:g}",
        f"steady_state_max_abs_diff: {deviation:.3e}",
    ]
    rows = []
    for i, t in enumerate(trajectory.times):
        row = [_fmt(t, digits), _fmt(trajectory.traces[i], digits)]
        row += [_fmt(trajectory.populations[i][n], digits) for n in range(n_levels)]
        row.append(_fmt(trajectory.mean_n[i], digits))
        rows.append(row)
    _write_csv(os.path.join(out_dir, "evolve.csv"), comments, header, rows)
    return 0


def cmd_estimate_device(cfg: RunConfig, out_dir: str | None) -> int:
    cav = cfg.cavity
    report = device_report(
        gap_over_ej=cav.gap_over_ej,
        t_01=cav.t_01,
        ej_freq=cfg.circuit.ej_freq,
        cavity=CavityParams(
            area=cav.area, height=cav.height, quality=cav.quality, squid_area=cav.squid_area
        ),
        beta_l=cav.beta_l,
        n_t=cav.n_t,
        interaction_phase=cav.interaction_phase_over_pi * math.pi,
    )
    print(format_device_report(report))
    if out_dir is not None:
        digits = cfg.output.digits
        fields = [
            ("nu_ghz", report.nu_ghz),
            ("wavelength_m", report.wavelength_m),
            ("phi_w0_over_phi0", report.phi_ratio),
            ("g_rad_s", report.g_rad_s),
            ("g_mhz", report.g_mhz),
            ("tau_interaction_ns", report.tau_interaction_ns),
            ("tau_photon_s", report.tau_photon_s),
            ("i_c_amp", report.i_c),
            ("l_j_henry", report.l_j),
            ("l_loop_henry", report.l_loop),
            ("beta_l", report.beta_l),
            ("sigma_z_over_ej", report.sigma_z_over_ej),
            ("sigma_z_over_gap", report.sigma_z_over_gap),
        ]
        _write_csv(
            os.path.join(out_dir, "device_report.csv"),
            _base_comments(cfg, "SI units unless suffixed"),
            [name for name, _ in fields],
            [[_fmt(value, digits) for _, value in fields]],
        )
    return 0


def _apply_overrides(cfg: RunConfig, args) -> RunConfig:
    if args.grid:
        try:
            n_p, n_q = (int(part) for part in args.grid.lower().split("x"))
        except ValueError as exc:
            raise ConfigError(f"--grid expects NPxNQ, got {args.grid!r}") from exc
        cfg = replace(cfg, circuit=replace(cfg.circuit, n_p=n_p, n_q=n_q))
    if args.seed is not None:
        cfg = replace(cfg, sweep=replace(cfg.sweep, seed=args.seed))
    # a grid the solver would reject is a configuration error, not a numerical
    # one: surface it before any sweep points are dispatched
    try:
        PhaseGrid(cfg.circuit.n_p, cfg.circuit.n_q)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fluxmaser",
        description="Flux-tunable circuit maser: spectra, transition tables and photon statistics.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="YAML run configuration")
    common.add_argument("--out", metavar="DIR", default=".", help="output directory")
    common.add_argument("--workers", type=int, metavar="N", help="worker processes for sweeps")
    common.add_argument("--grid", metavar="NPxNQ", help="override grid, e.g. 81x161")
    common.add_argument("--seed", type=int, metavar="S", help="eigensolver start-vector seed")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("fig2", "levels and transition amplitudes vs f, one CSV per f_s"),
        ("fig3", "adiabaticity coefficients K vs f for the ramp f_s values"),
        ("fig4", "steady-state photon distributions for the configured operating points"),
        ("evolve", "direct master-equation time integration"),
        ("estimate-device", "physical device estimates from circuit outputs"),
        ("sweep", "combined gaps/amplitudes/K sweep, one CSV per f_s"),
    ):
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _apply_overrides(load_config(args.config), args)
        workers = _resolve_workers(args.workers, cfg)
        out_dir = args.out
        os.makedirs(out_dir, exist_ok=True)
        if args.command == "fig2":
            return cmd_fig2(cfg, out_dir, workers)
        if args.command == "fig3":
            return cmd_fig3(cfg, out_dir, workers)
        if args.command == "fig4":
            return cmd_fig4(cfg, out_dir)
        if args.command == "evolve":
            return cmd_evolve(cfg, out_dir)
        if args.command == "estimate-device":
            return cmd_estimate_device(cfg, out_dir)
        if args.command == "sweep":
            return cmd_sweep(cfg, out_dir, workers)
        raise ConfigError(f"unknown command {args.command!r}")
    except StabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except RuntimeError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
