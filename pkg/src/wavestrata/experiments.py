"""Scripted experiment drivers: simulation traces, scans and CSV persistence.

CSV conventions: '.' decimal separator, Unix newlines, scientific notation
with 17 significant digits, so identical configurations reproduce byte
identical files.  Every command writes a ``<out>.meta`` sidecar (flat
``key = value`` text with the full configuration and the resonance report)
before the data file, so a crash can never leave data without provenance.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import mfe
from .config import ExperimentConfig
from .integrator import (
    BlowUpError,
    EnergyTrace,
    SpectralState,
    get_filter,
    make_single_mode_init,
    one_step,
    run,
)
from .resonance import ResonanceReport, check_cfl, nonres_margins
from .spectral import EnergyProfile, WeightScheme, make_params, mode_energies


class ResonantTauRefusal(RuntimeError):
    """Configuration demanded a non-resonant step-size but got a resonant one."""


def fmt(x: float) -> str:
    """17-significant-digit scientific notation (round-trip exact for doubles)."""
    return f"{x:.16e}"


def _write_lines(path: str, lines: list[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_trace_csv(trace: EnergyTrace, path: str) -> None:
    """Schema: header ``t,E0,...,EM``; one row per sample."""
    n_modes = trace.energies.shape[1]
    header = "t," + ",".join(f"E{l}" for l in range(n_modes))
    lines = [header]
    for t, row in zip(trace.times, trace.energies):
        lines.append(",".join([fmt(t)] + [fmt(v) for v in row]))
    _write_lines(path, lines)


def _setup(config: ExperimentConfig):
    params = make_params(config.rho, config.M)
    profile = EnergyProfile(config.K)
    weights = WeightScheme(s=config.s, nu=config.nu, eps=config.eps)
    filters = get_filter(config.filter)
    return params, profile, weights, filters


def write_metadata(config: ExperimentConfig, report: ResonanceReport | None,
                   path: str, extra: dict | None = None) -> None:
    lines = ["# wavestrata run metadata"]
    lines += config.to_text().rstrip("\n").splitlines()
    if report is not None:
        lines.append("# resonance report")
        lines += report.to_text().rstrip("\n").splitlines()
        params = make_params(config.rho, config.M)
        ok, slack = check_cfl(config.tau, params, config.K)
        lines.append(f"cfl_ok = {int(ok)}")
        lines.append(f"cfl_slack = {fmt(slack)}")
    for key, value in (extra or {}).items():
        lines.append(f"{key} = {value}")
    _write_lines(path, lines)


def windowed_max(trace: EnergyTrace, window: int) -> EnergyTrace:
    """Forward window maxima over steps: rows at n = 0, window, 2*window, ...

    Requires a stride-1 trace so each window sees every step.
    """
    if trace.sample_stride != 1:
        raise ValueError("windowed-max postprocessing needs sample_stride = 1")
    n = trace.times.shape[0]
    starts = range(0, n, window)
    times = np.array([trace.times[i] for i in starts])
    rows = np.array([trace.energies[i:i + window].max(axis=0) for i in starts])
    return EnergyTrace(times, rows, sample_stride=window)


def cmd_simulate(config: ExperimentConfig, out: str | None = None) -> EnergyTrace:
    """Run the integrator from single-mode initial data and persist the trace."""
    out = out or config.out
    params, profile, weights, filters = _setup(config)
    report = nonres_margins(config.tau, params, profile, nu=config.nu, eps=config.eps)
    if config.require_nonresonant and report.classification == "resonant":
        write_metadata(config, report, out + ".meta", extra={"refused": 1})
        raise ResonantTauRefusal(
            f"tau={config.tau!r} classified resonant at {report.weak_witness}"
        )
    write_metadata(config, report, out + ".meta")
    u0, udot0 = make_single_mode_init(config.eps, params)
    state = SpectralState(u=u0, udot=udot0, n=0, tau=config.tau, real_field=True)
    stride = 1 if config.window_max else config.sample_stride
    try:
        trace = run(state, params, filters, config.n_steps, sample_stride=stride)
    except BlowUpError as err:
        if err.trace is not None:
            partial = err.trace
            write_trace_csv(partial, out)
            write_metadata(config, report, out + ".meta",
                           extra={"blow_up_step": err.step,
                                  "last_sample_index": partial.times.shape[0] - 1})
        raise
    if config.window_max:
        trace = windowed_max(trace, config.window_max)
    write_trace_csv(trace, out)
    return trace


def _scan_map(fn, items, threads: int):
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def cmd_resonance_scan(tau_grid, config: ExperimentConfig, out: str | None = None,
                       threads: int = 1) -> list[ResonanceReport]:
    """One margin/classification row per step-size in the grid."""
    taus = list(tau_grid)
    if not taus:
        raise ValueError("tau grid must be nonempty")
    out = out or config.out
    params, profile, _weights, _filters = _setup(config)

    def scan(tau: float) -> ResonanceReport:
        return nonres_margins(tau, params, profile, nu=config.nu, eps=config.eps)

    reports = _scan_map(scan, taus, threads)
    order = sorted(range(len(taus)), key=lambda i: (taus[i], i))
    write_metadata(config, None, out + ".meta", extra={"n_rows": len(taus)})
    lines = ["tau,min_weak_margin,witness_j,witness_k,min_strong_margin,"
             "classification,cfl_ok,cfl_slack"]
    for i in order:
        r = reports[i]
        ok, slack = check_cfl(r.tau, params, profile.K)
        lines.append(",".join([
            fmt(r.tau), fmt(r.min_weak_margin), str(r.weak_witness.j),
            f"\"{r.weak_witness.k.key()}\"", fmt(r.min_strong_margin),
            r.classification, str(int(ok)), fmt(slack),
        ]))
    _write_lines(out, lines)
    return [reports[i] for i in order]


@dataclass
class OrderStudy:
    eps_values: list[float]
    max_errors: np.ndarray   # rows per eps, columns j = 0, 1, 2
    t0_errors: np.ndarray    # same layout, error of the expansion at t = 0
    slopes: np.ndarray       # fitted log-log slope per column (nan if single eps)
    times: np.ndarray
    series: np.ndarray       # (n_eps, n_times, 3) error time series


def mfe_order_study(config: ExperimentConfig, eps_list, t_final: float = 1.0,
                    threads: int = 1) -> OrderStudy:
    """Expansion error versus the integrator over [0, t_final] for several eps."""
    params, profile, _weights, filters = _setup(config)
    n_steps = int(round(t_final / config.tau))
    report = nonres_margins(config.tau, params, profile, nu=config.nu, eps=config.eps)
    modes = (0, 1, 2)

    def study(eps: float):
        u0, udot0 = make_single_mode_init(eps, params)
        table = mfe.construct(u0, udot0, config.tau, params, profile, filters, eps,
                              nu=config.nu, m_max=config.m_max,
                              resonance_report=report)
        state = SpectralState(u=u0, udot=udot0, n=0, tau=config.tau, real_field=True)
        errs = np.zeros((n_steps + 1, len(modes)))
        u = state
        for n in range(n_steps + 1):
            approx = mfe.evaluate(table, n * config.tau)
            diff = np.abs(u.u - approx)
            errs[n] = [diff[params.M + j] for j in modes]
            if n < n_steps:
                u = one_step(u, params, filters)
        return errs

    eps_values = [float(e) for e in eps_list]
    all_errs = _scan_map(study, eps_values, threads)
    series = np.array(all_errs)
    max_errors = series.max(axis=1)
    t0_errors = series[:, 0, :]
    if len(eps_values) >= 2:
        logs = np.log(np.array(eps_values))
        slopes = np.array([
            np.polyfit(logs, np.log(np.maximum(max_errors[:, c], 1e-300)), 1)[0]
            for c in range(len(modes))
        ])
    else:
        slopes = np.full(len(modes), np.nan)
    times = np.arange(n_steps + 1) * config.tau
    return OrderStudy(eps_values, max_errors, t0_errors, slopes, times, series)


def cmd_mfe_order(config: ExperimentConfig, eps_list, out: str | None = None,
                  threads: int = 1) -> OrderStudy:
    """Persist an order study: summary CSV plus a `.series.csv` time-series sidecar."""
    out = out or config.out
    study = mfe_order_study(config, eps_list, threads=threads)
    write_metadata(config, None, out + ".meta",
                   extra={"eps_list": ",".join(fmt(e) for e in study.eps_values)})
    lines = ["eps,max_err_j0,max_err_j1,max_err_j2,t0_err_j0,t0_err_j1,t0_err_j2"]
    for i, eps in enumerate(study.eps_values):
        lines.append(",".join([fmt(eps)] + [fmt(v) for v in study.max_errors[i]]
                              + [fmt(v) for v in study.t0_errors[i]]))
    slope_row = ["slope"] + [fmt(v) for v in study.slopes] + ["nan"] * 3
    lines.append(",".join(slope_row))
    _write_lines(out, lines)

    head = ["t"]
    for i, eps in enumerate(study.eps_values):
        head += [f"err{j}_{eps:.0e}" for j in range(3)]
    series_lines = [",".join(head)]
    for ti, t in enumerate(study.times):
        row = [fmt(t)]
        for i in range(len(study.eps_values)):
            row += [fmt(v) for v in study.series[i, ti]]
        series_lines.append(",".join(row))
    _write_lines(out + ".series.csv", series_lines)
    return study


def cmd_invariants(config: ExperimentConfig, out: str | None = None) -> mfe.DriftReport:
    """Tabulate almost-invariant energies on the step grid over [0, 1]."""
    out = out or config.out
    params, profile, weights, filters = _setup(config)
    report = nonres_margins(config.tau, params, profile, nu=config.nu, eps=config.eps)
    u0, udot0 = make_single_mode_init(config.eps, params)
    table = mfe.construct(u0, udot0, config.tau, params, profile, filters, config.eps,
                          nu=config.nu, m_max=config.m_max, resonance_report=report)
    n_steps = int(math.floor(1.0 / config.tau))
    t_grid = np.arange(n_steps + 1) * config.tau
    rows = [mfe.almost_invariants(table, float(t)).values for t in t_grid]
    drift = mfe.invariant_drift(table, t_grid, weights)
    write_metadata(config, report, out + ".meta", extra={
        "weighted_aggregate_drift": fmt(drift.weighted_aggregate),
        **{f"drift_{l}": fmt(v) for l, v in enumerate(drift.per_level)},
    })
    header = "t," + ",".join(f"inv{l}" for l in range(params.M + 1))
    lines = [header]
    for t, row in zip(t_grid, rows):
        lines.append(",".join([fmt(t)] + [fmt(v.real) for v in row]))
    _write_lines(out, lines)
    return drift


def initial_energy_check(config: ExperimentConfig) -> np.ndarray:
    """Mode energies of the configured initial data (diagnostic helper)."""
    params, _profile, _weights, _filters = _setup(config)
    u0, udot0 = make_single_mode_init(config.eps, params)
    return mode_energies(u0, udot0, params)
