"""
Probe Spectroscopy - Pipeline Runner
Model file -> time series -> spectrum -> peaks -> oracle comparison -> artifacts
"""

import math
import os
import re
import time
from dataclasses import dataclass

import numpy as np
import sympy

from lib.artifacts import (
    plot_spectrum_svg,
    pretty_radians,
    write_peaks_json,
    write_spectrum_csv,
    write_timeseries_csv,
)
from lib.config import DEFAULT_SEED, DEFAULT_SHOTS, OUTPUT_DIR
from lib.engines import ENGINES
from lib.exact import DimensionError
from lib.model import lift_total, spectral_bound, suggest_shift
from lib.model_catalog import ModelCatalog
from lib.model_loader import load_model
from lib.oracle import brute_energies, compare
from lib.sampler import sample_series
from lib.spectro import (
    alias_free_tau,
    default_min_separation,
    default_omega_grid,
    default_threshold,
    dft_spectrum,
    find_peaks,
    nyquist_check,
    peaks_to_energies,
    resolve_aliases,
)

# numbers (with exponents), pi, + - * / and parentheses
_EXPR_TOKENS = re.compile(r"^(?:\s|\d|\.|pi|[eE](?=[+\-]?\d)|[+\-*/()])+$")
_EXPR_NAMESPACE = {"pi": sympy.pi}


def parse_expr(text):
    """
    Evaluate a real-valued expression such as '-8*pi', 'pi/12' or '0.25'.

    Only numbers, 'pi', + - * / and parentheses are accepted.
    """
    if isinstance(text, (int, float)):
        return float(text)

    source = str(text).strip()
    if not _EXPR_TOKENS.match(source):
        raise ValueError(f"cannot parse expression {text!r}: only numbers, pi, + - * / and () are allowed")
    try:
        value = sympy.sympify(source, locals=dict(_EXPR_NAMESPACE))
    except (sympy.SympifyError, SyntaxError, TypeError, ZeroDivisionError) as e:
        raise ValueError(f"cannot parse expression {text!r}: {e}") from None
    if not (value.is_number and value.is_real):
        raise ValueError(f"expression {text!r} is not a finite real number (got {value})")
    return float(value)


@dataclass
class RunConfig:
    model_path: str
    engine: str = "exact"
    tau: float = math.pi / 12
    n_max: int = 96
    shots: int = DEFAULT_SHOTS
    seed: int = DEFAULT_SEED
    omega_min: float = None
    omega_max: float = None
    omega_step: float = None
    threshold: float = None
    min_separation: float = None
    output_dir: str = OUTPUT_DIR
    mirror: bool = False
    extend_past_nyquist: bool = False
    oracle: bool = False
    strict: bool = False
    oracle_tolerance: float = 0.05
    window: str = None
    resolve_aliases: bool = True

    def validate(self):
        """Raise ValueError for settings no run can use."""
        if self.engine not in ENGINES:
            raise ValueError(f"unknown engine {self.engine!r} (expected one of {', '.join(ENGINES)})")
        if not self.tau > 0:
            raise ValueError(f"tau must be > 0, got {self.tau}")
        if self.n_max < 1:
            raise ValueError(f"nmax must be >= 1, got {self.n_max}")
        if self.engine == "shots" and self.shots < 1:
            raise ValueError(f"shots must be >= 1 for the shots engine, got {self.shots}")
        if self.threshold is not None and not self.threshold > 0:
            raise ValueError(f"threshold must be > 0, got {self.threshold}")
        if self.omega_step is not None and not self.omega_step > 0:
            raise ValueError(f"omega step must be > 0, got {self.omega_step}")
        if None not in (self.omega_min, self.omega_max) and self.omega_max < self.omega_min:
            raise ValueError(f"omega grid is empty: max {self.omega_max} < min {self.omega_min}")


@dataclass
class RunResult:
    model: object
    series: object
    spectrum: object
    report: object
    comparison: object
    paths: dict
    exit_code: int


def omega_grid(config, bound):
    """Frequency grid from the config, falling back to the defaults per missing field."""
    default = default_omega_grid(config.tau, extend=config.extend_past_nyquist, bound=bound)
    step = config.omega_step if config.omega_step is not None else float(default[1] - default[0])
    lo = config.omega_min if config.omega_min is not None else float(default[0])
    hi = config.omega_max if config.omega_max is not None else float(default[-1])
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    if count < 1:
        raise ValueError("omega grid is empty")
    return lo + np.arange(count) * step


def reference_run(config, total, bound, T, threshold, verbose=False):
    """
    Peaks of an alias-free run with the same engine and at least the same T.

    The threshold scales with the record length, since peak heights grow as T/pi.

    Returns:
        tuple: (reference tau, list of Peak)
    """
    tau = alias_free_tau(bound)
    n_max = int(math.ceil(T / tau))
    print(f"      Resolving aliases with an alias-free run (tau = {tau:.4g}, N = {n_max})...")
    series = sample_series(config.engine, total, tau, n_max,
                           shots=config.shots, seed=config.seed,
                           mirror=config.mirror, verbose=verbose)
    spectrum = dft_spectrum(series, default_omega_grid(tau), window=config.window)
    return tau, find_peaks(spectrum, threshold * series.T / T)


def run_pipeline(config, verbose=False):
    """
    Run the full spectroscopy pipeline and write its artifacts.

    Args:
        config: RunConfig
        verbose: Show detailed progress

    Returns:
        RunResult: exit_code 0 on success, 3 on a strict oracle mismatch
    """
    config.validate()
    start_time = time.time()

    print("\n[1/5] Loading model...")
    model_path = ModelCatalog().resolve(config.model_path)
    model = load_model(model_path)
    total = lift_total(model)
    bound = spectral_bound(model)
    print(f"      {model.n_qubits} qubit(s), {len(model.terms)} term(s), shift C = {model.shift:g}")

    warnings = []
    check = nyquist_check(bound, config.tau)
    if not check.ok:
        warnings.append(check.message)
        print(f"[Warning] {check.message}")

    print(f"\n[2/5] Sampling <X_0(t)> with engine '{config.engine}' "
          f"(tau = {pretty_radians(config.tau)}, N = {config.n_max})...")
    series = sample_series(config.engine, total, config.tau, config.n_max,
                           shots=config.shots, seed=config.seed,
                           mirror=config.mirror, verbose=verbose)

    print("\n[3/5] Evaluating spectrum...")
    omegas = omega_grid(config, bound)
    spectrum = dft_spectrum(series, omegas, window=config.window)
    print(f"      {omegas.size} frequencies in [{omegas[0]:.4g}, {omegas[-1]:.4g}]")

    print("\n[4/5] Locating peaks...")
    threshold = config.threshold if config.threshold is not None \
        else default_threshold(series.T, total.n_qubits)
    min_separation = config.min_separation if config.min_separation is not None \
        else default_min_separation(series.T)
    peaks = find_peaks(spectrum, threshold, min_separation)
    tolerance = max(2.0 * float(omegas[1] - omegas[0]) if omegas.size > 1 else 0.0, 0.02)
    report = peaks_to_energies(peaks, model.shift, tolerance=tolerance,
                               tau=None if check.ok else config.tau)
    if not check.ok and config.resolve_aliases:
        reference_tau, reference_peaks = reference_run(config, total, bound, series.T, threshold, verbose)
        resolve_aliases(report, reference_peaks, config.tau, tolerance=max(tolerance, 0.05),
                        reference_tau=reference_tau)
    report.warnings = warnings + report.warnings
    report.noise_floor = spectrum.noise_floor
    print(f"      {len(peaks)} peak(s); inner energies: "
          + ", ".join(f"{e:.4f}" for e in report.energies_inner))
    for message in report.warnings[len(warnings):]:
        print(f"[Warning] {message}")
    if report.alternate_energies_inner:
        print("      alias alternates: "
              + ", ".join(f"{e:.4f}" for e in report.alternate_energies_inner))

    comparison = None
    exit_code = 0
    if config.oracle:
        levels = brute_energies(model)
        comparison = compare(report.energies_inner, levels.energies, config.oracle_tolerance)
        status = "match" if comparison.ok else "MISMATCH"
        print(f"      Oracle: {status} ({len(comparison.matched)} matched, "
              f"{len(comparison.missed)} missed, {len(comparison.spurious)} spurious)")
        if config.strict and not comparison.ok:
            exit_code = 3

    print("\n[5/5] Writing artifacts...")
    paths = {
        "timeseries": os.path.join(config.output_dir, "timeseries.csv"),
        "spectrum": os.path.join(config.output_dir, "spectrum.csv"),
        "peaks": os.path.join(config.output_dir, "peaks.json"),
        "plot": os.path.join(config.output_dir, "plot.svg"),
    }
    write_timeseries_csv(series, paths["timeseries"])
    write_spectrum_csv(spectrum, paths["spectrum"])
    write_peaks_json(report, paths["peaks"], comparison)
    plot_spectrum_svg(spectrum.omegas, spectrum.values, [p.to_dict() for p in report.peaks],
                      paths["plot"], title=model.name or None)
    for path in paths.values():
        print(f"      ✓ {path}")

    if verbose:
        print(f"\n[Runner] Completed in {time.time() - start_time:.2f} seconds")

    return RunResult(model, series, spectrum, report, comparison, paths, exit_code)


def describe_model(model, tau=None, engine=None):
    """
    Summary lines and warnings for `probe.py validate`.

    Returns:
        tuple: (lines, warnings)
    """
    bound = spectral_bound(model)
    lines = [
        f"Qubits:          {model.n_qubits}",
        f"Terms:           {len(model.terms)}",
        f"Shift C:         {model.shift:g}",
        f"Diagonal:        {'yes' if model.is_diagonal else 'no (X/Y terms present)'}",
        f"Spectral bound:  {bound:g}",
        f"Suggested C:     {suggest_shift(model):g} (sum|a| + 1)",
        f"Alias-free tau:  < {math.pi / (2 * bound):.6g}" if bound > 0 else "Alias-free tau:  any",
    ]
    warnings = []
    if tau is not None:
        check = nyquist_check(bound, tau)
        lines.append(f"Nyquist at tau={pretty_radians(tau)}: {'ok' if check.ok else 'aliasing'}")
        if not check.ok:
            warnings.append(check.message)
    if not model.is_diagonal:
        available = "dense"
        if engine not in (None, "dense"):
            warnings.append(
                f"engine '{engine}' is unavailable for models with X/Y terms; "
                f"the exact-diagonal, circuit and shots engines need Z-only models (available: {available})"
            )
    try:
        lowest = brute_energies(model).energies[0]
    except DimensionError:
        lowest = -(bound - model.shift)
    if lowest + model.shift <= 0:
        warnings.append(
            f"shift C = {model.shift:g} does not make every level of H + C positive "
            f"(lowest level {lowest:g}); peaks of negative levels land on the mirror side"
        )
    return lines, warnings


@dataclass
class SoundnessPlan:
    """Grid settings under which every level of a model is resolvable."""

    tau: float
    n_max: int
    omegas: np.ndarray
    threshold: float
    min_gap: float


def plan_soundness_case(model, gap_periods=8.0, tau_margin=1.25, min_gap=0.05):
    """
    Choose an alias-free grid long enough to separate the closest levels.

    tau keeps 2*bound a factor tau_margin below Nyquist; T = gap_periods*pi/gap,
    so neighbouring peaks sit 2*gap_periods*pi/T apart. The threshold is half
    the smallest expected peak height (T/pi) * min_multiplicity / 2^(N+1).

    Returns:
        SoundnessPlan, or None when the closest levels are nearer than min_gap
    """
    levels = brute_energies(model)
    gap = float(np.min(np.diff(levels.energies))) if len(levels) > 1 else 1.0
    if gap < min_gap:
        return None

    bound = spectral_bound(model)
    tau = alias_free_tau(bound, tau_margin)
    n_max = int(math.ceil(gap_periods * math.pi / gap / tau))
    T = n_max * tau
    step = min(0.01, math.pi / (4.0 * T))
    k = int(math.ceil((2.0 * bound + 1.0) / step))
    threshold = 0.5 * (T / math.pi) * min(levels.multiplicities) / 2.0 ** (model.n_qubits + 1)
    return SoundnessPlan(tau, n_max, np.arange(-k, k + 1) * step, threshold, gap)


def run_soundness_case(model, plan, tolerance=0.05, engine="exact"):
    """
    Recover the levels of one model on its planned grid and grade them.

    Returns:
        tuple: (ComparisonReport, PeakReport)
    """
    total = lift_total(model)
    series = sample_series(engine, total, plan.tau, plan.n_max, mirror=True)
    spectrum = dft_spectrum(series, plan.omegas)
    peaks = find_peaks(spectrum, plan.threshold)
    step = float(plan.omegas[1] - plan.omegas[0])
    report = peaks_to_energies(peaks, model.shift, tolerance=max(2.0 * step, 0.02))
    comparison = compare(report.energies_inner, brute_energies(model).energies, tolerance)
    return comparison, report
