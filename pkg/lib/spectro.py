"""
Probe Spectroscopy - Spectral Estimation
Discrete Fourier estimator on the symmetric time grid, its closed-form
Dirichlet kernel and sinc limit, peak picking, and the peak -> energy map.

The estimator is the plain Riemann sum
    sigma(w) = (tau / 2pi) * sum_{n=-N..N} A(n tau) exp(i w n tau)
which equals the Dirichlet-kernel closed form exactly on exponential series.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import signal

from lib.config import (
    ALIAS_FREE_MARGIN,
    DFT_CHUNK,
    DIRECT_DFT_LIMIT,
    OMEGA_STEPS_PER_BAND,
    SIDELOBE_FACTOR,
    SINGULARITY_EPS,
    THRESHOLD_FACTOR,
)


class GridError(ValueError):
    """Empty or non-uniform frequency grid."""


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """A(t_n) on t_n = n tau, n = -N..N, with optional per-sample stderr."""

    tau: float
    n_max: int
    values: np.ndarray
    stderr: np.ndarray = None

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError(f"tau must be > 0, got {self.tau}")
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        values = np.asarray(self.values, dtype=float)
        if values.shape != (2 * self.n_max + 1,):
            raise ValueError(f"expected {2 * self.n_max + 1} samples, got {values.shape}")
        stderr = None if self.stderr is None else np.asarray(self.stderr, dtype=float)
        if stderr is not None and stderr.shape != values.shape:
            raise ValueError("stderr must match values in length")
        slack = 1e-9 + (3.0 * stderr if stderr is not None else 0.0)
        if np.any(np.abs(values) > 1.0 + slack):
            raise ValueError("|A(t)| exceeds 1: not an expectation of a +-1 observable")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "stderr", stderr)

    @property
    def indices(self):
        return np.arange(-self.n_max, self.n_max + 1)

    @property
    def times(self):
        return self.indices * self.tau

    @property
    def T(self):
        return self.n_max * self.tau


@dataclass(frozen=True, eq=False)
class Spectrum:
    omegas: np.ndarray
    values: np.ndarray
    T: float
    tau: float = None
    noise_floor: float = 0.0

    def __post_init__(self):
        omegas = np.asarray(self.omegas, dtype=float)
        if omegas.size > 1 and np.any(np.diff(omegas) <= 0):
            raise GridError("frequency grid must be strictly increasing")
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "values", np.asarray(self.values, dtype=complex))


@dataclass(frozen=True)
class Peak:
    omega_center: float
    amplitude: float
    half_width: float

    def to_dict(self):
        return {"omega": self.omega_center, "amplitude": self.amplitude, "half_width": self.half_width}


@dataclass
class PeakReport:
    peaks: list
    energies_total: list
    energies_inner: list
    shift: float = 0.0
    warnings: list = field(default_factory=list)
    alias_pairs: list = field(default_factory=list)
    alias_images: list = field(default_factory=list)
    alternate_energies_inner: list = field(default_factory=list)
    reference_tau: float = None
    noise_floor: float = 0.0

    def to_dict(self):
        return {
            "peaks": [p.to_dict() for p in self.peaks],
            "energies_total": list(self.energies_total),
            "energies_inner": list(self.energies_inner),
            "alternate_energies_inner": list(self.alternate_energies_inner),
            "reference_tau": self.reference_tau,
            "shift": self.shift,
            "noise_floor": self.noise_floor,
            "alias_pairs": [list(pair) for pair in self.alias_pairs],
            "alias_images": [
                {"omega": w, "images": list(images)} for w, images in self.alias_images
            ],
            "warnings": list(self.warnings),
        }


@dataclass(frozen=True)
class NyquistCheck:
    ok: bool
    alias_period: float = None
    message: str = ""


def nyquist_check(bound, tau):
    """
    Aliasing check for a spectral bound.

    Peaks sit at 2E with |E| <= bound, and sigma is 2pi/tau periodic, so
    2 * bound must stay below the Nyquist frequency pi/tau.

    Args:
        bound: upper bound on |eigenvalue of H_T| (see spectral_bound)
        tau: grid step

    Returns:
        NyquistCheck
    """
    if not tau > 0:
        raise ValueError(f"tau must be > 0, got {tau}")
    nyquist = math.pi / tau
    if 2.0 * bound < nyquist:
        return NyquistCheck(True)
    period = 2.0 * math.pi / tau
    return NyquistCheck(
        False,
        alias_period=period,
        message=(
            f"peaks up to 2*bound = {2 * bound:.6g} exceed the Nyquist frequency {nyquist:.6g}; "
            f"the spectrum repeats every {period:.6g} and peaks beyond Nyquist fold back "
            f"(use tau < {math.pi / (2 * bound):.6g} to avoid aliasing)"
        ),
    )


def alias_free_tau(bound, margin=ALIAS_FREE_MARGIN):
    """Largest step keeping 2*bound a factor margin below the Nyquist frequency."""
    if not bound > 0:
        raise ValueError(f"bound must be > 0, got {bound}")
    return math.pi / (2.0 * bound * margin)


def default_omega_grid(tau, extend=False, bound=None, steps=OMEGA_STEPS_PER_BAND):
    """
    Symmetric uniform grid with step (pi/tau)/steps.

    Covers [-pi/tau, pi/tau]; with extend=True it also reaches past 2*bound
    so alias images beyond Nyquist stay visible.
    """
    nyquist = math.pi / tau
    step = nyquist / steps
    limit = nyquist
    if extend and bound is not None:
        limit = max(nyquist, 2.0 * bound + 0.1 * nyquist)
    k = int(math.ceil(limit / step - 1e-9))
    return np.arange(-k, k + 1) * step


def default_threshold(T, n_qubits_total, factor=THRESHOLD_FACTOR):
    """factor * T/pi * min expected g, with g_min = 1/2^(N+1)."""
    return factor * T / math.pi / 2.0 ** n_qubits_total


def default_min_separation(T):
    """Suppress the first two positive sinc sidelobes (spacing ~ 2pi/T)."""
    return 6.0 * math.pi / T


def noise_floor(series):
    """(tau / 2pi) * sqrt(sum stderr^2); zero for exact series."""
    if series.stderr is None:
        return 0.0
    return series.tau / (2.0 * math.pi) * float(np.sqrt(np.sum(series.stderr ** 2)))


def uniform_step(omegas, rtol=1e-6):
    """Grid step if the grid is uniform, else None."""
    omegas = np.asarray(omegas, dtype=float)
    if omegas.size < 2:
        return None
    steps = np.diff(omegas)
    if np.all(np.abs(steps - steps[0]) <= rtol * abs(steps[0])):
        return float(steps[0])
    return None


def _window(n_max, window):
    if window is None:
        return np.ones(2 * n_max + 1)
    if window == "hann":
        return np.hanning(2 * n_max + 3)[1:-1]
    raise ValueError(f"unknown window {window!r} (expected None or 'hann')")


def dft_spectrum(series, omegas, window=None, method="auto"):
    """
    Evaluate the discrete Fourier estimator on a frequency grid.

    Args:
        series: TimeSeries
        omegas: frequency grid
        window: None (bare Dirichlet kernel) or "hann"
        method: "direct", "czt" (uniform grids only) or "auto"

    Returns:
        Spectrum
    """
    omegas = np.asarray(omegas, dtype=float)
    if omegas.size == 0:
        raise GridError("frequency grid is empty")

    weights = series.tau / (2.0 * math.pi) * series.values * _window(series.n_max, window)
    step = uniform_step(omegas)
    if method == "auto":
        large = omegas.size * weights.size > DIRECT_DFT_LIMIT
        method = "czt" if (large and step is not None) else "direct"

    if method == "czt":
        if step is None:
            raise GridError("chirp-z evaluation needs a uniform grid")
        a = np.exp(-1j * omegas[0] * series.tau)
        w = np.exp(1j * step * series.tau)
        raw = signal.czt(weights.astype(complex), m=omegas.size, w=w, a=a)
        values = raw * np.exp(-1j * omegas * series.n_max * series.tau)
    elif method == "direct":
        times = series.times
        values = np.empty(omegas.size, dtype=complex)
        for start in range(0, omegas.size, DFT_CHUNK):
            block = omegas[start:start + DFT_CHUNK]
            values[start:start + DFT_CHUNK] = np.exp(1j * np.outer(block, times)) @ weights
    else:
        raise ValueError(f"unknown method {method!r}")

    return Spectrum(omegas, values, series.T, tau=series.tau, noise_floor=noise_floor(series))


def _dirichlet_bracket(x, tau, n_max):
    """1 + 2cos((N+1)h) sin(Nh)/sin(h) with h = x tau / 2, reduced mod pi."""
    h = 0.5 * x * tau
    r = h - math.pi * np.round(h / math.pi)
    s = np.sin(r)
    near = np.abs(s) < SINGULARITY_EPS
    safe = np.where(near, 1.0, s)
    regular = 1.0 + 2.0 * np.cos((n_max + 1) * r) * np.sin(n_max * r) / safe
    limit = (2 * n_max + 1) * (1.0 - 2.0 * n_max * (n_max + 1) * r * r / 3.0)
    return np.where(near, limit, regular)


def kernel_closed_form(g, omega, tau, n_max):
    """
    Closed-form estimator value for known spectral coefficients.

    sum_j g_j (tau/2pi) [1 + 2cos((w - 2w_j)(T+tau)/2) sin((w - 2w_j)T/2) / sin((w - 2w_j)tau/2)]
    with T = N tau; removable singularities take their limit 2N+1.

    Args:
        g: SpectralCoefficients
        omega: scalar or array of frequencies
        tau: grid step
        n_max: N

    Returns:
        complex or numpy.ndarray of complex
    """
    if not tau > 0:
        raise ValueError(f"tau must be > 0, got {tau}")
    w = np.asarray(omega, dtype=float)
    x = w[..., None] - 2.0 * g.omegas
    values = tau / (2.0 * math.pi) * (_dirichlet_bracket(x, tau, n_max) @ g.weights)
    return complex(values) if np.ndim(omega) == 0 else values


def sinc_spectrum(g, omega, T):
    """
    tau -> 0 limit at fixed T: sum_j g_j sin((w - 2w_j)T) / (pi (w - 2w_j)).

    Peak value g_j T / pi at w = 2w_j.
    """
    if not T > 0:
        raise ValueError(f"T must be > 0, got {T}")
    w = np.asarray(omega, dtype=float)
    x = w[..., None] - 2.0 * g.omegas
    values = (T / math.pi) * (np.sinc(x * T / math.pi) @ g.weights)
    return complex(values) if np.ndim(omega) == 0 else values


def find_peaks(spectrum, threshold, min_separation=None, sidelobe_factor=SIDELOBE_FACTOR):
    """
    Local maxima of Re sigma above threshold.

    Peaks closer than min_separation keep only the highest. Centers and
    amplitudes are refined by a parabola through the three samples around
    each maximum; half_width is half the width at half prominence. Maxima
    that fit under the sinc envelope of a taller peak are dropped (see
    reject_sidelobes).

    Args:
        spectrum: Spectrum on a uniform grid
        threshold: minimum height (> 0)
        min_separation: minimum peak distance in omega units (default 6pi/T)
        sidelobe_factor: envelope factor for reject_sidelobes (None keeps all maxima)

    Returns:
        list of Peak, sorted by center
    """
    if not threshold > 0:
        raise ValueError(f"threshold must be > 0, got {threshold}")
    y = spectrum.values.real
    if y.size < 3:
        return []
    step = uniform_step(spectrum.omegas)
    if step is None:
        raise GridError("peak search needs a uniform frequency grid")
    if min_separation is None:
        min_separation = default_min_separation(spectrum.T)

    distance = max(1, int(math.floor(min_separation / step)))
    indices, _ = signal.find_peaks(y, height=threshold, distance=distance)
    if indices.size == 0:
        return []
    widths = signal.peak_widths(y, indices, rel_height=0.5)[0]

    peaks = []
    for i, width in zip(indices, widths):
        ym1, y0, yp1 = y[i - 1], y[i], y[i + 1]
        curvature = ym1 - 2.0 * y0 + yp1
        p = 0.5 * (ym1 - yp1) / curvature if curvature < 0 else 0.0
        peaks.append(Peak(
            omega_center=float(spectrum.omegas[i] + p * step),
            amplitude=float(y0 - 0.25 * (ym1 - yp1) * p),
            half_width=float(0.5 * width * step),
        ))
    if sidelobe_factor is not None:
        peaks = reject_sidelobes(peaks, spectrum.T, sidelobe_factor)
    return sorted(peaks, key=lambda peak: peak.omega_center)


def reject_sidelobes(peaks, T, factor=SIDELOBE_FACTOR):
    """
    Drop peaks that a taller neighbour's sidelobes can explain.

    A level of height h leaves sidelobes bounded by h / (|dw| T) at distance
    dw. A peak p is kept unless some taller peak q has
    p.amplitude <= factor * q.amplitude / (|dw| T).
    """
    kept = []
    for p in peaks:
        explained = False
        for q in peaks:
            distance = abs(q.omega_center - p.omega_center)
            if q.amplitude > p.amplitude and distance > 0 \
                    and p.amplitude <= factor * q.amplitude / (distance * T):
                explained = True
                break
        if not explained:
            kept.append(p)
    return kept


def peaks_to_energies(peaks, shift, tolerance=0.05, tau=None):
    """
    Map positive peaks to levels: E_total = w/2, E_inner = w/2 - C.

    Negative peaks only cross-check the mirror symmetry of the spectrum;
    an unmatched peak adds a warning, not an error. With tau given, pairs
    of detected peaks one alias period 2pi/tau apart are listed, since
    either member may be the direct peak.

    Args:
        peaks: list of Peak
        shift: energy shift C
        tolerance: mirror/alias matching tolerance in omega
        tau: grid step (enables alias pairing)

    Returns:
        PeakReport
    """
    peaks = sorted(peaks, key=lambda peak: peak.omega_center)
    positive = [p for p in peaks if p.omega_center > 0]
    negative = [p for p in peaks if p.omega_center < 0]
    energies_total = [p.omega_center / 2.0 for p in positive]
    energies_inner = [e - shift for e in energies_total]

    warnings = []
    for p in positive:
        if not any(abs(p.omega_center + q.omega_center) <= tolerance for q in negative):
            warnings.append(f"peak at {p.omega_center:.6g} has no mirror at {-p.omega_center:.6g}")
    for q in negative:
        if not any(abs(p.omega_center + q.omega_center) <= tolerance for p in positive):
            warnings.append(f"peak at {q.omega_center:.6g} has no mirror at {-q.omega_center:.6g}")

    alias_pairs = []
    images = []
    if tau is not None:
        period = 2.0 * math.pi / tau
        for hi in positive:
            for lo in peaks:
                if abs(hi.omega_center - lo.omega_center - period) <= tolerance:
                    alias_pairs.append((hi.omega_center, lo.omega_center))
        images = alias_images(peaks, tau)

    return PeakReport(
        peaks=peaks,
        energies_total=energies_total,
        energies_inner=energies_inner,
        shift=shift,
        warnings=warnings,
        alias_pairs=alias_pairs,
        alias_images=images,
    )


def alias_images(peaks, tau):
    """Each peak center with its two nearest images w -/+ 2pi/tau."""
    period = 2.0 * math.pi / tau
    return [
        (p.omega_center, (p.omega_center - period, p.omega_center + period))
        for p in sorted(peaks, key=lambda peak: peak.omega_center)
    ]


def _folds_onto(omega, target, period, tolerance):
    offset = (omega - target) % period
    return min(offset, period - offset) <= tolerance


def resolve_aliases(report, reference_peaks, tau, tolerance=0.05, reference_tau=None):
    """
    Split an aliased report into a primary and an alternate interpretation.

    Samples at step tau cannot tell w from 2pi/tau - w, so the primary levels
    come from peaks of an alias-free reference run: every positive reference
    peak r with +-r congruent to a detected peak modulo 2pi/tau. Positive
    detected peaks that no primary level accounts for directly are kept as
    alternate_energies_inner.

    Args:
        report: PeakReport of the aliased run (updated in place)
        reference_peaks: peaks of the alias-free reference spectrum
        tau: step of the aliased run
        tolerance: matching tolerance in omega
        reference_tau: step of the reference run (recorded in the report)

    Returns:
        PeakReport: the updated report
    """
    period = 2.0 * math.pi / tau
    detected = [p.omega_center for p in report.peaks]
    primary = sorted(
        r.omega_center for r in reference_peaks
        if r.omega_center > 0 and any(
            _folds_onto(r.omega_center, w, period, tolerance)
            or _folds_onto(-r.omega_center, w, period, tolerance)
            for w in detected
        )
    )
    alternates = [
        w for w in detected
        if w > 0 and not any(abs(w - r) <= tolerance for r in primary)
    ]

    report.energies_total = [w / 2.0 for w in primary]
    report.energies_inner = [e - report.shift for e in report.energies_total]
    report.alternate_energies_inner = [w / 2.0 - report.shift for w in alternates]
    report.reference_tau = reference_tau
    return report
