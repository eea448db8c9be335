"""
Probe Spectroscopy - Artifacts
Time series / spectrum CSV, peaks JSON, and the SVG plot of Re sigma(w)
"""

import csv
import json
import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

TIMESERIES_HEADER = ["n", "t", "a", "stderr"]
SPECTRUM_HEADER = ["omega", "re", "im"]

# Fixed salt and no timestamp keep SVG output byte-identical across runs
_SVG_RC = {"svg.hashsalt": "probe-spectroscopy", "svg.fonttype": "none"}


class ArtifactFormatError(ValueError):
    """Malformed CSV or JSON artifact."""


def _real(x):
    return f"{x:.17g}"


def _ensure_parent(path):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)


def write_timeseries_csv(series, path):
    _ensure_parent(path)
    stderr = series.stderr if series.stderr is not None else np.zeros_like(series.values)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(TIMESERIES_HEADER)
        for n, t, a, e in zip(series.indices, series.times, series.values, stderr):
            writer.writerow([int(n), _real(t), _real(a), _real(e)])


def read_timeseries_csv(path):
    """Rows as (n, t, a, stderr) tuples."""
    return [
        (int(row[0]), float(row[1]), float(row[2]), float(row[3]))
        for row in _read_rows(path, TIMESERIES_HEADER)
    ]


def write_spectrum_csv(spectrum, path):
    _ensure_parent(path)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(SPECTRUM_HEADER)
        for w, v in zip(spectrum.omegas, spectrum.values):
            writer.writerow([_real(w), _real(v.real), _real(v.imag)])


def _read_rows(path, header):
    with open(path, "r", newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    if not rows or [h.strip() for h in rows[0]] != header:
        raise ArtifactFormatError(f"{path}: expected header {','.join(header)}")
    body = rows[1:]
    for line_no, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise ArtifactFormatError(f"{path}: line {line_no} has {len(row)} fields, expected {len(header)}")
    return body


def read_spectrum_csv(path):
    """
    Load a spectrum CSV.

    Args:
        path: CSV written by write_spectrum_csv

    Returns:
        tuple: (omegas, complex values) as numpy arrays
    """
    rows = _read_rows(path, SPECTRUM_HEADER)
    try:
        data = np.array([[float(x) for x in row] for row in rows], dtype=float).reshape(-1, 3)
    except ValueError as e:
        raise ArtifactFormatError(f"{path}: {e}") from None
    return data[:, 0], data[:, 1] + 1j * data[:, 2]


def write_peaks_json(report, path, comparison=None):
    _ensure_parent(path)
    data = report.to_dict()
    if comparison is not None:
        data["oracle_comparison"] = comparison.to_dict()
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2)
        f.write("\n")


def read_peaks_json(path):
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ArtifactFormatError(f"{path}: line {e.lineno}: {e.msg}") from None
    if not isinstance(data, dict) or not isinstance(data.get("peaks"), list):
        raise ArtifactFormatError(f"{path}: expected an object with a 'peaks' list")
    for idx, peak in enumerate(data["peaks"]):
        if not isinstance(peak, dict) or "omega" not in peak or "amplitude" not in peak:
            raise ArtifactFormatError(f"{path}: peaks[{idx}] needs 'omega' and 'amplitude'")
    return data


def plot_spectrum_svg(omegas, values, peaks, path, title=None):
    """
    Render Re sigma(w) with peak markers as SVG.

    Args:
        omegas: frequency grid
        values: complex spectrum values
        peaks: list of {"omega", "amplitude"} dicts
        path: output .svg path
        title: optional plot title
    """
    _ensure_parent(path)
    omegas = np.asarray(omegas, dtype=float)
    values = np.asarray(values, dtype=complex)

    with plt.rc_context(_SVG_RC):
        fig, ax = plt.subplots(figsize=(8, 4))
        if omegas.size:
            line, = ax.plot(omegas, values.real, lw=1.0, color="tab:blue")
            line.set_gid("spectrum")
        if peaks:
            markers, = ax.plot(
                [p["omega"] for p in peaks], [p["amplitude"] for p in peaks],
                linestyle="none", marker="v", color="tab:red",
            )
            markers.set_gid("peak-markers")
            for p in peaks:
                ax.annotate(f"{p['omega']:.2f}", (p["omega"], p["amplitude"]),
                            textcoords="offset points", xytext=(0, 6), ha="center", fontsize=7)
        ax.axhline(0.0, color="0.6", lw=0.5)
        ax.set_xlabel("ω")
        ax.set_ylabel("Re σ(ω)")
        if title:
            ax.set_title(title)
        ax.grid(True, lw=0.3)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)


def pretty_radians(x):
    """Render a multiple of pi compactly, e.g. 0.2617... -> 'pi/12'."""
    ratio = x / math.pi
    for denom in (1, 2, 3, 4, 6, 8, 12, 16, 24, 48, 96):
        numer = ratio * denom
        if abs(numer - round(numer)) < 1e-9:
            numer = int(round(numer))
            head = {1: "pi", -1: "-pi"}.get(numer, f"{numer}*pi")
            return head if denom == 1 else f"{head}/{denom}"
    return f"{x:.6g}"
