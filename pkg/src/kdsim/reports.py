"""Delimited output and figure rendering for the CLI pipelines.

Every CSV starts with ``#``-prefixed metadata lines (tool version, command,
resolved scenario), then a header row and data rows.  Floats are written
with repr, which round-trips exactly, so repeated runs with the same inputs
produce byte-identical files.  Each writer has a matching reader.

Figures are rendered with the Agg backend straight to PNG files next to the
CSVs; the PNG metadata is pinned so the bytes stay reproducible.
"""

import csv
import io

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from ._version import __version__
from .errors import ConfigError

_PNG_METADATA = {"Software": f"kd-sim {__version__}"}


# ---------------------------------------------------------------------------
# CSV writers / readers
# ---------------------------------------------------------------------------

def _write_csv(path, metadata_lines, header, rows):
    buf = io.StringIO()
    buf.write(f"# kd-sim {__version__}\n")
    for line in metadata_lines:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(buf.getvalue())


def _read_csv(path, expected_header):
    metadata = []
    rows = []
    with open(path, "r", encoding="utf-8") as handle:
        header = None
        for line in handle:
            if line.startswith("#"):
                metadata.append(line[1:].strip())
                continue
            if header is None:
                header = [c.strip() for c in line.strip().split(",")]
                if header != list(expected_header):
                    raise ConfigError(
                        f"{path}: header {header} does not match schema {list(expected_header)}"
                    )
                continue
            if line.strip():
                rows.append([float(c) for c in line.strip().split(",")])
    if header is None:
        raise ConfigError(f"{path}: no header row found")
    return metadata, np.array(rows)


def write_pattern_csv(path, pattern, metadata_lines=()):
    rows = [
        (repr(float(x)), repr(float(i)))
        for x, i in zip(pattern.positions, pattern.intensity)
    ]
    _write_csv(path, metadata_lines, ("position_m", "intensity"), rows)


def read_pattern_csv(path):
    """Returns (positions, intensity, metadata_lines)."""
    metadata, data = _read_csv(path, ("position_m", "intensity"))
    return data[:, 0], data[:, 1], metadata


def write_scan_csv(path, scan, metadata_lines=()):
    rows = []
    for p, b, row in zip(scan.powers, scan.beta_max, scan.intensity):
        for x, i in zip(scan.positions, row):
            rows.append((repr(float(p)), repr(float(b)), repr(float(x)), repr(float(i))))
    _write_csv(
        path, metadata_lines, ("power_W", "beta_max", "position_m", "intensity"), rows
    )


def read_scan_csv(path):
    """Returns (powers, beta_max, positions, intensity matrix, metadata_lines)."""
    metadata, data = _read_csv(path, ("power_W", "beta_max", "position_m", "intensity"))
    powers = np.unique(data[:, 0])
    positions = data[data[:, 0] == powers[0], 2]
    betas = np.array([data[data[:, 0] == p, 1][0] for p in powers])
    matrix = np.vstack([data[data[:, 0] == p, 3] for p in powers])
    return powers, betas, positions, matrix, metadata


def write_populations_csv(path, beta_values, spectra, metadata_lines=()):
    rows = []
    for b, spectrum in zip(beta_values, spectra):
        for n in spectrum.orders:
            rows.append(
                (repr(float(b)), str(int(n)), repr(float(spectrum.population(n))))
            )
    _write_csv(path, metadata_lines, ("beta_max", "order_n", "population"), rows)


def read_populations_csv(path):
    """Returns (beta_values, orders, population matrix, metadata_lines)."""
    metadata, data = _read_csv(path, ("beta_max", "order_n", "population"))
    betas = np.unique(data[:, 0])
    orders = np.unique(data[:, 1]).astype(int)
    matrix = np.empty((betas.size, orders.size))
    for i, b in enumerate(betas):
        sel = data[data[:, 0] == b]
        matrix[i] = sel[np.argsort(sel[:, 1]), 2]
    return betas, np.sort(orders), matrix, metadata


def write_fit_report_csv(path, result, metadata_lines=()):
    rows = []
    for name, value in result.estimates.items():
        rows.append(
            (
                name,
                repr(float(value)),
                repr(float(result.stderr[name])),
                str(int(result.at_lower[name])),
                str(int(result.at_upper[name])),
            )
        )
    _write_csv(
        path,
        metadata_lines,
        ("parameter", "value", "stderr", "at_lower_bound", "at_upper_bound"),
        rows,
    )


def read_fit_report_csv(path):
    """Returns (list of parameter rows as dicts, metadata_lines)."""
    metadata = []
    rows = []
    header = None
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            if line.startswith("#"):
                metadata.append(line[1:].strip())
                continue
            cells = [c.strip() for c in line.strip().split(",")]
            if header is None:
                header = cells
                expected = ["parameter", "value", "stderr", "at_lower_bound", "at_upper_bound"]
                if header != expected:
                    raise ConfigError(f"{path}: header {header} does not match {expected}")
                continue
            if line.strip():
                rows.append(
                    {
                        "parameter": cells[0],
                        "value": float(cells[1]),
                        "stderr": float(cells[2]),
                        "at_lower_bound": bool(int(cells[3])),
                        "at_upper_bound": bool(int(cells[4])),
                    }
                )
    return rows, metadata


def write_fit_summary(path, result, extra=()):
    """Machine-readable key = value run summary."""
    lines = [
        f"converged = {str(result.converged).lower()}",
        f"residual_norm = {result.residual_norm!r}",
        f"initial_residual_norm = {result.initial_residual_norm!r}",
        f"iterations = {result.iterations}",
        f"n_starts = {result.n_starts}",
        f"message = {result.message}",
    ]
    for name, value in result.estimates.items():
        lines.append(f"estimate.{name} = {value!r}")
        lines.append(f"stderr.{name} = {result.stderr[name]!r}")
    lines.extend(extra)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Figures
# ---------------------------------------------------------------------------

def _save(fig, path):
    fig.savefig(path, dpi=150, metadata=_PNG_METADATA)
    plt.close(fig)


def render_pattern_png(path, pattern, title="Scattering pattern"):
    fig, ax = plt.subplots(figsize=(6.0, 4.0), constrained_layout=True)
    ax.plot(pattern.positions * 1e9, pattern.intensity * 1e-9, color="C0")
    ax.set_xlabel("focal-plane position (nm)")
    ax.set_ylabel("normalized intensity (1/nm)")
    ax.set_title(title)
    _save(fig, path)


def render_scan_png(path, scan):
    fig, ax = plt.subplots(figsize=(6.0, 4.5), constrained_layout=True)
    mesh = ax.pcolormesh(
        scan.positions * 1e9, scan.powers, scan.intensity, shading="nearest", cmap="inferno"
    )
    fig.colorbar(mesh, ax=ax, label="normalized intensity (1/m)")
    ax.set_xlabel("focal-plane position (nm)")
    ax.set_ylabel("average laser power (W)")
    twin = ax.twinx()
    twin.set_ylim(ax.get_ylim())
    twin.set_yticks(scan.powers)
    twin.set_yticklabels([f"{b:.2f}" for b in scan.beta_max])
    twin.set_ylabel("peak coupling beta_max")
    ax.set_title("Scan: patterns vs laser power")
    _save(fig, path)


def render_populations_png(path, beta_values, spectra, orders=(0, 1, 2, 3, 4)):
    fig, ax = plt.subplots(figsize=(6.0, 4.0), constrained_layout=True)
    beta_values = np.asarray(beta_values, dtype=float)
    for n in orders:
        if n > spectra[0].max_order:
            continue
        if n == 0:
            curve = [s.population(0) for s in spectra]
            label = "n = 0"
        else:
            curve = [0.5 * (s.population(n) + s.population(-n)) for s in spectra]
            label = f"n = ±{n}"
        ax.plot(beta_values, curve, marker="o", markersize=3, label=label)
    ax.set_xlabel("peak coupling beta_max")
    ax.set_ylabel("population")
    ax.set_title("Sideband populations vs coupling")
    ax.legend()
    _save(fig, path)


def render_fit_png(path, observed, model_pattern, result):
    fig, ax = plt.subplots(figsize=(6.0, 4.0), constrained_layout=True)
    ax.plot(
        observed.positions * 1e9, observed.intensity * 1e-9,
        ".", markersize=3, color="C0", label="observed",
    )
    ax.plot(
        model_pattern.positions * 1e9, model_pattern.intensity * 1e-9,
        "--", color="C3", label="model",
    )
    est = ", ".join(f"{k} = {v:.4g}" for k, v in result.estimates.items())
    ax.set_xlabel("focal-plane position (nm)")
    ax.set_ylabel("normalized intensity (1/nm)")
    ax.set_title(f"Fit: {est}")
    ax.legend()
    _save(fig, path)
