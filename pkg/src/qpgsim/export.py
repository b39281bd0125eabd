"""Plain-text exports: metadata header, maps, marginals, Schmidt tables, operating points."""
from __future__ import annotations

import hashlib
import json

import numpy as np

from . import __version__

FLOAT = "{:.10e}"


def config_hash(config):
    """SHA-256 of a canonical JSON rendering of ``config``."""
    blob = json.dumps(config, sort_keys=True, default=str, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def header_lines(config, seed=None, extra=None):
    lines = [
        f"# qpgsim {__version__}",
        f"# config_sha256 {config_hash(config)}",
        f"# seed {seed if seed is not None else 'none'}",
    ]
    for k, v in (extra or {}).items():
        lines.append(f"# {k} {v}")
    return lines


def _fmt(x):
    return FLOAT.format(float(x))


def write_table(path, columns, rows, header):
    with open(path, "w") as fh:
        for line in header:
            fh.write(line + "\n")
        fh.write("# " + " ".join(columns) + "\n")
        for row in rows:
            fh.write(" ".join(_fmt(v) for v in row) + "\n")


def map_rows(cmap):
    a = cmap.axis_in.values
    b = cmap.axis_second.values
    v = cmap.values
    for i in range(a.size):
        for j in range(b.size):
            z = v[i, j]
            yield a[i], b[j], z.real, z.imag, abs(z) ** 2


def write_map(path, cmap, header):
    """``axis_in axis_second re im intensity`` rows, axis_in major."""
    ua, ub = cmap.axis_in.unit, cmap.axis_second.unit
    meta = [
        f"# axis_in {cmap.labels[0]} [{ua}] {_fmt(cmap.axis_in.start)} {_fmt(cmap.axis_in.stop)} {cmap.axis_in.num}",
        f"# axis_second {cmap.labels[1]} [{ub}] {_fmt(cmap.axis_second.start)} {_fmt(cmap.axis_second.stop)} {cmap.axis_second.num}",
    ]
    write_table(path, (cmap.labels[0], cmap.labels[1], "re", "im", "intensity"), map_rows(cmap), header + meta)


def read_map(path):
    """Inverse of :func:`write_map`; returns (axis_in, axis_second, complex values)."""
    data = np.loadtxt(path, comments="#", ndmin=2)
    a = np.unique(data[:, 0])
    b = np.unique(data[:, 1])
    vals = (data[:, 2] + 1j * data[:, 3]).reshape(a.size, b.size)
    return a, b, vals


def write_marginal(path, frequency, intensity, header):
    write_table(path, ("frequency", "intensity"), zip(frequency, intensity), header)


def write_schmidt(path, decomposition, header, max_modes=20):
    c = decomposition.coefficients[:max_modes]
    with open(path, "w") as fh:
        for line in header:
            fh.write(line + "\n")
        fh.write(f"# schmidt_number {_fmt(decomposition.schmidt_number)}\n")
        fh.write("# index coefficient\n")
        for i, x in enumerate(c):
            fh.write(f"{i} {_fmt(x)}\n")


def write_gvm(path, gmap, header):
    rows = (
        (li, lp, gmap.values[i, j])
        for i, li in enumerate(gmap.lambda_in)
        for j, lp in enumerate(gmap.lambda_pump)
    )
    write_table(path, ("lambda_in_nm", "lambda_pump_nm", "gvm_s_per_m"), rows, header + [f"# temperature_C {gmap.temperature}"])


def write_points(path, points, header):
    cols = ("temperature_C", "lambda_in_nm", "lambda_pump_nm", "lambda_out_nm", "residual_gvm_s_per_m", "poling_period_m")
    rows = [
        (p.temperature, p.lambda_in, p.lambda_pump, p.lambda_out, p.residual_gvm,
         np.nan if p.poling_period is None else p.poling_period)
        for p in points
    ]
    write_table(path, cols, rows, header)


def write_summary(path, entries, header):
    with open(path, "w") as fh:
        for line in header:
            fh.write(line + "\n")
        for k, v in entries.items():
            fh.write(f"{k} = {_fmt(v) if isinstance(v, (float, np.floating)) else v}\n")


def read_summary(path):
    out = {}
    with open(path) as fh:
        for line in fh:
            if line.startswith("#") or "=" not in line:
                continue
            k, v = (s.strip() for s in line.split("=", 1))
            try:
                out[k] = float(v)
            except ValueError:
                out[k] = v
    return out
