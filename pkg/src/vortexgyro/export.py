"""Plain-text and image writers: CSV tables, PGM graymaps, key=value records."""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np


def _fmt(value):
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def write_csv(path, header, columns):
    """Write equal-length ``columns`` under ``header``; floats keep full precision."""
    columns = [np.asarray(c).ravel() for c in columns]
    lengths = {len(c) for c in columns}
    if len(lengths) != 1:
        raise ValueError("CSV columns must have equal length")
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in zip(*columns):
            writer.writerow([_fmt(v) for v in row])
    return path


def read_csv(path):
    """Read a CSV written by :func:`write_csv` into a dict of float arrays."""
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [list(map(float, r)) for r in reader]
    data = np.array(rows, dtype=float).reshape(-1, len(header))
    return {name: data[:, i] for i, name in enumerate(header)}


def write_pgm(path, image, bits=8):
    """Binary (P5) graymap, max-normalized; row 0 is written at the top as +y."""
    if bits not in (8, 16):
        raise ValueError("PGM depth must be 8 or 16 bits")
    image = np.asarray(image, dtype=float)
    maxval = 255 if bits == 8 else 65535
    peak = image.max()
    scaled = np.zeros_like(image) if peak <= 0 else np.clip(image / peak, 0, 1) * maxval
    pixels = np.rint(scaled[::-1]).astype(">u2" if bits == 16 else np.uint8)
    ny, nx = image.shape
    path = Path(path)
    with path.open("wb") as fh:
        fh.write(f"P5\n{nx} {ny}\n{maxval}\n".encode("ascii"))
        fh.write(pixels.tobytes())
    return path


def read_pgm(path):
    """Inverse of :func:`write_pgm` (returns integer levels, +y row last)."""
    raw = Path(path).read_bytes()
    fields, pos = [], 0
    while len(fields) < 4:
        while raw[pos:pos + 1].isspace():
            pos += 1
        end = pos
        while not raw[end:end + 1].isspace():
            end += 1
        fields.append(raw[pos:end])
        pos = end
    pos += 1
    if fields[0] != b"P5":
        raise ValueError("not a binary PGM")
    nx, ny, maxval = int(fields[1]), int(fields[2]), int(fields[3])
    dtype = np.uint8 if maxval < 256 else np.dtype(">u2")
    data = np.frombuffer(raw, dtype=dtype, offset=pos, count=nx * ny)
    return data.reshape(ny, nx)[::-1].astype(np.int64)


def write_record(path, record):
    """Line-delimited ``key=value`` summary."""
    path = Path(path)
    path.write_text("".join(f"{k}={_fmt(v)}\n" for k, v in record.items()))
    return path


def read_record(path):
    out = {}
    for line in Path(path).read_text().splitlines():
        if line.strip() and not line.lstrip().startswith("#"):
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def write_profile_csv(path, profile):
    """Radial density ``N |psi(rho, z=0)|^2`` on the profile's stored grid."""
    rho = profile.rho_grid
    dens = profile.trap.atom_count * profile.radial_amplitude**2
    return write_csv(path, ["rho_m", "density_per_m3"], [rho, dens])


def write_trajectory_csv(path, traj):
    pops = traj.populations
    return write_csv(
        path, ["t", "alpha_sq", "beta_sq", "gamma_sq", "F"],
        [traj.times, pops["ground"], pops["plus"], pops["minus"], traj.transfer_function],
    )


def _grid_columns(grid):
    X, Y = grid.mesh()
    return X / grid.length_scale, Y / grid.length_scale


def write_field_csv(path, field):
    xn, yn = _grid_columns(field.grid)
    return write_csv(path, ["x_norm", "y_norm", "density"], [xn, yn, field.values])


def write_image_csv(path, image):
    xn, yn = _grid_columns(image.grid)
    return write_csv(path, ["x_norm", "y_norm", "counts"], [xn, yn, image.counts])
