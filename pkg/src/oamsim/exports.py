"""Deterministic file outputs: CSV (RFC 4180), binary PGM images, JSON manifest.

Repeated runs of the same scenario must produce byte-identical files, so
nothing here writes timestamps, and floats are rendered with repr (shortest
round-trip form).
"""

from __future__ import annotations

import csv
import hashlib
import json
import math

import numpy as np

from .fields import FieldMap, extract_magnitude_map, extract_phase_map
from .modes import ModeSpectrum


def _fmt(x) -> str:
    return repr(float(x))


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_field_csv(field_map: FieldMap, path) -> None:
    """Rows (x, y, re, im) in row-major order from minimum y; header included."""
    coords = field_map.grid.axis_coords()
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["x", "y", "re", "im"])
        for iy, y in enumerate(coords):
            for ix, x in enumerate(coords):
                v = field_map.values[iy, ix]
                if field_map.valid[iy, ix]:
                    w.writerow([_fmt(x), _fmt(y), _fmt(v.real), _fmt(v.imag)])
                else:
                    w.writerow([_fmt(x), _fmt(y), "nan", "nan"])


def _write_pgm(pixels: np.ndarray, path) -> None:
    h, w = pixels.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        f.write(pixels.astype(np.uint8).tobytes())


def write_phase_pgm(field_map: FieldMap, path) -> None:
    """Phase image: linear map (-pi, pi] -> 0..255, row 0 at minimum y."""
    ph = extract_phase_map(field_map)
    u = (ph + np.pi) / (2.0 * np.pi)
    px = np.rint(np.where(np.isnan(u), 0.0, u * 255.0)).astype(np.uint8)
    _write_pgm(px, path)


def write_magnitude_pgm(field_map: FieldMap, path) -> None:
    """Magnitude image normalized to the map maximum, row 0 at minimum y."""
    mag = extract_magnitude_map(field_map)
    peak = np.nanmax(mag) if np.isfinite(mag).any() else 0.0
    if not (peak > 0):
        px = np.zeros_like(mag)
    else:
        px = np.where(np.isnan(mag), 0.0, mag / peak * 255.0)
    _write_pgm(np.rint(px).astype(np.uint8), path)


def write_spectrum_csv(spectrum: ModeSpectrum, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["l", "re", "im", "power_fraction"])
        for l, c, p in zip(spectrum.modes, spectrum.coefficients, spectrum.powers):
            w.writerow([int(l), _fmt(c.real), _fmt(c.imag), _fmt(p)])


def write_channel_csv(matrix: np.ndarray, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["m", "n", "re", "im"])
        for m in range(matrix.shape[0]):
            for n in range(matrix.shape[1]):
                w.writerow([m, n, _fmt(matrix[m, n].real), _fmt(matrix[m, n].imag)])


def write_real_matrix_csv(matrix: np.ndarray, path, value_name: str = "value") -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["m", "n", value_name])
        for m in range(matrix.shape[0]):
            for n in range(matrix.shape[1]):
                w.writerow([m, n, _fmt(matrix[m, n])])


def write_rows_csv(header: list[str], rows, path) -> None:
    """Generic CSV writer; floats are repr-formatted, other cells written as-is."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(c) if isinstance(c, float) else c for c in row])


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        obj = float(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def write_manifest(out_dir, scenario: dict, results: dict, version: str,
                   file_names: list[str]) -> dict:
    """Assemble and write manifest.json with a checksum inventory.

    Every produced file must be listed in file_names; checksums are computed
    from the bytes on disk. Returns the manifest dict.
    """
    inventory = {}
    for name in sorted(file_names):
        p = out_dir / name
        inventory[name] = {"sha256": sha256_file(p), "bytes": p.stat().st_size}
    manifest = {
        "scenario": _jsonable(scenario),
        "version": version,
        "results": _jsonable(results),
        "files": inventory,
    }
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    return manifest
