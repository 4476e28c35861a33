"""Superposition of element fields onto observation planes and rings.

Observation geometries are transverse to the +z propagation axis: a square
plane grid at a z offset, or a coaxial ring sampled at uniform azimuths
theta_m = 2*pi*m/M. Singular sample points (coincident with a source) are
flagged per node, never a global failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arrays import ArrayLayout, Position3
from .errors import InvalidSpecError
from .radiators import (FiniteDipole, PointSource, RadiatorModel,
                        dipole_array_fields, point_source_array_field)
from .waves import Wave, wrap_phase


@dataclass(frozen=True)
class PlaneGrid:
    """Square sampling grid on the plane z = z_offset, spanning +-half_extent."""

    z_offset: float
    half_extent: float
    samples: int

    def __post_init__(self):
        if not (math.isfinite(self.half_extent) and self.half_extent > 0):
            raise InvalidSpecError(f"half_extent must be > 0, got {self.half_extent}")
        if not (isinstance(self.samples, int) and self.samples >= 2):
            raise InvalidSpecError(f"samples must be an integer >= 2, got {self.samples}")

    def axis_coords(self) -> np.ndarray:
        return np.linspace(-self.half_extent, self.half_extent, self.samples)

    def points(self) -> np.ndarray:
        """(samples^2, 3) node coordinates, y-major (row 0 at minimum y)."""
        c = self.axis_coords()
        X, Y = np.meshgrid(c, c, indexing="xy")
        Z = np.full_like(X, self.z_offset)
        return np.stack([X, Y, Z], axis=-1).reshape(-1, 3)


@dataclass(frozen=True)
class RingProbe:
    """Coaxial circle of radius r at z = z_offset, M uniform azimuthal samples."""

    radius: float
    z_offset: float
    samples: int

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise InvalidSpecError(f"ring radius must be > 0, got {self.radius}")
        if not (isinstance(self.samples, int) and self.samples >= 2):
            raise InvalidSpecError(f"ring samples must be an integer >= 2, got {self.samples}")

    def azimuths(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.samples) / self.samples

    def points(self) -> np.ndarray:
        th = self.azimuths()
        return np.stack([self.radius * np.cos(th), self.radius * np.sin(th),
                         np.full(self.samples, self.z_offset)], axis=1)


@dataclass(frozen=True)
class FieldMap:
    """Scalar complex field on a plane grid; `valid` marks non-singular nodes."""

    grid: PlaneGrid
    values: np.ndarray          # (samples, samples) complex, [iy, ix]
    wave: Wave
    valid: np.ndarray           # (samples, samples) bool
    layout_tag: str = ""
    model_tag: str = ""

    def __post_init__(self):
        n = self.grid.samples
        if self.values.shape != (n, n) or self.valid.shape != (n, n):
            raise InvalidSpecError("field map arrays do not match the grid spec")


@dataclass(frozen=True)
class RingSamples:
    """Scalar complex field on a ring probe."""

    probe: RingProbe
    values: np.ndarray          # (M,) complex
    wave: Wave
    valid: np.ndarray
    layout_tag: str = ""
    model_tag: str = ""

    def __post_init__(self):
        if self.values.shape != (self.probe.samples,):
            raise InvalidSpecError("ring sample count does not match the probe spec")


@dataclass(frozen=True)
class VectorFieldMap:
    """Vector E and H phasors on a plane grid (dipole radiators)."""

    grid: PlaneGrid
    e: np.ndarray               # (samples, samples, 3) complex
    h: np.ndarray
    wave: Wave
    valid: np.ndarray
    layout_tag: str = ""
    model_tag: str = ""

    def scalar(self, axis=(0.0, 0.0, 1.0)) -> FieldMap:
        """Co-polarized scalar component E . axis as a FieldMap."""
        u = np.asarray(axis, dtype=float)
        u = u / np.linalg.norm(u)
        return FieldMap(grid=self.grid, values=self.e @ u, wave=self.wave,
                        valid=self.valid, layout_tag=self.layout_tag, model_tag=self.model_tag)


@dataclass(frozen=True)
class VectorRingSamples:
    """Vector E and H phasors on a ring probe (dipole radiators)."""

    probe: RingProbe
    e: np.ndarray               # (M, 3) complex
    h: np.ndarray
    wave: Wave
    valid: np.ndarray
    layout_tag: str = ""
    model_tag: str = ""

    def scalar(self, axis=(0.0, 0.0, 1.0)) -> RingSamples:
        u = np.asarray(axis, dtype=float)
        u = u / np.linalg.norm(u)
        return RingSamples(probe=self.probe, values=self.e @ u, wave=self.wave,
                           valid=self.valid, layout_tag=self.layout_tag, model_tag=self.model_tag)


def compute_range(element_pos: Position3, r, phi, z):
    """Ring-to-point distance in cylindrical observation coordinates.

    For an element at ring radius a and azimuth phi_n (axial offset removed),
    returns sqrt(a^2 + dz^2 + r^2 - 2 a r cos(phi - phi_n)), which equals the
    Euclidean distance |obs - element| to rounding. Accepts array arguments.
    """
    a = math.hypot(element_pos.x, element_pos.y)
    phi_n = math.atan2(element_pos.y, element_pos.x)
    r = np.asarray(r, dtype=float)
    phi = np.asarray(phi, dtype=float)
    dz = np.asarray(z, dtype=float) - element_pos.z
    out = np.sqrt(a * a + dz * dz + r * r - 2.0 * a * r * np.cos(phi - phi_n))
    if out.ndim == 0:
        return float(out)
    return out


def superpose(layout: ArrayLayout, model: RadiatorModel, target, wave: Wave):
    """Sum per-element fields over a PlaneGrid or RingProbe.

    Point sources produce scalar maps/samples; finite dipoles produce vector
    ones. Nodes coincident with a source are flagged invalid (NaN values).
    """
    pts = target.points()
    tag = f"N={len(layout)},l={layout.nominal_mode}"
    if isinstance(model, PointSource):
        vals, valid = point_source_array_field(layout, pts, wave)
        if isinstance(target, PlaneGrid):
            n = target.samples
            return FieldMap(grid=target, values=vals.reshape(n, n), wave=wave,
                            valid=valid.reshape(n, n), layout_tag=tag, model_tag=model.name)
        return RingSamples(probe=target, values=vals, wave=wave, valid=valid,
                           layout_tag=tag, model_tag=model.name)
    if isinstance(model, FiniteDipole):
        E, H, valid = dipole_array_fields(model, layout, pts, wave)
        if isinstance(target, PlaneGrid):
            n = target.samples
            return VectorFieldMap(grid=target, e=E.reshape(n, n, 3), h=H.reshape(n, n, 3),
                                  wave=wave, valid=valid.reshape(n, n),
                                  layout_tag=tag, model_tag=model.name)
        return VectorRingSamples(probe=target, e=E, h=H, wave=wave, valid=valid,
                                 layout_tag=tag, model_tag=model.name)
    raise InvalidSpecError(f"unknown radiator model {model!r}")


def extract_phase_map(field_map: FieldMap) -> np.ndarray:
    """Per-node arg(E) in (-pi, pi]; invalid nodes propagate as NaN."""
    ph = wrap_phase(np.arctan2(field_map.values.imag, field_map.values.real))
    return np.where(field_map.valid, ph, np.nan)


def extract_magnitude_map(field_map: FieldMap) -> np.ndarray:
    """Per-node |E|; invalid nodes propagate as NaN."""
    return np.where(field_map.valid, np.abs(field_map.values), np.nan)


def peak_ring_radius(layout: ArrayLayout, model: RadiatorModel, wave: Wave,
                     z_offset: float, r_max: float | None = None,
                     n_radii: int = 256, n_azimuths: int = 64) -> float:
    """Radius of the |E| maximum over coaxial rings at z = z_offset.

    Scans n_radii rings between r_max/n_radii and r_max (default 3*z_offset)
    and returns the radius holding the largest sample magnitude. For dipole
    models the co-polarized component along the dipole axis is used.
    """
    if r_max is None:
        r_max = 3.0 * abs(z_offset)
    radii = np.linspace(r_max / n_radii, r_max, n_radii)
    th = 2.0 * np.pi * np.arange(n_azimuths) / n_azimuths
    R, T = np.meshgrid(radii, th, indexing="ij")
    pts = np.stack([R * np.cos(T), R * np.sin(T),
                    np.full_like(R, z_offset)], axis=-1).reshape(-1, 3)
    if isinstance(model, PointSource):
        vals, valid = point_source_array_field(layout, pts, wave)
    else:
        E, _, valid = dipole_array_fields(model, layout, pts, wave)
        vals = E @ model.unit_axis()
    mag = np.where(valid, np.abs(vals), -1.0).reshape(n_radii, n_azimuths)
    return float(radii[int(np.argmax(mag.max(axis=1)))])


def default_plane(wave: Wave, samples: int = 256) -> PlaneGrid:
    """Default observation plane: z = 10 wavelengths, half-extent 10 wavelengths."""
    lam = wave.wavelength
    return PlaneGrid(z_offset=10.0 * lam, half_extent=10.0 * lam, samples=samples)


def default_ring(layout: ArrayLayout, model: RadiatorModel, wave: Wave,
                 l_max: int, z_offset: float | None = None) -> RingProbe:
    """Default analysis ring: radius at the magnitude-peak annulus, z = 10
    wavelengths, M = 8*l_max + 8 samples."""
    z = 10.0 * wave.wavelength if z_offset is None else z_offset
    r = peak_ring_radius(layout, model, wave, z)
    return RingProbe(radius=r, z_offset=z, samples=8 * l_max + 8)
