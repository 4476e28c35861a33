"""Array geometries and the mode-l excitation law.

A uniform circular array (UCA) of N elements synthesizes azimuthal mode l
by feeding element n (at azimuth phi_n = 2*pi*n/N) with unit amplitude and
phase +l*phi_n, i.e. a progressive step of 2*pi*l/N between neighbours and
a total accumulated phase of 2*pi*l around the ring.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSpecError
from .waves import wrap_phase


@dataclass(frozen=True)
class Position3:
    """Cartesian point, meters."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidSpecError(f"position component {name} must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


@dataclass(frozen=True)
class Excitation:
    """Complex element drive: amplitude (dimensionless) and phase (radians).

    Phase is wrapped to (-pi, pi] at construction.
    """

    amplitude: float
    phase: float

    def __post_init__(self):
        if not (math.isfinite(self.amplitude) and self.amplitude >= 0):
            raise InvalidSpecError(f"amplitude must be finite and >= 0, got {self.amplitude}")
        if not math.isfinite(self.phase):
            raise InvalidSpecError("phase must be finite")
        object.__setattr__(self, "phase", wrap_phase(self.phase))

    @property
    def weight(self) -> complex:
        """Complex drive a*exp(i*phase)."""
        return self.amplitude * complex(math.cos(self.phase), math.sin(self.phase))


@dataclass(frozen=True)
class ArrayElement:
    position: Position3
    excitation: Excitation


@dataclass(frozen=True)
class UcaSpec:
    """Uniform circular array: N elements on a circle of radius a, mode l."""

    count: int
    radius: float
    mode: int
    center: Position3 = field(default_factory=lambda: Position3(0.0, 0.0, 0.0))
    normal: tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __post_init__(self):
        if not (isinstance(self.count, int) and self.count >= 1):
            raise InvalidSpecError(f"element count must be a positive integer, got {self.count}")
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise InvalidSpecError(f"radius must be finite and > 0, got {self.radius}")
        if not isinstance(self.mode, int):
            raise InvalidSpecError(f"mode must be an integer, got {self.mode!r}")
        n = np.asarray(self.normal, dtype=float)
        if n.shape != (3,) or not np.all(np.isfinite(n)) or np.linalg.norm(n) == 0:
            raise InvalidSpecError("plane normal must be a finite nonzero 3-vector")


@dataclass(frozen=True)
class SmartphoneSpec:
    """Four-element handset array on a width x height body face.

    placement 'regular': elements on the vertices of an axis-aligned square
    of side = width, centered on the face. placement 'irregular': elements at
    the midpoints of the four face edges.
    """

    width: float = 0.075
    height: float = 0.150
    placement: str = "regular"
    mode: int = 1

    def __post_init__(self):
        if self.placement not in ("regular", "irregular"):
            raise InvalidSpecError(f"placement must be 'regular' or 'irregular', got {self.placement!r}")
        if not (math.isfinite(self.width) and math.isfinite(self.height)):
            raise InvalidSpecError("body dimensions must be finite")
        if not (0 < self.width < self.height):
            raise InvalidSpecError(
                f"need 0 < width < height, got width={self.width}, height={self.height}")
        if not isinstance(self.mode, int):
            raise InvalidSpecError(f"mode must be an integer, got {self.mode!r}")


@dataclass(frozen=True)
class ArrayLayout:
    """Ordered, immutable collection of positioned, complex-excited elements."""

    elements: tuple[ArrayElement, ...]
    nominal_mode: int | None = None

    def __post_init__(self):
        if len(self.elements) < 1:
            raise InvalidSpecError("layout needs at least one element")
        pos = self.positions()
        for i in range(len(pos)):
            for j in range(i + 1, len(pos)):
                if np.array_equal(pos[i], pos[j]):
                    raise InvalidSpecError(f"elements {i} and {j} share a position")

    def __len__(self) -> int:
        return len(self.elements)

    def positions(self) -> np.ndarray:
        """(N, 3) element positions, meters."""
        return np.array([e.position.as_array() for e in self.elements])

    def weights(self) -> np.ndarray:
        """(N,) complex drives a_n * exp(i*psi_n)."""
        return np.array([e.excitation.weight for e in self.elements], dtype=complex)

    def center(self) -> np.ndarray:
        return self.positions().mean(axis=0)


def _plane_basis(normal) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Right-handed (u, v, n) with u x v = n; u = x-hat when n = z-hat."""
    n = np.asarray(normal, dtype=float)
    n = n / np.linalg.norm(n)
    yhat = np.array([0.0, 1.0, 0.0])
    u = np.cross(yhat, n)
    if np.linalg.norm(u) < 1e-9:   # normal parallel to y: fall back to z-hat
        u = np.cross(np.array([0.0, 0.0, 1.0]), n)
    u = u / np.linalg.norm(u)
    v = np.cross(n, u)
    return u, v, n


def min_elements(mode: int) -> int:
    """Minimum element count able to synthesize azimuthal mode l: 2|l| + 1."""
    return 2 * abs(int(mode)) + 1


def build_uca(spec: UcaSpec) -> ArrayLayout:
    """Place N elements on the circle and apply the mode-l progressive phase.

    Element n sits at azimuth phi_n = 2*pi*n/N in the circle plane (element 0
    on the +u axis, which is +x for the default normal) and is driven with
    amplitude 1 and phase wrap(l * phi_n).
    """
    u, v, _ = _plane_basis(spec.normal)
    c = spec.center.as_array()
    elements = []
    for n in range(spec.count):
        phi_n = 2.0 * math.pi * n / spec.count
        p = c + spec.radius * (math.cos(phi_n) * u + math.sin(phi_n) * v)
        elements.append(ArrayElement(
            position=Position3(*p),
            excitation=Excitation(amplitude=1.0, phase=wrap_phase(spec.mode * phi_n)),
        ))
    return ArrayLayout(elements=tuple(elements), nominal_mode=spec.mode)


def build_smartphone_layout(spec: SmartphoneSpec) -> ArrayLayout:
    """Four-element handset layout in the z=0 plane, face centered on the origin.

    Excitation phases are wrap(l * azimuth) with azimuths measured about the
    face center, so the elements (ordered counterclockwise) carry the mode-l
    progressive phase.
    """
    w, h = spec.width, spec.height
    if spec.placement == "regular":
        pts = [(w / 2, w / 2), (-w / 2, w / 2), (-w / 2, -w / 2), (w / 2, -w / 2)]
    else:
        pts = [(w / 2, 0.0), (0.0, h / 2), (-w / 2, 0.0), (0.0, -h / 2)]
    elements = []
    for (x, y) in pts:
        phi = math.atan2(y, x)
        elements.append(ArrayElement(
            position=Position3(x, y, 0.0),
            excitation=Excitation(amplitude=1.0, phase=wrap_phase(spec.mode * phi)),
        ))
    return ArrayLayout(elements=tuple(elements), nominal_mode=spec.mode)


def save_layout(layout: ArrayLayout, path) -> None:
    """Write a layout as a JSON document (positions in m, phases in rad)."""
    doc = {
        "nominal_mode": layout.nominal_mode,
        "elements": [
            {
                "position": [e.position.x, e.position.y, e.position.z],
                "amplitude": e.excitation.amplitude,
                "phase": e.excitation.phase,
            }
            for e in layout.elements
        ],
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2, sort_keys=True)
        f.write("\n")


def load_layout(path) -> ArrayLayout:
    """Read a layout written by save_layout."""
    with open(path, "r", encoding="utf-8") as f:
        doc = json.load(f)
    try:
        mode = doc["nominal_mode"]
        elements = tuple(
            ArrayElement(
                position=Position3(*[float(c) for c in el["position"]]),
                excitation=Excitation(amplitude=float(el["amplitude"]), phase=float(el["phase"])),
            )
            for el in doc["elements"]
        )
    except (KeyError, TypeError) as exc:
        raise InvalidSpecError(f"malformed layout document {path}: {exc}") from exc
    if mode is not None:
        mode = int(mode)
    return ArrayLayout(elements=elements, nominal_mode=mode)


def uca_azimuths(layout: ArrayLayout, rel_tol: float = 1e-9) -> np.ndarray:
    """Validate that a layout is a uniform circular ring and return azimuths.

    Checks: coplanar with its centroid plane z = const-like (common plane
    normal +z assumed for channel links), equal radii about the centroid, and
    uniform angular spacing in element order. Raises InvalidSpecError if not.
    """
    pos = layout.positions()
    c = pos.mean(axis=0)
    rel = pos - c
    scale = float(np.abs(rel).max())
    if np.abs(rel[:, 2]).max() > rel_tol * max(scale, 1.0):
        raise InvalidSpecError("layout is not planar about its centroid (z spread)")
    radii = np.hypot(rel[:, 0], rel[:, 1])
    if radii.min() <= 0 or (radii.max() - radii.min()) > rel_tol * radii.max():
        raise InvalidSpecError("layout elements are not on a common circle")
    az = np.arctan2(rel[:, 1], rel[:, 0])
    n = len(az)
    step = 2.0 * math.pi / n
    expected = wrap_phase(az[0] + step * np.arange(n))
    dev = np.abs(wrap_phase(az - expected))
    if dev.max() > 1e-6:
        raise InvalidSpecError("layout azimuths are not uniformly spaced")
    return az
