"""Single-frequency wave description and vacuum constants.

Phasor convention used by every module: time dependence e^{+i omega t},
outgoing propagation e^{-ikR}. All quantities SI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpecError

C0 = 299792458.0                 # speed of light [m/s], exact
MU0 = 1.25663706212e-06          # vacuum permeability [H/m], CODATA 2018
EPS0 = 1.0 / (MU0 * C0 * C0)     # vacuum permittivity [F/m], derived
ETA0 = MU0 * C0                  # free-space impedance [ohm], derived


@dataclass(frozen=True)
class Wave:
    """Monochromatic vacuum wave, parameterized by frequency alone."""

    frequency: float

    def __post_init__(self):
        if not (math.isfinite(self.frequency) and self.frequency > 0):
            raise InvalidSpecError(f"frequency must be finite and > 0, got {self.frequency}")

    @property
    def wavelength(self) -> float:
        return C0 / self.frequency

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.wavelength

    @property
    def omega(self) -> float:
        return 2.0 * math.pi * self.frequency


def wrap_phase(phase):
    """Wrap angle(s) to the interval (-pi, pi]."""
    p = np.asarray(phase, dtype=float)
    out = (p + np.pi) % (2.0 * np.pi) - np.pi
    out = np.where(out == -np.pi, np.pi, out)
    if np.isscalar(phase) or getattr(phase, "ndim", 0) == 0:
        return float(out)
    return out
