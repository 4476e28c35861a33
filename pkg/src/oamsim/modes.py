"""Azimuthal mode decomposition, winding number, and the minimum-element sweep.

Mode l is the basis function exp(+i*l*theta) on a coaxial ring; analysis
coefficients are c_l = (1/M) sum_m E(theta_m) exp(-i*l*theta_m). An N-element
ring feeding mode l excites only modes l + m*N (m integer); when N < 2|l|+1
a lower-order alias dominates near the axis and detection fails, which is the
sampling-rule content of the minimum-element sweep.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrays import UcaSpec, build_uca
from .errors import (AliasingError, InvalidSpecError, SingularFieldError,
                     SweepExhaustedError, UndefinedPhaseError)
from .fields import RingProbe, RingSamples, default_ring, superpose
from .radiators import PointSource
from .waves import Wave, wrap_phase

# Relative power separation below which two modes are reported as tied.
TIE_REL_TOL = 1e-6


def orthogonality_integral(l1: int, l2: int, quadrature_points: int) -> complex:
    """Ring inner product of exp(i*l1*theta) against exp(i*l2*theta).

    Midpoint quadrature over theta_m = 2*pi*m/M: exactly 2*pi when l1 = l2,
    exactly 0 when (l1 - l2) mod M != 0, and 2*pi at the quadrature aliases
    (l1 - l2) = multiple of M (documented DFT periodicity).
    """
    if quadrature_points < 2:
        raise InvalidSpecError(f"need at least 2 quadrature points, got {quadrature_points}")
    m = np.arange(quadrature_points)
    theta = 2.0 * np.pi * m / quadrature_points
    return complex(np.exp(1j * (l1 - l2) * theta).sum() * (2.0 * np.pi / quadrature_points))


@dataclass(frozen=True)
class ModeSpectrum:
    """Complex azimuthal coefficients and power fractions over [-l_max, l_max]."""

    modes: np.ndarray           # (2*l_max+1,) ints, ascending
    coefficients: np.ndarray    # (2*l_max+1,) complex
    powers: np.ndarray          # (2*l_max+1,) fractions summing to 1 (if any power)

    def coefficient(self, l: int) -> complex:
        return complex(self.coefficients[self._index(l)])

    def power_fraction(self, l: int) -> float:
        return float(self.powers[self._index(l)])

    def _index(self, l: int) -> int:
        idx = np.where(self.modes == l)[0]
        if len(idx) == 0:
            raise InvalidSpecError(f"mode {l} outside the decomposed range "
                                   f"[{self.modes[0]}, {self.modes[-1]}]")
        return int(idx[0])

    def dominant(self, tie_rel_tol: float = TIE_REL_TOL) -> int:
        """Mode of largest power; ties broken by smallest |l|, negative first."""
        return min(self._tied_leaders(tie_rel_tol), key=lambda l: (abs(l), l > 0))

    def _tied_leaders(self, tie_rel_tol: float = TIE_REL_TOL) -> list[int]:
        pmax = float(self.powers.max())
        if pmax == 0.0:
            return list(self.modes)
        keep = self.powers >= pmax * (1.0 - tie_rel_tol)
        return [int(l) for l in self.modes[keep]]


@dataclass(frozen=True)
class PurityReport:
    target_mode: int
    dominant_mode: int
    purity: float          # power fraction of the dominant mode
    target_purity: float   # power fraction of the target mode


@dataclass(frozen=True)
class WindingResult:
    winding: int
    residual: float        # accumulated phase minus 2*pi*winding, radians


def mode_decompose(samples: RingSamples, l_max: int) -> ModeSpectrum:
    """DFT-style projection of ring samples onto modes [-l_max, l_max].

    Requires M >= 2*l_max + 2 so the returned range is alias-free on the
    analysis side. Power fractions are normalized over the returned range.
    """
    if l_max < 0:
        raise InvalidSpecError(f"l_max must be >= 0, got {l_max}")
    M = samples.probe.samples
    if M < 2 * l_max + 2:
        raise AliasingError(
            f"{M} ring samples cannot resolve modes up to +-{l_max} "
            f"(need at least {2 * l_max + 2})")
    if not samples.valid.all():
        raise SingularFieldError("ring contains singular samples; choose another probe")
    theta = samples.probe.azimuths()
    modes = np.arange(-l_max, l_max + 1)
    basis = np.exp(-1j * np.outer(modes, theta))
    coeffs = basis @ samples.values / M
    power = np.abs(coeffs) ** 2
    total = power.sum()
    powers = power / total if total > 0 else power
    return ModeSpectrum(modes=modes, coefficients=coeffs, powers=powers)


def purity(spectrum: ModeSpectrum, target_mode: int) -> PurityReport:
    """Dominant mode and power fractions for the given target."""
    dom = spectrum.dominant()
    return PurityReport(target_mode=target_mode, dominant_mode=dom,
                        purity=spectrum.power_fraction(dom),
                        target_purity=spectrum.power_fraction(target_mode))


def winding_number(samples: RingSamples, magnitude_floor_rel: float = 1e-12) -> WindingResult:
    """Integer phase winding around the ring.

    Accumulates wrapped (into (-pi, pi]) phase steps between consecutive
    samples, closing the loop; winding = total / 2*pi rounded to the nearest
    integer. Samples below magnitude_floor_rel times the ring maximum have
    undefined phase and raise.
    """
    if not samples.valid.all():
        raise SingularFieldError("ring contains singular samples; choose another probe")
    mags = np.abs(samples.values)
    floor = magnitude_floor_rel * float(mags.max())
    if float(mags.min()) <= floor:
        raise UndefinedPhaseError(
            f"ring sample magnitude {mags.min():g} at/below the floor {floor:g}; "
            "phase is undefined")
    ph = np.angle(samples.values)
    steps = wrap_phase(np.diff(np.concatenate([ph, ph[:1]])))
    total = float(steps.sum())
    winding = int(round(total / (2.0 * np.pi)))
    return WindingResult(winding=winding, residual=total - 2.0 * np.pi * winding)


@dataclass(frozen=True)
class MinElementsCriteria:
    """Detection criteria for the empirical minimum-element sweep.

    ring: explicit probe, or None for the per-N default analysis ring
    (magnitude-peak radius, z = 10 wavelengths). purity_floor, when set,
    additionally requires the target-mode power fraction to reach it.
    Dominance must be unique within the tie tolerance: an exact +-l power tie
    (which occurs at N = 2|l|) does not count as detection.
    """

    ring: RingProbe | None = None
    purity_floor: float | None = None
    ring_z_wavelengths: float = 10.0
    uca_radius_wavelengths: float = 1.0
    n_cap: int = 64
    tie_rel_tol: float = TIE_REL_TOL


def find_min_elements_empirical(l: int, wave: Wave,
                                criteria: MinElementsCriteria | None = None) -> int:
    """Smallest N whose point-source UCA puts mode l uniquely on top.

    Sweeps N upward, builds the UCA (radius 1 wavelength by default, mode l),
    decomposes the field on the criteria ring, and returns the first N whose
    dominant detected mode is uniquely l (and meets the purity floor, if any).
    Matches min_elements(l) = 2|l| + 1 under the default criteria.
    """
    if abs(int(l)) < 1:
        raise InvalidSpecError(f"sweep needs |l| >= 1, got {l}")
    crit = criteria or MinElementsCriteria()
    model = PointSource()
    a = crit.uca_radius_wavelengths * wave.wavelength
    for n in range(1, crit.n_cap + 1):
        layout = build_uca(UcaSpec(count=n, radius=a, mode=int(l)))
        l_max = abs(int(l)) + n
        if crit.ring is not None:
            ring = crit.ring
            if ring.samples < 2 * l_max + 2:
                ring = RingProbe(radius=ring.radius, z_offset=ring.z_offset,
                                 samples=2 * l_max + 2)
        else:
            ring = default_ring(layout, model, wave, l_max,
                                z_offset=crit.ring_z_wavelengths * wave.wavelength)
        spectrum = mode_decompose(superpose(layout, model, ring, wave), l_max)
        leaders = spectrum._tied_leaders(crit.tie_rel_tol)
        if leaders != [int(l)]:
            continue
        if crit.purity_floor is not None and spectrum.power_fraction(int(l)) < crit.purity_floor:
            continue
        return n
    raise SweepExhaustedError(
        f"no N <= {crit.n_cap} produced dominant mode {l} under the given criteria")
