"""TX-to-RX transfer matrices, mode-basis crosstalk, and capacity figures.

The element-basis channel entry between TX element n and RX probe m is the
scalar kernel e^{-ikR}/R; RX probes are ideal field samplers with no antenna
pattern. Mode basis columns are (1/sqrt(N)) exp(+i l phi_n) over the element
azimuths, matching the array feeding convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arrays import ArrayLayout, uca_azimuths
from .errors import AliasingError, DegenerateModeError, InvalidSpecError, SingularFieldError
from .waves import Wave

CROSSTALK_FLOOR_DB = -300.0


@dataclass(frozen=True)
class LinkSpec:
    """TX layout to RX sampling layout across an axial separation.

    The RX layout is specified in its own local frame (like the TX one),
    then tilted about the x axis and translated by (lateral_offset, 0,
    separation) into the global frame.
    """

    tx: ArrayLayout
    rx: ArrayLayout
    separation: float
    lateral_offset: float = 0.0
    tilt: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.separation) and self.separation > 0):
            raise InvalidSpecError(f"separation must be > 0, got {self.separation}")

    def rx_points(self) -> np.ndarray:
        pts = self.rx.positions()
        if self.tilt != 0.0:
            c, s = math.cos(self.tilt), math.sin(self.tilt)
            rot = np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
            pts = pts @ rot.T
        return pts + np.array([self.lateral_offset, 0.0, self.separation])


@dataclass(frozen=True)
class ChannelMatrix:
    """Complex transfer matrix, rows = RX points / modes, cols = TX elements / modes."""

    matrix: np.ndarray
    basis: str                       # 'element' or 'mode'
    tx_azimuths: np.ndarray | None = None
    rx_azimuths: np.ndarray | None = None
    modes: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.basis not in ("element", "mode"):
            raise InvalidSpecError(f"basis must be 'element' or 'mode', got {self.basis!r}")
        if not np.all(np.isfinite(self.matrix.real)) or not np.all(np.isfinite(self.matrix.imag)):
            raise InvalidSpecError("channel matrix entries must be finite")


@dataclass(frozen=True)
class CapacityReport:
    """Singular values (raw, descending), capacity at the stated SNR, crosstalk."""

    singular_values: np.ndarray
    capacity_bits: float
    snr: float
    streams: int
    crosstalk_db: np.ndarray | None = None


def channel_matrix(link: LinkSpec, wave: Wave) -> ChannelMatrix:
    """Element-basis transfer matrix H[m, n] = e^{-ikR_mn}/R_mn.

    TX layout excitations are ignored: the channel is pure geometry, and mode
    feeding enters through the mode-basis transform.
    """
    tx = link.tx.positions()
    rx = link.rx_points()
    d = rx[:, None, :] - tx[None, :, :]
    R = np.linalg.norm(d, axis=2)
    if np.any(R == 0.0):
        m, n = map(int, np.argwhere(R == 0.0)[0])
        raise SingularFieldError(f"rx point {m} coincides with tx element {n}")
    H = np.exp(-1j * wave.wavenumber * R) / R
    try:
        tx_az = uca_azimuths(link.tx)
        rx_az = uca_azimuths(link.rx)
    except InvalidSpecError:
        tx_az = rx_az = None
    return ChannelMatrix(matrix=H, basis="element", tx_azimuths=tx_az, rx_azimuths=rx_az)


def mode_matrix(azimuths: np.ndarray, modes) -> np.ndarray:
    """Discrete azimuthal mode matrix with columns (1/sqrt(N)) exp(i l phi_n).

    Columns are orthonormal whenever the requested modes are distinct mod N;
    with N modes covering all residues the matrix is unitary (and only then
    does the mode transform preserve the Frobenius norm).
    """
    n = len(azimuths)
    cols = [np.exp(1j * l * azimuths) / math.sqrt(n) for l in modes]
    return np.stack(cols, axis=1)


def mode_channel(H: ChannelMatrix, modes) -> ChannelMatrix:
    """Transform an element-basis channel to the OAM mode basis.

    H_mode = F_rx^H . H . F_tx. Both arrays must be uniform circular rings
    with equal element counts, and every requested mode must lie in the
    alias-free range |l| <= (N-1)/2.
    """
    modes = tuple(int(l) for l in modes)
    if H.basis != "element":
        raise InvalidSpecError("mode_channel expects an element-basis matrix")
    if H.tx_azimuths is None or H.rx_azimuths is None:
        raise InvalidSpecError("mode transform needs uniform circular tx and rx layouts")
    n_rx, n_tx = H.matrix.shape
    if n_rx != n_tx:
        raise InvalidSpecError(f"equal element counts required, got rx={n_rx}, tx={n_tx}")
    if len(set(modes)) != len(modes):
        raise InvalidSpecError(f"duplicate modes in {modes}")
    bound = (n_tx - 1) / 2.0
    for l in modes:
        if abs(l) > bound:
            raise AliasingError(
                f"mode {l} outside the alias-free range |l| <= {bound:g} for N = {n_tx}")
    f_tx = mode_matrix(H.tx_azimuths, modes)
    f_rx = mode_matrix(H.rx_azimuths, modes)
    hm = f_rx.conj().T @ H.matrix @ f_tx
    return ChannelMatrix(matrix=hm, basis="mode", tx_azimuths=H.tx_azimuths,
                         rx_azimuths=H.rx_azimuths, modes=modes)


def crosstalk_db(H_mode: ChannelMatrix) -> np.ndarray:
    """Per-entry leakage 20 log10(|H[i,j]| / |H[j,j]|), dB; diagonal 0.

    Entries below the floor report CROSSTALK_FLOOR_DB (-300 dB). A zero
    co-mode (diagonal) entry raises DegenerateModeError.
    """
    if H_mode.basis != "mode":
        raise InvalidSpecError("crosstalk is defined on a mode-basis matrix")
    hm = H_mode.matrix
    diag = np.abs(np.diag(hm))
    if np.any(diag == 0.0):
        j = int(np.argmax(diag == 0.0))
        mode = H_mode.modes[j] if H_mode.modes else j
        raise DegenerateModeError(f"co-mode channel for mode {mode} is zero")
    with np.errstate(divide="ignore"):
        xdb = 20.0 * np.log10(np.abs(hm) / diag[None, :])
    xdb = np.where(np.isfinite(xdb), xdb, CROSSTALK_FLOOR_DB)
    xdb = np.maximum(xdb, CROSSTALK_FLOOR_DB)
    np.fill_diagonal(xdb, 0.0)
    return xdb


def capacity(H: ChannelMatrix, snr: float, streams: int) -> CapacityReport:
    """Equal-power capacity over the strongest `streams` singular values.

    Singular values are normalized by the largest; capacity is
    sum_i log2(1 + (snr/streams) * (s_i/s_max)^2) over the top `streams`
    values, bits/s/Hz. Raw singular values are reported descending.
    """
    if snr < 0:
        raise InvalidSpecError(f"snr must be >= 0, got {snr}")
    sv = np.linalg.svd(H.matrix, compute_uv=False)   # LAPACK, descending
    if not (1 <= streams <= len(sv)):
        raise InvalidSpecError(f"streams must be in [1, {len(sv)}], got {streams}")
    smax = sv[0]
    if smax == 0.0:
        return CapacityReport(singular_values=sv, capacity_bits=0.0, snr=snr, streams=streams)
    s_norm = sv[:streams] / smax
    cap = float(np.log2(1.0 + (snr / streams) * s_norm ** 2).sum())
    xdb = crosstalk_db(H) if H.basis == "mode" else None
    return CapacityReport(singular_values=sv, capacity_bits=cap, snr=snr,
                          streams=streams, crosstalk_db=xdb)
