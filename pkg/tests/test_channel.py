import cmath
import math

import numpy as np
import pytest

from oamsim import (AliasingError, ChannelMatrix, DegenerateModeError, InvalidSpecError,
                    LinkSpec, SingularFieldError, UcaSpec, Wave, build_uca, capacity,
                    channel_matrix, crosstalk_db, mode_channel)

WAVE = Wave(frequency=10e9)
LAM = WAVE.wavelength
K = WAVE.wavenumber


def uca_link(count=8, radius=None, separation=None, offset=0.0, tilt=0.0,
             rx_count=None, rx_radius=None):
    radius = LAM if radius is None else radius
    separation = 5 * LAM if separation is None else separation
    tx = build_uca(UcaSpec(count=count, radius=radius, mode=0))
    rx = build_uca(UcaSpec(count=rx_count or count, radius=rx_radius or radius, mode=0))
    return LinkSpec(tx=tx, rx=rx, separation=separation,
                    lateral_offset=offset, tilt=tilt)


def test_single_element_link():
    tx = build_uca(UcaSpec(count=1, radius=1e-6, mode=0))
    rx = build_uca(UcaSpec(count=1, radius=1e-6, mode=0))
    d = 3 * LAM
    h = channel_matrix(LinkSpec(tx=tx, rx=rx, separation=d), WAVE)
    assert h.matrix.shape == (1, 1)
    dist = np.linalg.norm(rx.positions()[0] + [0, 0, d] - tx.positions()[0])
    assert h.matrix[0, 0] == pytest.approx(cmath.exp(-1j * K * dist) / dist, rel=1e-12)


def test_far_field_inverse_distance():
    h1 = channel_matrix(uca_link(separation=200 * LAM), WAVE)
    h2 = channel_matrix(uca_link(separation=400 * LAM), WAVE)
    ratio = np.abs(h1.matrix) / np.abs(h2.matrix)
    assert np.allclose(ratio, 2.0, rtol=1e-3)


def test_aligned_link_is_circulant():
    n = 8
    h = channel_matrix(uca_link(count=n), WAVE).matrix
    for m in range(n):
        for k in range(n):
            assert h[(m + 1) % n, (k + 1) % n] == pytest.approx(h[m, k], rel=1e-12)


def test_channel_entries_match_direct_construction():
    """Oracle: rebuild every entry with plain trig from the link geometry."""
    n, a, d = 5, LAM, 5 * LAM
    h = channel_matrix(uca_link(count=n, radius=a, separation=d), WAVE).matrix
    for m in range(n):
        for t in range(n):
            pm = 2 * math.pi * m / n
            pt = 2 * math.pi * t / n
            dist = math.sqrt((a * math.cos(pm) - a * math.cos(pt)) ** 2
                             + (a * math.sin(pm) - a * math.sin(pt)) ** 2 + d * d)
            expected = cmath.exp(-1j * K * dist) / dist
            assert h[m, t] == pytest.approx(expected, rel=1e-12)


def test_mode_channel_diagonalizes_aligned_link():
    h = channel_matrix(uca_link(count=8), WAVE)
    hm = mode_channel(h, modes=range(-3, 4))
    off = hm.matrix - np.diag(np.diag(hm.matrix))
    assert np.abs(off).max() <= 1e-10 * np.abs(np.diag(hm.matrix)).min()


def test_mode_channel_identity_unitarity():
    az = 2 * np.pi * np.arange(7) / 7
    ident = ChannelMatrix(matrix=np.eye(7, dtype=complex), basis="element",
                          tx_azimuths=az, rx_azimuths=az)
    hm = mode_channel(ident, modes=range(-3, 4))
    assert np.allclose(hm.matrix, np.eye(7), atol=1e-12)


def test_mode_channel_preserves_frobenius_norm_full_modes():
    h = channel_matrix(uca_link(count=7), WAVE)
    hm = mode_channel(h, modes=range(-3, 4))
    assert np.linalg.norm(hm.matrix) == pytest.approx(np.linalg.norm(h.matrix), rel=1e-12)


def test_lateral_offset_raises_crosstalk_monotonically():
    masses = []
    for offset in (0.0, 0.25 * LAM, 0.5 * LAM):
        h = channel_matrix(uca_link(count=8, offset=offset), WAVE)
        hm = mode_channel(h, modes=(-1, 0, 1)).matrix
        masses.append(float(np.abs(hm - np.diag(np.diag(hm))).sum()))
    assert masses[0] < masses[1] < masses[2]


def test_mode_channel_alias_range():
    h = channel_matrix(uca_link(count=8), WAVE)
    with pytest.raises(AliasingError):
        mode_channel(h, modes=(-4, 0, 4))
    with pytest.raises(AliasingError):
        mode_channel(h, modes=(5,))


def test_mode_channel_rejects_unequal_counts():
    h = channel_matrix(uca_link(count=8, rx_count=6), WAVE)
    with pytest.raises(InvalidSpecError):
        mode_channel(h, modes=(-1, 0, 1))


def test_coincident_points_singular():
    tx = build_uca(UcaSpec(count=4, radius=LAM, mode=0))
    rx = build_uca(UcaSpec(count=4, radius=LAM, mode=0))
    with pytest.raises(SingularFieldError):
        # zero-separation link would need rx == tx points; emulate via tiny tilt trick
        channel_matrix(LinkSpec(tx=tx, rx=rx, separation=1e-300), WAVE)


def test_crosstalk_diagonal_matrix_floors():
    az = 2 * np.pi * np.arange(5) / 5
    hm = ChannelMatrix(matrix=np.diag([1.0 + 0j, 2.0, 3.0]), basis="mode",
                       tx_azimuths=az, rx_azimuths=az, modes=(-1, 0, 1))
    xdb = crosstalk_db(hm)
    assert np.all(np.diag(xdb) == 0.0)
    off = xdb[~np.eye(3, dtype=bool)]
    assert np.all(off == -300.0)


def test_crosstalk_equal_entries():
    hm = ChannelMatrix(matrix=np.full((3, 3), 0.7 + 0.2j), basis="mode", modes=(-1, 0, 1))
    assert np.allclose(crosstalk_db(hm), 0.0)


def test_crosstalk_aligned_link_below_minus_100db():
    h = channel_matrix(uca_link(count=8), WAVE)
    hm = mode_channel(h, modes=(-2, -1, 0, 1, 2))
    xdb = crosstalk_db(hm)
    off = xdb[~np.eye(5, dtype=bool)]
    assert off.max() < -100.0


def test_crosstalk_scale_invariant():
    h = channel_matrix(uca_link(count=8, offset=0.3 * LAM), WAVE)
    hm = mode_channel(h, modes=(-1, 0, 1))
    scaled = ChannelMatrix(matrix=hm.matrix * (3.7 - 2.2j), basis="mode",
                           modes=hm.modes)
    assert np.allclose(crosstalk_db(hm), crosstalk_db(scaled), atol=1e-9)


def test_crosstalk_zero_diagonal_degenerate():
    hm = ChannelMatrix(matrix=np.array([[0.0 + 0j, 1.0], [1.0, 1.0]]), basis="mode",
                       modes=(0, 1))
    with pytest.raises(DegenerateModeError):
        crosstalk_db(hm)


def test_capacity_zero_snr():
    h = channel_matrix(uca_link(count=4), WAVE)
    assert capacity(h, snr=0.0, streams=2).capacity_bits == 0.0


def test_capacity_unit_channel():
    az = np.array([0.0])
    h = ChannelMatrix(matrix=np.array([[1.0 + 0j]]), basis="element",
                      tx_azimuths=az, rx_azimuths=az)
    rep = capacity(h, snr=1.0, streams=1)
    assert rep.capacity_bits == pytest.approx(1.0, rel=1e-12)
    assert rep.singular_values[0] == pytest.approx(1.0)


def test_capacity_three_modes_beats_one():
    h = channel_matrix(uca_link(count=8), WAVE)
    hm = mode_channel(h, modes=(-1, 0, 1))
    c3 = capacity(hm, snr=100.0, streams=3).capacity_bits
    c1 = capacity(hm, snr=100.0, streams=1).capacity_bits
    assert c3 > c1


def test_capacity_monotone_in_snr_and_streams():
    h = channel_matrix(uca_link(count=8), WAVE)
    hm = mode_channel(h, modes=(-2, -1, 0, 1, 2))
    caps_snr = [capacity(hm, snr=s, streams=3).capacity_bits for s in (0.0, 1.0, 10.0, 100.0)]
    assert all(a <= b for a, b in zip(caps_snr, caps_snr[1:]))
    caps_streams = [capacity(hm, snr=50.0, streams=k).capacity_bits for k in (1, 2, 3)]
    assert all(a <= b for a, b in zip(caps_streams, caps_streams[1:]))


def test_capacity_validates_inputs():
    h = channel_matrix(uca_link(count=4), WAVE)
    with pytest.raises(InvalidSpecError):
        capacity(h, snr=-1.0, streams=1)
    with pytest.raises(InvalidSpecError):
        capacity(h, snr=1.0, streams=9)


def test_singular_values_descending():
    h = channel_matrix(uca_link(count=8, offset=0.4 * LAM), WAVE)
    sv = capacity(h, snr=1.0, streams=1).singular_values
    assert np.all(np.diff(sv) <= 0)
    assert np.all(sv >= 0)
