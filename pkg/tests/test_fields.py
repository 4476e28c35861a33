import math

import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from oamsim import (ArrayElement, ArrayLayout, Excitation, FieldMap, FiniteDipole,
                    InvalidSpecError, PlaneGrid, PointSource, Position3, RingProbe,
                    UcaSpec, Wave, build_uca, compute_range, default_plane,
                    eval_point_source, extract_magnitude_map, extract_phase_map,
                    peak_ring_radius, point_source_array_field, superpose)

WAVE = Wave(frequency=10e9)
LAM = WAVE.wavelength


# ---------------------------------------------------------------------------
# Ring-to-point distance closed form
# ---------------------------------------------------------------------------

def test_compute_range_on_axis_is_azimuth_free():
    el = Position3(0.7, 0.0, 0.0)
    expected = math.sqrt(0.7 ** 2 + 2.0 ** 2)
    for phi in np.linspace(0, 2 * np.pi, 17):
        assert compute_range(el, 0.0, phi, 2.0) == pytest.approx(expected, rel=1e-15)


def test_compute_range_coincidence_zero():
    el = Position3(0.5 * math.cos(1.1), 0.5 * math.sin(1.1), 0.0)
    assert compute_range(el, 0.5, 1.1, 0.0) == pytest.approx(0.0, abs=1e-12)


@given(a=st.floats(0.1, 10), r=st.floats(0.0, 10), phi=st.floats(0, 2 * math.pi),
       phi_n=st.floats(0, 2 * math.pi), z=st.floats(-10, 10))
def test_compute_range_equals_euclidean(a, r, phi, phi_n, z):
    el = Position3(a * math.cos(phi_n), a * math.sin(phi_n), 0.0)
    obs = np.array([r * math.cos(phi), r * math.sin(phi), z])
    euclid = float(np.linalg.norm(obs - el.as_array()))
    got = compute_range(el, r, phi, z)
    # the closed form cancels catastrophically only as R -> 0, so accuracy is
    # relative to the configuration scale, not to R itself
    assert abs(got - euclid) <= 1e-12 * (a + r + abs(z))


def test_compute_range_vectorized():
    el = Position3(0.3, 0.4, 0.1)
    r = np.linspace(0.1, 5, 50)
    phi = np.linspace(0, 6, 50)
    z = np.linspace(-2, 2, 50)
    got = compute_range(el, r, phi, z)
    obs = np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
    assert np.allclose(got, np.linalg.norm(obs - el.as_array(), axis=1), rtol=1e-12)


# ---------------------------------------------------------------------------
# Superposition
# ---------------------------------------------------------------------------

def test_single_element_equals_kernel():
    el = ArrayElement(Position3(0.01, -0.02, 0.0), Excitation(1.3, 0.4))
    layout = ArrayLayout(elements=(el,), nominal_mode=None)
    grid = PlaneGrid(z_offset=5 * LAM, half_extent=2 * LAM, samples=8)
    fmap = superpose(layout, PointSource(), grid, WAVE)
    coords = grid.axis_coords()
    for iy in (0, 3, 7):
        for ix in (1, 4, 6):
            direct = eval_point_source(el, Position3(coords[ix], coords[iy], 5 * LAM), WAVE)
            assert fmap.values[iy, ix] == pytest.approx(direct, rel=1e-15)


def test_on_axis_null():
    layout = build_uca(UcaSpec(count=8, radius=LAM, mode=1))
    z = 10 * LAM
    on_axis, ok = point_source_array_field(
        layout, np.array([[0.0, 0.0, z]]), WAVE)
    assert ok[0]
    fmap = superpose(layout, PointSource(), PlaneGrid(z, 10 * LAM, 64), WAVE)
    peak = np.nanmax(np.abs(fmap.values))
    assert abs(on_axis[0]) / peak < 1e-10


def test_two_cophased_elements_double():
    e1 = ArrayElement(Position3(0.01, 0, 0), Excitation(1.0, 0.0))
    e2 = ArrayElement(Position3(-0.01, 0, 0), Excitation(1.0, 0.0))
    layout = ArrayLayout(elements=(e1, e2))
    obs = np.array([[0.0, 0.0, 0.37]])   # equidistant from both
    total, _ = point_source_array_field(layout, obs, WAVE)
    single = eval_point_source(e1, Position3(0, 0, 0.37), WAVE)
    assert abs(total[0]) == pytest.approx(2 * abs(single), rel=1e-12)


def test_superpose_is_linear_in_amplitude():
    spec = UcaSpec(count=5, radius=LAM, mode=1)
    layout = build_uca(spec)
    scaled = ArrayLayout(
        elements=tuple(ArrayElement(e.position, Excitation(3.0 * e.excitation.amplitude,
                                                           e.excitation.phase))
                       for e in layout.elements),
        nominal_mode=1)
    ring = RingProbe(radius=2 * LAM, z_offset=7 * LAM, samples=16)
    base = superpose(layout, PointSource(), ring, WAVE)
    big = superpose(scaled, PointSource(), ring, WAVE)
    assert np.allclose(big.values, 3.0 * base.values, rtol=1e-12)


def test_superpose_deterministic_bitwise():
    layout = build_uca(UcaSpec(count=7, radius=LAM, mode=2))
    grid = PlaneGrid(z_offset=10 * LAM, half_extent=5 * LAM, samples=32)
    a = superpose(layout, PointSource(), grid, WAVE)
    b = superpose(layout, PointSource(), grid, WAVE)
    assert np.array_equal(a.values, b.values)


def test_singular_node_flagged_not_fatal():
    el = ArrayElement(Position3(0.0, 0.0, 0.0), Excitation(1.0, 0.0))
    far = ArrayElement(Position3(0.05, 0.0, 0.0), Excitation(1.0, 0.0))
    layout = ArrayLayout(elements=(el, far))
    # grid at z = 0 passes through the first element at node (0, 0)
    grid = PlaneGrid(z_offset=0.0, half_extent=0.02, samples=5)
    fmap = superpose(layout, PointSource(), grid, WAVE)
    assert not fmap.valid[2, 2]
    assert np.isnan(fmap.values[2, 2].real)
    assert fmap.valid.sum() == 24
    assert np.isfinite(fmap.values[fmap.valid]).all()


def test_vector_superpose_scalar_component():
    layout = build_uca(UcaSpec(count=4, radius=LAM, mode=1))
    model = FiniteDipole(half_length=LAM / 50)
    ring = RingProbe(radius=2 * LAM, z_offset=8 * LAM, samples=12)
    vec = superpose(layout, model, ring, WAVE)
    scal = vec.scalar()
    assert scal.values.shape == (12,)
    assert np.allclose(scal.values, vec.e[:, 2], rtol=1e-15)


# ---------------------------------------------------------------------------
# Phase / magnitude extraction
# ---------------------------------------------------------------------------

def _tiny_map(values):
    vals = np.asarray(values, dtype=complex).reshape(2, 2)
    grid = PlaneGrid(z_offset=1.0, half_extent=1.0, samples=2)
    return FieldMap(grid=grid, values=vals, wave=WAVE, valid=np.ones((2, 2), bool))


def test_extract_phase_values():
    fmap = _tiny_map([2.0, -1.0, 1j, 1.0])
    ph = extract_phase_map(fmap)
    assert ph[0, 0] == pytest.approx(0.0)
    assert ph[0, 1] == pytest.approx(math.pi)    # wrap lands -1 on +pi exactly
    assert ph[1, 0] == pytest.approx(math.pi / 2)


def test_extract_magnitude_values():
    fmap = _tiny_map([0.0, 3 + 4j, 1.0, -2.0])
    mag = extract_magnitude_map(fmap)
    assert mag[0, 0] == 0.0
    assert mag[0, 1] == pytest.approx(5.0)


def test_magnitude_peak_lies_on_annulus():
    """Dense-grid scan: the mode-1 beam peaks off axis on a ring."""
    layout = build_uca(UcaSpec(count=8, radius=LAM, mode=1))
    grid = PlaneGrid(z_offset=10 * LAM, half_extent=8 * LAM, samples=161)
    fmap = superpose(layout, PointSource(), grid, WAVE)
    mag = extract_magnitude_map(fmap)
    iy, ix = np.unravel_index(np.nanargmax(mag), mag.shape)
    coords = grid.axis_coords()
    r_peak = math.hypot(coords[ix], coords[iy])
    assert r_peak > LAM                       # not at the center
    scan = peak_ring_radius(layout, PointSource(), WAVE, 10 * LAM, r_max=8 * LAM)
    assert r_peak == pytest.approx(scan, rel=0.1)


def test_frequency_scale_invariance():
    """Scaling all lengths by the wavelength ratio leaves phase maps identical
    and scales magnitudes by the inverse length ratio."""
    f1, f2 = 3e9, 86e9
    w1, w2 = Wave(f1), Wave(f2)
    s = w2.wavelength / w1.wavelength
    lay1 = build_uca(UcaSpec(count=8, radius=w1.wavelength, mode=1))
    lay2 = build_uca(UcaSpec(count=8, radius=w2.wavelength, mode=1))
    g1 = PlaneGrid(z_offset=10 * w1.wavelength, half_extent=10 * w1.wavelength, samples=32)
    g2 = PlaneGrid(z_offset=10 * w2.wavelength, half_extent=10 * w2.wavelength, samples=32)
    m1 = superpose(lay1, PointSource(), g1, w1)
    m2 = superpose(lay2, PointSource(), g2, w2)
    dphi = np.angle(m1.values * np.conj(m2.values))
    assert np.abs(dphi).max() < 1e-9
    assert np.allclose(np.abs(m2.values), np.abs(m1.values) / s, rtol=1e-9)


def test_grid_and_probe_validation():
    with pytest.raises(InvalidSpecError):
        PlaneGrid(z_offset=0.0, half_extent=-1.0, samples=16)
    with pytest.raises(InvalidSpecError):
        PlaneGrid(z_offset=0.0, half_extent=1.0, samples=1)
    with pytest.raises(InvalidSpecError):
        RingProbe(radius=0.0, z_offset=1.0, samples=16)
    with pytest.raises(InvalidSpecError):
        RingProbe(radius=1.0, z_offset=1.0, samples=1)


def test_default_plane_follows_wavelength():
    plane = default_plane(WAVE)
    assert plane.z_offset == pytest.approx(10 * LAM)
    assert plane.half_extent == pytest.approx(10 * LAM)
    assert plane.samples == 256
