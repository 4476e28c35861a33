"""Scenario runner CLI.

Subcommands: simulate, min-elements, smartphone, channel, momentum, builtin.
Exit codes: 0 success, 2 configuration/usage error, 3 numerical or geometry
error. Every run writes a manifest.json listing all produced files with
sha256 checksums; reruns of the same scenario are byte-identical.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .arrays import (ArrayLayout, SmartphoneSpec, UcaSpec, build_smartphone_layout,
                     build_uca, load_layout, min_elements)
from .channel import LinkSpec, capacity, channel_matrix, crosstalk_db, mode_channel
from .config import Field, parse_config, validate_config
from .errors import (AliasingError, ConfigError, DegenerateModeError, FitNotFoundError,
                     InvalidSpecError, OamSimError, SingularFieldError, SweepExhaustedError,
                     UndefinedPhaseError, UnsupportedModelError)
from .exports import (write_channel_csv, write_field_csv, write_magnitude_pgm,
                      write_manifest, write_phase_pgm, write_real_matrix_csv,
                      write_rows_csv, write_spectrum_csv)
from .fields import (PlaneGrid, RingProbe, default_plane, peak_ring_radius, superpose)
from .modes import find_min_elements_empirical, mode_decompose, purity, winding_number
from .momentum import (FarSphereSpec, angular_momentum_density, maxwell_stress_avg,
                       momentum_density, momentum_sample, oam_flux_ratio, poynting_avg,
                       sphere_surface, surface_force)
from .radiators import FiniteDipole, PointSource, dipole_array_fields, fit_dipole_length
from .waves import ETA0, MU0, C0, Wave

VERSION = "0.1.0"

BUILTIN_NAMES = ("fig2-modes", "fig3-dipoles", "table1", "smartphone-3g", "smartphone-86g")


# ---------------------------------------------------------------------------
# Config schemas
# ---------------------------------------------------------------------------

SIMULATE_SCHEMA = {
    "wave": {"frequency": Field("float", required=True)},
    "layout": {
        "kind": Field("enum", required=True, choices=("uca", "smartphone", "custom")),
        "count": Field("int"),
        "radius": Field("float"),
        "mode": Field("int"),
        "placement": Field("enum", choices=("regular", "irregular")),
        "width": Field("float", default=0.075),
        "height": Field("float", default=0.150),
        "path": Field("str"),
    },
    "radiator": {
        "kind": Field("enum", default="point", choices=("point", "dipole")),
        "half_length": Field("float"),
        "axis": Field("floats", default=[0.0, 0.0, 1.0]),
    },
    "plane": {
        "z": Field("float"),
        "half_extent": Field("float"),
        "samples": Field("int", default=256),
    },
    "ring": {
        "radius": Field("float"),
        "z": Field("float"),
        "samples": Field("int"),
    },
    "analysis": {
        "l_max": Field("int", default=6),
        "target_mode": Field("int"),
    },
}

CHANNEL_SCHEMA = {
    "wave": {"frequency": Field("float", required=True)},
    "tx": {"count": Field("int", required=True), "radius": Field("float", required=True)},
    "rx": {"count": Field("int", required=True), "radius": Field("float", required=True)},
    "link": {
        "separation": Field("float", required=True),
        "lateral_offset": Field("float", default=0.0),
        "tilt": Field("float", default=0.0),
    },
    "modes": {"values": Field("ints", required=True)},
    "snr": {"values": Field("floats", required=True)},
    "capacity": {"streams": Field("int")},
}

MOMENTUM_SCHEMA = {
    "wave": {"frequency": Field("float", required=True)},
    "layout": {
        "count": Field("int"),
        "radius": Field("float"),
        "mode": Field("int"),
    },
    "radiator": {
        "kind": Field("enum", default="dipole", choices=("point", "dipole")),
        "half_length": Field("float"),
        "axis": Field("floats", default=[0.0, 0.0, 1.0]),
    },
    "sphere": {
        "radius": Field("float"),
        "n_theta": Field("int", default=128),
        "n_phi": Field("int", default=256),
    },
}


# ---------------------------------------------------------------------------
# Shared pieces
# ---------------------------------------------------------------------------

def _ensure_out(out_dir: str) -> Path:
    p = Path(out_dir)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _layout_from_config(cfg: dict) -> ArrayLayout:
    lay = cfg["layout"]
    kind = lay["kind"]
    if kind == "uca":
        for key in ("count", "radius", "mode"):
            if lay[key] is None:
                raise ConfigError(f"layout kind 'uca' needs '{key}'", field=key)
        return build_uca(UcaSpec(count=lay["count"], radius=lay["radius"], mode=lay["mode"]))
    if kind == "smartphone":
        if lay["placement"] is None:
            raise ConfigError("layout kind 'smartphone' needs 'placement'", field="placement")
        mode = lay["mode"] if lay["mode"] is not None else 1
        return build_smartphone_layout(SmartphoneSpec(
            width=lay["width"], height=lay["height"], placement=lay["placement"], mode=mode))
    if lay["path"] is None:
        raise ConfigError("layout kind 'custom' needs 'path'", field="path")
    return load_layout(lay["path"])


def _radiator_from_config(cfg: dict):
    rad = cfg["radiator"]
    if rad["kind"] == "point":
        return PointSource()
    if rad["half_length"] is None:
        raise ConfigError("radiator kind 'dipole' needs 'half_length'", field="half_length")
    return FiniteDipole(half_length=rad["half_length"], axis=tuple(rad["axis"]))


def _scalar_map(layout, model, plane, wave):
    field = superpose(layout, model, plane, wave)
    if isinstance(model, FiniteDipole):
        field = field.scalar(model.unit_axis())
    return field


def _scalar_ring(layout, model, ring, wave):
    samples = superpose(layout, model, ring, wave)
    if isinstance(model, FiniteDipole):
        samples = samples.scalar(model.unit_axis())
    return samples


def _ring_from_config(cfg, layout, model, wave, l_max, ring_present: bool) -> RingProbe:
    lam = wave.wavelength
    if not ring_present:
        z = 10.0 * lam
        return RingProbe(radius=peak_ring_radius(layout, model, wave, z),
                         z_offset=z, samples=8 * l_max + 8)
    ring = cfg["ring"]
    z = ring["z"] if ring["z"] is not None else 10.0 * lam
    r = ring["radius"] if ring["radius"] is not None else peak_ring_radius(layout, model, wave, z)
    m = ring["samples"] if ring["samples"] is not None else 8 * l_max + 8
    return RingProbe(radius=r, z_offset=z, samples=m)


def _analyze(layout, model, wave, ring, l_max, target_mode):
    samples = _scalar_ring(layout, model, ring, wave)
    spectrum = mode_decompose(samples, l_max)
    report = purity(spectrum, target_mode)
    wind = winding_number(samples)
    results = {
        "target_mode": report.target_mode,
        "dominant_mode": report.dominant_mode,
        "purity": report.purity,
        "target_purity": report.target_purity,
        "winding": wind.winding,
        "winding_residual": wind.residual,
        "ring": {"radius": ring.radius, "z": ring.z_offset, "samples": ring.samples},
    }
    return spectrum, results


def _emit_maps(fmap, out: Path, prefix: str) -> list[str]:
    names = [f"{prefix}phase.pgm", f"{prefix}magnitude.pgm", f"{prefix}field.csv"]
    write_phase_pgm(fmap, out / names[0])
    write_magnitude_pgm(fmap, out / names[1])
    write_field_csv(fmap, out / names[2])
    return names


# ---------------------------------------------------------------------------
# Subcommand runners
# ---------------------------------------------------------------------------

def run_simulate(config_text: str, out_dir: str, seed=None) -> dict:
    parsed = parse_config(config_text)
    cfg = validate_config(parsed, SIMULATE_SCHEMA, required_sections=("wave", "layout"))
    wave = Wave(frequency=cfg["wave"]["frequency"])
    layout = _layout_from_config(cfg)
    model = _radiator_from_config(cfg)
    lam = wave.wavelength

    plane_cfg = cfg["plane"]
    plane = PlaneGrid(
        z_offset=plane_cfg["z"] if plane_cfg["z"] is not None else 10.0 * lam,
        half_extent=plane_cfg["half_extent"] if plane_cfg["half_extent"] is not None else 10.0 * lam,
        samples=plane_cfg["samples"])
    l_max = cfg["analysis"]["l_max"]
    target = cfg["analysis"]["target_mode"]
    if target is None:
        target = layout.nominal_mode if layout.nominal_mode is not None else 0
    if abs(target) > l_max:
        raise ConfigError(f"target_mode {target} outside l_max {l_max}", field="target_mode")
    ring = _ring_from_config(cfg, layout, model, wave, l_max, parsed.has("ring"))

    # compute everything before writing anything
    fmap = _scalar_map(layout, model, plane, wave)
    spectrum, results = _analyze(layout, model, wave, ring, l_max, target)
    out = _ensure_out(out_dir)
    files = _emit_maps(fmap, out, "")
    write_spectrum_csv(spectrum, out / "spectrum.csv")
    files.append("spectrum.csv")
    scenario = {"command": "simulate", "config": config_text, "seed": seed}
    return write_manifest(out, scenario, results, VERSION, files)


def run_min_elements(l_max: int, out_dir: str, seed=None, frequency: float = 10e9) -> dict:
    if l_max < 1:
        raise ConfigError(f"l_max must be >= 1, got {l_max}", field="l_max")
    wave = Wave(frequency=frequency)
    out = _ensure_out(out_dir)
    rows, table = [], {}
    failures = []
    for l in range(1, l_max + 1):
        n_rule = min_elements(l)
        try:
            n_emp = find_min_elements_empirical(l, wave)
        except SweepExhaustedError as exc:
            failures.append((l, str(exc)))
            rows.append([l, n_rule, -1])
            table[str(l)] = {"rule": n_rule, "empirical": None}
            continue
        rows.append([l, n_rule, n_emp])
        table[str(l)] = {"rule": n_rule, "empirical": n_emp}
    write_rows_csv(["l", "n_rule", "n_empirical"], rows, out / "min_elements.csv")
    results = {"table": table, "agree": all(
        v["empirical"] == v["rule"] for v in table.values())}
    scenario = {"command": "min-elements", "l_max": l_max, "frequency": frequency, "seed": seed}
    manifest = write_manifest(out, scenario, results, VERSION, ["min_elements.csv"])
    if failures:
        raise SweepExhaustedError(
            f"partial table: sweep failed for l = {[l for l, _ in failures]}")
    return manifest


def run_smartphone(placement: str, frequency: float, out_dir: str, mode: int = 1,
                   width: float = 0.075, height: float = 0.150, seed=None) -> dict:
    wave = Wave(frequency=frequency)
    model = PointSource()
    out = _ensure_out(out_dir)
    l_max = 6

    spec = SmartphoneSpec(width=width, height=height, placement=placement, mode=mode)
    layout = build_smartphone_layout(spec)
    plane = default_plane(wave)
    fmap = _scalar_map(layout, model, plane, wave)
    ring = _ring_from_config({}, layout, model, wave, l_max, ring_present=False)
    spectrum, results = _analyze(layout, model, wave, ring, l_max, mode)
    files = _emit_maps(fmap, out, f"{placement}_")
    write_spectrum_csv(spectrum, out / f"{placement}_spectrum.csv")
    files.append(f"{placement}_spectrum.csv")

    # Companion placement analyzed (no maps) for the comparison entry.
    other = "irregular" if placement == "regular" else "regular"
    other_layout = build_smartphone_layout(SmartphoneSpec(
        width=width, height=height, placement=other, mode=mode))
    other_ring = _ring_from_config({}, other_layout, model, wave, l_max, ring_present=False)
    _, other_results = _analyze(other_layout, model, wave, other_ring, l_max, mode)
    comparison = {
        "placement": placement,
        "target_purity": results["target_purity"],
        f"{other}_target_purity": other_results["target_purity"],
        "regular_exceeds_irregular": (
            results["target_purity"] > other_results["target_purity"]
            if placement == "regular"
            else other_results["target_purity"] > results["target_purity"]),
    }
    results = {placement: results, "comparison": comparison}
    scenario = {"command": "smartphone", "placement": placement, "frequency": frequency,
                "mode": mode, "width": width, "height": height, "seed": seed}
    return write_manifest(out, scenario, results, VERSION, files)


def run_channel(config_text: str, out_dir: str, seed=None) -> dict:
    parsed = parse_config(config_text)
    cfg = validate_config(parsed, CHANNEL_SCHEMA,
                          required_sections=("wave", "tx", "rx", "link", "modes", "snr"))
    wave = Wave(frequency=cfg["wave"]["frequency"])
    tx = build_uca(UcaSpec(count=cfg["tx"]["count"], radius=cfg["tx"]["radius"], mode=0))
    rx = build_uca(UcaSpec(count=cfg["rx"]["count"], radius=cfg["rx"]["radius"], mode=0))
    link = LinkSpec(tx=tx, rx=rx, separation=cfg["link"]["separation"],
                    lateral_offset=cfg["link"]["lateral_offset"], tilt=cfg["link"]["tilt"])
    modes = cfg["modes"]["values"]
    snrs = cfg["snr"]["values"]
    streams = cfg["capacity"]["streams"]
    if streams is None:
        streams = len(modes)

    h = channel_matrix(link, wave)
    hm = mode_channel(h, modes)
    xdb = crosstalk_db(hm)
    out = _ensure_out(out_dir)
    write_channel_csv(h.matrix, out / "channel_element.csv")
    write_channel_csv(hm.matrix, out / "channel_mode.csv")
    write_real_matrix_csv(xdb, out / "crosstalk_db.csv", value_name="db")
    cap_rows = []
    caps = {}
    for snr in snrs:
        rep = capacity(hm, snr=snr, streams=streams)
        cap_rows.append([float(snr), int(streams), float(rep.capacity_bits)])
        caps[repr(float(snr))] = rep.capacity_bits
    write_rows_csv(["snr", "streams", "capacity_bits_per_s_per_hz"], cap_rows,
                   out / "capacity.csv")
    off = xdb[~np.eye(xdb.shape[0], dtype=bool)]
    results = {
        "modes": list(modes),
        "max_offdiagonal_crosstalk_db": float(off.max()) if off.size else None,
        "capacity_bits": caps,
        "capacity_normalization": "equal power per stream; singular values "
                                  "normalized to the largest",
        "singular_values": [float(s) for s in np.linalg.svd(hm.matrix, compute_uv=False)],
    }
    files = ["channel_element.csv", "channel_mode.csv", "crosstalk_db.csv", "capacity.csv"]
    scenario = {"command": "channel", "config": config_text, "seed": seed}
    return write_manifest(out, scenario, results, VERSION, files)


def run_momentum(config_text: str, out_dir: str, seed=None) -> dict:
    parsed = parse_config(config_text)
    cfg = validate_config(parsed, MOMENTUM_SCHEMA, required_sections=("wave",))
    wave = Wave(frequency=cfg["wave"]["frequency"])
    lam = wave.wavelength

    # Plane-wave validation: stress-tensor pressure against intensity / c.
    e0 = 1.0
    e = np.array([e0, 0.0, 0.0], dtype=complex)
    h = np.array([0.0, e0 / ETA0, 0.0], dtype=complex)
    t = maxwell_stress_avg(e, MU0 * h)
    pressure = -float(t[2, 2])
    intensity = e0 ** 2 / (2.0 * ETA0)
    expected = intensity / C0
    sym_dev = float(np.abs(t - t.T).max() / np.abs(t).max())
    results = {
        "plane_wave": {
            "intensity_w_per_m2": intensity,
            "pressure_n_per_m2": pressure,
            "expected_pressure_n_per_m2": expected,
            "relative_error": abs(pressure - expected) / expected,
        },
        "stress_symmetry_max_relative": sym_dev,
    }

    if parsed.has("layout"):
        lay = cfg["layout"]
        for key in ("count", "mode"):
            if lay[key] is None:
                raise ConfigError(f"[layout] needs '{key}'", field=key)
        radius = lay["radius"] if lay["radius"] is not None else 0.5 * lam
        layout = build_uca(UcaSpec(count=lay["count"], radius=radius, mode=lay["mode"]))
        rad = cfg["radiator"]
        if rad["kind"] != "dipole":
            raise UnsupportedModelError(
                "momentum flux needs the dipole radiator; scalar point sources carry no H")
        half = rad["half_length"] if rad["half_length"] is not None else lam / 100.0
        model = FiniteDipole(half_length=half, axis=tuple(rad["axis"]))
        sph = cfg["sphere"]
        sphere = FarSphereSpec(
            radius=sph["radius"] if sph["radius"] is not None else 100.0 * lam,
            n_theta=sph["n_theta"], n_phi=sph["n_phi"])
        ratio = oam_flux_ratio(layout, model, wave, sphere)
        results["oam_flux_ratio"] = {
            "mode": layout.nominal_mode,
            "count": len(layout),
            "uca_radius_m": radius,
            "dipole_half_length_m": half,
            "sphere_radius_m": sphere.radius,
            "value": ratio,
        }

        # Momentum report over the far sphere: flux statistics, densities at
        # the Poynting peak, and the net force on the enclosed sources (zero
        # for these mirror-symmetric layouts up to quadrature noise).
        surf = sphere_surface(sphere.radius, sphere.n_theta, sphere.n_phi,
                              center=layout.center())
        e, hh, _ = dipole_array_fields(model, layout, surf.points, wave)
        s = poynting_avg(e, hh)
        g = momentum_density(e, MU0 * hh)
        l_dens = angular_momentum_density(surf.points, g, origin=layout.center())
        radial = np.einsum("ij,ij->i", s, surf.normals)
        peak = int(np.argmax(radial))
        sample = momentum_sample(surf.points[peak], e[peak], hh[peak],
                                 origin=layout.center())
        force = surface_force(lambda pts: dipole_array_fields(model, layout, pts, wave)[:2],
                              surf)
        results["momentum_report"] = {
            "radiated_power_w": float(radial @ surf.weights),
            "poynting_peak_w_per_m2": float(radial[peak]),
            "peak_sample": {
                "position_m": [float(c) for c in sample.position],
                "poynting_w_per_m2": [float(c) for c in sample.s],
                "momentum_density": [float(c) for c in sample.g],
                "angular_momentum_density_about_center": [float(c) for c in sample.l_density],
            },
            "axial_angular_momentum_flux_mean": float(l_dens[:, 2].mean()),
            "force_on_sources_n": [float(c) for c in force],
        }

    out = _ensure_out(out_dir)
    scenario = {"command": "momentum", "config": config_text, "seed": seed}
    return write_manifest(out, scenario, results, VERSION, [])


# ---------------------------------------------------------------------------
# Built-in scenarios
# ---------------------------------------------------------------------------

def run_builtin(name: str, out_dir: str, seed=None) -> dict:
    if name == "table1":
        return run_min_elements(l_max=5, out_dir=out_dir, seed=seed)
    if name == "smartphone-3g":
        return run_smartphone("regular", 3e9, out_dir, seed=seed)
    if name == "smartphone-86g":
        return run_smartphone("regular", 86e9, out_dir, seed=seed)
    if name == "fig2-modes":
        return _run_mode_ladder(out_dir, frequency=10e9, modes=range(0, 7),
                                model_kind="point", seed=seed, name=name)
    if name == "fig3-dipoles":
        return _run_mode_ladder(out_dir, frequency=3e9, modes=range(1, 4),
                                model_kind="dipole", seed=seed, name=name)
    raise ConfigError(f"unknown builtin scenario {name!r}; choose from {BUILTIN_NAMES}")


def _run_mode_ladder(out_dir: str, frequency: float, modes, model_kind: str,
                     seed, name: str) -> dict:
    """Point-source (or fitted-dipole) UCAs at the minimum element counts,
    one phase/magnitude map and ring analysis per mode."""
    wave = Wave(frequency=frequency)
    lam = wave.wavelength
    out = _ensure_out(out_dir)
    results: dict = {}
    if model_kind == "dipole":
        # in-plane parallel dipoles: the co-polarized pattern peaks broadside,
        # so the analysis ring lands on the beam annulus
        axis = (1.0, 0.0, 0.0)
        reference = build_uca(UcaSpec(count=min_elements(1), radius=lam, mode=1))
        fit = fit_dipole_length(reference, wave, tolerance=0.10, axis=axis)
        model = FiniteDipole(half_length=fit.half_length, axis=axis)
        results["dipole_fit"] = {"half_length_m": fit.half_length, "mse": fit.mse}
    else:
        model = PointSource()

    files: list[str] = []
    per_mode = {}
    plane = default_plane(wave)
    for l in modes:
        layout = build_uca(UcaSpec(count=min_elements(l), radius=lam, mode=l))
        prefix = f"l{l}_"
        fmap = _scalar_map(layout, model, plane, wave)
        l_max = max(6, abs(l) + 1)
        ring = _ring_from_config({}, layout, model, wave, l_max, ring_present=False)
        spectrum, mode_results = _analyze(layout, model, wave, ring, l_max, l)
        files += _emit_maps(fmap, out, prefix)
        write_spectrum_csv(spectrum, out / f"{prefix}spectrum.csv")
        files.append(f"{prefix}spectrum.csv")
        mode_results["count"] = len(layout)
        per_mode[str(l)] = mode_results
    results["modes"] = per_mode
    scenario = {"command": "builtin", "name": name, "frequency": frequency, "seed": seed}
    return write_manifest(out, scenario, results, VERSION, files)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oamsim",
        description="OAM antenna-array beam simulator and analysis toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config=True):
        if config:
            p.add_argument("--config", required=True, help="scenario configuration file")
        p.add_argument("--out", required=True, help="output directory (created if missing)")
        p.add_argument("--seed", type=int, default=None,
                       help="reserved; echoed into the manifest (no stochastic paths)")

    add_common(sub.add_parser("simulate", help="field maps + ring mode analysis"))

    p = sub.add_parser("min-elements", help="rule vs empirical minimum element counts")
    p.add_argument("--l-max", type=int, required=True)
    p.add_argument("--frequency", type=float, default=10e9)
    add_common(p, config=False)

    p = sub.add_parser("smartphone", help="handset array scenario at a given frequency")
    p.add_argument("--placement", choices=("regular", "irregular"), required=True)
    p.add_argument("--freq", type=float, required=True)
    p.add_argument("--mode", type=int, default=1)
    p.add_argument("--width", type=float, default=0.075)
    p.add_argument("--height", type=float, default=0.150)
    add_common(p, config=False)

    add_common(sub.add_parser("channel", help="TX/RX link: crosstalk and capacity"))
    add_common(sub.add_parser("momentum", help="stress-tensor validation and OAM flux"))

    p = sub.add_parser("builtin", help="run a named preset scenario")
    p.add_argument("name", choices=BUILTIN_NAMES)
    add_common(p, config=False)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            run_simulate(Path(args.config).read_text(encoding="utf-8"), args.out, args.seed)
        elif args.command == "min-elements":
            run_min_elements(args.l_max, args.out, seed=args.seed, frequency=args.frequency)
        elif args.command == "smartphone":
            run_smartphone(args.placement, args.freq, args.out, mode=args.mode,
                           width=args.width, height=args.height, seed=args.seed)
        elif args.command == "channel":
            run_channel(Path(args.config).read_text(encoding="utf-8"), args.out, args.seed)
        elif args.command == "momentum":
            run_momentum(Path(args.config).read_text(encoding="utf-8"), args.out, args.seed)
        elif args.command == "builtin":
            run_builtin(args.name, args.out, seed=args.seed)
        else:   # pragma: no cover - argparse enforces the choices
            parser.error(f"unknown command {args.command}")
    except FileNotFoundError as exc:
        print(f"oamsim: config error: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, InvalidSpecError, UnsupportedModelError) as exc:
        print(f"oamsim: config error: {exc}", file=sys.stderr)
        return 2
    except (SingularFieldError, AliasingError, UndefinedPhaseError,
            DegenerateModeError, SweepExhaustedError, FitNotFoundError) as exc:
        print(f"oamsim: numerical/geometry error: {exc}", file=sys.stderr)
        return 3
    except OamSimError as exc:   # pragma: no cover - catch-all for new subclasses
        print(f"oamsim: error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":   # pragma: no cover
    sys.exit(main())
