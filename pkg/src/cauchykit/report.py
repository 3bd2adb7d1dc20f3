"""Machine-readable analysis reports.

Reports are plain dicts with a fixed key order, serialized as JSON with full
round-trip float precision (every float survives re-parsing bit-exactly, at
most 17 significant digits).  Identical inputs produce byte-identical report
files.  The decomposition block carries the complete generator set
(S, P, R, A, Q), so the stiffness tensor can be reassembled from a report
alone; :func:`reconstruct_stiffness` does exactly that.
"""

from __future__ import annotations

import json
import math

import numpy as np

from . import acoustics as ac
from . import constitutive as co
from . import decomp
from .materials import MaterialRecord
from .tensor_core import frobenius_norm4, full_to_voigt, voigt_to_full

__all__ = [
    "decomposition_report",
    "classification_report",
    "energy_report",
    "acoustics_report",
    "reconstruct_stiffness",
    "dump_json",
    "scan_rows",
    "write_scan_csv",
]

SCHEMA_VERSION = "1"


def _round_trip(x) -> float:
    return float(x)


def _matrix(a: np.ndarray) -> list:
    return [[_round_trip(v) for v in row] for row in np.asarray(a)]


def _vector(a) -> list:
    return [_round_trip(v) for v in np.asarray(a).ravel()]


def _material_echo(record: MaterialRecord) -> dict:
    echo = {
        "name": record.name,
        "crystal_system": record.crystal_system,
        "stiffness_unit": record.stiffness_unit,
        "voigt": _matrix(record.voigt),
    }
    if record.density is not None:
        echo["density"] = {"value": record.density.value, "unit": record.density.unit}
    if record.warnings:
        echo["warnings"] = list(record.warnings)
    return echo


def _decomposition_block(c: np.ndarray) -> dict:
    parts = decomp.decompose(c)
    sa = decomp.sa_split(c)
    delta = decomp.delta_from_a(sa.a)
    return {
        "scalar_s": _round_trip(parts.scalar_s),
        "scalar_a": _round_trip(parts.scalar_a),
        "dev_p": _matrix(parts.dev_p),
        "dev_q": _matrix(parts.dev_q),
        "harm_r_voigt": _matrix(full_to_voigt(parts.harm_r)),
        "delta": _matrix(delta),
        "norms": {
            "cauchy_part": _round_trip(frobenius_norm4(sa.s)),
            "non_cauchy_part": _round_trip(frobenius_norm4(sa.a)),
            "p_norm": _round_trip(parts.p_norm),
            "q_norm": _round_trip(parts.q_norm),
            "r_norm": _round_trip(parts.r_norm),
        },
        "cauchy_factor": _round_trip(decomp.cauchy_factor(c)),
    }


def _classification_block(c: np.ndarray, tol: float) -> dict:
    cls = decomp.classify(c, tol=tol)
    return {
        "full_cauchy": cls.full_cauchy,
        "partial_cauchy": cls.partial_cauchy,
        "a_sign": cls.a_sign,
        "scalar_a": _round_trip(cls.scalar_a),
        "cauchy_factor": _round_trip(cls.cauchy_factor),
        "quadratic_invariants": {
            k: _round_trip(v) for k, v in cls.quadratic_invariants.items()
        },
    }


def _bounds_block(c: np.ndarray) -> dict:
    bounds = co.stability_bounds(decomp.decompose(c))
    block = {
        "s_plus_a": _round_trip(bounds.s_plus_a),
        "four_s_minus_five_a": _round_trip(bounds.four_s_minus_five_a),
        "a_window_ok": bounds.a_window_ok,
        "voigt_min_eigenvalue": _round_trip(bounds.voigt_min_eigenvalue),
    }
    if bounds.poisson_equiv is not None:
        block["poisson_equiv"] = _round_trip(bounds.poisson_equiv)
        block["poisson_ok"] = bounds.poisson_ok
    return block


def decomposition_report(record: MaterialRecord, tol: float = 1e-6) -> dict:
    """Full decomposition, classification and bounds report for a material."""
    c = record.stiffness()
    return {
        "schema_version": SCHEMA_VERSION,
        "material": _material_echo(record),
        "decomposition": _decomposition_block(c),
        "classification": _classification_block(c, tol),
        "bounds": _bounds_block(c),
    }


def classification_report(record: MaterialRecord, tol: float = 1e-6) -> dict:
    c = record.stiffness()
    return {
        "schema_version": SCHEMA_VERSION,
        "material": _material_echo(record),
        "classification": _classification_block(c, tol),
    }


def energy_report(record: MaterialRecord, eps: np.ndarray, tol: float = 1e-6) -> dict:
    """Energy attribution report for a strain state (strain is dimensionless;
    energies carry the stiffness unit)."""
    c = record.stiffness()
    e = co.energy(c, eps)
    return {
        "schema_version": SCHEMA_VERSION,
        "material": _material_echo(record),
        "strain": _matrix(np.asarray(eps, dtype=float)),
        "energy": {
            "unit": record.stiffness_unit,
            "total": _round_trip(e.total),
            "compression": {
                "total": _round_trip(e.compression),
                "cauchy": _round_trip(e.compression_cauchy),
                "non_cauchy": _round_trip(e.compression_non_cauchy),
            },
            "mixed": {
                "total": _round_trip(e.mixed),
                "cauchy": _round_trip(e.mixed_cauchy),
                "non_cauchy": _round_trip(e.mixed_non_cauchy),
            },
            "shear": {
                "total": _round_trip(e.shear),
                "cauchy": _round_trip(e.shear_cauchy),
                "non_cauchy": _round_trip(e.shear_non_cauchy),
            },
        },
        "bounds": _bounds_block(c),
    }


def _direction_entry(c_gpa: np.ndarray, parts, n: np.ndarray, rho: float) -> dict:
    bundle = ac.christoffel(c_gpa, n, rho)
    wave = ac.wave_solve(bundle)
    return {
        "n": _vector(n),
        # null marks a non-causal mode (JSON has no NaN)
        "velocities_km_s": [
            None if math.isnan(v) else _round_trip(v) for v in wave.velocities
        ],
        "squared_velocities": _vector(wave.eigenvalues),
        "polarizations": _matrix(wave.polarizations.T),
        "longitudinal_purity": _vector(wave.longitudinal_purity),
        "degenerate_pairs": [list(p) for p in wave.degenerate_pairs],
        "causal": wave.causal,
        "sum_squared_formula": _round_trip(
            ac.sum_squared_velocities(parts, n, rho)
        ),
        "pure_longitudinal_residual": _round_trip(
            ac.pure_longitudinal_residual(bundle)
        ),
    }


def acoustics_report(
    record: MaterialRecord,
    rho_g_cm3: float,
    directions: list | None = None,
    scan: int | None = None,
    pure_modes: bool = False,
    tol: float = 1e-6,
) -> tuple[dict, list[dict]]:
    """Acoustic report plus (when scanning) the per-direction scan rows.

    Stiffness is converted to GPa and density is in g/cm^3, so velocities are
    km/s.  Returns ``(report, rows)``; ``rows`` is empty unless ``scan``.
    """
    if rho_g_cm3 <= 0:
        raise ValueError(f"density must be positive, got {rho_g_cm3}")
    c_gpa = record.stiffness_gpa()
    parts = decomp.decompose(c_gpa)
    report = {
        "schema_version": SCHEMA_VERSION,
        "material": _material_echo(record),
        "acoustics": {
            "density_g_cm3": _round_trip(rho_g_cm3),
            "velocity_unit": "km/s",
        },
    }
    block = report["acoustics"]

    if directions:
        block["directions"] = [
            _direction_entry(c_gpa, parts, ac.unit_vector(n), rho_g_cm3)
            for n in directions
        ]

    crit = ac.critical_directions(parts)
    block["critical_directions"] = {
        "eigenvalues": _vector(crit.eigenvalues),
        "directions": _matrix(crit.directions.T),
        "fully_degenerate": crit.fully_degenerate,
        "degenerate_pairs": [list(p) for p in crit.degenerate_pairs],
    }

    rows: list[dict] = []
    if scan:
        rows = scan_rows(c_gpa, rho_g_cm3, scan)
        non_causal = sum(1 for r in rows if not r["causal"])
        block["scan"] = {
            "count": scan,
            "non_causal_count": non_causal,
        }

    if pure_modes:
        result = ac.find_pure_longitudinal(c_gpa, rho_g_cm3, grid_n=scan or 20000)
        block["pure_longitudinal"] = {
            "all_directions_pure": result.all_directions_pure,
            "hits": [
                {
                    "direction": _vector(h.direction),
                    "residual": _round_trip(h.residual),
                    "velocity_km_s": _round_trip(h.velocity),
                }
                for h in result.hits
            ],
        }
    return report, rows


def scan_rows(c_gpa: np.ndarray, rho: float, count: int) -> list[dict]:
    """Evaluate the wave solution on a golden-angle lattice of directions."""
    rows = []
    for idx, n in enumerate(ac.fibonacci_sphere(count)):
        bundle = ac.christoffel(c_gpa, n, rho)
        wave = ac.wave_solve(bundle)
        rows.append(
            {
                "index": idx,
                "n": n,
                "velocities": wave.velocities,
                "purity_l": float(wave.longitudinal_purity[0]),
                "degenerate": bool(wave.degenerate_pairs),
                "causal": wave.causal,
            }
        )
    return rows


def write_scan_csv(rows: list[dict], path) -> None:
    """Write scan rows as CSV: '.' decimal separator, LF line endings, and a
    mandatory header ``nx,ny,nz,v1,v2,v3,purity_L,degenerate_flag``."""

    def fmt(x: float) -> str:
        return "nan" if math.isnan(x) else f"{x:.17g}"

    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("nx,ny,nz,v1,v2,v3,purity_L,degenerate_flag\n")
        for row in rows:
            n = row["n"]
            v = row["velocities"]
            fh.write(
                f"{fmt(n[0])},{fmt(n[1])},{fmt(n[2])},"
                f"{fmt(v[0])},{fmt(v[1])},{fmt(v[2])},"
                f"{fmt(row['purity_l'])},{int(row['degenerate'])}\n"
            )


def reconstruct_stiffness(decomposition_block: dict) -> np.ndarray:
    """Reassemble the full stiffness tensor from a report's decomposition
    block (the fixed point property: decomposing the result reproduces the
    block)."""
    from .tensor_core import IDENTITY3

    g = IDENTITY3
    s = float(decomposition_block["scalar_s"])
    a = float(decomposition_block["scalar_a"])
    p = np.array(decomposition_block["dev_p"], dtype=float)
    q = np.array(decomposition_block["dev_q"], dtype=float)
    r = voigt_to_full(np.array(decomposition_block["harm_r_voigt"], dtype=float))

    g1 = np.einsum("ij,kl->ijkl", g, g)
    g2 = np.einsum("ik,jl->ijkl", g, g)
    g3 = np.einsum("il,jk->ijkl", g, g)
    s1 = s / 15.0 * (g1 + g2 + g3)
    s2 = (
        np.einsum("ij,kl->ijkl", p, g)
        + np.einsum("ik,jl->ijkl", p, g)
        + np.einsum("il,jk->ijkl", p, g)
        + np.einsum("jk,il->ijkl", p, g)
        + np.einsum("jl,ik->ijkl", p, g)
        + np.einsum("kl,ij->ijkl", p, g)
    ) / 7.0
    a1 = a / 12.0 * (2.0 * g1 - g3 - g2)
    a2 = decomp.a_from_delta(q)
    return s1 + s2 + r + a1 + a2


def dump_json(report: dict, path) -> None:
    """Serialize a report deterministically (UTF-8, 2-space indent, LF)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(report, fh, indent=2, allow_nan=False)
        fh.write("\n")
