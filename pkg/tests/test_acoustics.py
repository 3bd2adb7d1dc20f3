import itertools
import math

import numpy as np
import pytest

from cauchykit.acoustics import (
    ChristoffelBundle,
    christoffel,
    critical_directions,
    fibonacci_sphere,
    find_pure_longitudinal,
    longitudinal_velocity,
    pure_longitudinal_residual,
    shear_condition_residual,
    shear_polarization,
    shear_sum,
    shear_velocity,
    sum_squared_velocities,
    wave_solve,
)
from cauchykit.decomp import a_from_delta, decompose, sa_split
from cauchykit.tensor_core import (
    cubic_stiffness,
    frobenius_norm2,
    isotropic_stiffness,
    voigt_to_full,
)

from conftest import (
    contract_nn_oracle,
    hexagonal_voigt,
    random_spd_voigt,
    random_stiffness,
    random_symmetric3,
    random_unit,
)

W = cubic_stiffness(5.224, 2.044, 1.608)
ISO = isotropic_stiffness(2.0, 1.0)
EZ = np.array([0.0, 0.0, 1.0])


class TestChristoffel:
    def test_isotropic_along_z_matches_contraction_oracle(self):
        c = isotropic_stiffness(1.0, 1.0)
        bundle = christoffel(c, EZ, 1.0)
        oracle = contract_nn_oracle(c, EZ, 1.0)
        assert np.allclose(bundle.gamma, oracle, atol=1e-14)
        assert np.allclose(bundle.gamma, np.diag([1.0, 1.0, 3.0]), atol=1e-14)

    def test_split_reconstructs_exactly(self, rng):
        bundle = christoffel(random_stiffness(rng), random_unit(rng), 1.7)
        assert np.array_equal(bundle.gamma, bundle.cauchy + bundle.non_cauchy)

    def test_non_cauchy_annihilates_direction_and_is_singular(self, rng):
        for _ in range(200):
            c = random_stiffness(rng)
            n = random_unit(rng)
            bundle = christoffel(c, n, 1.0)
            scale = max(frobenius_norm2(bundle.non_cauchy), 1e-300)
            assert np.linalg.norm(bundle.non_cauchy @ n) <= 1e-12 * scale
            assert abs(np.linalg.det(bundle.non_cauchy)) <= 1e-10 * scale ** 3

    def test_full_cauchy_material_has_zero_split(self, rng):
        s = sa_split(random_stiffness(rng)).s
        bundle = christoffel(s, random_unit(rng), 1.0)
        assert np.abs(bundle.non_cauchy).max() <= 1e-14
        assert np.allclose(bundle.gamma, bundle.cauchy)

    def test_nonpositive_density_rejected(self, rng):
        with pytest.raises(ValueError):
            christoffel(ISO, EZ, 0.0)
        with pytest.raises(ValueError):
            christoffel(ISO, EZ, -1.0)

    def test_non_unit_direction_rejected(self):
        with pytest.raises(ValueError):
            christoffel(ISO, [0.0, 0.0, 2.0], 1.0)


class TestWaveSolve:
    def test_isotropic_any_direction(self, rng):
        for _ in range(10):
            n = random_unit(rng)
            wave = wave_solve(christoffel(ISO, n, 1.0))
            assert np.allclose(wave.eigenvalues, [4.0, 1.0, 1.0], atol=1e-12)
            assert np.allclose(wave.velocities, [2.0, 1.0, 1.0], atol=1e-12)
            # fastest mode is longitudinal
            assert abs(wave.polarizations[:, 0] @ n) == pytest.approx(1.0, abs=1e-10)
            assert wave.longitudinal_purity[0] == pytest.approx(1.0, abs=1e-10)
            assert (1, 2) in wave.degenerate_pairs
            assert wave.causal

    def test_tungsten_along_cube_axis(self):
        wave = wave_solve(christoffel(W, EZ, 1.0))
        assert np.allclose(wave.eigenvalues, [5.224, 1.608, 1.608], atol=1e-12)

    def test_synthetic_negative_eigenvalue_flags_non_causal(self):
        bundle = ChristoffelBundle(
            gamma=np.diag([2.0, 1.0, -0.5]),
            cauchy=np.diag([2.0, 1.0, -0.5]),
            non_cauchy=np.zeros((3, 3)),
            direction=EZ,
            density=1.0,
        )
        wave = wave_solve(bundle)
        assert not wave.causal
        assert math.isnan(wave.velocities[2])
        assert wave.eigenvalues[2] == -0.5

    def test_polarizations_orthonormal(self, rng):
        wave = wave_solve(christoffel(random_stiffness(rng), random_unit(rng), 1.0))
        p = wave.polarizations
        assert np.abs(p.T @ p - np.eye(3)).max() <= 1e-11


class TestVelocitySums:
    def test_isotropic_value(self):
        parts = decompose(ISO)
        assert sum_squared_velocities(parts, EZ, 1.0) == pytest.approx(6.0, abs=1e-12)

    def test_matches_trace_and_eigensum(self, rng):
        for _ in range(200):
            c = random_stiffness(rng)
            n = random_unit(rng)
            rho = float(rng.uniform(0.5, 5.0))
            parts = decompose(c)
            bundle = christoffel(c, n, rho)
            wave = wave_solve(bundle)
            formula = sum_squared_velocities(parts, n, rho)
            scale = max(abs(formula), 1e-300)
            assert abs(np.trace(bundle.gamma) - formula) <= 1e-11 * scale
            assert abs(float(np.sum(wave.eigenvalues)) - formula) <= 1e-11 * scale

    def test_direction_independent_when_2p_plus_q_vanishes(self, rng):
        parts = decompose(W)
        assert frobenius_norm2(2 * parts.dev_p + parts.dev_q) <= 1e-13
        values = [
            sum_squared_velocities(parts, random_unit(rng), 1.0) for _ in range(100)
        ]
        assert np.ptp(values) <= 1e-12 * abs(values[0])

    def test_orthonormal_triple_invariant(self, rng):
        for _ in range(100):
            c = random_stiffness(rng)
            parts = decompose(c)
            rho = 1.3
            q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
            total = sum(
                sum_squared_velocities(parts, q[:, k], rho) for k in range(3)
            )
            expect = (2 * parts.scalar_s - parts.scalar_a) / (2 * rho)
            assert total == pytest.approx(expect, rel=1e-10, abs=1e-10)


class TestCriticalDirections:
    def test_hexagonal_eigenstructure(self):
        m = hexagonal_voigt(c11=4.0, c12=1.4, c13=1.2, c33=3.5, c44=1.0)
        parts = decompose(voigt_to_full(m))
        crit = critical_directions(parts)
        ell = (2 * parts.dev_p + parts.dev_q)[0, 0]
        assert not crit.fully_degenerate
        # spectrum (ell, ell, -2 ell) with the symmetry axis for -2 ell
        assert sorted(crit.eigenvalues) == pytest.approx(
            sorted([ell, ell, -2 * ell]), rel=1e-10)
        axis_col = int(np.argmax(np.abs(crit.eigenvalues + 2 * ell) < 1e-12))
        # eigenvector for the non-degenerate eigenvalue is the z axis
        idx = [k for k in range(3)
               if abs(crit.eigenvalues[k] + 2 * ell) <= 1e-10 * abs(ell)]
        assert len(idx) == 1
        assert np.allclose(np.abs(crit.directions[:, idx[0]]), EZ, atol=1e-10)
        del axis_col

    def test_cubic_fully_degenerate(self):
        crit = critical_directions(decompose(W))
        assert crit.fully_degenerate
        assert np.abs(crit.eigenvalues).max() <= 1e-12

    def test_extrema_match_sphere_scan(self, rng):
        c = random_stiffness(rng)
        parts = decompose(c)
        crit = critical_directions(parts)
        rho = 1.0
        values = [
            sum_squared_velocities(parts, n, rho) for n in fibonacci_sphere(4000)
        ]
        base = (2 * parts.scalar_s - parts.scalar_a) / (6 * rho)
        lam_max, lam_min = crit.eigenvalues[0], crit.eigenvalues[2]
        # grid resolution limits agreement; 4000 points give ~2 degrees
        assert max(values) == pytest.approx(base + lam_max / 2, abs=2e-3 * max(
            1.0, abs(lam_max)))
        assert min(values) == pytest.approx(base + lam_min / 2, abs=2e-3 * max(
            1.0, abs(lam_min)))


class TestLongitudinalVelocity:
    def test_isotropic_closed_form(self):
        parts = decompose(ISO)
        bundle = christoffel(ISO, EZ, 1.0)
        v = longitudinal_velocity(bundle)
        assert v ** 2 == pytest.approx(4.0, abs=1e-12)           # lam + 2 mu
        assert v ** 2 == pytest.approx(parts.scalar_s / 5.0, abs=1e-12)

    def test_coefficient_is_s_over_five_not_fifteen(self, rng):
        # brute-force loop oracle for n.S.n against both closed-form readings
        c = random_stiffness(rng)
        n = random_unit(rng)
        parts = decompose(c)
        s_part = sa_split(c).s
        quotient = 0.0
        for i, j, k, l in itertools.product(range(3), repeat=4):
            quotient += s_part[i, j, k, l] * n[j] * n[k] * n[i] * n[l]
        p_nn = float(n @ parts.dev_p @ n)
        r_nnnn = float(np.einsum("ijkl,i,j,k,l->", parts.harm_r, n, n, n, n))
        good = parts.scalar_s / 5.0 + 6.0 / 7.0 * p_nn + r_nnnn
        bad = parts.scalar_s / 15.0 + 6.0 / 7.0 * p_nn + r_nnnn
        assert quotient == pytest.approx(good, rel=1e-11)
        assert abs(quotient - bad) > 1e-3 * abs(parts.scalar_s)

    def test_invariant_under_non_cauchy_replacement(self, rng):
        # positive-definite base keeps the Rayleigh quotient positive
        s = sa_split(voigt_to_full(random_spd_voigt(rng))).s
        n = random_unit(rng)
        reference = longitudinal_velocity(christoffel(s, n, 1.0))
        for _ in range(20):
            c = s + a_from_delta(random_symmetric3(rng))
            assert longitudinal_velocity(christoffel(c, n, 1.0)) == pytest.approx(
                reference, abs=1e-12)


class TestPureLongitudinal:
    def test_isotropic_all_directions_pure(self):
        scan = find_pure_longitudinal(ISO, 1.0, grid_n=500)
        assert scan.all_directions_pure
        assert scan.hits == ()
        for _ in range(5):
            bundle = christoffel(ISO, random_unit(np.random.default_rng(3)), 1.0)
            assert pure_longitudinal_residual(bundle) <= 1e-14

    def test_cubic_tungsten_hit_set(self):
        scan = find_pure_longitudinal(W, 1.0, grid_n=2000)
        assert not scan.all_directions_pure
        assert len(scan.hits) == 13  # 3 axes + 6 face diagonals + 4 body diagonals
        directions = np.array([h.direction for h in scan.hits])

        def contains(target):
            target = np.asarray(target) / np.linalg.norm(target)
            return any(
                min(np.linalg.norm(d - target), np.linalg.norm(d + target)) < 1e-6
                for d in directions
            )

        assert contains([1, 0, 0]) and contains([0, 1, 0]) and contains([0, 0, 1])
        assert contains([1, 1, 1])
        assert contains([1, 1, 0])
        # velocities: sqrt(C11), face and body diagonal closed forms
        axis_v = math.sqrt(5.224)
        body_v = math.sqrt((5.224 + 2 * 2.044 + 4 * 1.608) / 3.0)
        velocities = sorted(h.velocity for h in scan.hits)
        assert velocities[0] == pytest.approx(axis_v, abs=1e-9)
        assert velocities[-1] == pytest.approx(body_v, abs=1e-9)

    def test_hit_set_invariant_under_non_cauchy_replacement(self, rng):
        # cubic Cauchy part: discrete 13-direction hit set
        base = sa_split(W).s
        reference = find_pure_longitudinal(base, 1.0, grid_n=600)
        ref_dirs = np.array([h.direction for h in reference.hits])
        assert len(ref_dirs) == 13
        for _ in range(3):
            c = base + a_from_delta(random_symmetric3(rng))
            scan = find_pure_longitudinal(c, 1.0, grid_n=600)
            dirs = np.array([h.direction for h in scan.hits])
            assert dirs.shape == ref_dirs.shape
            for d in dirs:
                gap = min(
                    min(np.linalg.norm(d - r), np.linalg.norm(d + r))
                    for r in ref_dirs
                )
                assert gap <= 1e-8

    def test_continuous_pure_families_are_sampled(self):
        # a transversely isotropic Cauchy part supports whole rings of pure
        # directions; the scan reports a deduplicated sampling of them
        base = sa_split(
            voigt_to_full(hexagonal_voigt(4.0, 1.4, 1.2, 3.5, 1.0))
        ).s
        scan = find_pure_longitudinal(base, 1.0, grid_n=600)
        assert not scan.all_directions_pure
        assert any(abs(h.direction[2]) < 1e-8 for h in scan.hits)  # basal ring
        assert any(abs(h.direction[2] - 1) < 1e-8 for h in scan.hits)  # axis

    def test_small_grid_rejected(self):
        with pytest.raises(ValueError):
            find_pure_longitudinal(W, 1.0, grid_n=50)


class TestShearPolarization:
    def test_along_z_characterized_by_double_orthogonality(self, rng):
        # the defining system says U is orthogonal to both n and the Cauchy
        # column S n; for n = e3 that pins U to (-S23, S13, 0) up to scale
        c = random_stiffness(rng)
        bundle = christoffel(c, EZ, 1.0)
        u = shear_polarization(bundle)
        sc = bundle.cauchy
        assert u is not None
        assert abs(u @ EZ) <= 1e-13
        assert abs(u @ (sc @ EZ)) <= 1e-12 * np.linalg.norm(sc @ EZ)
        expect = np.array([-sc[1, 2], sc[0, 2], 0.0])
        expect /= np.linalg.norm(expect)
        assert min(np.abs(u - expect).max(), np.abs(u + expect).max()) <= 1e-12

    def test_explicit_cross_product_components(self, rng):
        c = random_stiffness(rng)
        bundle = christoffel(c, EZ, 1.0)
        sc = bundle.cauchy
        u = shear_polarization(bundle)
        raw = np.cross(EZ, sc @ EZ)
        assert np.allclose(u, raw / np.linalg.norm(raw), atol=1e-13)

    def test_isotropic_degenerates_everywhere(self, rng):
        for _ in range(10):
            bundle = christoffel(ISO, random_unit(rng), 1.0)
            assert shear_polarization(bundle) is None

    def test_invariant_under_non_cauchy_replacement(self, rng):
        s = sa_split(random_stiffness(rng)).s
        n = random_unit(rng)
        reference = shear_polarization(christoffel(s, n, 1.0))
        assert reference is not None
        for _ in range(20):
            c = s + a_from_delta(random_symmetric3(rng))
            u = shear_polarization(christoffel(c, n, 1.0))
            assert np.allclose(u, reference, atol=1e-12)


class TestShearVelocity:
    def test_explicit_quotient_along_z(self, rng):
        # Rayleigh quotient in Gamma, S13, S23 for any in-plane vector; the
        # pure-shear polarization (-S23, S13, 0) swaps the squared weights
        c = random_stiffness(rng)
        bundle = christoffel(c, EZ, 1.0)
        g, sc = bundle.gamma, bundle.cauchy
        s13, s23 = sc[0, 2], sc[1, 2]
        denominator = s13 ** 2 + s23 ** 2
        quotient = (
            g[0, 0] * s13 ** 2 + 2 * g[0, 1] * s13 * s23 + g[1, 1] * s23 ** 2
        ) / denominator
        if quotient > 0:
            assert shear_velocity(bundle, [s13, s23, 0.0]) ** 2 == pytest.approx(
                quotient, rel=1e-12)
        pol = shear_polarization(bundle)
        expect_pol = (
            g[0, 0] * s23 ** 2 - 2 * g[0, 1] * s13 * s23 + g[1, 1] * s13 ** 2
        ) / denominator
        if expect_pol > 0:
            assert shear_velocity(bundle, pol) ** 2 == pytest.approx(
                expect_pol, rel=1e-12)

    def test_isotropic_transverse(self, rng):
        n = random_unit(rng)
        bundle = christoffel(ISO, n, 1.0)
        u = np.cross(n, random_unit(rng))
        assert shear_velocity(bundle, u) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_zero_polarization_rejected(self):
        with pytest.raises(ValueError):
            shear_velocity(christoffel(ISO, EZ, 1.0), np.zeros(3))


class TestShearCondition:
    def test_explicit_system_along_z(self, rng):
        # for n = e3 the residual vector reproduces, component by component,
        # the explicit three-equation system in Gamma, S13, S23 (the third
        # equation collapses to A13 S23 - A23 S13, identically zero)
        c = random_stiffness(rng)
        bundle = christoffel(c, EZ, 1.0)
        g, sc, a = bundle.gamma, bundle.cauchy, bundle.non_cauchy
        s13, s23 = sc[0, 2], sc[1, 2]
        u = np.cross(EZ, sc @ EZ)
        assert np.allclose(u, [-s23, s13, 0.0], atol=1e-14)
        v2 = (u @ g @ u) / (u @ u)
        w = g @ u - v2 * u
        eq1 = g[0, 0] * s23 - g[0, 1] * s13 - v2 * s23
        eq2 = g[1, 1] * s13 - g[0, 1] * s23 - v2 * s13
        eq3 = a[0, 2] * s23 - a[1, 2] * s13
        assert w[0] == pytest.approx(-eq1, abs=1e-13)
        assert w[1] == pytest.approx(eq2, abs=1e-13)
        assert w[2] == pytest.approx(-eq3, abs=1e-13)
        assert abs(eq3) <= 1e-14

    def test_zero_for_symmetry_directions_of_cubic(self):
        for n in ([0, 0, 1.0], [1.0, 1.0, 0.0], [1.0, 1.0, 1.0]):
            n = np.asarray(n) / np.linalg.norm(n)
            assert shear_condition_residual(christoffel(W, n, 1.0)) <= 1e-12

    def test_positive_off_symmetry(self, rng):
        n = np.array([0.3, 0.5, 0.9])
        n /= np.linalg.norm(n)
        assert shear_condition_residual(christoffel(W, n, 1.0)) > 1e-6

    def test_matches_eigen_residual(self, rng):
        c = random_stiffness(rng)
        n = random_unit(rng)
        bundle = christoffel(c, n, 1.0)
        u = np.cross(n, bundle.cauchy @ n)
        v2 = (u @ bundle.gamma @ u) / (u @ u)
        expect = np.linalg.norm(bundle.gamma @ u - v2 * u) / (
            frobenius_norm2(bundle.gamma) * np.linalg.norm(u)
        )
        assert shear_condition_residual(bundle) == pytest.approx(expect, rel=1e-12)


class TestShearSum:
    def test_isotropic(self):
        assert shear_sum(decompose(ISO), EZ, 1.0) == pytest.approx(2.0, abs=1e-12)

    def test_tungsten_along_axis(self):
        assert shear_sum(decompose(W), EZ, 1.0) == pytest.approx(
            2 * 1.608, abs=1e-12)

    def test_equals_trace_minus_longitudinal_everywhere(self, rng):
        for _ in range(100):
            c = random_stiffness(rng)
            n = random_unit(rng)
            rho = float(rng.uniform(0.5, 3.0))
            parts = decompose(c)
            bundle = christoffel(c, n, rho)
            expect = float(np.trace(bundle.gamma) - n @ bundle.cauchy @ n)
            assert shear_sum(parts, n, rho) == pytest.approx(
                expect, rel=1e-11, abs=1e-11)

    def test_degenerate_pair_splits_equally(self):
        # isotropic: both shear eigenvalues equal half the shear sum
        wave = wave_solve(christoffel(ISO, EZ, 1.0))
        total = shear_sum(decompose(ISO), EZ, 1.0)
        assert wave.eigenvalues[1] == pytest.approx(total / 2, abs=1e-12)
        assert wave.eigenvalues[2] == pytest.approx(total / 2, abs=1e-12)

    def test_constant_corrected_not_printed_variant(self):
        # (4S-5A)/30 reproduces the isotropic 2 mu; (8S-5A)/30 does not
        parts = decompose(ISO)
        s, a = parts.scalar_s, parts.scalar_a
        assert (4 * s - 5 * a) / 30.0 == pytest.approx(2.0, abs=1e-12)
        assert (8 * s - 5 * a) / 30.0 != pytest.approx(2.0, abs=1e-3)


class TestIsotropicClosedForms:
    def test_velocity_pair_formulas(self, rng):
        for lam, mu in [(2.0, 1.0), (1.3, 0.4), (0.9, 2.1)]:
            c = isotropic_stiffness(lam, mu)
            parts = decompose(c)
            rho = 1.7
            wave = wave_solve(christoffel(c, random_unit(rng), rho))
            s, a = parts.scalar_s, parts.scalar_a
            assert wave.eigenvalues[0] == pytest.approx(s / (5 * rho), rel=1e-12)
            assert wave.eigenvalues[1] == pytest.approx(
                (4 * s - 5 * a) / (60 * rho), rel=1e-12)
            assert wave.eigenvalues[2] == pytest.approx(
                (4 * s - 5 * a) / (60 * rho), rel=1e-12)


class TestHexagonalBound:
    def test_stable_family_satisfies_window(self, rng):
        found = 0
        while found < 25:
            c11 = rng.uniform(2.0, 8.0)
            c12 = rng.uniform(-0.5 * c11, 0.9 * c11)
            c33 = rng.uniform(1.0, 8.0)
            c44 = rng.uniform(0.1, 3.0)
            c13 = rng.uniform(-1.0, 3.0)
            m = hexagonal_voigt(c11, c12, c13, c33, c44)
            if np.linalg.eigvalsh(m).min() <= 1e-9:
                continue
            found += 1
            parts = decompose(voigt_to_full(m))
            ell = (2 * parts.dev_p + parts.dev_q)[0, 0]
            bound = (2 * parts.scalar_s - parts.scalar_a)
            assert bound / 6.0 > ell > -bound / 3.0
