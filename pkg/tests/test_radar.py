import numpy as np
import pytest

from wrtr.manifold import UnitModulusSequence, random_point
from wrtr.radar import (
    ClutterBank,
    ClutterScatterer,
    ClutterScene,
    DegenerateSceneError,
    apply_shift,
    apply_shift_adjoint,
    clutter_energy,
    operator_for,
    operators,
    quadratic_form,
    scnr,
    scr,
    staf,
    steering_vector,
)

from conftest import dense_psi, random_scene, random_sequence


class TestSteeringVector:
    def test_zero_doppler(self):
        assert np.allclose(steering_vector(0.0, 4), np.ones(4))

    def test_half_cycle(self):
        assert np.allclose(steering_vector(0.5, 4), [1, -1, 1, -1], atol=1e-15)

    def test_quarter_cycle(self):
        assert np.allclose(steering_vector(0.25, 4), [1, 1j, -1, -1j], atol=1e-15)

    def test_unit_modulus(self):
        p = steering_vector(0.1234, 33)
        assert np.allclose(np.abs(p), 1.0, atol=1e-15)


class TestShift:
    def test_identity(self, rng):
        x = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        assert np.array_equal(apply_shift(0, x), x)

    def test_small_example(self):
        a, b, c, d = 1 + 1j, 2.0, 3 - 1j, 4j
        out = apply_shift(2, np.array([a, b, c, d]))
        assert np.allclose(out, [0, 0, a, b])

    def test_matches_dense_matrix(self, rng):
        n = 8
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        for r in range(n):
            dense = np.eye(n, k=-r) @ x
            assert np.allclose(apply_shift(r, x), dense, atol=1e-15)

    def test_adjoint_identity(self, rng):
        n = 8
        u = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        for r in range(n):
            lhs = np.vdot(apply_shift(r, u), v)
            rhs = np.vdot(u, apply_shift_adjoint(r, v))
            assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            apply_shift(4, np.ones(4))
        with pytest.raises(ValueError):
            apply_shift(-1, np.ones(4))


class TestClutterOperator:
    def test_quadratic_form_identity_case(self):
        n = 8
        s = random_point(n, 0)
        op = operator_for(ClutterScatterer(0, 0.0, 1.0), n)
        assert quadratic_form(s, op) == pytest.approx(n, abs=1e-12)

    def test_quadratic_form_max_shift_single_overlap(self):
        n = 8
        s = random_point(n, 1)
        amp = 1.7
        op = operator_for(ClutterScatterer(n - 1, 0.3, amp**2), n)
        assert abs(quadratic_form(s, op)) == pytest.approx(amp, abs=1e-12)

    def test_matches_dense_oracle(self, rng):
        n = 8
        s = random_point(n, 2)
        scene = random_scene(n, 5, rng)
        for sc in scene.scatterers:
            op = operator_for(sc, n)
            psi = dense_psi(op, n)
            expected = np.vdot(s.entries, psi @ s.entries)
            assert quadratic_form(s, op) == pytest.approx(expected, abs=1e-12)

    def test_apply_adjoint_matches_dense(self, rng):
        n = 8
        scene = random_scene(n, 4, rng)
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        for op in operators(scene):
            psi = dense_psi(op, n)
            assert np.allclose(op.apply(v), psi @ v, atol=1e-12)
            assert np.allclose(op.apply_adjoint(v), psi.conj().T @ v, atol=1e-12)


class TestClutterBank:
    def test_matches_per_operator_application(self, rng):
        n = 12
        scene = random_scene(n, 6, rng)
        bank = ClutterBank(scene)
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        rows = bank.apply(v)
        rows_adj = bank.apply_adjoint(v)
        for i, op in enumerate(operators(scene)):
            assert np.allclose(rows[i], op.apply(v), atol=1e-12)
            assert np.allclose(rows_adj[i], op.apply_adjoint(v), atol=1e-12)

    def test_quadratic_forms(self, rng):
        n = 10
        scene = random_scene(n, 5, rng)
        s = random_point(n, 3)
        q = ClutterBank(scene).quadratic_forms(s.entries)
        expected = [quadratic_form(s, op) for op in operators(scene)]
        assert np.allclose(q, expected, atol=1e-12)

    def test_empty_scene(self):
        bank = ClutterBank(ClutterScene((), 4))
        assert bank.apply(np.ones(4, dtype=complex)).shape == (0, 4)


class TestClutterEnergy:
    def test_zero_power_scene(self):
        n = 6
        scene = ClutterScene([ClutterScatterer(2, 0.3, 0.0)], n)
        assert clutter_energy(random_point(n, 4), scene) == 0.0

    def test_single_identity_scatterer(self):
        n = 7
        scene = ClutterScene([ClutterScatterer(0, 0.0, 1.0)], n)
        assert clutter_energy(random_point(n, 5), scene) == pytest.approx(n**2, rel=1e-12)

    def test_matches_dense_brute_force(self, rng):
        n = 8
        scene = random_scene(n, 3, rng)
        s = random_point(n, 6)
        expected = sum(
            abs(np.vdot(s.entries, dense_psi(op, n) @ s.entries)) ** 2
            for op in operators(scene)
        )
        assert clutter_energy(s, scene) == pytest.approx(expected, rel=1e-10)

    def test_global_phase_invariance(self, rng):
        n = 16
        scene = random_scene(n, 5, rng)
        s = random_point(n, 7)
        phi = rng.uniform(0, 2 * np.pi)
        rotated = UnitModulusSequence(np.exp(1j * phi) * s.entries)
        assert clutter_energy(rotated, scene) == pytest.approx(
            clutter_energy(s, scene), rel=1e-10
        )


class TestScnr:
    def test_noise_only(self):
        n = 8
        s = random_point(n, 8)
        scene = ClutterScene([ClutterScatterer(1, 0.2, 0.0)], n)
        assert scnr(s, s, scene, noise_power=1.0, target_power=1.0) == pytest.approx(
            10 * np.log10(n), abs=1e-10
        )

    def test_orthogonal_steering_is_minus_inf(self):
        scene = ClutterScene([ClutterScatterer(0, 0.0, 0.0)], 2)
        s = UnitModulusSequence(np.array([1.0 + 0j, 1.0 + 0j]))
        st = UnitModulusSequence(np.array([1.0 + 0j, -1.0 + 0j]))
        assert scnr(s, st, scene, noise_power=1.0) == float("-inf")

    def test_zero_denominator_raises(self):
        scene = ClutterScene([ClutterScatterer(0, 0.0, 0.0)], 4)
        s = random_point(4, 9)
        with pytest.raises(DegenerateSceneError):
            scnr(s, s, scene, noise_power=0.0)

    def test_noise_term_uses_constant_sequence_norm(self, rng):
        # denominator noise contribution is exactly noise_power * n on M
        n = 16
        scene = ClutterScene([ClutterScatterer(3, 0.4, 0.0)], n)
        for seed in range(3):
            s = random_point(n, seed)
            value = scnr(s, s, scene, noise_power=2.5)
            assert value == pytest.approx(10 * np.log10(n**2 / (2.5 * n)), abs=1e-12)

    def test_scr_reduces_to_clutter_only(self, rng):
        n = 8
        scene = random_scene(n, 4, rng)
        s = random_point(n, 10)
        expected = 10 * np.log10(n**2 / clutter_energy(s, scene))
        assert scr(s, s, scene) == pytest.approx(expected, rel=1e-12)


class TestStaf:
    def test_peak_at_origin_is_zero_db(self):
        n = 16
        s = random_point(n, 11)
        grid = np.arange(n) / n
        surface = staf(s, range(n), grid)
        assert surface[0, 0] == pytest.approx(0.0, abs=1e-12)
        assert np.max(surface) == pytest.approx(0.0, abs=1e-12)

    def test_out_of_range_bin_rejected(self):
        s = random_point(8, 12)
        with pytest.raises(ValueError):
            staf(s, [8], [0.0])

    def test_matches_dense_psi_evaluation(self, rng):
        n = 8
        s = random_point(n, 13)
        grid = rng.uniform(0, 1, 5)
        surface = staf(s, range(n), grid)
        raw = np.empty((n, grid.size))
        for r in range(n):
            for j, v in enumerate(grid):
                op = operator_for(ClutterScatterer(r, float(v), 1.0), n)
                raw[r, j] = abs(np.vdot(s.entries, dense_psi(op, n) @ s.entries))
        expected = 20 * np.log10(np.maximum(raw / raw.max(), 1e-15))
        assert np.allclose(surface, expected, atol=1e-10)


class TestSceneValidation:
    def test_range_shift_bounds(self):
        with pytest.raises(ValueError):
            ClutterScene([ClutterScatterer(8, 0.0, 1.0)], 8)

    def test_negative_power_rejected(self):
        with pytest.raises(ValueError):
            ClutterScatterer(0, 0.0, -1.0)
