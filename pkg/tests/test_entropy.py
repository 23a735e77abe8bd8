from __future__ import annotations

import numpy as np
import pytest

from cvinfo_cli.entropy import (
    EntropyKind,
    entropy,
    entropy_bounds_residuals,
    f_bound,
    logdet_entropy,
    renyi2_entropy,
    single_mode_entropy,
    sqrt_det_entropy,
    von_neumann_entropy,
)
from cvinfo_cli.reproducibility import make_rng
from cvinfo_cli.symplectic import HypothesisError, random_cm, random_symplectic

from conftest import tmsv


def thermal_entropy(nu: float) -> float:
    plus, minus = (nu + 1) / 2, (nu - 1) / 2
    return plus * np.log(plus) - (minus * np.log(minus) if minus > 0 else 0.0)


class TestVacuum:
    @pytest.mark.parametrize("kind", list(EntropyKind))
    def test_all_kinds_vanish(self, kind):
        assert entropy(kind, np.eye(6)) == pytest.approx(0.0, abs=1e-12)

    def test_pure_two_mode_state(self):
        assert von_neumann_entropy(tmsv(0.8)) == pytest.approx(0.0, abs=1e-7)
        assert logdet_entropy(tmsv(0.8)) == pytest.approx(0.0, abs=1e-10)


class TestThermal:
    @pytest.mark.parametrize("nu", [1.5, 3.0, 10.0])
    def test_single_mode(self, nu):
        V = nu * np.eye(2)
        assert von_neumann_entropy(V) == pytest.approx(thermal_entropy(nu), rel=1e-10)
        assert logdet_entropy(V) == pytest.approx(2 * np.log(nu))
        assert renyi2_entropy(V) == pytest.approx(np.log(nu))
        assert sqrt_det_entropy(V) == pytest.approx(nu - 1)

    def test_additive_over_product_states(self):
        V = np.diag([2.0, 2.0, 5.0, 5.0])
        assert von_neumann_entropy(V) == pytest.approx(thermal_entropy(2.0) + thermal_entropy(5.0))

    def test_reduced_tmsv_is_thermal(self):
        r = 0.5
        assert von_neumann_entropy(tmsv(r)[:2, :2]) == pytest.approx(thermal_entropy(np.cosh(2 * r)))

    def test_single_mode_entropy_matches_matrix_form(self):
        for kind in EntropyKind:
            assert single_mode_entropy(kind, 2.5) == pytest.approx(entropy(kind, 2.5 * np.eye(2)))

    def test_single_mode_entropy_large_invariant(self):
        x = 1e12
        expected = np.log(x / 2) + 1
        assert single_mode_entropy(EntropyKind.VON_NEUMANN, x) == pytest.approx(expected, rel=1e-12)

    def test_single_mode_entropy_rejects_sub_vacuum(self):
        with pytest.raises(ValueError):
            single_mode_entropy(EntropyKind.LOG_DET, 0.9)


class TestVonNeumannHypothesis:
    def test_rejects_unphysical(self):
        with pytest.raises(HypothesisError):
            von_neumann_entropy(0.5 * np.eye(2))

    def test_clamps_rounding_below_one(self):
        assert von_neumann_entropy((1 - 1e-9) * np.eye(4)) == 0.0


class TestSymplecticInvariance:
    @pytest.mark.parametrize("kind", list(EntropyKind))
    def test_invariant_under_conjugation(self, kind):
        for seed in range(20):
            V = random_cm(3, seed, nu_max=3.0, strength=0.5)
            S = random_symplectic(3, 100 + seed, strength=0.5)
            assert entropy(kind, S @ V @ S.T) == pytest.approx(entropy(kind, V), abs=1e-7)


class TestNonnegativity:
    @pytest.mark.parametrize("kind", list(EntropyKind))
    def test_nonnegative_on_bona_fide_states(self, kind):
        for seed in range(50):
            V = random_cm(1 + seed % 4, seed, nu_max=3.0, strength=0.5)
            assert entropy(kind, V) >= -1e-10

    @pytest.mark.parametrize("kind", list(EntropyKind))
    def test_vanish_on_pure_states(self, kind):
        for seed in range(50):
            V = random_cm(1 + seed % 4, seed, nu_max=1.0, strength=0.5)
            assert entropy(kind, V) == pytest.approx(0.0, abs=1e-7)

    @pytest.mark.parametrize("kind", list(EntropyKind))
    def test_positive_on_mixed_states(self, kind):
        V = random_cm(2, 8, nu_max=3.0, strength=0.5) + 0.5 * np.eye(4)
        assert entropy(kind, V) > 1e-3


class TestFBound:
    def test_zero(self):
        assert f_bound(1, 0.0) == pytest.approx(0.0, abs=1e-8)
        assert f_bound(4, 0.0) == pytest.approx(0.0, abs=1e-8)

    def test_matches_single_mode_entropy(self):
        for nu in (1.01, 2.0, 7.5):
            assert f_bound(1, 2 * np.log(nu)) == pytest.approx(thermal_entropy(nu), rel=1e-10)

    def test_scaling(self):
        assert f_bound(3, 1.2) == pytest.approx(3 * f_bound(1, 0.4))

    def test_tiny_argument_is_finite_and_small(self):
        value = f_bound(1, 1e-12)
        assert np.isfinite(value)
        assert 0.0 <= value < 1e-9

    def test_monotone_in_m(self):
        m = np.linspace(0.0, 10.0, 50)
        values = [f_bound(2, x) for x in m]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_monotone_in_n(self):
        assert f_bound(1, 3.0) < f_bound(2, 3.0) < f_bound(5, 3.0)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_subadditive_and_midpoint_concave_on_grid(self, n):
        grid = np.linspace(0.0, 10.0, 21)
        for x in grid:
            for y in grid:
                joint = f_bound(n, x + y)
                assert f_bound(n, x) + f_bound(n, y) >= joint - 1e-10
                assert joint >= (f_bound(n, 2 * x) + f_bound(n, 2 * y)) / 2 - 1e-10

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_concave_in_m(self, n):
        step = 0.25
        for m in np.linspace(step, 20.0, 80):
            second_difference = f_bound(n, m - step) + f_bound(n, m + step) - 2 * f_bound(n, m)
            assert second_difference <= 1e-10

    def test_small_argument_continuity(self):
        for n in (1, 2, 3):
            assert abs(f_bound(n, 1e-6)) <= 1e-4

    @pytest.mark.parametrize("n", [1, 3])
    def test_huge_argument_is_finite(self, n):
        m = 5000.0 * n
        assert f_bound(n, m) == pytest.approx(n * (m / (2 * n) + 1 - np.log(2)), rel=1e-12)

    def test_continuous_across_asymptotic_switch(self):
        below, above = f_bound(1, 79.999999), f_bound(1, 80.000001)
        assert np.isfinite(below) and np.isfinite(above)
        assert above - below == pytest.approx(1e-6, rel=1e-3)
        asymptote = 39.5 + 1 - np.log(2)
        assert f_bound(1, 79.0) == pytest.approx(asymptote, rel=1e-12)

    @pytest.mark.parametrize("n, m", [(0, 1.0), (1, -0.1)])
    def test_rejects_out_of_domain(self, n, m):
        with pytest.raises(ValueError):
            f_bound(n, m)


class TestEntropyBounds:
    def test_bounds_hold_on_random_states(self):
        rng = make_rng(2024)
        for seed in range(500):
            n = int(rng.integers(1, 5))
            nu_max = float(rng.choice([1.0, 2.0, 4.0, 10.0]))
            V = random_cm(n, seed, nu_max=nu_max, strength=0.5)
            lower, upper = entropy_bounds_residuals(V)
            assert lower >= -1e-8
            assert upper >= -1e-8

    def test_bounds_coincide_for_one_mode(self):
        for seed in range(100):
            V = random_cm(1, seed, nu_max=5.0, strength=0.5)
            lower, upper = entropy_bounds_residuals(V)
            assert abs(lower) <= 1e-9
            assert abs(upper) <= 1e-9

    def test_upper_bound_tight_for_equal_spectrum(self):
        V = np.diag([3.0, 3.0, 3.0, 3.0, 3.0, 3.0])
        assert entropy_bounds_residuals(V).upper_slack == pytest.approx(0.0, abs=1e-10)

    def test_lower_bound_tight_for_single_excited_mode(self):
        V = np.diag([4.0, 4.0, 1.0, 1.0])
        assert entropy_bounds_residuals(V).lower_slack == pytest.approx(0.0, abs=1e-10)


class TestEntropyKind:
    def test_values(self):
        assert EntropyKind("M") is EntropyKind.LOG_DET
        assert EntropyKind("H") is EntropyKind.VON_NEUMANN
        assert EntropyKind("D") is EntropyKind.SQRT_DET
