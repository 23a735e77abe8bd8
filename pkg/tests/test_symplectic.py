from __future__ import annotations

import numpy as np
import pytest

from cvinfo_cli.reproducibility import make_rng
from cvinfo_cli.symplectic import (
    AsymmetricMatrixError,
    DimensionError,
    NotPositiveDefiniteError,
    Partition,
    PartitionError,
    as_covariance,
    cholesky_factor,
    direct_sum,
    is_bona_fide,
    is_symplectic,
    logdet,
    omega,
    permute_modes,
    purity,
    random_cm,
    random_cm_with_spectrum,
    random_partition,
    random_positive_definite,
    random_symplectic,
    reduce,
    schur_complement,
    single_mode_squeezer,
    symplectic_spectrum,
    two_mode_squeezer,
)

from conftest import tmsv


class TestOmega:
    def test_single_mode(self):
        assert np.array_equal(omega(1), np.array([[0.0, 1.0], [-1.0, 0.0]]))

    def test_squares_to_minus_identity(self):
        om = omega(3)
        assert np.allclose(om @ om, -np.eye(6))
        assert np.allclose(om.T, -om)


class TestAsCovariance:
    def test_symmetrizes_within_tolerance(self):
        V = np.eye(2)
        V[0, 1] = 1e-14
        out = as_covariance(V)
        assert out[0, 1] == out[1, 0]

    def test_rejects_asymmetric(self):
        V = np.eye(2)
        V[0, 1] = 1e-3
        with pytest.raises(AsymmetricMatrixError):
            as_covariance(V)

    def test_rejects_odd_dimension(self):
        with pytest.raises(DimensionError):
            as_covariance(np.eye(3))

    def test_rejects_non_square(self):
        with pytest.raises(DimensionError):
            as_covariance(np.ones((2, 4)))


class TestSymplecticSpectrum:
    def test_vacuum(self):
        spec = symplectic_spectrum(np.eye(6))
        assert np.allclose(spec.as_array(), 1.0)
        assert len(spec) == 3

    def test_thermal_modes_sorted_descending(self):
        V = np.diag([3.0, 3.0, 1.5, 1.5])
        spec = symplectic_spectrum(V)
        assert spec.values == pytest.approx((3.0, 1.5))
        assert spec.max == pytest.approx(3.0)
        assert spec.min == pytest.approx(1.5)

    def test_squeezed_thermal_state(self):
        S = single_mode_squeezer(0.7)
        V = S @ (2.0 * np.eye(2)) @ S.T
        assert symplectic_spectrum(V).values == pytest.approx((2.0,))

    def test_tmsv_is_pure(self):
        assert np.allclose(symplectic_spectrum(tmsv(1.0)).as_array(), 1.0, atol=1e-9)

    def test_recovers_generator_spectrum(self):
        for seed in range(20):
            V, spectrum = random_cm_with_spectrum(4, seed, nu_max=3.0, strength=0.5)
            got = symplectic_spectrum(V)
            assert np.allclose(got.as_array(), spectrum.as_array(), atol=1e-7)
            assert got.pairing_error < 1e-7

    def test_invariant_under_symplectic_conjugation(self):
        V = random_cm(3, 11, nu_max=2.0, strength=0.5)
        S = random_symplectic(3, 12, strength=0.5)
        before = symplectic_spectrum(V).as_array()
        after = symplectic_spectrum(S @ V @ S.T).as_array()
        assert np.allclose(before, after, atol=1e-8)

    def test_not_positive_definite(self):
        with pytest.raises(NotPositiveDefiniteError):
            symplectic_spectrum(-np.eye(2))


class TestBonaFide:
    def test_vacuum_and_random(self):
        assert is_bona_fide(np.eye(4))
        assert is_bona_fide(random_cm(3, 5, nu_max=2.0, strength=0.5))

    def test_sub_vacuum_noise_rejected(self):
        assert not is_bona_fide(0.5 * np.eye(2))

    def test_squeezed_but_pure_accepted(self):
        S = single_mode_squeezer(1.2)
        assert is_bona_fide(S @ S.T)

    def test_not_positive_definite_is_false(self):
        assert not is_bona_fide(-np.eye(2))

    def test_asymmetric_raises(self):
        with pytest.raises(AsymmetricMatrixError):
            is_bona_fide(np.array([[1.0, 0.5], [0.0, 1.0]]))


class TestSymplecticGenerators:
    def test_two_mode_squeezer_is_symplectic(self):
        assert is_symplectic(two_mode_squeezer(3, 1, 3, 0.8))

    def test_two_mode_squeezer_symmetric_in_modes(self):
        assert np.array_equal(two_mode_squeezer(3, 1, 2, 0.4), two_mode_squeezer(3, 2, 1, 0.4))

    def test_two_mode_squeezer_needs_distinct_modes(self):
        with pytest.raises(PartitionError):
            two_mode_squeezer(2, 1, 1, 0.3)

    def test_tmsv_blocks(self):
        r = 0.6
        V = tmsv(r)
        assert np.allclose(V[:2, :2], np.cosh(2 * r) * np.eye(2))
        assert np.allclose(V[:2, 2:], np.sinh(2 * r) * np.diag([1.0, -1.0]))

    def test_random_symplectic(self):
        for seed in range(10):
            assert is_symplectic(random_symplectic(4, seed, strength=0.5))

    @pytest.mark.parametrize("strength", [0.5, 1.0])
    def test_unit_determinant(self, strength):
        checked = 0
        for seed in range(50):
            S = random_symplectic(1 + seed % 4, seed, strength=strength)
            if is_symplectic(S):
                assert abs(np.linalg.det(S) - 1.0) <= 1e-7
                checked += 1
        assert checked > 0
        for S in (two_mode_squeezer(3, 1, 3, 0.7), single_mode_squeezer(1.3)):
            assert is_symplectic(S)
            assert np.linalg.det(S) == pytest.approx(1.0, abs=1e-7)

    def test_random_symplectic_deterministic(self):
        assert np.array_equal(random_symplectic(3, 42), random_symplectic(3, 42))
        assert not np.array_equal(random_symplectic(3, 42), random_symplectic(3, 43))

    def test_random_symplectic_rejects_bad_input(self):
        with pytest.raises(DimensionError):
            random_symplectic(0, 1)
        with pytest.raises(ValueError):
            random_symplectic(2, 1, strength=0.0)

    def test_random_cm_rejects_nu_max_below_one(self):
        with pytest.raises(ValueError):
            random_cm(2, 1, nu_max=0.5)

    def test_random_positive_definite(self):
        V = random_positive_definite(3, 9)
        eig = np.linalg.eigvalsh(V)
        assert np.allclose(V, V.T)
        assert eig.min() >= 0.1 - 1e-9
        assert eig.max() <= 4.0 + 1e-9


class TestPartition:
    def test_parse(self):
        p = Partition.parse("1;2;3,4")
        assert p.groups == ((1,), (2,), (3, 4))
        assert str(p) == "1;2;3,4"

    def test_parse_ignores_whitespace(self):
        assert Partition.parse(" 1 , 2 ; 3 ").groups == ((1, 2), (3,))

    @pytest.mark.parametrize("text", ["", "1;;2", "1;a", "1;1", "0;1", "1,;2"])
    def test_parse_rejects(self, text):
        with pytest.raises(PartitionError):
            Partition.parse(text)

    def test_validate_range(self):
        with pytest.raises(PartitionError):
            Partition.parse("1;3").validate(2)

    def test_require_groups(self):
        with pytest.raises(PartitionError):
            Partition.parse("1;2").require_groups(3)

    def test_union_and_modes(self):
        p = Partition.parse("3;1,4;2")
        assert p.union(0, 2) == (3, 2)
        assert p.modes == (3, 1, 4, 2)

    def test_random_partition(self):
        p = random_partition((2, 1, 2), seed=3)
        assert [len(g) for g in p] == [2, 1, 2]
        assert sorted(p.modes) == [1, 2, 3, 4, 5]
        assert random_partition((2, 1, 2), seed=3) == p

    def test_random_partition_too_large(self):
        with pytest.raises(PartitionError):
            random_partition((2, 2), seed=1, n=3)


class TestBlockOperations:
    def test_reduce_follows_order(self):
        V = np.diag([1.0, 1.0, 2.0, 2.0, 3.0, 3.0])
        assert np.array_equal(reduce(V, [3, 1]), np.diag([3.0, 3.0, 1.0, 1.0]))

    def test_reduce_empty(self):
        with pytest.raises(PartitionError):
            reduce(np.eye(4), [])

    def test_permute_modes(self):
        V = np.diag([1.0, 1.0, 2.0, 2.0])
        assert np.array_equal(permute_modes(V, [2, 1]), np.diag([2.0, 2.0, 1.0, 1.0]))
        with pytest.raises(PartitionError):
            permute_modes(V, [1, 1])

    def test_direct_sum(self):
        V = direct_sum(np.eye(2), 2 * np.eye(4))
        assert V.shape == (6, 6)
        assert logdet(V) == pytest.approx(4 * np.log(2.0))

    def test_schur_complement_of_tmsv(self):
        r = 0.5
        S = schur_complement(tmsv(r), [1])
        assert np.allclose(S, np.eye(2) / np.cosh(2 * r))

    def test_schur_complement_product_state(self):
        V = direct_sum(2 * np.eye(2), 3 * np.eye(2))
        assert np.allclose(schur_complement(V, [1], [2]), 3 * np.eye(2))

    def test_schur_complement_rejects_overlap(self):
        with pytest.raises(PartitionError):
            schur_complement(np.eye(4), [1], [1])
        with pytest.raises(PartitionError):
            schur_complement(np.eye(4), [1, 2])

    def test_purity(self):
        assert purity(np.eye(4)) == pytest.approx(1.0)
        assert purity(np.diag([3.0, 3.0])) == pytest.approx(1 / 3)
        assert purity(tmsv(0.9)) == pytest.approx(1.0)


class TestDeterminantFactorization:
    @staticmethod
    def _cut(seed: int, n: int) -> list[int]:
        rng = make_rng(10_000 + seed)
        size = int(rng.integers(1, n))
        return sorted(int(m) for m in rng.choice(np.arange(1, n + 1), size=size, replace=False))

    def test_bona_fide_states(self):
        for seed in range(200):
            n = 2 + seed % 4
            V = random_cm(n, seed, nu_max=3.0, strength=0.5)
            measured = self._cut(seed, n)
            schur = schur_complement(V, measured)
            cholesky_factor(schur)
            assert logdet(V) == pytest.approx(logdet(reduce(V, measured)) + logdet(schur), abs=1e-9)

    def test_positive_definite_matrices(self):
        for seed in range(100):
            n = 2 + seed % 3
            V = random_positive_definite(n, seed)
            measured = self._cut(seed, n)
            schur = schur_complement(V, measured)
            cholesky_factor(schur)
            assert logdet(V) == pytest.approx(logdet(reduce(V, measured)) + logdet(schur), abs=1e-9)
