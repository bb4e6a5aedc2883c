import numpy as np
import pytest

from bargmann.circulant import (
    channel_choi_matrix,
    circulant_channel_apply,
    circulant_eigenvalues,
    circulant_matrix,
    circulantize,
    cyclic_shift,
    fourier_basis,
    is_circulant_gram,
)
from bargmann.core import (
    StateTuple,
    gram_matrix,
    haar_unit_vector,
    partial_transpose,
)
from bargmann.errors import ValidationError
from bargmann.geometry import obg_states
from bargmann.invariants import bargmann
from conftest import random_pure_tuple


def random_gram_coeffs(n, rng, hermitian_only=False):
    """Coefficient vector whose circulant is a (Hermitian or Gram) matrix."""
    lam = rng.uniform(0.1, 2.0, size=n)
    if hermitian_only:
        lam = rng.uniform(-1.0, 1.0, size=n)
    else:
        lam *= n / lam.sum()  # z_0 = mean(lam) = 1
    f = fourier_basis(n)
    return (f.conj().T @ lam) / np.sqrt(n)


class TestCirculantMatrix:
    def test_unit_first_coefficient_gives_identity(self):
        assert np.array_equal(circulant_matrix([1, 0, 0, 0]), np.eye(4))

    def test_second_coefficient_gives_shift(self):
        assert np.array_equal(circulant_matrix([0, 1, 0]), cyclic_shift(3))

    def test_conjugate_symmetric_coeffs_give_hermitian(self):
        a = 0.3 + 0.4j
        c = circulant_matrix([1.0, a, np.conj(a)])
        assert np.max(np.abs(c - c.conj().T)) < 1e-15

    def test_commutes_with_shift_exactly(self, rng):
        z = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        c = circulant_matrix(z)
        p = cyclic_shift(6)
        assert np.array_equal(c @ p, p @ c)

    def test_rows_are_cyclic_shifts(self, rng):
        z = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        c = circulant_matrix(z)
        for r in range(5):
            assert np.array_equal(c[r], np.roll(z, r))


class TestEigenvalues:
    def test_all_ones_coefficients(self):
        eigs = circulant_eigenvalues([1, 1, 1, 1])
        assert np.allclose(eigs, [4, 0, 0, 0], atol=1e-12)

    def test_shift_eigenvalues_are_roots_of_unity(self):
        eigs = circulant_eigenvalues([0, 1, 0])
        omega = np.exp(2j * np.pi / 3)
        assert np.allclose(eigs, [1, omega, omega ** 2], atol=1e-12)

    def test_gram_compatible_spectra_are_real(self, rng):
        for _ in range(20):
            n = int(rng.integers(3, 10))
            eigs = circulant_eigenvalues(random_gram_coeffs(n, rng))
            assert np.max(np.abs(eigs.imag)) < 1e-10

    def test_multiset_agreement_with_dense_solver(self, rng):
        for _ in range(200):
            n = int(rng.integers(3, 13))
            z = random_gram_coeffs(n, rng, hermitian_only=True)
            analytic = np.sort(circulant_eigenvalues(z).real)
            dense = np.sort(np.linalg.eigvalsh(circulant_matrix(z)))
            assert np.max(np.abs(analytic - dense)) < 1e-9

    def test_fourier_basis_diagonalizes(self, rng):
        n = 7
        z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        f = fourier_basis(n)
        recon = f @ np.diag(circulant_eigenvalues(z)) @ f.conj().T
        assert np.max(np.abs(recon - circulant_matrix(z))) < 1e-12


class TestCirculantGramTest:
    def test_identity_coefficients_accepted(self):
        assert is_circulant_gram([1, 0, 0]).ok

    def test_all_ones_accepted(self):
        assert is_circulant_gram([1, 1, 1, 1]).ok

    def test_negative_eigenvalue_rejected(self):
        check = is_circulant_gram([1.0, 1.2, 1.2])
        assert not check.ok
        assert "eigenvalue" in check.reason

    def test_wrong_normalization_rejected(self):
        check = is_circulant_gram([0.9, 0.1, 0.1])
        assert not check.ok
        assert "z_0" in check.reason

    def test_broken_symmetry_rejected(self):
        check = is_circulant_gram([1.0, 0.5j, 0.5j])
        assert not check.ok
        assert "symmetry" in check.reason

    def test_random_gram_coefficients_accepted(self, rng):
        for _ in range(20):
            n = int(rng.integers(3, 9))
            assert is_circulant_gram(random_gram_coeffs(n, rng), tol=1e-9).ok


class TestChannel:
    def test_circulant_input_is_fixed(self, rng):
        z = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        c = circulant_matrix(z)
        assert np.max(np.abs(circulant_channel_apply(c) - c)) < 1e-12

    def test_basis_projector_averages_to_identity(self):
        x = np.zeros((3, 3), dtype=complex)
        x[0, 0] = 1.0
        assert np.allclose(circulant_channel_apply(x), np.eye(3) / 3, atol=1e-12)

    def test_idempotent(self, rng):
        x = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        once = circulant_channel_apply(x)
        assert np.max(np.abs(circulant_channel_apply(once) - once)) < 1e-12

    def test_output_commutes_with_shift(self, rng):
        x = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        out = circulant_channel_apply(x)
        p = cyclic_shift(5)
        assert np.max(np.abs(out @ p - p @ out)) < 1e-12

    def test_non_square_rejected(self):
        with pytest.raises(ValidationError):
            circulant_channel_apply(np.ones((2, 3)))

    @pytest.mark.parametrize("n", range(3, 9))
    def test_choi_matrix_is_psd_with_psd_partial_transpose(self, n):
        choi = channel_choi_matrix(n)
        assert np.linalg.eigvalsh(choi)[0] > -1e-12
        pt = partial_transpose(choi, "B", n, n)
        assert np.linalg.eigvalsh(pt)[0] > -1e-12


class TestCirculantize:
    def test_prescribed_moduli_example(self):
        # consecutive overlap moduli (0.9, 0.5, 0.7): the common edge becomes
        # their mean 0.7 and the invariant modulus grows 0.315 -> 0.343
        x = 0.7
        y = (0.5 - 0.9 * x) / np.sqrt(1 - 0.81)
        t = StateTuple.from_vectors([
            [1.0, 0.0, 0.0],
            [0.9, np.sqrt(1 - 0.81), 0.0],
            [x, y, np.sqrt(1 - x * x - y * y)],
        ])
        res = circulantize(t)
        assert abs(abs(res.gram[0, 1]) - 0.7) < 1e-12
        assert abs(abs(res.invariant_before) - 0.315) < 1e-12
        assert abs(abs(res.invariant_after) - 0.343) < 1e-12

    @pytest.mark.parametrize("t_param", [0.3, 0.5, 0.8])
    def test_boundary_family_is_fixed_point(self, t_param):
        states = obg_states(4, t_param)
        res = circulantize(states)
        assert np.max(np.abs(res.gram - gram_matrix(states))) < 1e-10

    def test_random_tuples_satisfy_all_three_clauses(self, rng):
        for _ in range(50):
            n, d = int(rng.integers(3, 8)), int(rng.integers(2, 5))
            t = random_pure_tuple(n, d, rng)
            res = circulantize(t)
            edges = [res.gram[k, (k + 1) % n] for k in range(n)]
            assert np.max(np.abs(np.diff(np.abs(edges)))) < 1e-12
            phase_before = res.invariant_before / abs(res.invariant_before)
            phase_after = res.invariant_after / abs(res.invariant_after)
            assert abs(phase_after - phase_before) < 1e-10
            assert abs(res.invariant_after) >= abs(res.invariant_before) - 1e-12

    def test_realized_tuple_matches_gram(self, rng):
        t = random_pure_tuple(5, 3, rng)
        res = circulantize(t)
        assert np.max(np.abs(gram_matrix(res.states) - res.gram)) < 1e-9
        assert res.states.dim == res.rank

    def test_realized_dimension_can_exceed_input(self, rng):
        # averaging the Gram of 7 qubits generically inflates the rank; the
        # realized tuple lives in that rank, not in the input dimension
        t = random_pure_tuple(7, 2, rng)
        res = circulantize(t)
        assert res.rank > 2
        assert np.max(np.abs(gram_matrix(res.states) - res.gram)) < 1e-9

    def test_invariant_argument_preserved_against_dense(self, rng):
        t = random_pure_tuple(4, 2, rng)
        res = circulantize(t)
        assert abs(bargmann(res.states) - res.invariant_after) < 1e-9

    def test_degenerate_cycle_rejected(self, rng):
        t = StateTuple.from_vectors([[1, 0], [0, 1], haar_unit_vector(2, rng)])
        with pytest.raises(ValidationError, match="degenerate"):
            circulantize(t)

    def test_mixed_tuple_rejected(self, rng):
        from bargmann.core import random_density
        t = StateTuple.from_states([random_density(2, 2, rng) for _ in range(3)])
        with pytest.raises(ValidationError, match="pure"):
            circulantize(t)
