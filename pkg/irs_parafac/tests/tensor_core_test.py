import unittest

import numpy as np

from irs_parafac.exceptions import (
    DegenerateColumnError,
    DegenerateInputError,
    RankDeficiencyError,
    ValidationError,
)
from irs_parafac.tests import test_data
from irs_parafac.utils.linalg_utils import (
    ls_solve,
    orthogonality_scale,
    rank1_truncated_svd,
)
from irs_parafac.utils.tensor_utils import (
    SignalTensor,
    fold,
    fold_from_slices,
    frobenius_norm_sq,
    khatri_rao,
    kronecker,
    unfold,
    unvec,
    vec,
)


class TestTensorUtils(unittest.TestCase):

    @classmethod
    def setUpClass(self):
        self.rng = test_data.rng(11)

    def random(self, *shape):
        return test_data.random_complex(self.rng, *shape)

    def test_khatri_rao_identity(self):
        result = khatri_rao(np.eye(2), np.eye(2))
        expected = np.array([[1, 0], [0, 0], [0, 0], [0, 1]])
        np.testing.assert_array_equal(result, expected)

    def test_khatri_rao_single_column(self):
        result = khatri_rao([[1], [2]], [[3], [4]])
        np.testing.assert_array_equal(result, [[3], [4], [6], [8]])

    def test_khatri_rao_column_oracle(self):
        A, B = self.random(3, 2), self.random(2, 2)
        result = khatri_rao(A, B)
        for n in range(2):
            column = np.array([A[i, n] * B[j, n] for i in range(3) for j in range(2)])
            np.testing.assert_allclose(result[:, n], column, rtol=1e-14)

    def test_khatri_rao_column_mismatch(self):
        with self.assertRaises(ValidationError):
            khatri_rao(np.ones((2, 2)), np.ones((2, 3)))

    def test_kronecker(self):
        B = self.random(2, 3)
        np.testing.assert_array_equal(kronecker([[2]], B), 2 * B)
        np.testing.assert_array_equal(kronecker(np.eye(2), np.eye(3)), np.eye(6))

        A = self.random(2, 2)
        result = kronecker(A, B)
        for i in range(2):
            for j in range(2):
                for k in range(2):
                    for l in range(3):
                        self.assertAlmostEqual(result[i * 2 + k, j * 3 + l], A[i, j] * B[k, l], places=12)

    def test_mixed_product_identity(self):
        for _ in range(100):
            A, B = self.random(3, 2), self.random(2, 4)
            C, D = self.random(2, 5), self.random(4, 5)
            left = kronecker(A, B) @ khatri_rao(C, D)
            right = khatri_rao(A @ C, B @ D)
            self.assertLess(test_data.relative(left, right), 1e-10)

    def test_vec_unvec(self):
        matrix = np.arange(6).reshape(2, 3)
        np.testing.assert_array_equal(vec(matrix), [0, 3, 1, 4, 2, 5])
        np.testing.assert_array_equal(unvec(vec(matrix), 2, 3), matrix)
        with self.assertRaises(ValidationError):
            unvec(np.ones(5), 2, 3)

    def test_unfold_single_entry(self):
        data = np.zeros((2, 3, 4), dtype=complex)
        data[0, 0, 0] = 5 + 1j
        tensor = SignalTensor(data)
        for mode in (1, 2, 3):
            unfolded = tensor.unfold(mode)
            self.assertEqual(unfolded[0, 0], 5 + 1j)
            self.assertEqual(np.count_nonzero(unfolded), 1)

    def test_unfold_invalid_mode(self):
        tensor = SignalTensor(np.ones((2, 2, 2)))
        with self.assertRaises(ValidationError):
            unfold(tensor, 4)

    def test_unfoldings_match_factor_forms(self):
        for _ in range(100):
            G, Z, S = self.random(2, 2), self.random(3, 2), self.random(2, 2)
            tensor = SignalTensor.from_factors(G, Z, S)
            self.assertLess(test_data.relative(tensor.unfold(1), G @ khatri_rao(S, Z).T), 1e-10)
            self.assertLess(test_data.relative(tensor.unfold(2), Z @ khatri_rao(S, G).T), 1e-10)
            self.assertLess(test_data.relative(tensor.unfold(3), S @ khatri_rao(Z, G).T), 1e-10)

    def test_unfold3_rows_are_vectorized_slices(self):
        G, Z, S = self.random(2, 2), self.random(3, 2), self.random(2, 2)
        tensor = SignalTensor.from_factors(G, Z, S)
        Y3 = tensor.unfold(3)
        for k in range(2):
            np.testing.assert_allclose(Y3[k], vec(G @ np.diag(S[k]) @ Z.T), rtol=1e-12)

    def test_scalar_model_brute_force(self):
        for _ in range(100):
            G, Z, S = self.random(2, 3), self.random(3, 3), self.random(4, 3)
            tensor = SignalTensor.from_factors(G, Z, S)
            expected = np.zeros((2, 3, 4), dtype=complex)
            for l in range(2):
                for t in range(3):
                    for k in range(4):
                        expected[l, t, k] = sum(G[l, n] * Z[t, n] * S[k, n] for n in range(3))
            self.assertLess(test_data.relative(tensor.data, expected), 1e-12)

    def test_fold_inverts_unfold(self):
        tensor = SignalTensor(self.random(2, 3, 4))
        for mode in (1, 2, 3):
            self.assertEqual(fold(tensor.unfold(mode), mode, tensor.dims), tensor)
        with self.assertRaises(ValidationError):
            fold(np.ones((3, 3)), 1, (2, 3, 4))

    def test_fold_from_slices(self):
        single = fold_from_slices([[[3 + 2j]]])
        self.assertEqual(single.dims, (1, 1, 1))
        self.assertEqual(single.data[0, 0, 0], 3 + 2j)

        slices = [self.random(2, 3), self.random(2, 3)]
        tensor = fold_from_slices(slices)
        np.testing.assert_array_equal(tensor.unfold(1), np.hstack(slices))
        for k in range(2):
            for l in range(2):
                for t in range(3):
                    self.assertEqual(tensor.data[l, t, k], slices[k][l, t])

    def test_fold_from_slices_inconsistent(self):
        with self.assertRaises(ValidationError):
            fold_from_slices([np.ones((2, 3)), np.ones((3, 2))])
        with self.assertRaises(ValidationError):
            fold_from_slices([])

    def test_signal_tensor_is_read_only_copy(self):
        data = np.ones((2, 2, 2), dtype=complex)
        tensor = SignalTensor(data)
        data[0, 0, 0] = 7
        self.assertEqual(tensor.data[0, 0, 0], 1)
        with self.assertRaises(ValueError):
            tensor.data[0, 0, 0] = 2
        self.assertEqual((tensor + tensor).data[1, 1, 1], 2)
        self.assertEqual(frobenius_norm_sq(tensor - tensor), 0.0)

    def test_frobenius_norm_sq(self):
        self.assertEqual(frobenius_norm_sq(np.zeros((3, 3))), 0.0)
        self.assertEqual(frobenius_norm_sq(np.eye(3)), 3.0)
        matrix = self.random(4, 5)
        loop = sum(abs(matrix[i, j]) ** 2 for i in range(4) for j in range(5))
        self.assertAlmostEqual(frobenius_norm_sq(matrix) / loop, 1.0, places=12)


class TestLinalgUtils(unittest.TestCase):

    @classmethod
    def setUpClass(self):
        self.rng = test_data.rng(5)

    def random(self, *shape):
        return test_data.random_complex(self.rng, *shape)

    def test_rank1_exact(self):
        a, b = self.random(4), self.random(3)
        W = np.outer(a, b.conj())
        u, sigma, v = rank1_truncated_svd(W)
        self.assertAlmostEqual(sigma, np.linalg.norm(a) * np.linalg.norm(b), places=10)
        self.assertAlmostEqual(np.linalg.norm(u), 1.0, places=12)
        self.assertAlmostEqual(np.linalg.norm(v), 1.0, places=12)
        np.testing.assert_allclose(sigma * np.outer(u, v.conj()), W, atol=1e-12)

    def test_rank1_diagonal(self):
        u, sigma, v = rank1_truncated_svd(np.diag([3.0, 1.0]))
        self.assertAlmostEqual(sigma, 3.0)
        self.assertAlmostEqual(abs(u[0]), 1.0)
        self.assertAlmostEqual(abs(v[0]), 1.0)

    def test_rank1_matches_full_svd(self):
        W = self.random(4, 3)
        _, sigma, _ = rank1_truncated_svd(W)
        self.assertAlmostEqual(sigma / np.linalg.svd(W, compute_uv=False)[0], 1.0, places=10)

    def test_rank1_stack(self):
        stack = self.random(5, 2, 3)
        u, sigma, v = rank1_truncated_svd(stack)
        self.assertEqual(u.shape, (5, 2))
        self.assertEqual(v.shape, (5, 3))
        for n in range(5):
            self.assertAlmostEqual(sigma[n], rank1_truncated_svd(stack[n]).sigma, places=10)

    def test_rank1_degenerate(self):
        with self.assertRaises(DegenerateInputError):
            rank1_truncated_svd(np.zeros((2, 2)))
        stack = self.random(3, 2, 2)
        stack[1] = 0
        with self.assertRaises(DegenerateColumnError) as context:
            rank1_truncated_svd(stack)
        self.assertEqual(context.exception.column, 1)

    def test_ls_solve(self):
        B = self.random(3, 2)
        np.testing.assert_allclose(ls_solve(np.eye(3), B), B, atol=1e-14)

        A = np.linalg.qr(self.random(5, 3))[0]
        B = self.random(5, 2)
        np.testing.assert_allclose(ls_solve(A, B), A.conj().T @ B, atol=1e-12)

        A, X0 = self.random(6, 3), self.random(3, 2)
        self.assertLess(test_data.relative(ls_solve(A, A @ X0), X0), 1e-10)

    def test_ls_solve_rank_deficient(self):
        A = self.random(4, 2)
        A[:, 1] = 2 * A[:, 0]
        with self.assertRaises(RankDeficiencyError) as context:
            ls_solve(A, np.ones(4), step="step 3")
        self.assertEqual(context.exception.step, "step 3")
        self.assertIsInstance(context.exception, np.linalg.LinAlgError)
        with self.assertRaises(RankDeficiencyError):
            ls_solve(self.random(2, 3), np.ones(2))

    def test_orthogonality_scale(self):
        self.assertAlmostEqual(orthogonality_scale(2 * np.eye(3)), 4.0)
        self.assertIsNone(orthogonality_scale(np.ones((3, 2))))
