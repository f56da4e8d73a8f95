import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from teleqkd import qstate
from teleqkd.qstate import BasisKind, InvalidStateError, make_basis

LAMS_11 = [0.7921, 0.0979, 0.0979, 0.0121]

probs4 = arrays(float, 4, elements=st.floats(0.0, 1.0)).filter(lambda a: a.sum() > 1e-3).map(lambda a: a / a.sum())
joints = probs4.map(lambda a: a.reshape(2, 2))


def random_ket(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density(rng, dim, rank=None):
    rank = rank or dim
    vs = [random_ket(rng, dim) for _ in range(rank)]
    w = rng.dirichlet(np.ones(rank))
    return sum(wi * qstate.density(v) for wi, v in zip(w, vs))


class TestClassicalEntropies:
    def test_binary_entropy_examples(self):
        assert qstate.binary_entropy(0.5) == 1.0
        assert qstate.binary_entropy(0.0) == 0.0
        # mpmath at 30 digits: 0.4999159581645279956
        assert qstate.binary_entropy(0.11) == pytest.approx(0.49991595816452800, abs=1e-15)

    def test_binary_entropy_domain(self):
        assert qstate.binary_entropy(1 + 5e-13) == 0.0
        with pytest.raises(ValueError):
            qstate.binary_entropy(1.001)
        with pytest.raises(ValueError):
            qstate.binary_entropy(-1e-9)

    def test_shannon_examples(self):
        assert qstate.shannon_entropy([0.25] * 4) == pytest.approx(2.0)
        assert qstate.shannon_entropy([1, 0, 0, 0]) == 0.0
        # mpmath: 0.999831916329055991281
        assert qstate.shannon_entropy(LAMS_11) == pytest.approx(0.99983191632905599, abs=1e-14)

    def test_shannon_rejects_bad_distribution(self):
        with pytest.raises(ValueError):
            qstate.shannon_entropy([0.5, 0.6])
        with pytest.raises(ValueError):
            qstate.shannon_entropy([1.2, -0.2])

    def test_conditional_and_mutual_examples(self):
        corr = np.array([[0.5, 0], [0, 0.5]])
        indep = np.full((2, 2), 0.25)
        noisy = np.array([[0.445, 0.055], [0.055, 0.445]])
        assert qstate.conditional_entropy(corr) == 0.0
        assert qstate.conditional_entropy(indep) == pytest.approx(1.0)
        assert qstate.conditional_entropy(noisy) == pytest.approx(0.49991595816452800, abs=1e-14)
        assert qstate.mutual_information(corr) == pytest.approx(1.0)
        assert qstate.mutual_information(indep) == pytest.approx(0.0, abs=1e-15)
        assert qstate.mutual_information(noisy) == pytest.approx(0.50008404183547200, abs=1e-14)

    def test_zero_marginal_row_contributes_nothing(self):
        j = np.array([[0.0, 0.0], [0.3, 0.7]])
        assert qstate.conditional_entropy(j) == pytest.approx(qstate.binary_entropy(0.3))

    @given(joints)
    def test_chain_rule(self, j):
        h_joint = qstate.shannon_entropy(j.ravel())
        h_a = qstate.shannon_entropy(j.sum(axis=1))
        assert qstate.conditional_entropy(j) == pytest.approx(h_joint - h_a, abs=1e-9)

    @given(joints)
    def test_mutual_information_symmetric_and_nonnegative(self, j):
        mi = qstate.mutual_information(j)
        assert mi >= -1e-12
        assert mi == pytest.approx(qstate.mutual_information(j.T), abs=1e-9)


class TestSpectra:
    def test_eig_examples(self):
        np.testing.assert_allclose(qstate.eig_hermitian(np.diag([0.3, 0.7])), [0.3, 0.7])
        np.testing.assert_allclose(qstate.eig_hermitian(np.full((2, 2), 0.5)), [0, 1], atol=1e-15)

    def test_eig_rejects_non_hermitian(self):
        with pytest.raises(InvalidStateError):
            qstate.eig_hermitian(np.array([[0.5, 0.2], [0.1, 0.5]]))

    @pytest.mark.parametrize("dim", [2, 4, 8, 16])
    def test_eig_reconstruction(self, rng, dim):
        a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        m = a + a.conj().T
        w = qstate.eig_hermitian(m)
        assert np.all(np.diff(w) >= 0)
        _, vecs = np.linalg.eigh(m)
        assert np.max(np.abs(vecs @ np.diag(w) @ vecs.conj().T - m)) <= 1e-8

    def test_von_neumann_examples(self):
        assert qstate.von_neumann_entropy(np.eye(2) / 2) == pytest.approx(1.0)
        v = qstate.ket(1, 1j, 0.5, 0)
        assert qstate.von_neumann_entropy(qstate.density(v)) == pytest.approx(0.0, abs=1e-12)
        assert qstate.von_neumann_entropy(np.diag(LAMS_11)) == pytest.approx(0.99983191632905599, abs=1e-14)

    def test_small_negative_eigenvalues(self):
        assert qstate.von_neumann_entropy(np.diag([1 + 5e-10, -5e-10])) == pytest.approx(0.0, abs=1e-8)
        with pytest.raises(InvalidStateError):
            qstate.von_neumann_entropy(np.diag([1.1, -0.1]))

    @given(arrays(float, 4, elements=st.floats(0.0, 1.0)).filter(lambda a: a.sum() > 1e-3))
    def test_entropy_bridge(self, raw):
        d = raw / raw.sum()
        assert qstate.von_neumann_entropy(np.diag(d)) == pytest.approx(qstate.shannon_entropy(d), abs=1e-9)


class TestHolevo:
    def test_examples(self):
        rho = qstate.density(qstate.ket(1, 2))
        assert qstate.holevo([(0.5, rho), (0.5, rho)]) == pytest.approx(0.0, abs=1e-12)
        assert qstate.holevo(
            [(0.5, qstate.density(qstate.KET_0)), (0.5, qstate.density(qstate.KET_1))]
        ) == pytest.approx(1.0)

    def test_bb84_ensemble_at_eleven_percent(self):
        from teleqkd.keyrate import LambdaVector, Model, PurificationSpec, eve_conditionals

        probs, states, _ = eve_conditionals(PurificationSpec(Model.BB84_STD), LambdaVector.of(LAMS_11))
        chi = qstate.holevo(list(zip(probs, states)))
        # mpmath: S(lambda) - h(0.11) = 0.49991595816452799564
        assert chi == pytest.approx(0.49991595816452800, abs=1e-12)

    def test_non_negative_on_random_ensembles(self, rng):
        for _ in range(100):
            k = int(rng.integers(2, 5))
            w = rng.dirichlet(np.ones(k))
            members = [(wi, random_density(rng, 4, int(rng.integers(1, 5)))) for wi in w]
            assert qstate.holevo(members) >= -1e-9


class TestComposite:
    def test_tensor_examples(self):
        np.testing.assert_allclose(qstate.tensor(qstate.KET_0, qstate.KET_1), [0, 1, 0, 0])
        np.testing.assert_allclose(qstate.tensor(qstate.KET_PLUS, qstate.KET_PLUS), [0.5] * 4)

    def test_tensor_matches_index_arithmetic(self, rng):
        phi = make_basis(BasisKind.BELL)[0]
        eps = random_ket(rng, 4)
        out = qstate.tensor(phi, eps)
        brute = np.zeros(16, dtype=complex)
        for i in range(4):
            for k in range(4):
                brute[4 * i + k] = phi[i] * eps[k]
        np.testing.assert_array_equal(out, brute)

    def test_tensor_dimension_limit(self):
        with pytest.raises(ValueError):
            qstate.tensor(np.ones(8) / math.sqrt(8), qstate.ket(1, 0, 0, 0))

    def test_partial_trace_examples(self):
        bell = qstate.density(make_basis(BasisKind.BELL)[0])
        np.testing.assert_allclose(qstate.partial_trace(bell, [0], (2, 2)), np.eye(2) / 2, atol=1e-15)

    def test_partial_trace_of_purification(self):
        from teleqkd.keyrate import LambdaVector, Model, PurificationSpec, purification_state

        lam = [0.4, 0.3, 0.2, 0.1]
        psi = purification_state(PurificationSpec(Model.BB84_STD), LambdaVector.of(lam))
        rho_e = qstate.partial_trace(qstate.density(psi), [2], (2, 2, 4))
        np.testing.assert_allclose(rho_e, np.diag(lam), atol=1e-12)

    def test_partial_trace_undoes_tensor(self, rng):
        for _ in range(100):
            a, b = random_density(rng, 2), random_density(rng, 4)
            ab = qstate.tensor(a, b)
            np.testing.assert_allclose(qstate.partial_trace(ab, [0], (2, 4)), a, atol=1e-9)
            np.testing.assert_allclose(qstate.partial_trace(ab, [1], (2, 4)), b, atol=1e-9)

    def test_partial_trace_bad_dims(self):
        with pytest.raises(ValueError):
            qstate.partial_trace(np.eye(4) / 4, [0], (2, 3))

    def test_project_examples(self):
        bell = qstate.density(make_basis(BasisKind.BELL)[0])
        prob, cond = qstate.project(bell, qstate.KET_0, (2, 2))
        assert prob == pytest.approx(0.5)
        np.testing.assert_allclose(cond, qstate.density(qstate.KET_0), atol=1e-15)
        assert qstate.project(qstate.density(qstate.KET_0), qstate.KET_1, (2,)) == (0.0, None)

    def test_project_purification_conditional(self):
        from teleqkd.keyrate import LambdaVector, Model, PurificationSpec, purification_state

        l1, l2, l3, l4 = lam = [0.4, 0.3, 0.2, 0.1]
        psi = purification_state(PurificationSpec(Model.BB84_STD), LambdaVector.of(lam))
        rho_ae = qstate.partial_trace(qstate.density(psi), [0, 2], (2, 2, 4))
        prob, cond = qstate.project(rho_ae, qstate.KET_0, (2, 4))
        assert prob == pytest.approx(0.5)
        expected = np.array(
            [
                [l1, math.sqrt(l1 * l2), 0, 0],
                [math.sqrt(l1 * l2), l2, 0, 0],
                [0, 0, l3, math.sqrt(l3 * l4)],
                [0, 0, math.sqrt(l3 * l4), l4],
            ]
        )
        np.testing.assert_allclose(cond, expected, atol=1e-12)

    @pytest.mark.parametrize("kind", list(BasisKind))
    def test_projections_over_basis_sum_to_one(self, rng, kind):
        basis = make_basis(kind, 0.4 if kind is BasisKind.XI else 0.6)
        rho = random_density(rng, 8)
        total = sum(qstate.project(rho, basis[j], (4, 2))[0] for j in range(4))
        assert total == pytest.approx(1.0, abs=1e-9)


class TestBases:
    def test_bell_first_vector(self):
        np.testing.assert_allclose(make_basis(BasisKind.BELL)[0], np.array([1, 0, 0, 1]) / math.sqrt(2))

    def test_genbell_at_one_is_bell(self):
        g = make_basis(BasisKind.GENBELL, 1.0).vectors
        s = 1 / math.sqrt(2)
        expected = np.array([[s, 0, 0, s], [s, 0, 0, -s], [0, s, s, 0], [0, s, -s, 0]])
        np.testing.assert_allclose(g, expected, atol=1e-15)

    def test_xi_at_half(self):
        xi = make_basis(BasisKind.XI, 0.5).vectors
        np.testing.assert_allclose(xi, make_basis(BasisKind.BELL).vectors, atol=1e-15)

    def test_param_ranges(self):
        with pytest.raises(ValueError):
            make_basis(BasisKind.XI, 0.25)
        with pytest.raises(ValueError):
            make_basis(BasisKind.XI, 0.6)
        with pytest.raises(ValueError):
            make_basis(BasisKind.GENBELL, 1.5)

    @given(st.floats(0.25, 0.5, exclude_min=True), st.floats(0.0, 1.0))
    def test_orthonormal(self, p, m):
        for kind, param in ((BasisKind.BELL, None), (BasisKind.TILDE, None), (BasisKind.XBELL, None),
                            (BasisKind.XI, p), (BasisKind.GENBELL, m)):  # fmt: skip
            np.testing.assert_allclose(make_basis(kind, param).gram(), np.eye(4), atol=1e-9)
