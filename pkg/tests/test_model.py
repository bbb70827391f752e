import numpy as np
import pytest
import scipy.sparse as sp

import bruteforce
from kkchain.model import (
    FieldPattern,
    FieldSpec,
    ModelParams,
    SparseSymMatrix,
    build_hamiltonian,
    field_profile,
    joint_bond_operator,
    magnetization_operator,
    pseudospin_bond_operator,
    site_operator,
    spin_bond_operator,
    swap_sectors_permutation,
)


def dense(params):
    return build_hamiltonian(params).to_dense()


class TestSiteOperator:
    def test_single_site_z_spin(self):
        m = site_operator(1, 0, "z", "spin").toarray()
        np.testing.assert_array_equal(m, np.diag([0.5, 0.5, -0.5, -0.5]))

    def test_single_site_z_pseudospin(self):
        m = site_operator(1, 0, "z", "pseudospin").toarray()
        np.testing.assert_array_equal(m, np.diag([0.5, -0.5, 0.5, -0.5]))

    def test_x_squares_to_quarter_identity(self):
        m = site_operator(2, 1, "x", "spin")
        np.testing.assert_allclose((m @ m).toarray(), np.eye(16) / 4, atol=1e-15)

    def test_y_is_complex_others_real(self):
        assert site_operator(2, 0, "y", "spin").dtype == np.complex128
        assert site_operator(2, 0, "z", "spin").dtype == np.float64
        assert site_operator(2, 0, "plus", "pseudospin").dtype == np.float64

    def test_ladder_commutator_gives_2sz(self):
        plus = site_operator(2, 0, "plus", "spin")
        minus = site_operator(2, 0, "minus", "spin")
        z = site_operator(2, 0, "z", "spin")
        np.testing.assert_allclose(
            (plus @ minus - minus @ plus).toarray(), 2 * z.toarray(), atol=1e-15
        )

    def test_bad_arguments(self):
        with pytest.raises(ValueError, match="site"):
            site_operator(2, 2, "z", "spin")
        with pytest.raises(ValueError, match="axis"):
            site_operator(2, 0, "w", "spin")
        with pytest.raises(ValueError, match="sector"):
            site_operator(2, 0, "z", "orbital")


class TestFieldProfile:
    def test_uniform(self):
        assert field_profile(FieldSpec(0.5, FieldPattern.UNIFORM), 3) == [0.5, 0.5, 0.5]

    def test_staggered(self):
        assert field_profile(FieldSpec(1.0, FieldPattern.STAGGERED), 4) == [1.0, -1.0, 1.0, -1.0]

    def test_off_ignores_magnitude(self):
        assert field_profile(FieldSpec(7.0, FieldPattern.OFF), 2) == [0.0, 0.0]


class TestModelParams:
    def test_dimension(self):
        assert ModelParams(n_sites=3).dimension == 64

    def test_rejects_bad_sites(self):
        with pytest.raises(ValueError):
            ModelParams(n_sites=0)
        with pytest.raises(ValueError, match="hard cap"):
            ModelParams(n_sites=8)

    def test_cap_override(self):
        assert ModelParams(n_sites=8, max_sites=8).n_sites == 8

    def test_rejects_nonfinite_coupling(self):
        with pytest.raises(ValueError, match="j_spin"):
            ModelParams(n_sites=2, j_spin=float("nan"))
        with pytest.raises(ValueError, match="finite"):
            FieldSpec(float("inf"), FieldPattern.UNIFORM)


class TestSparseSymMatrix:
    def test_rejects_lower_triangle(self):
        with pytest.raises(ValueError, match="upper"):
            SparseSymMatrix(
                dimension=2,
                rows=np.array([1]),
                cols=np.array([0]),
                values=np.array([1.0]),
            )

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError, match="finite"):
            SparseSymMatrix(
                dimension=2,
                rows=np.array([0]),
                cols=np.array([1]),
                values=np.array([np.inf]),
            )

    def test_round_trip(self):
        m = np.array([[1.0, 2.0, 0.0], [2.0, 0.0, -1.0], [0.0, -1.0, 3.0]])
        wrapped = SparseSymMatrix.from_sparse(sp.csr_matrix(m))
        np.testing.assert_array_equal(wrapped.to_dense(), m)
        np.testing.assert_array_equal(wrapped.to_csr().toarray(), m)
        assert wrapped.trace() == 4.0


class TestHamiltonian:
    def test_two_site_heisenberg_spectrum(self):
        h = dense(ModelParams(n_sites=2, j_spin=1.0))
        expected = np.sort([-0.75] * 4 + [0.25] * 12)
        np.testing.assert_allclose(np.linalg.eigvalsh(h), expected, atol=1e-12)

    def test_two_site_joint_coupling_spectrum(self):
        # eigenvalues of K (S.S)(T.T): products of {-3/4, 1/4} pairs
        h = dense(ModelParams(n_sites=2, k_coupling=1.0))
        expected = np.sort([9 / 16] + [-3 / 16] * 6 + [1 / 16] * 9)
        np.testing.assert_allclose(np.linalg.eigvalsh(h), expected, atol=1e-12)

    def test_exactly_symmetric(self):
        p = ModelParams(
            n_sites=3,
            j_spin=0.7,
            i_pseudo=-0.3,
            k_coupling=1.1,
            field_spin=FieldSpec(0.4, FieldPattern.STAGGERED),
        )
        h = dense(p)
        np.testing.assert_array_equal(h, h.T)

    def test_traceless_without_fields(self):
        h = build_hamiltonian(ModelParams(n_sites=3, j_spin=1.0, i_pseudo=0.5, k_coupling=-2.0))
        assert abs(h.trace()) < 1e-12

    @pytest.mark.parametrize("pattern", list(FieldPattern))
    def test_conserves_both_magnetizations(self, pattern):
        p = ModelParams(
            n_sites=3,
            j_spin=0.9,
            i_pseudo=-1.2,
            k_coupling=0.8,
            field_spin=FieldSpec(0.6, pattern),
            field_pseudo=FieldSpec(-0.2, pattern),
        )
        h = dense(p)
        for sector in ("spin", "pseudospin"):
            mz = magnetization_operator(3, sector).to_dense()
            assert np.abs(h @ mz - mz @ h).max() < 1e-12

    def test_relabel_symmetry(self):
        fs = FieldSpec(0.5, FieldPattern.STAGGERED)
        ft = FieldSpec(-0.3, FieldPattern.UNIFORM)
        a = dense(ModelParams(n_sites=2, j_spin=0.8, i_pseudo=-0.4, k_coupling=1.3,
                              field_spin=fs, field_pseudo=ft))
        b = dense(ModelParams(n_sites=2, j_spin=-0.4, i_pseudo=0.8, k_coupling=1.3,
                              field_spin=ft, field_pseudo=fs))
        perm = swap_sectors_permutation(2)
        np.testing.assert_allclose(a, b[np.ix_(perm, perm)], atol=1e-14)
        np.testing.assert_allclose(
            np.linalg.eigvalsh(a), np.linalg.eigvalsh(b), atol=1e-12
        )

    def test_matches_bruteforce_builder(self):
        rng = np.random.default_rng(42)
        for _ in range(5):
            j, i, k = rng.uniform(-2, 2, 3)
            ms, mt = rng.uniform(-1, 1, 2)
            p = ModelParams(
                n_sites=3, j_spin=j, i_pseudo=i, k_coupling=k,
                field_spin=FieldSpec(ms, FieldPattern.STAGGERED),
                field_pseudo=FieldSpec(mt, FieldPattern.UNIFORM),
            )
            reference = bruteforce.hamiltonian(
                3, j, i, k,
                field_profile(p.field_spin, 3),
                field_profile(p.field_pseudo, 3),
            )
            np.testing.assert_allclose(dense(p), reference, atol=1e-12)


class TestAuxiliaryOperators:
    def test_bond_operators_compose_hamiltonian(self):
        # J*ss + I*tt + K*sstt must equal the field-free Hamiltonian
        p = ModelParams(n_sites=3, j_spin=0.6, i_pseudo=-1.1, k_coupling=0.9)
        total = np.zeros((64, 64))
        for bond in range(2):
            total += 0.6 * spin_bond_operator(3, bond).to_dense()
            total += -1.1 * pseudospin_bond_operator(3, bond).to_dense()
            total += 0.9 * joint_bond_operator(3, bond).to_dense()
        np.testing.assert_allclose(total, dense(p), atol=1e-13)

    def test_bond_range_checked(self):
        with pytest.raises(ValueError, match="bond"):
            spin_bond_operator(2, 1)

    def test_swap_permutation_small(self):
        np.testing.assert_array_equal(swap_sectors_permutation(1), [0, 2, 1, 3])

    def test_swap_permutation_is_involution(self):
        perm = swap_sectors_permutation(3)
        np.testing.assert_array_equal(perm[perm], np.arange(64))
