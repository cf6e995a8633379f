import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_sos
from somor import (
    SecondOrderSystem, Subsystem, bt_project, controllability_factors, eval_transfer,
    reduce_combined, reduce_homogeneous, reduce_split)
from somor.exceptions import EmptySpectrum, InvalidParameter, RankDeficient
from somor.gramians import combined_factor
from somor.linalg import svd_decompose
from somor.reduction import UnstableReducedModelWarning, order_from_tolerance

FREQS = 1j * np.logspace(-2, 2, 20)


def rel_err(a, b):
    return np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300)


class TestProject:
    def test_identity_full(self):
        W, V, s = bt_project(np.eye(2), np.eye(2), 2)
        np.testing.assert_allclose(s, [1, 1])
        np.testing.assert_allclose(np.abs(W.T @ V), np.eye(2), atol=1e-15)

    def test_identity_tie(self):
        # tied spectrum: only the subspace property W^T V = 1 is fixed
        W, V, s = bt_project(np.eye(2), np.eye(2), 1)
        assert W.shape == (2, 1)
        np.testing.assert_allclose(W.T @ V, [[1.0]])
        np.testing.assert_allclose(np.linalg.norm(W), 1.0)

    def test_diagonal(self):
        W, V, s = bt_project(np.eye(2), np.diag([4.0, 1.0]), 1)
        np.testing.assert_allclose(s, [4.0])
        np.testing.assert_allclose(np.abs(W), [[0.5], [0]])
        np.testing.assert_allclose(np.abs(V), [[2.0], [0]])

    def test_tolerance(self):
        W, V, s = bt_project(np.eye(3), np.diag([1.0, 1e-2, 1e-5]), 1e-4)
        assert s.size == 2

    def test_rank_deficient(self):
        with pytest.raises(RankDeficient):
            bt_project(np.eye(2), np.diag([1.0, 0.0]), 2)

    def test_empty_factor(self):
        W, V, s = bt_project(np.eye(2), np.zeros((2, 0)), 1)
        assert W.shape == (2, 0) and s.size == 0

    def test_bad_order(self):
        with pytest.raises(InvalidParameter):
            bt_project(np.eye(2), np.eye(2), -1)
        with pytest.raises(InvalidParameter):
            bt_project(np.eye(2), np.eye(2), 1.5)


class TestOrderFromTolerance:
    def test_examples(self):
        assert order_from_tolerance([1, 1e-2, 1e-5], 1e-4) == 2
        assert order_from_tolerance([1], 1e-3) == 1
        assert order_from_tolerance([1], 1.0) == 1

    def test_boundary_kept(self):
        assert order_from_tolerance([1, 1e-4], 1e-4) == 2

    def test_empty(self):
        with pytest.raises(EmptySpectrum):
            order_from_tolerance([], 1e-4)


@pytest.fixture
def sys5(rng):
    return random_sos(rng, 5, m=2, p=2, k0=2, kv=1)


class TestFullOrder:
    def test_split(self, sys5):
        f = controllability_factors(sys5)
        split = reduce_split(sys5, f, (f.R_so.shape[1], f.R_x0.shape[1], f.R_v0.shape[1]))
        assert split.orders == (5, 5, 5)
        for tag in Subsystem:
            for s in FREQS:
                assert rel_err(eval_transfer(split[tag].system, tag, s),
                               eval_transfer(sys5, tag, s)) <= 1e-8

    @pytest.mark.parametrize("reducer", ["combined", "homogeneous"])
    def test_single(self, sys5, reducer):
        f = controllability_factors(sys5)
        rom = (reduce_combined(sys5, f, 5) if reducer == "combined"
               else reduce_homogeneous(sys5, 5, f))
        for tag in Subsystem:
            for s in FREQS:
                assert rel_err(eval_transfer(rom.system, tag, s),
                               eval_transfer(sys5, tag, s)) <= 1e-8


class TestSchemes:
    def test_split_keeps_own_basis_only(self, sys5):
        split = reduce_split(sys5, controllability_factors(sys5), 3)
        assert split.rom_so.X0.shape[1] == 0 and split.rom_so.V0.shape[1] == 0
        assert split.rom_x0.X0.shape == (3, 2) and split.rom_x0.V0.shape[1] == 0
        assert split.rom_v0.V0.shape == (3, 1) and split.rom_v0.X0.shape[1] == 0
        assert [r.scheme for r in (split.rom_so, split.rom_x0, split.rom_v0)] == \
            ["split-so", "split-x0", "split-v0"]

    def test_empty_x0(self, rng):
        sos = SecondOrderSystem(np.eye(3) * 2, np.eye(3), np.diag([1.0, 2.0, 3.0]),
                                np.ones((3, 1)), np.ones((1, 3)), V0=np.eye(3)[:, :1])
        split = reduce_split(sos, controllability_factors(sos), 1e-8)
        assert split.rom_x0.order == 0

    def test_combined_degenerates_to_homogeneous(self, rng):
        full = random_sos(rng, 5)
        sos = full.with_initial_bases()
        f = controllability_factors(sos)
        com = reduce_combined(sos, f, 3)
        hom = reduce_homogeneous(sos, 3, f)
        np.testing.assert_allclose(com.sigma, hom.sigma)
        for s in FREQS:
            np.testing.assert_allclose(eval_transfer(com.system, "so", s),
                                       eval_transfer(hom.system, "so", s), rtol=1e-10)

    def test_homogeneous_projects_bases(self, sys5):
        rom = reduce_homogeneous(sys5, 2)
        np.testing.assert_allclose(rom.X0, rom.W.T @ sys5.X0)
        np.testing.assert_allclose(rom.V0, rom.W.T @ sys5.V0)

    def test_unstable_rom_warns(self):
        # M_r = K_r = 0.5 but D_r = 0.1 - 0.5 < 0
        from somor.reduction import _project
        sos = SecondOrderSystem(np.eye(2), np.diag([0.1, 1.0]), np.eye(2), np.ones((2, 1)),
                                np.ones((1, 2)))
        W = np.array([[1.0], [1.0]])
        V = np.array([[1.0], [-0.5]])
        with pytest.warns(UnstableReducedModelWarning):
            rom = _project(sos, W, V, np.ones(1), "homogeneous")
        assert not rom.is_stable()


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**32 - 1), st.integers(1, 8))
def test_biorthogonality(n, seed, r):
    sos = random_sos(np.random.default_rng(seed), n, k0=1, kv=1)
    f = controllability_factors(sos)
    Rc = combined_factor(f)
    n_pos = np.count_nonzero(svd_decompose(f.S.T @ Rc)[1] > 1e-14 * svd_decompose(f.S.T @ Rc)[1][0])
    r = min(r, n_pos)
    W, V, sigma = bt_project(f.S, Rc, r)
    np.testing.assert_allclose(W.T @ V, np.eye(r), atol=1e-10)
    assert np.all(sigma > 0) and np.all(np.diff(sigma) <= 0)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_retained_spectrum_is_prefix(n, seed):
    sos = random_sos(np.random.default_rng(seed), n)
    f = controllability_factors(sos)
    full = svd_decompose(f.S.T @ f.R_so)[1]
    _, _, kept = bt_project(f.S, f.R_so, 1e-3)
    np.testing.assert_array_equal(kept, full[:kept.size])
    assert np.all(full[kept.size:] < 1e-3 * full[0])
