import numpy as np
import pytest

import kdvessel as kv
from kdvessel import core


class TestEvalS:
    def test_zero_coupling_gives_identity(self, zero_vessel):
        for lam in (1.0, 2.0 + 3.0j, -0.4j):
            assert np.array_equal(kv.eval_S(zero_vessel, lam, 0.3, 0.1), np.eye(2))

    def test_one_soliton_frozen_value(self, one_soliton):
        # 1-dimensional resolvent arithmetic: A = -i, X(0,0) = 2
        _, vessel = one_soliton
        S = kv.eval_S(vessel, 1.0, 0.0, 0.0)
        expected = np.array(
            [[(1 - 1j) / 2, -(1 - 1j) / 2], [-(1 - 1j) / 2, (3 + 1j) / 2]]
        )
        assert np.allclose(S, expected, atol=1e-14)

    def test_identity_at_infinity(self, one_soliton):
        _, vessel = one_soliton
        state = kv.evaluate(vessel, 0.2, 0.1)
        M = state.B.conj().T @ state.Xinv @ state.B
        S = kv.eval_S(vessel, 1e6, 0.2, 0.1, state=state)
        assert np.linalg.norm(S - np.eye(2)) < 1e-5 * np.linalg.norm(M)

    def test_pole_rejected(self, one_soliton):
        _, vessel = one_soliton
        with pytest.raises(kv.PoleError):
            kv.eval_S(vessel, -1j, 0.0, 0.0)  # spectrum of A is {-i}

    def test_sample_record(self, one_soliton):
        _, vessel = one_soliton
        sample = kv.sample_S(vessel, 1.0, 0.0, 0.0)
        assert (sample.lam, sample.x, sample.t) == (1.0 + 0j, 0.0, 0.0)
        assert np.allclose(sample.S, kv.eval_S(vessel, 1.0, 0.0, 0.0))
        assert sample.symmetry_defect(vessel) < 1e-12


class TestSymmetry:
    def test_soliton(self, one_soliton):
        _, vessel = one_soliton
        assert kv.symmetry_residual(vessel, 1.0, 0.4, 0.2) < 1e-12

    def test_discrete(self, discrete_12):
        _, vessel = discrete_12
        assert kv.symmetry_residual(vessel, 2.0 + 3.0j, 0.7, 0.3) < 1e-12

    def test_zero_coupling_exact(self, zero_vessel):
        assert kv.symmetry_residual(zero_vessel, 0.7 + 0.2j, 0.0, 0.0) == 0.0

    def test_inverse_via_symmetry(self, three_soliton):
        # S(lambda)^-1 = sigma1 S*(-conj(lambda)) sigma1
        _, vessel = three_soliton
        lam = 0.9 - 0.6j
        S = kv.eval_S(vessel, lam, 0.3, 0.1)
        S_ref = kv.eval_S(vessel, -np.conj(lam), 0.3, 0.1)
        inv = core.SIGMA1 @ S_ref.conj().T @ core.SIGMA1
        assert np.linalg.norm(inv @ S - np.eye(2)) < 1e-10


class TestDSResidual:
    def test_soliton_small(self, one_soliton):
        _, vessel = one_soliton
        assert kv.ds_residual(vessel, 0.7 + 0.4j, 0.3, 0.1, h=1e-3) < 1e-6

    def test_order_two(self, discrete_12):
        _, vessel = discrete_12
        r1 = kv.ds_residual(vessel, 0.7 + 0.4j, 0.3, 0.1, h=1e-3)
        r2 = kv.ds_residual(vessel, 0.7 + 0.4j, 0.3, 0.1, h=5e-4)
        assert 3.5 < r1 / r2 < 4.5

    def test_zero_coupling(self, zero_vessel):
        assert kv.ds_residual(zero_vessel, 1.2, 0.0, 0.0, h=1e-3) < 1e-14


class TestIntertwining:
    def test_soliton_off_spectrum(self):
        # k = 1.2 keeps the spectrum {-1.44i} away from lambda = -i
        vessel = kv.build_soliton(kv.SolitonSpec.from_c([1.2], [1.0]), self_check=False)
        grid = 0.1 + 1e-3 * np.arange(-10, 11)
        assert kv.intertwining_residual(vessel, -1j, grid, 0.05) < 1e-5

    def test_zero_coupling_free_equation(self, zero_vessel):
        # S = I and y = u exactly; what remains is the centered-stencil
        # truncation (h^2/12)|omega^4 e^{omega x}| ~ 8e-8 at h = 1e-3
        grid = 1e-3 * np.arange(-10, 11)
        assert kv.intertwining_residual(zero_vessel, -1j, grid, 0.0) < 1e-7

    def test_order_under_refinement(self):
        vessel = kv.build_soliton(kv.SolitonSpec.from_c([1.2], [1.0]), self_check=False)
        res = {}
        for h in (2e-3, 1e-3):
            grid = 0.1 + h * np.arange(-8, 9)
            res[h] = kv.intertwining_residual(vessel, -1j, grid, 0.05)
        assert np.log2(res[2e-3] / res[1e-3]) > 1.9

    def test_grid_validation(self, zero_vessel):
        with pytest.raises(ValueError):
            kv.intertwining_residual(zero_vessel, -1j, np.array([0.0, 0.1, 0.2]), 0.0)
        with pytest.raises(ValueError):
            kv.intertwining_residual(zero_vessel, -1j, np.array([0, 0.1, 0.15, 0.3, 0.4]), 0.0)


class TestMoments:
    def test_zero_coupling(self, zero_vessel):
        H = kv.moments(zero_vessel, 0.3, 0.1, 5)
        assert np.array_equal(H, np.zeros((6, 2, 2)))

    def test_norm_bound(self, three_soliton):
        _, vessel = three_soliton
        state = kv.evaluate(vessel, 0.4, 0.1)
        H = kv.moments(vessel, 0.4, 0.1, 8, state=state)
        rho = np.max(np.abs(vessel.spectrum))
        bound = (np.linalg.norm(state.B, 2) ** 2 * np.linalg.norm(state.Xinv, 2))
        for n in range(9):
            assert np.linalg.norm(H[n], 2) <= bound * rho**n * (1 + 1e-12)

    def test_neumann_reconstruction(self, one_soliton):
        # S(lambda) - (I - sum_{n<=N} lambda^{-n-1} H_n) decays geometrically
        _, vessel = one_soliton
        lam = 3.0j  # |lambda| = 3 > 2 rho(A) = 2
        state = kv.evaluate(vessel, 0.2, 0.1)
        S = kv.eval_S(vessel, lam, 0.2, 0.1, state=state)
        H = kv.moments(vessel, 0.2, 0.1, 12, state=state)
        errs = []
        for N in (4, 8, 12):
            partial = np.eye(2, dtype=complex) - sum(
                H[n] / lam ** (n + 1) for n in range(N + 1)
            )
            errs.append(np.linalg.norm(S - partial))
        assert errs[1] < errs[0] * (1.0 / 3.0) ** 3
        assert errs[2] < errs[1] * (1.0 / 3.0) ** 3

    def test_nmax_validation(self, zero_vessel):
        with pytest.raises(ValueError):
            kv.moments(zero_vessel, 0.0, 0.0, -1)


class TestMomentRecursion:
    def test_soliton_levels(self, one_soliton):
        _, vessel = one_soliton
        for n in range(4):
            assert kv.moment_recursion_residual(vessel, 0.3, 0.1, n, h=1e-4) < 1e-6

    def test_zero_coupling(self, zero_vessel):
        assert kv.moment_recursion_residual(zero_vessel, 0.3, 0.1, 0, h=1e-4) == 0.0

    def test_order_two_in_step(self, one_soliton):
        # steps kept large enough that truncation dominates the eps/h^2
        # roundoff of the second-derivative stencil
        _, vessel = one_soliton
        r1 = kv.moment_recursion_residual(vessel, 0.3, 0.1, 1, h=2e-3)
        r2 = kv.moment_recursion_residual(vessel, 0.3, 0.1, 1, h=1e-3)
        assert kv.convergence_order(r1, r2) > 1.8


class TestGLKernels:
    def test_zero_coupling(self, zero_vessel):
        assert kv.gl_kernels(zero_vessel, 0.0, 1.0, 0.5) == (0.0, 0.0)

    def test_diagonal_is_beta(self, one_soliton):
        _, vessel = one_soliton
        rng = np.random.default_rng(47)
        for _ in range(20):
            x = rng.uniform(-2, 2)
            _, kval = kv.gl_kernels(vessel, 0.0, x, x)
            assert abs(kval - kv.evaluate(vessel, x, 0.0).beta) < 1e-12

    def test_omega_real_symmetric(self, three_soliton):
        _, vessel = three_soliton
        om_xy, _ = kv.gl_kernels(vessel, 0.0, 1.2, 0.4)
        om_yx, _ = kv.gl_kernels(vessel, 0.0, 0.4, 1.2)
        assert om_xy == pytest.approx(om_yx, abs=1e-10)


class TestGLResidual:
    def test_soliton_quadrature_limited(self, one_soliton):
        _, vessel = one_soliton
        assert kv.gl_residual(vessel, 0.0, 1.5, 0.7, quadrature_nodes=201) < 1e-8

    def test_zero_coupling_exact(self, zero_vessel):
        assert kv.gl_residual(zero_vessel, 0.0, 1.5, 0.7) == 0.0

    def test_node_doubling_fourth_order(self, one_soliton):
        _, vessel = one_soliton
        r1 = kv.gl_residual(vessel, 0.0, 1.5, 0.7, quadrature_nodes=101)
        r2 = kv.gl_residual(vessel, 0.0, 1.5, 0.7, quadrature_nodes=201)
        assert r1 / r2 > 12.0

    def test_input_validation(self, one_soliton):
        _, vessel = one_soliton
        with pytest.raises(ValueError):
            kv.gl_residual(vessel, 0.0, 0.7, 1.5)  # needs x > y
        with pytest.raises(ValueError):
            kv.gl_residual(vessel, 0.0, 1.5, 0.7, quadrature_nodes=200)  # even


class TestQFromKDiag:
    def test_matches_analytic_soliton(self):
        spec = kv.SolitonSpec.from_c([1.0], [1.0])
        vessel = kv.build_soliton(spec, self_check=False)
        q_ref = float(kv.q_soliton(spec, 0.4, 0.0))
        rep = kv.q_from_K_diag(vessel, 0.4, h=1e-3, reference=q_ref)
        assert rep.sigma == 1
        assert abs(rep.value - q_ref) < 1e-4

    def test_order_two_in_step(self):
        spec = kv.SolitonSpec.from_c([1.0], [1.0])
        vessel = kv.build_soliton(spec, self_check=False)
        q_ref = float(kv.q_soliton(spec, 0.4, 0.0))
        e1 = abs(kv.q_from_K_diag(vessel, 0.4, h=2e-3, reference=q_ref).value - q_ref)
        e2 = abs(kv.q_from_K_diag(vessel, 0.4, h=1e-3, reference=q_ref).value - q_ref)
        assert kv.convergence_order(e1, e2) > 1.8

    def test_zero_coupling(self, zero_vessel):
        rep = kv.q_from_K_diag(zero_vessel, 0.4, h=1e-3)
        assert rep.value == 0.0
        assert rep.sigma == 1

    def test_sign_consistent_across_constructions(self, discrete_12, quadrature_gauss):
        for _, vessel in (discrete_12, quadrature_gauss):
            assert kv.q_from_K_diag(vessel, 0.3, h=1e-3).sigma == 1
