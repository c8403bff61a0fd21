import numpy as np
import pytest

import kdvessel as kv


class TestSolitonSpec:
    def test_rejects_nonpositive_wavenumbers(self):
        with pytest.raises(kv.InvalidSpecError):
            kv.SolitonSpec(k=np.array([1.0, -2.0]), b=np.array([1.0, 1.0]))

    def test_rejects_duplicate_wavenumbers(self):
        with pytest.raises(kv.InvalidSpecError):
            kv.SolitonSpec(k=np.array([1.0, 1.0]), b=np.array([1.0, 1.0]))

    def test_rejects_zero_amplitudes(self):
        with pytest.raises(kv.InvalidSpecError):
            kv.SolitonSpec(k=np.array([1.0]), b=np.array([0.0]))

    def test_c_normalization_roundtrip(self):
        spec = kv.SolitonSpec.from_c([0.5, 2.0], [1.0, 3.0])
        assert spec.c == pytest.approx([1.0, 3.0])
        assert spec.b == pytest.approx(np.sqrt(2.0 * spec.k * spec.c))


class TestBuildSoliton:
    def test_origin_values(self, one_soliton):
        _, vessel = one_soliton
        assert vessel.X(0.0, 0.0) == pytest.approx(np.array([[2.0]]), abs=1e-15)
        assert vessel.B(0.0, 0.0) == pytest.approx(
            np.array([[np.sqrt(2.0), 1j * np.sqrt(2.0)]]), abs=1e-15
        )

    def test_generator_entries(self, three_soliton):
        _, vessel = three_soliton
        assert np.array_equal(vessel.A, np.diag([-1j, -4j, -9j]))

    def test_small_amplitude_limit(self):
        spec = kv.SolitonSpec(k=np.array([1.0]), b=np.array([1e-8 + 0j]))
        vessel = kv.build_soliton(spec, self_check=False)
        assert abs(kv.tau(vessel, 0.3, 0.1) - 1.0) < 1e-15
        assert abs(kv.q_soliton(spec, 0.3, 0.1)) < 1e-14

    def test_self_check_runs(self):
        kv.build_soliton(kv.SolitonSpec.from_c([0.7, 1.2], [1.0, 1.0]))  # no raise


class TestCauchyTau3:
    def test_pair_coefficients(self):
        # a_ij = (k_i - k_j)^2 / (k_i + k_j)^2 for k = (1, 2, 3)
        k = np.array([1.0, 2.0, 3.0])
        a = lambda i, j: (k[i] - k[j]) ** 2 / (k[i] + k[j]) ** 2
        assert a(0, 1) == pytest.approx(1.0 / 9.0)
        assert a(0, 2) == pytest.approx(1.0 / 4.0)
        assert a(1, 2) == pytest.approx(1.0 / 25.0)

    def test_origin_value(self, three_soliton):
        spec, _ = three_soliton
        assert kv.tau_cauchy_3(spec, 0.0, 0.0) == pytest.approx(4.0 + 362.0 / 900.0, rel=1e-14)

    def test_matches_determinant_at_random_points(self, three_soliton):
        spec, vessel = three_soliton
        rng = np.random.default_rng(23)
        for _ in range(100):
            x, t = rng.uniform(-3, 3), rng.uniform(-3, 3)
            tv = kv.tau(vessel, x, t)
            assert abs(tv - kv.tau_cauchy_3(spec, x, t)) / abs(tv) < 1e-10

    def test_independent_expansion_oracle(self):
        # full closed form re-derived in place at a generic point
        spec = kv.SolitonSpec.from_c([0.5, 1.1, 1.7], [0.8, 1.2, 0.6])
        k, c = spec.k, spec.c
        x, t = 0.7, -0.4
        E = np.exp(2 * k * x + 2 * k**3 * t)
        a = {(i, j): (k[i] - k[j]) ** 2 / (k[i] + k[j]) ** 2
             for i in range(3) for j in range(3) if i < j}
        expected = (
            1.0 + np.sum(c * E)
            + c[0] * c[1] * a[(0, 1)] * E[0] * E[1]
            + c[0] * c[2] * a[(0, 2)] * E[0] * E[2]
            + c[1] * c[2] * a[(1, 2)] * E[1] * E[2]
            + np.prod(c) * a[(0, 1)] * a[(0, 2)] * a[(1, 2)] * np.prod(E)
        )
        assert kv.tau_cauchy_3(spec, x, t) == pytest.approx(expected, rel=1e-14)

    def test_requires_three_generators(self):
        with pytest.raises(kv.InvalidSpecError):
            kv.tau_cauchy_3(kv.SolitonSpec.from_c([1.0], [1.0]), 0.0, 0.0)


class TestQSoliton:
    def test_origin_value(self):
        spec = kv.SolitonSpec.from_c([1.0], [1.0])
        assert kv.q_soliton(spec, 0.0, 0.0) == pytest.approx(-2.0, abs=1e-13)

    def test_matches_log_tau_second_difference(self, three_soliton):
        spec, vessel = three_soliton
        rng = np.random.default_rng(29)
        worst = {1e-3: 0.0, 5e-4: 0.0}
        for _ in range(20):
            x, t = rng.uniform(-1.5, 1.5), rng.uniform(-0.3, 0.3)
            q = kv.q_soliton(spec, x, t)
            for h in worst:
                fd = -2.0 * (
                    np.log(kv.tau(vessel, x + h, t))
                    - 2.0 * np.log(kv.tau(vessel, x, t))
                    + np.log(kv.tau(vessel, x - h, t))
                ) / h**2
                worst[h] = max(worst[h], abs(q - fd))
        assert worst[1e-3] < 1e-4
        assert kv.convergence_order(worst[1e-3], worst[5e-4]) > 1.9

    def test_traveling_wave_translation(self):
        spec = kv.SolitonSpec.from_c([1.3], [0.7])
        rng = np.random.default_rng(31)
        for _ in range(20):
            x, t = rng.uniform(-3, 3), rng.uniform(-2, 2)
            assert abs(
                kv.q_soliton(spec, x, t) - kv.q_soliton(spec, x + spec.k[0] ** 2 * t, 0.0)
            ) < 1e-10

    def test_tau_exceeds_one(self):
        spec = kv.SolitonSpec.from_c([0.6, 1.4], [1.0, 2.0])
        vessel = kv.build_soliton(spec, self_check=False)
        rng = np.random.default_rng(37)
        for _ in range(20):
            assert kv.tau(vessel, rng.uniform(-3, 3), rng.uniform(-1, 1)) > 1.0


class TestOneSolitonReference:
    def test_origin(self):
        assert kv.one_soliton_reference(1.0, 1.0, 0.0, 0.0) == pytest.approx(-2.0, abs=1e-15)

    def test_decay(self):
        assert abs(kv.one_soliton_reference(1.0, 1.0, 50.0, 0.0)) < 1e-30
        assert abs(kv.one_soliton_reference(1.0, 1.0, -50.0, 0.0)) < 1e-30

    def test_logistic_form_oracle(self):
        # q = -8 k^2 u/(1+u)^2 with u = c e^{2(kx + k^3 t)}
        rng = np.random.default_rng(41)
        for _ in range(20):
            k = rng.uniform(0.3, 2.0)
            c = rng.uniform(0.2, 3.0)
            x, t = rng.uniform(-5, 5), rng.uniform(-1, 1)
            u = c * np.exp(2 * (k * x + k**3 * t))
            expected = -8.0 * k**2 * u / (1.0 + u) ** 2
            assert kv.one_soliton_reference(k, c, x, t) == pytest.approx(expected, rel=1e-12)

    def test_equals_second_log_derivative(self):
        # -2 d^2/dx^2 log(1 + c e^{2 k x + 2 k^3 t}) by centered differences
        k, c, x, t, h = 0.9, 1.4, 0.6, -0.2, 1e-4
        logtau = lambda z: np.log(1.0 + c * np.exp(2 * k * z + 2 * k**3 * t))
        fd = -2.0 * (logtau(x + h) - 2 * logtau(x) + logtau(x - h)) / h**2
        assert kv.one_soliton_reference(k, c, x, t) == pytest.approx(fd, abs=1e-6)

    def test_profile_identity_on_grid(self):
        xs = np.linspace(-10, 10, 201)[:, None]
        ts = np.linspace(-2, 2, 41)[None, :]
        for k in (0.5, 1.0, 2.0):
            spec = kv.SolitonSpec.from_c([k], [1.0])
            diff = np.abs(kv.q_soliton(spec, xs, ts) - kv.one_soliton_reference(k, 1.0, xs, ts))
            assert diff.max() < 1e-8

    def test_rejects_bad_parameters(self):
        with pytest.raises(kv.InvalidSpecError):
            kv.one_soliton_reference(-1.0, 1.0, 0.0, 0.0)
        with pytest.raises(kv.InvalidSpecError):
            kv.one_soliton_reference(1.0, 0.0, 0.0, 0.0)


class TestOverflowRegime:
    def test_far_field_matches_reference(self):
        spec = kv.SolitonSpec.from_c([2.0], [1.0])
        xs = np.array([-300.0, -50.0, 3.9, 4.1, 50.0, 300.0])
        diff = np.abs(kv.q_soliton(spec, xs, 1.5)
                      - kv.one_soliton_reference(2.0, 1.0, xs, 1.5))
        assert diff.max() < 1e-12

    def test_beta_saturates(self):
        # beta -> -2 sum k on the right tail, -> 0 on the left tail
        spec = kv.SolitonSpec.from_c([0.5, 1.5], [1.0, 1.0])
        assert kv.beta_soliton(spec, 200.0, 0.0) == pytest.approx(-2 * (0.5 + 1.5), abs=1e-10)
        assert abs(kv.beta_soliton(spec, -200.0, 0.0)) < 1e-30

    def test_branches_agree_at_switch(self):
        # continuity of beta/q across the plain <-> scaled changeover
        spec = kv.SolitonSpec.from_c([1.0, 1.6], [1.0, 0.5])
        xs = np.linspace(3.0, 7.0, 2001)  # max phase crosses 8 inside
        q = kv.q_soliton(spec, xs, 0.0)
        beta = kv.beta_soliton(spec, xs, 0.0)
        assert np.all(np.isfinite(q)) and np.all(np.isfinite(beta))
        # second difference stays at truncation scale: no jump at the seam
        d2 = np.abs(np.diff(q, n=2))
        assert d2.max() < 1e-4

    def test_log_tau_deep_regime(self):
        spec = kv.SolitonSpec.from_c([1.0, 2.0], [1.0, 1.0])
        logabs, sign = kv.log_tau_soliton(spec, 500.0, 0.0)
        assert sign == 1.0
        # tau ~ c1 c2 a12 e^{2(k1+k2)x}: log tau ~ 2*3*500 + log(a12)
        a12 = (1.0 - 2.0) ** 2 / (1.0 + 2.0) ** 2
        assert logabs == pytest.approx(3000.0 + np.log(a12), abs=1e-6)
