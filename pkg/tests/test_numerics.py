import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from majorana1d.core import (
    PERIODIC,
    WHOLE_LINE,
    BracketError,
    ConfiningBC,
    NumericalError,
    PhysicsParams,
    ScalarPotential,
)
from majorana1d.numerics import (
    bisect,
    count_zero_modes,
    fd_hamiltonian_spectrum,
    hermite,
    positive_levels,
    staggered_operator,
    tan_spectrum_roots,
    tanh_root,
)

# Frozen reference roots (dense sign scan plus bisection, cross-checked by Newton).
TAN_PLUS_ONE = 4.493409457909064       # tan z = z
TAN_MINUS_ONE = 2.028757838110434      # tan z = -z
TANH_HALF = 1.915008048528480          # tanh z = z / 2


class TestBisect:
    def test_linear(self):
        r = bisect(lambda z: z - 1.0, 0.0, 2.0)
        assert abs(r.root - 1.0) <= 1e-10
        assert r.bracket[0] < r.root < r.bracket[1] or r.bracket[1] - r.bracket[0] <= 1e-10

    def test_tan_equals_z(self):
        r = bisect(lambda z: math.tan(z) - z, math.pi + 0.1, 1.5 * math.pi - 0.01)
        assert abs(r.root - TAN_PLUS_ONE) < 1e-9
        assert abs(r.residual) <= 1e-10

    def test_cos(self):
        assert abs(bisect(math.cos, 1.0, 2.0).root - math.pi / 2) < 1e-10

    def test_no_sign_change(self):
        with pytest.raises(BracketError):
            bisect(lambda z: z * z + 1, -1.0, 1.0)

    def test_non_finite(self):
        with pytest.raises(NumericalError):
            bisect(lambda z: math.nan, 0.0, 1.0)

    def test_bad_interval(self):
        with pytest.raises(ValueError):
            bisect(lambda z: z, 1.0, 0.0)
        with pytest.raises(ValueError):
            bisect(lambda z: z, -1.0, 1.0, tol=0.0)

    def test_deterministic(self):
        f = lambda z: math.tan(z) - 0.3 * z  # noqa: E731
        assert bisect(f, 3.2, 4.7) == bisect(f, 3.2, 4.7)


class TestTanRoots:
    def test_first_roots(self):
        assert abs(tan_spectrum_roots(1, 1.0, 1)[0].root - TAN_PLUS_ONE) < 1e-9
        assert abs(tan_spectrum_roots(-1, 1.0, 1)[0].root - TAN_MINUS_ONE) < 1e-9

    @pytest.mark.parametrize("sign", [1, -1])
    @pytest.mark.parametrize("lam", [0.05, 0.5, 1.0, 2.0, 7.0])
    def test_residual_and_ordering(self, sign, lam):
        roots = tan_spectrum_roots(sign, lam, 8)
        z = np.array([r.root for r in roots])
        assert np.all(z > 0) and np.all(np.diff(z) > 0)
        for r in roots:
            assert abs(math.tan(r.root) - sign * lam * r.root) < 1e-10

    @pytest.mark.parametrize("sign", [1, -1])
    @pytest.mark.parametrize("lam", [0.3, 1.0, 3.0])
    def test_one_root_per_branch_against_dense_scan(self, sign, lam):
        roots = tan_spectrum_roots(sign, lam, 6)
        found = []
        for j in range(0, 8):
            lo = 1e-9 if j == 0 else (j - 0.5) * math.pi + 1e-9
            z = np.linspace(lo, (j + 0.5) * math.pi - 1e-9, 10_000)
            f = np.tan(z) - sign * lam * z
            found += list(z[:-1][np.sign(f[:-1]) * np.sign(f[1:]) < 0])
        found = np.array(found[:6])
        np.testing.assert_allclose([r.root for r in roots], found, atol=1e-3)
        branches = [math.floor(r.root / math.pi + 0.5) for r in roots]
        assert len(set(branches)) == len(branches)

    def test_small_branch_root_when_lam_exceeds_one(self):
        # tan z = 2 z has a root in (0, pi/2) besides those on later branches.
        assert tan_spectrum_roots(1, 2.0, 1)[0].root < math.pi / 2

    def test_validation(self):
        with pytest.raises(ValueError):
            tan_spectrum_roots(0, 1.0, 1)
        with pytest.raises(ValueError):
            tan_spectrum_roots(1, -1.0, 1)
        with pytest.raises(ValueError):
            tan_spectrum_roots(1, 1.0, 0)


class TestTanhRoot:
    def test_half(self):
        r = tanh_root(0.5)
        assert abs(r.root - TANH_HALF) < 1e-9
        assert abs(math.tanh(r.root) - r.root / 2) < 1e-10

    def test_absent_for_large_lambda(self):
        assert tanh_root(2.0) is None
        assert tanh_root(1.0) is None

    def test_near_one_matches_expansion(self):
        r = tanh_root(0.99)
        assert r is not None and r.root < 0.5
        assert abs(r.root - math.sqrt(3 * 0.01)) < 0.01

    @pytest.mark.parametrize("lam", np.round(np.arange(0.1, 2.0, 0.1), 2))
    def test_presence_iff_lambda_below_one(self, lam):
        assert (tanh_root(lam) is not None) == (lam < 1)


class TestHermite:
    def test_values(self):
        assert hermite(0, 3.7) == 1.0
        assert hermite(1, 2.0) == 4.0
        assert hermite(3, 1.0) == -4.0
        np.testing.assert_array_equal(hermite(0, np.zeros(3)), np.ones(3))

    def test_negative_index(self):
        with pytest.raises(ValueError):
            hermite(-1, 0.0)

    @settings(max_examples=50)
    @given(st.integers(1, 10), st.floats(-4, 4))
    def test_derivative_identity(self, N, x):
        h = 1e-5
        d = (hermite(N, x + h) - hermite(N, x - h)) / (2 * h)
        expected = 2 * N * hermite(N - 1, x)
        assert abs(d - expected) <= 1e-6 * max(1.0, abs(expected)) * 10 ** (N / 4)

    @pytest.mark.parametrize("N", range(2, 9))
    def test_against_numpy(self, N):
        x = np.linspace(-3, 3, 13)
        ref = np.polynomial.hermite.hermval(x, [0] * N + [1])
        np.testing.assert_allclose(hermite(N, x), ref, rtol=1e-12)


class TestOracle:
    def test_periodic_free(self):
        P = PhysicsParams(L=2 * math.pi)
        E = positive_levels(fd_hamiltonian_spectrum(ScalarPotential.zero(), PERIODIC, P, 4000, 14), 5)
        np.testing.assert_allclose(E, [1, math.sqrt(2), math.sqrt(2), math.sqrt(5), math.sqrt(5)],
                                   rtol=1e-3)

    @pytest.mark.parametrize("bc", [ConfiningBC.DIRICHLET_LOWER, ConfiningBC.DIRICHLET_UPPER])
    def test_dirichlet_box(self, bc):
        P = PhysicsParams(L=math.pi)
        E = fd_hamiltonian_spectrum(ScalarPotential.zero(), bc, P, 2000, 12)
        np.testing.assert_allclose(positive_levels(E, 4), np.sqrt(np.arange(1, 5) ** 2 + 1), rtol=1e-3)

    def test_pm_pairs_for_zero_potential(self):
        P = PhysicsParams(L=2.0)
        E = fd_hamiltonian_spectrum(ScalarPotential.zero(), ConfiningBC.MIXED_B, P, 1000, 10)
        np.testing.assert_allclose(np.sort(E[E > 0]), np.sort(-E[E < 0]), rtol=1e-12)

    def test_linear_levels_and_zero_mode(self):
        P = PhysicsParams(k=1.0)
        E = fd_hamiltonian_spectrum(ScalarPotential.linear(1.0), WHOLE_LINE, P, 4000, 11)
        assert count_zero_modes(E) == 1
        np.testing.assert_allclose(positive_levels(E, 5), np.sqrt(2 * np.arange(1, 6)), rtol=1e-3)

    def test_dense_hamiltonian_is_hermitian(self):
        op = staggered_operator(ScalarPotential.zero(), ConfiningBC.MIXED_A, PhysicsParams(), 20)
        H = op.hamiltonian()
        assert np.max(np.abs(H - H.conj().T)) == 0.0

    def test_input_errors(self):
        P = PhysicsParams(k=1.0)
        with pytest.raises(ValueError):
            fd_hamiltonian_spectrum(ScalarPotential.zero(), PERIODIC, P, 100, 3)
        with pytest.raises(ValueError):
            fd_hamiltonian_spectrum(ScalarPotential.zero(), "robin", P, 600, 3)
        with pytest.raises(ValueError):
            fd_hamiltonian_spectrum(ScalarPotential.linear(1.0), PERIODIC, P, 600, 3)

    def test_positive_levels_requires_enough(self):
        with pytest.raises(ValueError):
            positive_levels([-1.0, 0.0, 1.0], 2)
