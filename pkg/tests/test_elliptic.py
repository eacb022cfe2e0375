import math
import os
import subprocess
import sys

import mpmath
import numpy as np
import pytest
import scipy.special
from hypothesis import given
from hypothesis import strategies as st

from cnoidal import elliptic
from cnoidal.elliptic import (
    complete_K,
    cn_power_derivs,
    jacobi_arrays,
    jacobi_triple,
    modulus_to_parameter,
    parameter_to_modulus,
)
from cnoidal.errors import DomainError
from tests.oracles import elliptic_oracle

MODULI = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99)
moduli = st.floats(0.0, 0.999)
args = st.floats(-50.0, 50.0)


class TestCompleteK:
    def test_zero_modulus_is_half_pi(self):
        assert complete_K(0.0) == math.pi / 2

    def test_near_one_is_finite_and_large(self):
        k = complete_K(1 - 1e-12)
        assert math.isfinite(k) and k > 14

    def test_matches_quadrature_at_half(self):
        assert complete_K(0.5) == pytest.approx(elliptic_oracle.quarter_period(0.5), rel=1e-12)

    @pytest.mark.parametrize("m", MODULI + (0.999, 0.999999))
    def test_matches_mpmath(self, m):
        with mpmath.workdps(30):
            want = float(mpmath.ellipk(mpmath.mpf(m) ** 2))
        assert complete_K(m) == pytest.approx(want, rel=1e-14)

    @pytest.mark.parametrize("m", [1.0, -0.1, 1.1])
    def test_rejects_outside_domain(self, m):
        with pytest.raises(DomainError):
            complete_K(m)

    def test_increases_towards_one(self):
        values = [complete_K(1 - 10.0 ** -j) for j in range(1, 13)]
        assert all(b > a for a, b in zip(values, values[1:]))


class TestJacobiTriple:
    @pytest.mark.parametrize("m", MODULI + (1.0,))
    def test_origin(self, m):
        t = jacobi_triple(0.0, m)
        assert (t.sn, t.cn, t.dn) == (0.0, 1.0, 1.0)

    @pytest.mark.parametrize("m", MODULI)
    def test_quarter_period(self, m):
        t = jacobi_triple(complete_K(m), m)
        assert t.sn == pytest.approx(1.0, abs=1e-15)
        assert t.cn == pytest.approx(0.0, abs=1e-15)
        assert t.dn == pytest.approx(math.sqrt(1 - m * m), abs=1e-15)

    def test_trig_limit_is_exact(self):
        t = jacobi_triple(0.7, 0.0)
        assert (t.sn, t.cn, t.dn) == (math.sin(0.7), math.cos(0.7), 1.0)

    def test_hyperbolic_limit_is_exact(self):
        t = jacobi_triple(0.7, 1.0)
        sech = 1 / math.cosh(0.7)
        assert (t.sn, t.cn, t.dn) == (math.tanh(0.7), sech, sech)

    def test_against_quadrature_inversion(self):
        t = jacobi_triple(1.3, 0.6)
        want = elliptic_oracle.sncndn(np.array([1.3]), 0.6)
        assert np.allclose((t.sn, t.cn, t.dn), [w[0] for w in want], rtol=0, atol=1e-13)

    @pytest.mark.parametrize("u", [math.inf, -math.inf, math.nan])
    def test_rejects_non_finite(self, u):
        with pytest.raises(DomainError):
            jacobi_triple(u, 0.5)
        with pytest.raises(DomainError):
            jacobi_arrays(np.array([0.0, u]), 0.5)

    @pytest.mark.parametrize("m", [-0.01, 1.01])
    def test_rejects_bad_modulus(self, m):
        with pytest.raises(DomainError):
            jacobi_triple(0.1, m)

    @pytest.mark.parametrize("m", MODULI)
    def test_against_scipy_parameter_convention(self, m):
        u = np.linspace(-10, 10, 201)
        sn, cn, dn, _ = scipy.special.ellipj(u, modulus_to_parameter(m))
        got = jacobi_arrays(u, m)
        for a, b in zip(got, (sn, cn, dn)):
            assert np.max(np.abs(a - b)) < 1e-12

    def test_scalar_and_array_paths_agree(self):
        u = np.linspace(-7, 7, 57)
        for m in (0.3, 0.95):
            sn, cn, dn = jacobi_arrays(u, m)
            for i, x in enumerate(u):
                t = jacobi_triple(x, m)
                assert abs(t.sn - sn[i]) < 1e-15 and abs(t.cn - cn[i]) < 1e-15
                assert abs(t.dn - dn[i]) < 1e-15

    def test_array_shape_is_preserved(self):
        u = np.zeros((3, 4))
        assert all(a.shape == (3, 4) for a in jacobi_arrays(u, 0.4))

    def test_large_arguments_reduce_to_a_period(self):
        m = 0.8
        K = complete_K(m)
        base = jacobi_arrays(np.array([0.3]), m)
        far = jacobi_arrays(np.array([0.3 + 400 * K]), m)
        assert all(abs(a[0] - b[0]) < 1e-10 for a, b in zip(base, far))

    def test_sech_limit_is_approached_monotonically(self):
        u = np.linspace(-5, 5, 401)
        gaps = [np.max(np.abs(jacobi_arrays(u, 1 - eps)[1] - 1 / np.cosh(u)))
                for eps in (1e-2, 1e-4, 1e-6)]
        assert gaps[0] > gaps[1] > gaps[2]


def test_parameter_conversion_round_trip():
    for m in (0.0, 0.3, 0.99, 1.0):
        assert parameter_to_modulus(modulus_to_parameter(m)) == pytest.approx(m, abs=1e-16)


@given(u=args, m=moduli)
def test_pythagorean_identities(u, m):
    t = jacobi_triple(u, m)
    assert abs(t.sn ** 2 + t.cn ** 2 - 1) <= 1e-12
    assert abs(t.dn ** 2 - (1 - m * m + m * m * t.cn ** 2)) <= 1e-12


@given(u=args, m=moduli)
def test_ranges(u, m):
    t = jacobi_triple(u, m)
    assert abs(t.sn) <= 1 and abs(t.cn) <= 1
    assert math.sqrt(1 - m * m) - 1e-15 <= t.dn <= 1 + 1e-15


@given(u=st.floats(-20, 20), m=moduli)
def test_real_period(u, m):
    K = complete_K(m)
    a = jacobi_triple(u, m)
    b = jacobi_triple(u + 4 * K, m)
    assert abs(a.cn - b.cn) <= 1e-10 and abs(a.sn - b.sn) <= 1e-10


@given(u=st.floats(-20, 20), m=moduli)
def test_parity(u, m):
    a = jacobi_triple(u, m)
    b = jacobi_triple(-u, m)
    assert b.sn == pytest.approx(-a.sn, abs=1e-15)
    assert b.cn == pytest.approx(a.cn, abs=1e-15)
    assert b.dn == pytest.approx(a.dn, abs=1e-15)


@given(u=st.floats(-10, 10), m=st.floats(0.01, 0.99))
def test_half_period_shift(u, m):
    # sn(u + 2K) = -sn(u), cn(u + 2K) = -cn(u)
    K = complete_K(m)
    a = jacobi_triple(u, m)
    b = jacobi_triple(u + 2 * K, m)
    assert abs(a.sn + b.sn) < 1e-12 and abs(a.cn + b.cn) < 1e-12


def _fd(F, x, h, order):
    if order == 1:
        return (F(x - 2 * h) - 8 * F(x - h) + 8 * F(x + h) - F(x + 2 * h)) / (12 * h)
    if order == 2:
        return (-F(x - 2 * h) + 16 * F(x - h) - 30 * F(x) + 16 * F(x + h) - F(x + 2 * h)) / (12 * h * h)
    return (F(x - 3 * h) - 8 * F(x - 2 * h) + 13 * F(x - h) - 13 * F(x + h)
            + 8 * F(x + 2 * h) - F(x + 3 * h)) / (8 * h ** 3)


class TestCnPowerDerivs:
    def test_constant_power(self):
        d = cn_power_derivs(0, 1.7, 0.4, 0.5)
        assert (d.value, d.d1, d.d2, d.d3) == (1.0, 0.0, 0.0, 0.0)

    def test_square_at_origin(self):
        d = cn_power_derivs(2, 1.0, 0.0, 0.5)
        assert d.value == 1.0 and d.d1 == 0.0 and d.d3 == 0.0
        assert d.d2 == pytest.approx(-2.0, abs=1e-15)

    def test_first_derivative_against_difference_quotient(self):
        cn = lambda xi: jacobi_triple(2 * xi, 0.3).cn
        d = cn_power_derivs(1, 2.0, 0.4, 0.3)
        assert d.d1 == pytest.approx(_fd(cn, 0.4, 1e-3, 1), abs=1e-8)

    @pytest.mark.parametrize("r", [1, 2, 3, 4])
    @pytest.mark.parametrize("m", [0.0, 0.5, 0.9])
    @pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
    def test_all_orders_against_finite_differences(self, r, m, lam):
        F = lambda xi: jacobi_arrays(lam * np.asarray(xi), m)[1] ** r
        xi = np.linspace(-2, 2, 17)
        d = cn_power_derivs(r, lam, xi, m)
        # steps are in units of the profile scale 1/lam
        for order, got, h in ((1, d.d1, 1e-3 / lam), (2, d.d2, 1e-3 / lam), (3, d.d3, 2.5e-3 / lam)):
            want = _fd(F, xi, h, order)
            scale = np.maximum(np.abs(want), lam ** order)
            assert np.max(np.abs(got - want) / scale) < 1e-7, (order, r, m, lam)

    @pytest.mark.parametrize("r,lam,xi,m", [(1, 1.3, 0.37, 0.7), (2, 0.8, -1.1, 0.95),
                                            (3, 2.0, 0.9, 0.2), (4, 1.0, 2.5, 0.5)])
    def test_against_high_precision_differentiation(self, r, lam, xi, m):
        with mpmath.workdps(40):
            f = lambda x: mpmath.ellipfun("cn", lam * x, m=mpmath.mpf(m) ** 2) ** r
            want = [float(mpmath.diff(f, mpmath.mpf(xi), n)) for n in range(4)]
        d = cn_power_derivs(r, lam, xi, m)
        assert np.allclose([d.value, d.d1, d.d2, d.d3], want, rtol=1e-12, atol=1e-13)

    @given(xi=st.floats(-5, 5), m=moduli, lam=st.floats(0.1, 3), r=st.integers(1, 4))
    def test_odd_derivatives_are_odd_in_xi(self, xi, m, lam, r):
        a = cn_power_derivs(r, lam, xi, m)
        b = cn_power_derivs(r, lam, -xi, m)
        assert b.d1 == pytest.approx(-a.d1, abs=1e-12 * max(1, lam) ** 1 * r)
        assert b.d3 == pytest.approx(-a.d3, abs=1e-11 * max(1, lam) ** 3 * r ** 3)

    @pytest.mark.parametrize("m", [0.0, 0.5, 0.9])
    def test_odd_derivatives_vanish_at_origin(self, m):
        for r in range(5):
            d = cn_power_derivs(r, 1.5, 0.0, m)
            assert d.d1 == 0 and d.d3 == 0

    @pytest.mark.parametrize("r", [-1, 1.5])
    def test_rejects_bad_power(self, r):
        with pytest.raises(DomainError):
            cn_power_derivs(r, 1.0, 0.0, 0.5)



@pytest.mark.skipif(elliptic.BACKEND != "cython", reason="compiled kernels not built")
class TestBackendsAgree:
    @given(u=st.floats(-100, 100), k=st.floats(0, 1))
    def test_scalar(self, u, k):
        from cnoidal import _ckernels, _pykernels
        a = _ckernels.sncndn(u, k)
        b = _pykernels.sncndn(u, k)
        assert max(abs(x - y) for x, y in zip(a, b)) <= 1e-14

    @given(k=st.floats(0, 0.999999))
    def test_arrays_and_quarter_period(self, k):
        from cnoidal import _ckernels, _pykernels
        u = np.linspace(-60, 60, 301)
        for a, b in zip(_ckernels.sncndn_array(u, k), _pykernels.sncndn_array(u, k)):
            assert np.max(np.abs(np.asarray(a) - b)) <= 1e-14
        assert _ckernels.ellipk(k) == pytest.approx(_pykernels.ellipk(k), rel=1e-15)


def test_environment_forces_numpy_backend():
    env = dict(os.environ, CNOIDAL_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import cnoidal; print(cnoidal.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
