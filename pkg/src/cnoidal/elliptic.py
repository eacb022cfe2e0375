"""Jacobi elliptic functions sn, cn, dn and the complete integral K.

Every function here takes the elliptic **modulus** ``m`` (the quantity that
appears as ``m**2 sin**2 t`` under the integral defining the amplitude), not
the parameter ``m**2`` used by e.g. :func:`scipy.special.ellipj`.  Use
:func:`modulus_to_parameter` / :func:`parameter_to_modulus` when crossing that
boundary.

Scalar evaluations run in a compiled kernel when it is available and in a
numpy fallback otherwise; :data:`BACKEND` tells which one was picked.  Array
evaluations always use the vectorized numpy kernel.  Set
``CNOIDAL_PURE_PYTHON=1`` to force the fallback.
"""
import math
import os
from dataclasses import dataclass

import numpy as np

from cnoidal import _pykernels
from cnoidal.errors import DomainError

if os.environ.get("CNOIDAL_PURE_PYTHON"):
    _kernels = _pykernels
    BACKEND = "python"
else:
    try:
        from cnoidal import _ckernels as _kernels
        BACKEND = "cython"
    except ImportError:  # extension not built
        _kernels = _pykernels
        BACKEND = "python"

# Arrays always take the numpy path: its SIMD sin/arcsin outrun the compiled
# scalar loop (see benchmarks/bench_kernels.py), which only wins per call.
_array_kernels = _pykernels


@dataclass(frozen=True)
class JacobiTriple:
    sn: float
    cn: float
    dn: float


@dataclass(frozen=True)
class CnPowerDerivs:
    """``cn**r(lam*xi, m)`` and its first three derivatives in ``xi``."""

    value: float
    d1: float
    d2: float
    d3: float


def modulus_to_parameter(m):
    """Modulus k -> parameter k**2."""
    return m * m


def parameter_to_modulus(p):
    """Parameter k**2 -> modulus k."""
    if p < 0 or p > 1:
        raise DomainError(f"elliptic parameter must lie in [0, 1], got {p}")
    return math.sqrt(p)


def _check_modulus(m):
    if not (0.0 <= m <= 1.0):
        raise DomainError(f"elliptic modulus must lie in [0, 1], got {m}")
    return float(m)


def complete_K(m):
    """Quarter period K(m) of cn, computed by the arithmetic-geometric mean.

    Raises :class:`DomainError` for ``m`` outside ``[0, 1)``; K diverges
    logarithmically as ``m -> 1``.
    """
    if not (0.0 <= m < 1.0):
        raise DomainError(f"complete_K needs 0 <= m < 1, got {m}")
    return _kernels.ellipk(float(m))


def jacobi_triple(u, m):
    """(sn, cn, dn)(u, m) for scalar ``u``.

    ``m = 0`` and ``m = 1`` are dispatched to the trigonometric and hyperbolic
    limits exactly.
    """
    m = _check_modulus(m)
    u = float(u)
    if not math.isfinite(u):
        raise DomainError(f"argument must be finite, got {u}")
    return JacobiTriple(*_kernels.sncndn(u, m))


def jacobi_arrays(u, m):
    """Vectorized form of :func:`jacobi_triple`; returns three arrays shaped like ``u``."""
    m = _check_modulus(m)
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)):
        raise DomainError("arguments must be finite")
    sn, cn, dn = _array_kernels.sncndn_array(u.ravel(), m)
    shape = u.shape
    return (np.asarray(sn).reshape(shape), np.asarray(cn).reshape(shape),
            np.asarray(dn).reshape(shape))


def _sncndn(u, m):
    if np.ndim(u) == 0:
        t = _kernels.sncndn(float(u), m)
        return t
    return jacobi_arrays(u, m)


def _cnpow(cn, p):
    # p may be negative only when its coefficient vanishes; callers skip those
    return cn ** p if p else 1.0


def cn_power_derivs(r, lam, xi, m):
    """Derivatives of ``cn**r(lam*xi, m)`` from the closed-form power rules.

    With C, S, D the Jacobi functions at ``lam*xi``:

    * d/dxi C**r = -r lam C**(r-1) S D
    * d2/dxi2 C**r = -r lam**2 [(r+1) m**2 C**(r+2) + r(1-2m**2) C**r
      + (r-1)(m**2-1) C**(r-2)]
    * d3/dxi3 C**r = r lam**3 S D [(r+1)(r+2) m**2 C**(r+1)
      + r**2 (1-2m**2) C**(r-1) + (r-1)(r-2)(m**2-1) C**(r-3)]

    ``xi`` may be a scalar or an array.
    """
    if int(r) != r or r < 0:
        raise DomainError(f"power r must be a nonnegative integer, got {r}")
    r = int(r)
    m = _check_modulus(m)
    if r == 0:
        if np.ndim(xi):
            z = np.zeros(np.shape(xi))
            return CnPowerDerivs(z + 1.0, z, z.copy(), z.copy())
        return CnPowerDerivs(1.0, 0.0, 0.0, 0.0)
    sn, cn, dn = _sncndn(lam * np.asarray(xi, dtype=float) if np.ndim(xi) else lam * xi, m)
    m2 = m * m
    sd = sn * dn
    value = _cnpow(cn, r)
    d1 = -r * lam * _cnpow(cn, r - 1) * sd
    d2 = (r + 1) * m2 * _cnpow(cn, r + 2) + r * (1 - 2 * m2) * value
    if r >= 2:
        d2 = d2 + (r - 1) * (m2 - 1) * _cnpow(cn, r - 2)
    d2 = -r * lam ** 2 * d2
    d3 = (r + 1) * (r + 2) * m2 * _cnpow(cn, r + 1) + r * r * (1 - 2 * m2) * _cnpow(cn, r - 1)
    if r >= 3:
        d3 = d3 + (r - 1) * (r - 2) * (m2 - 1) * _cnpow(cn, r - 3)
    d3 = r * lam ** 3 * sd * d3
    return CnPowerDerivs(value, d1, d2, d3)
