"""Pure-Python/numpy elliptic kernels (fallback when the compiled core is absent).

All routines take the *modulus* ``k`` (not the parameter ``k**2``) and assume
``0 <= k <= 1``; argument checking is done by :mod:`cnoidal.elliptic`.
"""
import math

import numpy as np

AGM_RTOL = 1e-15
_MAX_AGM = 64


def _kprime(k):
    # (1-k)(1+k) keeps digits when k is close to 1
    return math.sqrt((1.0 - k) * (1.0 + k))


def agm_table(k):
    """Arithmetic-geometric mean sequence started at (1, k').

    Returns the lists ``a`` and ``c`` (with ``c[n] = (a[n-1] - b[n-1]) / 2``)
    down to the iterate where successive means agree to ``AGM_RTOL``.  At least
    one step is always taken so the descending recursion has something to do.
    """
    a = [1.0]
    c = [k]
    b = _kprime(k)
    for _ in range(_MAX_AGM):
        an = 0.5 * (a[-1] + b)
        cn = 0.5 * (a[-1] - b)
        b = math.sqrt(a[-1] * b)
        a.append(an)
        c.append(cn)
        if abs(cn) <= AGM_RTOL * an:
            break
    return a, c


def ellipk(k):
    """Complete elliptic integral of the first kind K(k) by AGM."""
    if k == 0.0:
        return 0.5 * math.pi
    a, _ = agm_table(k)
    return 0.5 * math.pi / a[-1]


def _reduce(u, k):
    quarter = ellipk(k)
    period = 4.0 * quarter
    return u - period * np.round(u / period)


def sncndn(u, k):
    """(sn, cn, dn) at a scalar argument via the descending AGM recursion."""
    if k == 0.0:
        return math.sin(u), math.cos(u), 1.0
    if k == 1.0:
        sech = 1.0 / math.cosh(u)
        return math.tanh(u), sech, sech
    u = float(_reduce(u, k))
    a, c = agm_table(k)
    n = len(a) - 1
    phi = (2.0 ** n) * a[n] * u
    for j in range(n, 0, -1):
        phi = 0.5 * (phi + math.asin(c[j] / a[j] * math.sin(phi)))
    sphi, cphi = math.sin(phi), math.cos(phi)
    # 1 - k^2 sn^2 is exact at sn = 0; k'^2 + k^2 cn^2 avoids cancellation near sn = 1
    if sphi * sphi < 0.5:
        return sphi, cphi, math.sqrt(1.0 - k * k * sphi * sphi)
    return sphi, cphi, math.sqrt((1.0 - k) * (1.0 + k) + k * k * cphi * cphi)


def sncndn_array(u, k):
    """Vectorized :func:`sncndn` over a 1-D float array."""
    u = np.asarray(u, dtype=float)
    if k == 0.0:
        return np.sin(u), np.cos(u), np.ones_like(u)
    if k == 1.0:
        sech = 1.0 / np.cosh(u)
        return np.tanh(u), sech, sech
    u = _reduce(u, k)
    a, c = agm_table(k)
    n = len(a) - 1
    phi = (2.0 ** n) * a[n] * u
    for j in range(n, 0, -1):
        phi = 0.5 * (phi + np.arcsin(c[j] / a[j] * np.sin(phi)))
    sphi, cphi = np.sin(phi), np.cos(phi)
    s2 = sphi * sphi
    dn2 = np.where(s2 < 0.5, 1.0 - k * k * s2, (1.0 - k) * (1.0 + k) + k * k * cphi * cphi)
    return sphi, cphi, np.sqrt(dn2)
