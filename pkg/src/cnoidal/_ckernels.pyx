# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled elliptic kernels; same contract as :mod:`cnoidal._pykernels`."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, sin, cos, asin, tanh, cosh, round, fabs, M_PI, ldexp

cnp.import_array()

DEF MAX_AGM = 64
cdef double AGM_RTOL = 1e-15


cdef int _agm(double k, double* a, double* c) nogil:
    cdef double b = sqrt((1.0 - k) * (1.0 + k))
    cdef double an, cn
    cdef int n = 0
    a[0] = 1.0
    c[0] = k
    while n < MAX_AGM - 1:
        an = 0.5 * (a[n] + b)
        cn = 0.5 * (a[n] - b)
        b = sqrt(a[n] * b)
        n += 1
        a[n] = an
        c[n] = cn
        if fabs(cn) <= AGM_RTOL * an:
            break
    return n


cdef double _ellipk(double k) nogil:
    cdef double a[MAX_AGM]
    cdef double c[MAX_AGM]
    cdef int n
    if k == 0.0:
        return 0.5 * M_PI
    n = _agm(k, a, c)
    return 0.5 * M_PI / a[n]


cdef inline void _descend(double u, double k, int n, double* a, double* r,
                          double period, double* sn, double* cn, double* dn) nogil:
    # r[j] = c[j] / a[j], precomputed once per modulus
    cdef double phi
    cdef int j
    u = u - period * round(u / period)
    phi = ldexp(a[n] * u, n)
    for j in range(n, 0, -1):
        phi = 0.5 * (phi + asin(r[j] * sin(phi)))
    sn[0] = sin(phi)
    cn[0] = cos(phi)
    if sn[0] * sn[0] < 0.5:
        dn[0] = sqrt(1.0 - k * k * sn[0] * sn[0])
    else:
        dn[0] = sqrt((1.0 - k) * (1.0 + k) + k * k * cn[0] * cn[0])


cdef inline void _ratios(int n, double* a, double* c) nogil:
    cdef int j
    for j in range(1, n + 1):
        c[j] = c[j] / a[j]


def ellipk(double k):
    return _ellipk(k)


def sncndn(double u, double k):
    cdef double a[MAX_AGM]
    cdef double c[MAX_AGM]
    cdef double s, cc, d, sech
    cdef int n
    if k == 0.0:
        return sin(u), cos(u), 1.0
    if k == 1.0:
        sech = 1.0 / cosh(u)
        return tanh(u), sech, sech
    n = _agm(k, a, c)
    _ratios(n, a, c)
    _descend(u, k, n, a, c, 2.0 * M_PI / a[n], &s, &cc, &d)
    return s, cc, d


def sncndn_array(u, double k):
    cdef double[::1] uu = np.ascontiguousarray(u, dtype=np.float64).ravel()
    cdef Py_ssize_t i, size = uu.shape[0]
    out_sn = np.empty(size)
    out_cn = np.empty(size)
    out_dn = np.empty(size)
    cdef double[::1] vs = out_sn
    cdef double[::1] vc = out_cn
    cdef double[::1] vd = out_dn
    cdef double a[MAX_AGM]
    cdef double c[MAX_AGM]
    cdef double period, sech
    cdef int n
    if k == 0.0:
        return np.sin(uu), np.cos(uu), np.ones(size)
    if k == 1.0:
        with nogil:
            for i in range(size):
                sech = 1.0 / cosh(uu[i])
                vs[i] = tanh(uu[i])
                vc[i] = sech
                vd[i] = sech
        return out_sn, out_cn, out_dn
    n = _agm(k, a, c)
    _ratios(n, a, c)
    period = 2.0 * M_PI / a[n]
    with nogil:
        for i in range(size):
            _descend(uu[i], k, n, a, c, period, &vs[i], &vc[i], &vd[i])
    return out_sn, out_cn, out_dn
