"""Collected cn-power coefficients k[j, q] of the reduced ODE systems.

For the quadratic ansatz ``f = d0 + d1 C + d2 C**2``, ``g = h0 + h1 C + h2 C**2``
(``C = cn(lam*xi, m)``) each associated ODE collapses to

    row 1:  S D * sum_q k[1, q] C**q     (q = 0..3)
    row 2:        sum_q k[2, q] C**q     (q = 0..4)
    row 3:  S D * sum_q k[3, q] C**q     (q = 0..3)

up to a row normalization (see :data:`cnoidal.model.ROW_NORMALIZATION`).  The tables below
are written term by term in the order they are usually printed, with no
simplification, so that every entry can be audited against the published
polynomials and so that the largest single term is available as a scale for
relative "is it zero" checks.

Each table function takes the plain scalars and returns a dict mapping
``(j, q)`` to a tuple of terms.  Only ``+ - * /`` and integer powers are used,
so the functions also accept sympy symbols.
"""


def _u_rows_kdv(a, b, mu0, mu1, B, w, s, lam, m, d0, d1, d2, h0, h1, h2):
    # u-equation with third-derivative dispersion a0 u_xxx
    L2 = lam ** 2
    m2 = m ** 2
    return {
        (1, 3): (4 * L2 * a * d2 * m2, -2 * d2 * h2 / 3),
        (1, 2): (L2 * a * d1 * m2, -d1 * h2 / 2, -d2 * h1 / 2),
        (1, 1): (d2 * a * B ** 2, -8 * L2 * a * d2 * m2 / 3, 2 * d2 * b * B / 3,
                 4 * d2 * a * L2 / 3, -d0 * h2 / 3, -d1 * h1 / 3,
                 -d2 * h0 / 3, -d2 * mu0 / 3, d2 * s / 3),
        (1, 0): (B ** 2 * a * d1 / 2, -L2 * a * d1 * m2 / 3, B * b * d1 / 3,
                 L2 * a * d1 / 6, -d0 * h1 / 6,
                 -d1 * h0 / 6, -d1 * mu0 / 6, d1 * s / 6),
        (2, 4): (-18 * B * a * d2 * L2 * m2, -6 * b * d2 * L2 * m2, B * d2 * h2,
                 d2 * h2 * mu1),
        (2, 3): (-6 * B * a * d1 * L2 * m2, -2 * b * d1 * L2 * m2, B * d1 * h2,
                 B * d2 * h1, d1 * h2 * mu1, d2 * h1 * mu1),
        (2, 2): (-B ** 3 * a * d2, 24 * B * a * d2 * L2 * m2, -B ** 2 * b * d2,
                 -12 * B * a * d2 * L2, 8 * b * d2 * L2 * m2, B * d0 * h2,
                 B * d1 * h1, B * d2 * h0, B * d2 * mu0, -B * d2 * s,
                 -4 * b * d2 * L2, d0 * h2 * mu1, d1 * h1 * mu1,
                 d2 * h0 * mu1, d2 * w),
        (2, 1): (-B ** 3 * a * d1, 6 * B * a * d1 * L2 * m2, -B ** 2 * b * d1,
                 -3 * B * a * d1 * L2, 2 * b * d1 * L2 * m2, B * d0 * h1,
                 B * d1 * h0, B * d1 * mu0, -B * d1 * s,
                 -b * d1 * L2, d0 * h1 * mu1, d1 * h0 * mu1, d1 * w),
        (2, 0): (-B ** 3 * a * d0, -6 * B * a * d2 * L2 * m2, -B ** 2 * b * d0,
                 6 * B * a * d2 * L2, -2 * b * d2 * L2 * m2, B * d0 * h0,
                 B * d0 * mu0, -B * d0 * s, 2 * b * d2 * L2, d0 * h0 * mu1,
                 d0 * w),
    }


def _u_rows_bbm(a, b, mu0, mu1, B, w, s, lam, m, d0, d1, d2, h0, h1, h2):
    # u-equation with mixed dispersion -a1 u_xxt
    L2 = lam ** 2
    m2 = m ** 2
    return {
        (1, 3): (-2 * d2 * h2 / 3, 4 * L2 * a * d2 * m2 * s),
        (1, 2): (-d1 * h2 / 2, -d2 * h1 / 2, L2 * a * d1 * m2 * s),
        (1, 1): (2 * B * b * d2 / 3, -d0 * h2 / 3, -d1 * h1 / 3, -d2 * h0 / 3,
                 -d2 * mu0 / 3, d2 * s / 3,
                 4 * L2 * a * d2 * s / 3, B ** 2 * a * d2 * s,
                 -2 * B * a * d2 * w / 3, -8 * L2 * a * d2 * m2 * s / 3),
        (1, 0): (B * b * d1 / 3, -d0 * h1 / 6, -d1 * h0 / 6, -d1 * mu0 / 6,
                 d1 * s / 6, B ** 2 * a * d1 * s / 2,
                 -B * a * d1 * w / 3, -L2 * a * d1 * m2 * s / 3,
                 L2 * a * d1 * s / 6),
        (2, 4): (-18 * B * a * d2 * L2 * m2 * s, 6 * a * d2 * L2 * m2 * w,
                 -6 * b * d2 * L2 * m2, B * d2 * h2, d2 * h2 * mu1),
        (2, 3): (-6 * B * a * d1 * L2 * m2 * s, 2 * a * d1 * L2 * m2 * w,
                 -2 * b * d1 * L2 * m2, B * d1 * h2, B * d2 * h1,
                 d1 * h2 * mu1, d2 * h1 * mu1),
        (2, 2): (6 * B * a * d2 * L2 * m2 * s,
                 6 * (-B * (-m2 + 1) + B * m2) * a * d2 * L2 * s,
                 -6 * B * (-m2 + 1) * a * d2 * L2 * s,
                 -2 * a * d2 * L2 * m2 * w, -B ** 3 * a * d2 * s,
                 B ** 2 * a * d2 * w, -2 * (2 * m2 - 1) * a * d2 * L2 * w,
                 2 * (-m2 + 1) * a * d2 * L2 * w, 2 * b * d2 * L2 * m2,
                 B * d2 * mu0, B * d0 * h2, d1 * h1 * mu1, d2 * h0 * mu1,
                 -B ** 2 * b * d2, d2 * w, -B * d2 * s, d0 * h2 * mu1,
                 B * d1 * h1, B * d2 * h0, 2 * (2 * m2 - 1) * b * d2 * L2,
                 -2 * (-m2 + 1) * b * d2 * L2),
        (2, 1): (3 * B * a * d1 * L2 * m2 * s, -3 * B * (-m2 + 1) * a * d1 * L2 * s,
                 -a * d1 * L2 * m2 * w, B ** 2 * a * d1 * w,
                 -B ** 3 * a * d1 * s, (-m2 + 1) * a * d1 * L2 * w,
                 b * d1 * L2 * m2, -B ** 2 * b * d1, B * d0 * h1,
                 B * d1 * h0, B * d1 * mu0, -B * d1 * s, d0 * h1 * mu1,
                 d1 * h0 * mu1, d1 * w, -(-m2 + 1) * b * d1 * L2),
        (2, 0): (-B ** 3 * a * d0 * s, B ** 2 * a * d0 * w, d0 * w,
                 -B ** 2 * b * d0, B * d0 * h0, B * d0 * mu0, -B * d0 * s,
                 d0 * h0 * mu1, 6 * B * (-m2 + 1) * a * d2 * L2 * s,
                 -2 * (-m2 + 1) * a * d2 * L2 * w,
                 2 * (-m2 + 1) * b * d2 * L2),
    }


def _v_rows_kdv(c, s, lam, m, d0, d1, d2, h0, h1, h2):
    # v-equation with c v_xxx (KdV-KdV and BBM-KdV print identical rows)
    L2 = lam ** 2
    m2 = m ** 2
    return {
        (3, 3): (d2 ** 2 / 12, h2 ** 2 / 12, -L2 * c * h2 * m2),
        (3, 2): (-L2 * c * h1 * m2 / 4, d1 * d2 / 8, h1 * h2 / 8),
        (3, 1): (-L2 * c * h2 / 3, 2 * L2 * c * h2 * m2 / 3, d0 * d2 / 12,
                 h0 * h2 / 12, -h2 * s / 12, d1 ** 2 / 24,
                 h1 ** 2 / 24, h2 / 12),
        (3, 0): (L2 * c * h1 * m2 / 12, d0 * d1 / 24, h0 * h1 / 24,
                 -h1 * s / 24, -L2 * c * h1 / 24, h1 / 24),
    }


def _v_rows_bbm_bbm(c, s, lam, m, d0, d1, d2, h0, h1, h2):
    L2 = lam ** 2
    m2 = m ** 2
    return {
        (3, 3): (24 * c * h2 * L2 * m2 * s, -2 * d2 ** 2, -2 * h2 ** 2),
        (3, 2): (6 * L2 * c * h1 * m2 * s, -3 * d1 * d2, -3 * h1 * h2),
        (3, 1): (-16 * c * h2 * L2 * m2 * s, 8 * c * h2 * L2 * s, -2 * d0 * d2,
                 -d1 ** 2, -2 * h0 * h2, -h1 ** 2, 2 * h2 * s, -2 * h2),
        (3, 0): (-2 * L2 * c * h1 * m2 * s, L2 * c * h1 * s, -d0 * d1,
                 -h0 * h1, h1 * s, -h1),
    }


def _v_rows_kdv_bbm(c, s, lam, m, d0, d1, d2, h0, h1, h2):
    L2 = lam ** 2
    m2 = m ** 2
    return {
        (3, 3): (d2 ** 2 / 3, h2 ** 2 / 3, -4 * L2 * c * h2 * m2 * s),
        (3, 2): (d1 * d2 / 2, h1 * h2 / 2, -L2 * c * h1 * m2 * s),
        (3, 1): (d0 * d2 / 3, h0 * h2 / 3, -h2 * s / 3, -4 * L2 * c * h2 * s / 3,
                 d1 ** 2 / 6, h1 ** 2 / 6, h2 / 3,
                 8 * L2 * c * h2 * m2 * s / 3),
        (3, 0): (h1 / 6, -L2 * c * h1 * s / 6, d0 * d1 / 6, h0 * h1 / 6,
                 -h1 * s / 6, L2 * c * h1 * m2 * s / 3),
    }


# kind value -> (u-row table, v-row table); names follow SystemKind values
TABLES = {
    "kdv-kdv": (_u_rows_kdv, _v_rows_kdv),
    "bbm-bbm": (_u_rows_bbm, _v_rows_bbm_bbm),
    "kdv-bbm": (_u_rows_kdv, _v_rows_kdv_bbm),
    "bbm-kdv": (_u_rows_bbm, _v_rows_kdv),
}

KEYS = tuple([(1, q) for q in (3, 2, 1, 0)] + [(2, q) for q in (4, 3, 2, 1, 0)]
             + [(3, q) for q in (3, 2, 1, 0)])


def coefficient_terms(kind, a, b, c, mu0, mu1, B, w, s, lam, m,
                      d0, d1, d2, h0, h1, h2):
    """All 13 entries for ``kind`` as ``{(j, q): (term, term, ...)}``."""
    u_rows, v_rows = TABLES[kind]
    out = u_rows(a, b, mu0, mu1, B, w, s, lam, m, d0, d1, d2, h0, h1, h2)
    out.update(v_rows(c, s, lam, m, d0, d1, d2, h0, h1, h2))
    return {key: out[key] for key in KEYS}
