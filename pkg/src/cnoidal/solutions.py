"""Closed-form traveling waves: cnoidal families, their sech^2 limits and the
trivial/semi-trivial catalogs, with domain checks and field evaluation.

All four systems share the structure

    f = d0 + d2 cn^2(lam xi, m),   g = h0 + h2 cn^2(lam xi, m),

where every coefficient is an explicit expression in the model constants,
the speed ``sigma``, the modulus ``m`` and the branch quantity
``R = +-sqrt(m^4 - m^2 + 1)``.  The sign of ``R`` is the only discrete
choice; for given constants exactly one sign makes ``lam^2`` positive.
"""
import enum
import math
from dataclasses import dataclass

import numpy as np

from cnoidal.elliptic import jacobi_arrays
from cnoidal.errors import ConstraintError, DomainError, NumericalError
from cnoidal.model import PhysicalParams, ProfileCoeffs, SystemKind, WaveParams

DEGENERATE_RTOL = 1e-12


class RSign(enum.IntEnum):
    PLUS = 1
    MINUS = -1

    @classmethod
    def parse(cls, value):
        if isinstance(value, str):
            value = value.strip()
            value = {"+": 1, "-": -1, "plus": 1, "minus": -1}.get(value.lower(), value)
        try:
            return cls(int(value))
        except (TypeError, ValueError):
            raise DomainError(f"R sign must be +1 or -1, got {value!r}") from None


class Branch(str, enum.Enum):
    """Solitary limits: ``mR1`` is m = R = 1, ``mNegR1`` is m = -R = 1."""

    M_R1 = "mR1"
    M_NEG_R1 = "mNegR1"

    @property
    def sign(self):
        return RSign.PLUS if self is Branch.M_R1 else RSign.MINUS

    @classmethod
    def for_sign(cls, sign):
        return cls.M_R1 if RSign(sign) is RSign.PLUS else cls.M_NEG_R1


def big_r(m, sign):
    """``sign * sqrt(m^4 - m^2 + 1)``; magnitude lies in [sqrt(3)/2, 1]."""
    if not 0.0 <= m <= 1.0:
        raise DomainError(f"elliptic modulus must lie in [0, 1], got {m}")
    m2 = m * m
    return int(RSign(sign)) * math.sqrt(m2 * m2 - m2 + 1.0)


# ---------------------------------------------------------------------------
# shared building blocks


def _kdv_n(p):
    # 3a^2 mu1^2 - 2ab mu1 - 4a mu0 - b^2 + 4a, the amplitude numerator of the KdV-u systems
    a, b = p.a, p.b
    return 3 * a * a * p.mu1 ** 2 - 2 * a * b * p.mu1 - 4 * a * p.mu0 - b * b + 4 * a


def _bbm_q(p, s):
    # amplitude numerator of the BBM-u systems (sigma dependent)
    a, b, mu0, mu1 = p.a, p.b, p.mu0, p.mu1
    return (4 * a ** 3 * mu1 ** 4 * s - 4 * a * a * b * mu1 ** 3 * s
            - a * a * mu0 ** 2 * mu1 ** 2 - 4 * a * a * mu0 * mu1 ** 2 * s
            + 8 * a * a * mu1 ** 2 * s + 2 * a * b * mu0 * mu1 - 4 * a * b * mu1 * s
            - 4 * a * mu0 * s + 4 * a * s - b * b)


def _bbm_w(p):
    return p.a * p.mu1 ** 2 + 1


def _kdv_b(p):
    return (p.a * p.mu1 - p.b) / (2 * p.a)


def _bbm_b(p, s):
    return (p.a * p.mu0 * p.mu1 - p.b) / (2 * p.a * s * _bbm_w(p))


def _kdv_omega(p, s):
    return -(p.a * p.mu1 ** 2 - p.mu1 * p.b - p.mu0 + s) * p.mu1


def _bbm_omega(p, s):
    return -(p.a * p.mu1 ** 2 * s - p.b * p.mu1 - p.mu0 + s) * p.mu1 / _bbm_w(p)


def _gap(kind, p, s):
    """The denominator factor that must stay away from zero, with its scale."""
    if kind is SystemKind.KDV_BBM:
        return p.a - p.c * s, max(p.a, p.c * s), "a - c*sigma"
    if kind is SystemKind.BBM_KDV:
        return p.a * s - p.c, max(p.a * s, p.c), "a*sigma - c"
    return p.a - p.c, max(p.a, p.c), "a - c"


def quoted_ratio(kind, phys, sigma):
    """The closed-form value of h2/d2 for ``kind``."""
    kind = SystemKind(kind)
    a, c, s = phys.a, phys.c, sigma
    if kind is SystemKind.KDV_BBM:
        return math.sqrt(a / (2 * c * s - a))
    if kind is SystemKind.BBM_KDV:
        return math.sqrt(a * s / (2 * c - a * s))
    return math.sqrt(a / (2 * c - a))


# ---------------------------------------------------------------------------
# validity


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    constraint: str
    reason: str
    # RSign values for which lam^2 > 0 (empty when the amplitude numerator vanishes)
    feasible_signs: tuple = ()

    def __bool__(self):
        return self.valid


_CONSTRAINTS = {
    SystemKind.KDV_KDV: "2c > a and sigma > 0",
    SystemKind.BBM_BBM: "2c > a and sigma > 0",
    SystemKind.KDV_BBM: "sigma > a/(2c)",
    SystemKind.BBM_KDV: "0 < sigma < 2c/a",
}


def _lam2_without_r(kind, p, s):
    # lam^2 * R, which is independent of m
    N = _kdv_n(p)
    if kind is SystemKind.KDV_KDV:
        return N / (16 * p.a * (p.a - p.c))
    if kind is SystemKind.KDV_BBM:
        return N / (16 * p.a * (p.a - p.c * s))
    W = _bbm_w(p)
    Q = _bbm_q(p, s)
    if kind is SystemKind.BBM_BBM:
        return Q / (-16 * p.a * s * s * (p.a - p.c) * W * W)
    return Q / (16 * p.a * s * W * W * (p.a * s - p.c))


def validity(kind, phys, sigma):
    """Check the speed/constant window in which the cnoidal family is real."""
    kind = SystemKind(kind)
    a, c, s = phys.a, phys.c, sigma
    if kind in (SystemKind.KDV_KDV, SystemKind.BBM_BBM):
        ok = 2 * c > a and s > 0
        why = "" if ok else ("need 2c > a" if not 2 * c > a else "need sigma > 0")
    elif kind is SystemKind.KDV_BBM:
        ok = s > a / (2 * c)
        why = "" if ok else f"need sigma > a/(2c) = {a / (2 * c)!r}"
    else:
        ok = 0 < s < 2 * c / a
        why = "" if ok else f"need 0 < sigma < 2c/a = {2 * c / a!r}"
    feasible = ()
    if ok:
        gap, scale, _ = _gap(kind, phys, s)
        if abs(gap) > DEGENERATE_RTOL * scale:
            x = _lam2_without_r(kind, phys, s)
            if x > 0:
                feasible = (RSign.PLUS,)
            elif x < 0:
                feasible = (RSign.MINUS,)
    return ValidityReport(ok, _CONSTRAINTS[kind], why, feasible)


def _require_valid(kind, phys, sigma):
    rep = validity(kind, phys, sigma)
    if not rep.valid:
        raise DomainError(f"{kind.label}: {rep.constraint} violated ({rep.reason})")
    gap, scale, label = _gap(kind, phys, sigma)
    if abs(gap) <= DEGENERATE_RTOL * scale:
        raise NumericalError(f"{kind.label}: denominator {label} = {gap!r} is degenerate")
    return rep


# ---------------------------------------------------------------------------
# cnoidal families


def _kdv_kdv(p, s, m, R):
    a, b, c, mu0, mu1 = p.a, p.b, p.c, p.mu0, p.mu1
    m2 = m * m
    N = _kdv_n(p)
    P = m2 * m2 - 2 * m2 * R - m2 + R + 1
    root = math.sqrt(2 * c - a) / math.sqrt(a)
    d0 = P * root * N / (8 * R * R * (a - c))
    d2 = 3 * root * N * m2 / (8 * R * (a - c))
    h0 = -(6 * a ** 3 * m2 * mu1 ** 2 - 3 * a ** 3 * mu1 ** 2 * R
           + 6 * a * a * c * mu1 ** 2 * R - 3 * a ** 3 * mu1 ** 2
           - 4 * a * a * b * m2 * mu1 + 2 * a * a * b * mu1 * R
           - 4 * a * b * c * mu1 * R + 2 * a * a * b * mu1
           - 8 * a * a * m2 * mu0 + 4 * a * a * mu0 * R - 8 * a * a * R * s
           - 2 * a * b * b * m2 + a * b * b * R - 8 * a * c * mu0 * R
           + 8 * a * c * R * s - 2 * b * b * c * R + 8 * a * a * m2
           + 4 * a * a * mu0 + 4 * a * a * R + a * b * b
           - 4 * a * a) / (8 * a * R * (a - c))
    h2 = 3 * N * m2 / (8 * R * (a - c))
    lam2 = N / (16 * a * R * (a - c))
    return _kdv_b(p), _kdv_omega(p, s), lam2, d0, d2, h0, h2


def _bbm_bbm(p, s, m, R):
    a, b, c, mu0, mu1 = p.a, p.b, p.c, p.mu0, p.mu1
    m2 = m * m
    W = _bbm_w(p)
    Q = _bbm_q(p, s)
    root = math.sqrt(a * (2 * c - a))
    den = a * s * W * W * (a - c)
    d0 = root * (m2 * m2 + 2 * m2 * R - m2 - R + 1) * Q / (8 * R * R * den)
    d2 = -3 * m2 * root * Q / (8 * R * den)
    h0 = (8 * a ** 4 * mu1 ** 4 * R * s * s - 8 * a ** 3 * c * mu1 ** 4 * R * s * s
          + 8 * a ** 4 * m2 * mu1 ** 4 * s - 4 * a ** 4 * mu1 ** 4 * R * s
          - 4 * a ** 4 * mu1 ** 4 * s
          - 8 * a ** 3 * b * m2 * mu1 ** 3 * s - 4 * a ** 3 * b * mu1 ** 3 * R * s
          + 8 * a * a * b * c * mu1 ** 3 * R * s + 4 * a ** 3 * b * mu1 ** 3 * s
          - 2 * a ** 3 * m2 * mu0 ** 2 * mu1 ** 2 - 8 * a ** 3 * m2 * mu0 * mu1 ** 2 * s
          - a ** 3 * mu0 ** 2 * mu1 ** 2 * R - 4 * a ** 3 * mu0 * mu1 ** 2 * R * s
          + 16 * a ** 3 * mu1 ** 2 * R * s * s + 2 * a * a * c * mu0 ** 2 * mu1 ** 2 * R
          + 8 * a * a * c * mu0 * mu1 ** 2 * R * s - 16 * a * a * c * mu1 ** 2 * R * s * s
          + 16 * a ** 3 * m2 * mu1 ** 2 * s + a ** 3 * mu0 ** 2 * mu1 ** 2
          + 4 * a ** 3 * mu0 * mu1 ** 2 * s - 8 * a ** 3 * mu1 ** 2 * R * s
          - 8 * a ** 3 * mu1 ** 2 * s + 4 * a * a * b * m2 * mu0 * mu1
          - 8 * a * a * b * m2 * mu1 * s + 2 * a * a * b * mu0 * mu1 * R
          - 4 * a * a * b * mu1 * R * s - 4 * a * b * c * mu0 * mu1 * R
          + 8 * a * b * c * mu1 * R * s - 2 * a * a * b * mu0 * mu1
          + 4 * a * a * b * mu1 * s - 8 * a * a * m2 * mu0 * s
          - 4 * a * a * mu0 * R * s + 8 * a * a * R * s * s + 8 * a * c * mu0 * R * s
          - 8 * a * c * R * s * s + 8 * a * a * m2 * s
          + 4 * a * a * mu0 * s - 4 * a * a * R * s - 2 * a * b * b * m2
          - a * b * b * R + 2 * b * b * c * R - 4 * a * a * s + a * b * b) / (8 * R * den)
    h2 = -3 * Q * m2 / (8 * R * s * W * W * (a - c))
    lam2 = Q / (-16 * a * R * s * s * (a - c) * W * W)
    return _bbm_b(p, s), _bbm_omega(p, s), lam2, d0, d2, h0, h2


def _kdv_bbm(p, s, m, R):
    a, b, c, mu0, mu1 = p.a, p.b, p.c, p.mu0, p.mu1
    m2 = m * m
    N = _kdv_n(p)
    P = m2 * m2 - 2 * m2 * R - m2 + R + 1
    root = math.sqrt(2 * c * s - a) / math.sqrt(a)
    d0 = P * root * N / (8 * R * R * (a - c * s))
    d2 = 3 * root * N * m2 / (8 * R * (a - c * s))
    h0 = (6 * a * a * c * mu1 ** 2 * R * s + 6 * a ** 3 * m2 * mu1 ** 2
          - 3 * a ** 3 * mu1 ** 2 * R - 4 * a * b * c * mu1 * R * s
          - 3 * a ** 3 * mu1 ** 2 - 4 * a * a * b * m2 * mu1 + 2 * a * a * b * mu1 * R
          - 8 * a * c * mu0 * R * s + 8 * a * c * R * s * s - 2 * b * b * c * R * s
          + 2 * a * a * b * mu1 - 8 * a * a * m2 * mu0 + 4 * a * a * mu0 * R
          - 8 * a * a * R * s - 2 * a * b * b * m2 + a * b * b * R
          + 8 * a * a * m2 + 4 * a * a * mu0 + 4 * a * a * R + a * b * b
          - 4 * a * a) / (8 * a * R * (c * s - a))
    h2 = 3 * N * m2 / (8 * R * (a - c * s))
    lam2 = N / (16 * a * R * (a - c * s))
    return _kdv_b(p), _kdv_omega(p, s), lam2, d0, d2, h0, h2


def _bbm_kdv(p, s, m, R):
    a, b, c, mu0, mu1 = p.a, p.b, p.c, p.mu0, p.mu1
    m2 = m * m
    W = _bbm_w(p)
    Q = _bbm_q(p, s)
    P = m2 * m2 - 2 * m2 * R - m2 + R + 1
    root = math.sqrt(2 * c - a * s) / math.sqrt(a * s)
    d0 = root * P * Q / (8 * R * R * W * W * (a * s - c))
    d2 = 3 * m2 * root * Q / (8 * R * W * W * (a * s - c))
    h0 = -(-8 * a ** 4 * mu1 ** 4 * R * s ** 3 + 8 * a ** 4 * m2 * mu1 ** 4 * s * s
           + 4 * a ** 4 * mu1 ** 4 * R * s * s + 8 * a ** 3 * c * mu1 ** 4 * R * s * s
           - 4 * a ** 4 * mu1 ** 4 * s * s - 8 * a ** 3 * b * m2 * mu1 ** 3 * s * s
           + 4 * a ** 3 * b * mu1 ** 3 * R * s * s + 4 * a ** 3 * b * mu1 ** 3 * s * s
           - 2 * a ** 3 * m2 * mu0 ** 2 * mu1 ** 2 * s
           - 8 * a ** 3 * m2 * mu0 * mu1 ** 2 * s * s
           + a ** 3 * mu0 ** 2 * mu1 ** 2 * s * R + 4 * a ** 3 * mu0 * mu1 ** 2 * R * s * s
           - 16 * a ** 3 * mu1 ** 2 * R * s ** 3 - 8 * a * a * b * c * mu1 ** 3 * R * s
           + 16 * a ** 3 * m2 * mu1 ** 2 * s * s + a ** 3 * mu0 ** 2 * mu1 ** 2 * s
           + 4 * a ** 3 * mu0 * mu1 ** 2 * s * s + 8 * a ** 3 * mu1 ** 2 * R * s * s
           - 2 * a * a * c * mu0 ** 2 * mu1 ** 2 * R - 8 * a * a * c * mu0 * mu1 ** 2 * R * s
           + 16 * a * a * c * mu1 ** 2 * R * s * s - 8 * a ** 3 * mu1 ** 2 * s * s
           + 4 * a * a * b * m2 * mu0 * mu1 * s - 8 * a * a * b * m2 * mu1 * s * s
           - 2 * a * a * b * mu0 * mu1 * R * s + 4 * a * a * b * mu1 * R * s * s
           - 2 * a * a * b * mu0 * mu1 * s + 4 * a * a * b * mu1 * s * s
           - 8 * a * a * m2 * mu0 * s * s + 4 * a * a * mu0 * R * s * s
           - 8 * a * a * R * s ** 3 + 4 * a * b * c * mu0 * mu1 * R
           - 8 * a * b * c * mu1 * R * s + 8 * a * a * m2 * s * s + 4 * a * a * mu0 * s * s
           + 4 * a * a * R * s * s - 2 * a * b * b * m2 * s + a * b * b * R * s
           - 8 * a * c * mu0 * R * s + 8 * a * c * R * s * s - 4 * a * a * s * s
           + a * b * b * s - 2 * b * b * c * R) / (8 * a * R * s * W * W * (a * s - c))
    h2 = 3 * Q * m2 / (8 * R * W * W * (a * s - c))
    lam2 = Q / (16 * a * R * s * W * W * (a * s - c))
    return _bbm_b(p, s), _bbm_omega(p, s), lam2, d0, d2, h0, h2


_CNOIDAL = {
    SystemKind.KDV_KDV: _kdv_kdv,
    SystemKind.BBM_BBM: _bbm_bbm,
    SystemKind.KDV_BBM: _kdv_bbm,
    SystemKind.BBM_KDV: _bbm_kdv,
}


@dataclass(frozen=True)
class CnoidalSolution:
    kind: SystemKind
    phys: PhysicalParams
    wave: WaveParams
    prof: ProfileCoeffs
    R: float

    @property
    def sign(self):
        return RSign.PLUS if self.R > 0 else RSign.MINUS

    @property
    def ratio(self):
        return quoted_ratio(self.kind, self.phys, self.wave.sigma)

    @property
    def period(self):
        """Period in xi of cn^2 (infinite in the solitary limit)."""
        from cnoidal.elliptic import complete_K
        if self.wave.m >= 1.0:
            return math.inf
        return 2 * complete_K(self.wave.m) / self.wave.lam


def _check_ratio(kind, phys, sigma, d2, h2):
    if d2 == 0:
        return
    want = quoted_ratio(kind, phys, sigma)
    if abs(h2 / d2 - want) > 1e-12 * max(1.0, want):
        raise NumericalError(f"{kind.label}: h2/d2 = {h2 / d2!r} departs from {want!r}")


def cnoidal_params(kind, phys, sigma, m, sign):
    """Closed-form cnoidal solution of ``kind`` at speed ``sigma`` and modulus ``m``.

    ``sign`` picks the branch of R.  At ``m = 1`` the solitary formulas of the
    matching branch are used (see :func:`solitary_limit`).
    """
    kind = SystemKind(kind)
    sign = RSign.parse(sign)
    if not 0.0 <= m <= 1.0:
        raise DomainError(f"elliptic modulus must lie in [0, 1], got {m}")
    _require_valid(kind, phys, sigma)
    if m == 1.0:
        sol = solitary_limit(kind, phys, sigma, Branch.for_sign(sign))
        return CnoidalSolution(kind, phys, sol.wave, sol.prof, float(int(sign)))
    R = big_r(m, sign)
    B, w, lam2, d0, d2, h0, h2 = _CNOIDAL[kind](phys, sigma, m, R)
    if not lam2 > 0:
        raise DomainError(f"{kind.label}: lambda^2 = {lam2!r} <= 0 on the "
                          f"R {'+' if sign > 0 else '-'} branch; try the other sign")
    _check_ratio(kind, phys, sigma, d2, h2)
    wave = WaveParams(B=B, omega=w, sigma=sigma, lam=math.sqrt(lam2), m=m)
    prof = ProfileCoeffs(d0=d0, d2=d2, h0=h0, h2=h2)
    return CnoidalSolution(kind, phys, wave, prof, R)


def feasible_solutions(kind, phys, sigma, m):
    """Every cnoidal solution (one per feasible R sign) at the given inputs."""
    kind = SystemKind(kind)
    rep = _require_valid(kind, phys, sigma)
    return [cnoidal_params(kind, phys, sigma, m, s) for s in rep.feasible_signs]


# ---------------------------------------------------------------------------
# solitary limits


@dataclass(frozen=True)
class SolitarySolution:
    kind: SystemKind
    branch: Branch
    phys: PhysicalParams
    B: float
    omega: float
    sigma: float
    lam: float
    d0: float
    d2: float
    h0: float
    h2: float

    @property
    def wave(self):
        return WaveParams(B=self.B, omega=self.omega, sigma=self.sigma, lam=self.lam, m=1.0)

    @property
    def prof(self):
        return ProfileCoeffs(d0=self.d0, d2=self.d2, h0=self.h0, h2=self.h2)

    @property
    def ratio(self):
        return quoted_ratio(self.kind, self.phys, self.sigma)


def _rt(x):
    # nan instead of an exception so background levels stay computable outside
    # the validity window (synchronization scans)
    return math.sqrt(x) if x >= 0 else math.nan


def _solitary_kdv_kdv(p, s, tilde):
    a, b, c, mu0, mu1 = p.a, p.b, p.c, p.mu0, p.mu1
    N = _kdv_n(p)
    root = _rt((2 * c - a) / a)
    if tilde:
        d0 = 0.0
        h0 = -(3 * a * a * c * mu1 ** 2 - 2 * a * b * c * mu1 + 4 * a * a
               - 4 * a * c * mu0 - b * b * c - 4 * a * a * s
               + 4 * a * c * s) / (4 * a * (a - c))
        d2 = 3 * root * N / (8 * (a - c))
        h2 = 3 * N / (8 * (a - c))
        lam2 = N / (16 * a * (a - c))
    else:
        d0 = root * N / (4 * (a - c))
        h0 = (3 * a ** 3 * mu1 ** 2 - 2 * a * a * b * mu1 - 4 * a * a * mu0 - a * b * b
              - 3 * a * a * c * mu1 ** 2 + 2 * a * b * c * mu1 + 4 * a * c * mu0
              + b * b * c + 4 * a * s * (a - c)) / (4 * a * (a - c))
        # negative: the m -> 1 limit of d2, and the only sign giving k[j, q] = 0
        d2 = -3 * root * N / (8 * (a - c))
        h2 = -3 * N / (8 * (a - c))
        lam2 = -N / (16 * a * (a - c))
    return _kdv_b(p), _kdv_omega(p, s), lam2, d0, d2, h0, h2


def _solitary_bbm_bbm(p, s, tilde):
    a, b, c, mu0, mu1 = p.a, p.b, p.c, p.mu0, p.mu1
    W = _bbm_w(p)
    Q = _bbm_q(p, s)
    root = _rt(a * (2 * c - a))
    den = a * s * W * W * (a - c)
    if tilde:
        d0 = root * Q / (4 * den)
        d2 = -3 * root * Q / (8 * den)
        h0 = (4 * a ** 4 * mu1 ** 4 * s * s - 4 * a ** 3 * c * mu1 ** 4 * s * s
              - 4 * a ** 3 * b * mu1 ** 3 * s + 4 * a * a * b * c * mu1 ** 3 * s
              - a ** 3 * mu0 ** 2 * mu1 ** 2 - 4 * a ** 3 * mu0 * mu1 ** 2 * s
              + 8 * a ** 3 * mu1 ** 2 * s * s + a * a * c * mu0 ** 2 * mu1 ** 2
              + 4 * a * a * c * mu0 * mu1 ** 2 * s - 8 * a * a * c * mu1 ** 2 * s * s
              + 2 * a * a * b * mu0 * mu1 - 4 * a * a * b * mu1 * s
              - 2 * a * b * c * mu0 * mu1 + 4 * a * b * c * mu1 * s
              - 4 * a * a * mu0 * s + 4 * a * a * s * s + 4 * a * c * mu0 * s
              - 4 * a * c * s * s - a * b * b + b * b * c) / (4 * den)
        h2 = -3 * Q / (8 * s * W * W * (a - c))
        lam2 = Q / (-16 * a * s * s * (a - c) * W * W)
    else:
        d0 = 0.0
        d2 = 3 * root * Q / (8 * den)
        h0 = (-8 * a ** 4 * mu1 ** 4 * s * s + 8 * a ** 3 * c * mu1 ** 4 * s * s
              + 8 * a ** 4 * mu1 ** 4 * s - 8 * a * a * b * c * mu1 ** 3 * s
              - 16 * a ** 3 * mu1 ** 2 * s * s - 2 * a * a * c * mu0 ** 2 * mu1 ** 2
              - 8 * a * a * c * mu0 * mu1 ** 2 * s + 16 * a * a * c * mu1 ** 2 * s * s
              + 16 * a ** 3 * mu1 ** 2 * s + 4 * a * b * c * mu0 * mu1
              - 8 * a * b * c * mu1 * s - 8 * a * a * s * s - 8 * a * c * mu0 * s
              + 8 * a * c * s * s + 8 * a * a * s - 2 * b * b * c) / (-8 * den)
        h2 = 3 * Q / (8 * s * W * W * (a - c))
        lam2 = Q / (16 * a * s * s * (a - c) * W * W)
    return _bbm_b(p, s), _bbm_omega(p, s), lam2, d0, d2, h0, h2


def _solitary_kdv_bbm(p, s, tilde):
    a, b, c, mu0, mu1 = p.a, p.b, p.c, p.mu0, p.mu1
    N = _kdv_n(p)
    root = _rt((2 * c * s - a) / a)
    if tilde:
        d0 = 0.0
        d2 = 3 * root * N / (8 * (a - c * s))
        h0 = (6 * a * a * c * mu1 ** 2 * s - 4 * a * b * c * mu1 * s
              - 8 * a * c * mu0 * s + 8 * a * c * s * s - 2 * b * b * c * s
              - 8 * a * a * s + 8 * a * a) / (8 * a * (c * s - a))
        h2 = 3 * N / (8 * (a - c * s))
        lam2 = N / (16 * a * (a - c * s))
    else:
        d0 = root * N / (4 * (a - c * s))
        d2 = 3 * root * N / (8 * (c * s - a))
        h0 = (3 * a * a * c * mu1 ** 2 * s - 3 * a ** 3 * mu1 ** 2
              - 2 * a * b * c * mu1 * s + 2 * a * a * b * mu1
              - 4 * a * c * mu0 * s + 4 * a * c * s * s - b * b * c * s
              + 4 * a * a * mu0 - 4 * a * a * s + a * b * b) / (4 * a * (c * s - a))
        h2 = 3 * N / (8 * (c * s - a))
        lam2 = N / (16 * a * (c * s - a))
    return _kdv_b(p), _kdv_omega(p, s), lam2, d0, d2, h0, h2


def _solitary_bbm_kdv(p, s, tilde):
    a, b, c, mu0, mu1 = p.a, p.b, p.c, p.mu0, p.mu1
    W = _bbm_w(p)
    Q = _bbm_q(p, s)
    root = _rt((2 * c - a * s) / (a * s))
    den = W * W * (a * s - c)
    if tilde:
        d0 = 0.0
        d2 = 3 * root * Q / (8 * den)
        h0 = -(-8 * a ** 4 * mu1 ** 4 * s ** 3 + 8 * a ** 4 * mu1 ** 4 * s * s
               + 8 * a ** 3 * c * mu1 ** 4 * s * s - 16 * a ** 3 * mu1 ** 2 * s ** 3
               - 8 * a * a * b * c * mu1 ** 3 * s + 16 * a ** 3 * mu1 ** 2 * s * s
               - 2 * a * a * c * mu0 ** 2 * mu1 ** 2 - 8 * a * a * c * mu0 * mu1 ** 2 * s
               + 16 * a * a * c * mu1 ** 2 * s * s - 8 * a * a * s ** 3
               + 4 * a * b * c * mu0 * mu1 - 8 * a * b * c * mu1 * s
               + 8 * a * a * s * s - 8 * a * c * mu0 * s + 8 * a * c * s * s
               - 2 * b * b * c) / (8 * a * s * den)
        h2 = 3 * Q / (8 * den)
        lam2 = Q / (16 * a * s * den)
    else:
        d0 = root * Q / (4 * den)
        d2 = -3 * root * Q / (8 * den)
        h0 = (4 * a ** 4 * mu1 ** 4 * s ** 3 - 4 * a ** 3 * c * mu1 ** 4 * s * s
              - 4 * a ** 3 * b * mu1 ** 3 * s * s - a ** 3 * mu0 ** 2 * mu1 ** 2 * s
              - 4 * a ** 3 * mu0 * mu1 ** 2 * s * s + 8 * a ** 3 * mu1 ** 2 * s ** 3
              + 4 * a * a * b * c * mu1 ** 3 * s + a * a * c * mu0 ** 2 * mu1 ** 2
              + 4 * a * a * c * mu0 * mu1 ** 2 * s - 8 * a * a * c * mu1 ** 2 * s * s
              + 2 * a * a * b * mu0 * mu1 * s - 4 * a * a * b * mu1 * s * s
              - 4 * a * a * mu0 * s * s + 4 * a * a * s ** 3 - 2 * a * b * c * mu0 * mu1
              + 4 * a * b * c * mu1 * s - a * b * b * s + 4 * a * c * mu0 * s
              - 4 * a * c * s * s + b * b * c) / (4 * a * s * den)
        h2 = -3 * Q / (8 * den)
        lam2 = Q / (-16 * a * s * den)
    return _bbm_b(p, s), _bbm_omega(p, s), lam2, d0, d2, h0, h2


_SOLITARY = {
    SystemKind.KDV_KDV: _solitary_kdv_kdv,
    SystemKind.BBM_BBM: _solitary_bbm_bbm,
    SystemKind.KDV_BBM: _solitary_kdv_bbm,
    SystemKind.BBM_KDV: _solitary_bbm_kdv,
}


def solitary_limit(kind, phys, sigma, branch):
    """sech^2 wave reached as m -> 1 on the given branch."""
    kind = SystemKind(kind)
    branch = Branch(branch)
    _require_valid(kind, phys, sigma)
    B, w, lam2, d0, d2, h0, h2 = _SOLITARY[kind](phys, sigma, branch is Branch.M_R1)
    if not lam2 > 0:
        raise DomainError(f"{kind.label}: lambda^2 = {lam2!r} <= 0 on solitary branch {branch.value}")
    return SolitarySolution(kind, branch, phys, B, w, sigma, math.sqrt(lam2), d0, d2, h0, h2)


# ---------------------------------------------------------------------------
# synchronized solitary waves (u proportional to v)


@dataclass(frozen=True)
class SyncReport:
    """Synchronization constraint of one system evaluated at a candidate.

    ``variable`` says whether the constraint is read in ``sigma`` or in ``B``;
    ``root`` is the closed-form speed when one exists (KdV-KdV only);
    ``h0`` is the background level of the solitary branch that the
    constraint is meant to zero (``branch``), evaluated at ``sigma``.
    """

    kind: SystemKind
    variable: str
    candidate: float
    residual: float
    branch: Branch
    h0: float
    root: float = None


_SYNC_BRANCH = {
    SystemKind.KDV_KDV: Branch.M_R1,
    SystemKind.BBM_BBM: Branch.M_NEG_R1,
    SystemKind.KDV_BBM: Branch.M_R1,
    SystemKind.BBM_KDV: Branch.M_R1,
}


def synchronized_speed(phys):
    """KdV-KdV speed at which the m = R = 1 background level vanishes."""
    a, b, c, mu0, mu1 = phys.a, phys.b, phys.c, phys.mu0, phys.mu1
    if abs(a - c) <= DEGENERATE_RTOL * max(a, c):
        raise NumericalError("a - c is degenerate")
    return ((4 * a * a + 3 * a * a * c * mu1 ** 2 - 2 * a * b * c * mu1
             - 4 * a * c * mu0 - b * b * c) / (4 * a * (a - c)))


def synchronized_condition(kind, phys, sigma, B=None):
    """Residual of the synchronization constraint at ``sigma`` (and ``B``).

    ``B`` defaults to the family's own phase shift at ``sigma``; passing it
    explicitly evaluates the B-polynomial of the BBM systems at any point.
    """
    kind = SystemKind(kind)
    a, b, c, mu0, mu1 = phys.a, phys.b, phys.c, phys.mu0, phys.mu1
    branch = _SYNC_BRANCH[kind]
    h0 = _SOLITARY[kind](phys, sigma, branch is Branch.M_R1)[5]
    if kind is SystemKind.KDV_KDV:
        root = synchronized_speed(phys)
        return SyncReport(kind, "sigma", sigma, sigma - root, branch, h0, root)
    if B is None:
        B = _kdv_b(phys) if kind is SystemKind.KDV_BBM else _bbm_b(phys, sigma)
    if kind is SystemKind.KDV_BBM:
        res = (sigma + 3 * a * B * B + 2 * b * B - mu0) / a - (sigma - 1) / (c * sigma)
    elif kind is SystemKind.BBM_BBM:
        res = ((a * a * c * mu0 * mu1 - a * b * c) * B * B
               + (2 * a * b * c * mu1 + 2 * a * c * mu0 - 2 * a ** 3 * mu1 ** 2 - 2 * a * a) * B
               + (a * a * mu0 * mu1 + b * c - a * b - a * c * mu0 * mu1))
    else:
        res = ((2 * a * a * b * c * mu1 ** 2 + 2 * a * b * c - 2 * a ** 3 * c * mu0 * mu1 ** 3
                - 2 * a * a * c * mu0 * mu1) * B ** 3
               + (-4 * a * a * b * c * mu1 ** 3 - 4 * a * a * c * mu0 * mu1 ** 2
                  - 4 * a * b * c * mu1 - 4 * a * c * mu0) * B ** 2
               + (2 * a ** 3 * mu0 * mu1 ** 3 + 2 * a * a * c * mu0 * mu1 ** 3
                  + 2 * a * a * mu0 * mu1 + 2 * a * c * mu0 * mu1 - 2 * a * a * b * mu1 ** 2
                  - 2 * a * b - 2 * a * b * c * mu1 ** 2 - 2 * b * c) * B
               + (2 * a * b * mu0 * mu1 - a * a * mu0 ** 2 * mu1 ** 2 - b * b))
    return SyncReport(kind, "B", B, res, branch, h0)


# ---------------------------------------------------------------------------
# trivial and semi-trivial catalog


DEFAULT_FREE = {"h0": 1.0, "d0": 1.0, "B": 1.0, "omega": 1.0,
                "h2": 0.1, "sigma": 2.0, "m": 0.5, "d1_sign": 1}


@dataclass(frozen=True)
class SemiTrivialSolution:
    kind: SystemKind
    family: int
    phys: PhysicalParams
    free: dict
    derived: dict
    wave: WaveParams
    prof: ProfileCoeffs
    description: str = ""

    @property
    def period(self):
        """Period in xi of (f, g); infinite for constant states."""
        from cnoidal.elliptic import complete_K
        if self.prof.d1 == 0 and self.prof.d2 == 0 and self.prof.h2 == 0:
            return math.inf
        if self.wave.m >= 1.0:
            return math.inf
        quarter = complete_K(self.wave.m) / self.wave.lam
        return 4 * quarter if self.prof.d1 else 2 * quarter


def _need_modulus(m, family):
    if not 0.0 < m <= 1.0:
        raise ConstraintError(f"family {family}: needs 0 < m <= 1, got m = {m!r}")


def _family_constant(kind, phys, free):
    h0, s, m = free["h0"], free["sigma"], free["m"]
    if not s > 0:
        raise ConstraintError(f"family 1: needs sigma > 0, got {s!r}")
    wave = WaveParams(B=0.0, omega=0.0, sigma=s, lam=1.0, m=m)
    return SemiTrivialSolution(kind, 1, phys, {"h0": h0, "sigma": s}, {}, wave,
                               ProfileCoeffs(h0=h0), "u = 0, v = h0")


def _family_plane_wave(kind, phys, free):
    a, b, mu0, mu1 = phys.a, phys.b, phys.mu0, phys.mu1
    B, d0, h0, w = free["B"], free["d0"], free["h0"], free["omega"]
    if B == 0:
        raise ConstraintError("family 2: needs B != 0 (sigma is divided by B)")
    if kind.u_is_bbm:
        s = (a * B * B * w - b * B * B + B * h0 + B * mu0 + h0 * mu1 + w) / (B * (a * B * B + 1))
    else:
        s = (w - a * B ** 3 - b * B * B + B * h0 + B * mu0 + h0 * mu1) / B
    if not s > 0:
        raise ConstraintError(f"family 2: derived sigma = {s!r} must be positive")
    wave = WaveParams(B=B, omega=w, sigma=s, lam=1.0, m=free["m"])
    return SemiTrivialSolution(kind, 2, phys, {"B": B, "d0": d0, "h0": h0, "omega": w},
                               {"sigma": s}, wave, ProfileCoeffs(d0=d0, h0=h0),
                               "u = exp(i(omega t + B xi)) d0, v = h0")


def _family_cnoidal_v(kind, phys, free, index):
    h2, s, m = free["h2"], free["sigma"], free["m"]
    _need_modulus(m, index)
    if not h2 > 0:
        raise ConstraintError(f"family {index}: needs h2 > 0, got {h2!r}")
    if not s > 0:
        raise ConstraintError(f"family {index}: needs sigma > 0, got {s!r}")
    m2 = m * m
    if kind.v_is_bbm:
        lam = math.sqrt(h2 / (12 * phys.c * m2 * s))
    else:
        lam = math.sqrt(h2 / (12 * phys.c * m2))
    h0 = -2 * h2 / 3 + h2 / (3 * m2) + s - 1
    wave = WaveParams(B=0.0, omega=0.0, sigma=s, lam=lam, m=m)
    return SemiTrivialSolution(kind, index, phys, {"h2": h2, "sigma": s, "m": m},
                               {"lam": lam, "h0": h0}, wave, ProfileCoeffs(h0=h0, h2=h2),
                               "u = 0, v = h0 + h2 cn^2")


def _family_kdv_bbm_cn(phys, free):
    a, b, c, mu0, mu1 = phys.a, phys.b, phys.c, phys.mu0, phys.mu1
    h2, m = free["h2"], free["m"]
    _need_modulus(m, 3)
    if not h2 > 0:
        raise ConstraintError(f"family 3: needs h2 > 0, got {h2!r}")
    m2 = m * m
    E = (9 * a * a * m2 * mu1 ** 2 - 6 * a * b * m2 * mu1 - 4 * a * h2 * m2
         - 12 * a * m2 * mu0 - 3 * b * b * m2 + 2 * a * h2 + 12 * a * m2)
    if not E < 0:
        raise ConstraintError(
            "family 3: needs 9a^2m^2mu1^2 - 6abm^2mu1 - 4ah2m^2 - 12am^2mu0 - 3b^2m^2"
            f" + 2ah2 + 12am^2 < 0, got {E!r}")
    h0 = (9 * a * a * c * m2 * mu1 ** 2 - 6 * a * b * c * m2 * mu1 - 12 * a * c * h2 * m2
          - 12 * a * c * m2 * mu0 - 3 * b * b * c * m2 + 2 * a * a * m2
          + 6 * a * c * h2) / (12 * a * c * m2)
    d1 = math.copysign(math.sqrt(-6 * a * h2 * m2 * E) / (6 * a * m2), free["d1_sign"])
    s = a / (6 * c)
    wave = WaveParams(B=_kdv_b(phys),
                      omega=-mu1 * (6 * a * c * mu1 ** 2 - 6 * b * c * mu1 - 6 * c * mu0 + a) / (6 * c),
                      sigma=s, lam=math.sqrt(h2 / (2 * a * m2)), m=m)
    return SemiTrivialSolution(
        SystemKind.KDV_BBM, 3, phys, {"h2": h2, "m": m},
        {"sigma": s, "lam": wave.lam, "d1": d1, "h0": h0, "B": wave.B, "omega": wave.omega},
        wave, ProfileCoeffs(d1=d1, h0=h0, h2=h2),
        "u = exp(i(omega t + B xi)) d1 cn, v = h0 + h2 cn^2")


def _family_bbm_kdv_cn(phys, free):
    a, b, c, mu0, mu1 = phys.a, phys.b, phys.c, phys.mu0, phys.mu1
    h2, m = free["h2"], free["m"]
    _need_modulus(m, 3)
    if not h2 > 0:
        raise ConstraintError(f"family 3: needs h2 > 0, got {h2!r}")
    m2 = m * m
    W = _bbm_w(phys)
    G = (8 * a * a * c * h2 * m2 * mu1 ** 4 - 4 * a * a * c * h2 * mu1 ** 4
         - 24 * a * a * c * m2 * mu1 ** 4 + a * a * m2 * mu0 ** 2 * mu1 ** 2
         + 24 * a * b * c * m2 * mu1 ** 3 + 16 * a * c * h2 * m2 * mu1 ** 2
         + 24 * a * c * m2 * mu0 * mu1 ** 2 - 2 * a * b * m2 * mu0 * mu1
         - 8 * a * c * h2 * mu1 ** 2 - 48 * a * c * m2 * mu1 ** 2 + 24 * b * c * m2 * mu1
         + b * b * m2 + 8 * c * h2 * m2 + 24 * c * m2 * mu0 - 4 * c * h2 - 24 * c * m2)
    if not G > 0:
        raise ConstraintError(f"family 3: needs the d1 radicand bracket > 0, got {G!r}")
    d1 = math.copysign(math.sqrt(3 * c * h2 * m2 * G) / (6 * c * m2 * W), free["d1_sign"])
    h0 = -(24 * a ** 3 * c * h2 * m2 * mu1 ** 4 - 12 * a ** 3 * c * h2 * mu1 ** 4
           - 144 * a * a * c * c * m2 * mu1 ** 4 + a ** 3 * m2 * mu0 ** 2 * mu1 ** 2
           + 24 * a * a * b * c * m2 * mu1 ** 3 + 48 * a * a * c * h2 * m2 * mu1 ** 2
           + 24 * a * a * c * m2 * mu0 * mu1 ** 2 - 2 * a * a * b * m2 * mu0 * mu1
           - 24 * a * a * c * h2 * mu1 ** 2 - 288 * a * c * c * m2 * mu1 ** 2
           + 24 * a * b * c * m2 * mu1 + a * b * b * m2 + 24 * a * c * h2 * m2
           + 24 * a * c * m2 * mu0 - 12 * a * c * h2
           - 144 * c * c * m2) / (24 * (a * a * mu1 ** 4 + 2 * a * mu1 ** 2 + 1) * a * c * m2)
    s = 6 * c / a
    wave = WaveParams(B=(a * mu0 * mu1 - b) / (12 * c * W),
                      omega=mu1 * (-6 * a * c * mu1 ** 2 + a * b * mu1 + a * mu0 - 6 * c) / (W * a),
                      sigma=s, lam=math.sqrt(h2 / (12 * c * m2)), m=m)
    return SemiTrivialSolution(
        SystemKind.BBM_KDV, 3, phys, {"h2": h2, "m": m},
        {"sigma": s, "lam": wave.lam, "d1": d1, "h0": h0, "B": wave.B, "omega": wave.omega},
        wave, ProfileCoeffs(d1=d1, h0=h0, h2=h2),
        "u = exp(i(omega t + B xi)) d1 cn, v = h0 + h2 cn^2")


def family_indices(kind):
    kind = SystemKind(kind)
    return (1, 2, 3) if kind in (SystemKind.KDV_KDV, SystemKind.BBM_BBM) else (1, 2, 3, 4)


def semi_trivial_family(kind, phys, family, free=None):
    """Build one catalog entry; raises :class:`ConstraintError` if its inequality fails."""
    kind = SystemKind(kind)
    params = dict(DEFAULT_FREE)
    params.update(free or {})
    if family not in family_indices(kind):
        raise DomainError(f"{kind.label} has families {family_indices(kind)}, not {family!r}")
    if family == 1:
        return _family_constant(kind, phys, params)
    if family == 2:
        return _family_plane_wave(kind, phys, params)
    mixed = kind in (SystemKind.KDV_BBM, SystemKind.BBM_KDV)
    if family == 3 and mixed:
        if kind is SystemKind.KDV_BBM:
            return _family_kdv_bbm_cn(phys, params)
        return _family_bbm_kdv_cn(phys, params)
    return _family_cnoidal_v(kind, phys, params, family)


def semi_trivial_catalog(kind, phys, free=None, skip_invalid=False):
    """Every trivial/semi-trivial family of ``kind`` with its derived parameters.

    With ``skip_invalid`` families whose precondition fails are left out;
    otherwise the first failure raises :class:`ConstraintError`.
    """
    out = []
    for index in family_indices(kind):
        try:
            out.append(semi_trivial_family(kind, phys, index, free))
        except ConstraintError:
            if not skip_invalid:
                raise
    return out


# ---------------------------------------------------------------------------
# evaluation


def evaluate_profiles(sol, xi):
    """(f, g) at ``xi`` (scalar or array) for any solution object."""
    prof, wave = sol.prof, sol.wave
    xi_arr = np.asarray(xi, dtype=float)
    if prof.d1 == 0 and prof.d2 == 0 and prof.h1 == 0 and prof.h2 == 0:
        cn = np.zeros_like(xi_arr)
    else:
        _, cn, _ = jacobi_arrays(wave.lam * xi_arr, wave.m)
    cn2 = cn * cn
    f = prof.d0 + prof.d1 * cn + prof.d2 * cn2
    g = prof.h0 + prof.h1 * cn + prof.h2 * cn2
    if np.ndim(xi) == 0:
        return float(f), float(g)
    return f, g


def evaluate_fields(sol, x, t):
    """(u, v) at position ``x`` (scalar or array) and time ``t``."""
    wave = sol.wave
    xi = np.asarray(x, dtype=float) - wave.sigma * t
    f, g = evaluate_profiles(sol, xi)
    u = np.exp(1j * (wave.omega * t + wave.B * xi)) * f
    if np.ndim(x) == 0 and np.ndim(t) == 0:
        return complex(u), float(g)
    return u, g
