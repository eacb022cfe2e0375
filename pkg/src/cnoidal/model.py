"""The four coupled Schrodinger-KdV/BBM systems and their traveling-wave reductions.

Fields are ``u`` (complex) and ``v`` (real).  With the ansatz

    u = exp(i omega t) exp(i B xi) f(xi),   v = g(xi),   xi = x - sigma t,

each system reduces to three real ODEs for ``f`` and ``g``; this module
evaluates those ODE residuals, the collected cn-power coefficients
(:mod:`cnoidal.coefficients`) and finite-difference residuals of the PDEs
themselves.
"""
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from cnoidal import coefficients as _coeffs
from cnoidal.elliptic import cn_power_derivs
from cnoidal.errors import DomainError, StencilError


class SystemKind(str, enum.Enum):
    """Which dispersion each equation carries: ``<u-equation>-<v-equation>``."""

    KDV_KDV = "kdv-kdv"
    BBM_BBM = "bbm-bbm"
    KDV_BBM = "kdv-bbm"
    BBM_KDV = "bbm-kdv"

    @property
    def u_is_bbm(self):
        return self in (SystemKind.BBM_BBM, SystemKind.BBM_KDV)

    @property
    def v_is_bbm(self):
        return self in (SystemKind.BBM_BBM, SystemKind.KDV_BBM)

    @property
    def label(self):
        return {"kdv-kdv": "KdV-KdV", "bbm-bbm": "BBM-BBM",
                "kdv-bbm": "KdV-BBM", "bbm-kdv": "BBM-KdV"}[self.value]

    @classmethod
    def parse(cls, text):
        key = str(text).strip().lower().replace("_", "-")
        for kind in cls:
            if key in (kind.value, kind.name.lower().replace("_", "-"),
                       kind.value.replace("-", "")):
                return kind
        raise DomainError(f"unknown system {text!r}; choose one of "
                          + ", ".join(k.value for k in cls))


@dataclass(frozen=True)
class PhysicalParams:
    """Model constants.  ``a`` is a0 when u is KdV-dispersed, a1 when BBM-dispersed."""

    mu0: float
    mu1: float
    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in ("mu0", "mu1", "a", "c"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")


@dataclass(frozen=True)
class ProfileCoeffs:
    """Coefficients of f = d0 + d1 cn + d2 cn^2 and g = h0 + h1 cn + h2 cn^2."""

    d0: float = 0.0
    d1: float = 0.0
    d2: float = 0.0
    h0: float = 0.0
    h1: float = 0.0
    h2: float = 0.0

    @property
    def d(self):
        return (self.d0, self.d1, self.d2)

    @property
    def h(self):
        return (self.h0, self.h1, self.h2)

    def is_zero(self):
        return not any(self.d + self.h)


@dataclass(frozen=True)
class WaveParams:
    B: float
    omega: float
    sigma: float
    lam: float
    m: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"wave speed sigma must be positive, got {self.sigma}")
        if not self.lam > 0:
            raise DomainError(f"spatial scale lambda must be positive, got {self.lam}")
        if not 0.0 <= self.m <= 1.0:
            raise DomainError(f"elliptic modulus must lie in [0, 1], got {self.m}")


@dataclass(frozen=True)
class SampleGrid:
    """Points at which PDE residuals are sampled."""

    x: tuple
    t: float = 0.0

    def __post_init__(self):
        xs = tuple(float(v) for v in self.x)
        if not xs:
            raise DomainError("sample grid is empty")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise DomainError("sample grid must be strictly increasing")
        object.__setattr__(self, "x", xs)

    @property
    def xi(self):
        return self.x


@dataclass(frozen=True)
class CoefficientSet:
    """The 13 collected coefficients k[j, q] plus the size of their largest term."""

    k: dict
    scale: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.k) != 13:
            raise ValueError(f"expected 13 coefficients, got {len(self.k)}")

    def __getitem__(self, key):
        return self.k[key]

    def scaled(self):
        """``|k[j,q]|`` divided by that entry's largest term (0 where all terms vanish)."""
        out = {}
        for key, value in self.k.items():
            s = self.scale.get(key, 0.0)
            out[key] = abs(value) / s if s > 0 else abs(value)
        return out

    def max_scaled(self):
        return max(self.scaled().values())

    def worst(self):
        sc = self.scaled()
        return max(sc, key=sc.get)


# r_j = factor * lam**power * [sn dn] * sum_q k[j,q] cn**q  (row 2 carries no sn dn)
ROW_NORMALIZATION = {
    SystemKind.KDV_KDV: ((6, 1), (1, 0), (-24, 1)),
    SystemKind.BBM_BBM: ((6, 1), (1, 0), (1, 1)),
    SystemKind.KDV_BBM: ((6, 1), (1, 0), (-6, 1)),
    SystemKind.BBM_KDV: ((6, 1), (1, 0), (-24, 1)),
}


def row_factor(kind, row, lam):
    factor, power = ROW_NORMALIZATION[SystemKind(kind)][row - 1]
    return factor * lam ** power


def coefficient_set(kind, phys, prof, wave):
    """Evaluate the 13 polynomials k[j, q] for one parameter vector."""
    kind = SystemKind(kind)
    terms = _coeffs.coefficient_terms(
        kind.value, phys.a, phys.b, phys.c, phys.mu0, phys.mu1,
        wave.B, wave.omega, wave.sigma, wave.lam, wave.m,
        prof.d0, prof.d1, prof.d2, prof.h0, prof.h1, prof.h2)
    k = {key: math.fsum(t) for key, t in terms.items()}
    scale = {key: max(abs(x) for x in t) for key, t in terms.items()}
    return CoefficientSet(k=k, scale=scale)


def ode_terms(kind, phys, prof, wave, xi):
    """Individual terms of the three associated ODEs at ``xi`` (scalar or array).

    Returns three tuples; each residual is the sum of its tuple.
    """
    kind = SystemKind(kind)
    a, b, c = phys.a, phys.b, phys.c
    mu0, mu1 = phys.mu0, phys.mu1
    B, w, s, lam, m = wave.B, wave.omega, wave.sigma, wave.lam, wave.m
    powers = [cn_power_derivs(r, lam, xi, m) for r in (0, 1, 2)]

    def combo(coeffs, attr):
        return sum(cf * getattr(p, attr) for cf, p in zip(coeffs, powers) if cf)

    zero = np.zeros(np.shape(xi)) if np.ndim(xi) else 0.0
    f, f1, f2, f3 = (combo(prof.d, at) + zero for at in ("value", "d1", "d2", "d3"))
    g, g1, g2, g3 = (combo(prof.h, at) + zero for at in ("value", "d1", "d2", "d3"))

    if kind.u_is_bbm:
        e1 = (f1 * g, f * g1, a * s * f3,
              (mu0 + 2 * a * B * w - 3 * a * B ** 2 * s - s - 2 * b * B) * f1)
        e2 = ((B + mu1) * f * g, (3 * a * B * s + b - a * w) * f2,
              (w + B * mu0 + a * B ** 2 * w - a * B ** 3 * s - B * s - b * B ** 2) * f)
    else:
        e1 = (f1 * g, f * g1, a * f3, (mu0 - s - 3 * a * B ** 2 - 2 * b * B) * f1)
        e2 = ((B + mu1) * f * g, (3 * a * B + b) * f2,
              (w + B * mu0 - B * s - a * B ** 3 - b * B ** 2) * f)
    disp = c * s if kind.v_is_bbm else c
    e3 = (f * f1, g * g1, disp * g3, (1 - s) * g1)
    return e1, e2, e3


def ode_residuals(kind, phys, prof, wave, xi):
    """Left-hand sides (r1, r2, r3) of the associated ODE system at ``xi``."""
    return tuple(sum(t) for t in ode_terms(kind, phys, prof, wave, xi))


def _d1(F, x, h):
    return (F(x - 2 * h) - 8 * F(x - h) + 8 * F(x + h) - F(x + 2 * h)) / (12 * h)


def _d2(F, x, h):
    return (-F(x - 2 * h) + 16 * F(x - h) - 30 * F(x) + 16 * F(x + h)
            - F(x + 2 * h)) / (12 * h * h)


def _d3(F, x, h):
    return (F(x - 3 * h) - 8 * F(x - 2 * h) + 13 * F(x - h) - 13 * F(x + h)
            + 8 * F(x + 2 * h) - F(x + 3 * h)) / (8 * h ** 3)


def pde_residuals(kind, phys, u, v, x, t, h):
    """Residuals of the two PDEs by fourth-order central differences.

    ``u(x, t)`` and ``v(x, t)`` are samplers (vectorized over ``x`` is fine).
    Space derivatives use stencils out to ``x +- 3h`` and time derivatives
    ``t +- 2h``; the mixed term ``d^3/dx^2 dt`` applies the second-derivative
    x-stencil inside the first-derivative t-stencil.
    """
    if not h > 0:
        raise StencilError(f"finite-difference step must be positive, got {h}")
    kind = SystemKind(kind)
    a, b, c, mu0, mu1 = phys.a, phys.b, phys.c, phys.mu0, phys.mu1

    def in_x(F, tt):
        return lambda xx: F(xx, tt)

    def in_t(F, xx):
        return lambda tt: F(xx, tt)

    uv = lambda xx, tt: u(xx, tt) * v(xx, tt)
    mod2 = lambda xx, tt: np.abs(u(xx, tt)) ** 2

    u0 = u(x, t)
    v0 = v(x, t)
    u_t = _d1(in_t(u, x), t, h)
    v_t = _d1(in_t(v, x), t, h)
    u_x = _d1(in_x(u, t), x, h)
    v_x = _d1(in_x(v, t), x, h)
    u_xx = _d2(in_x(u, t), x, h)
    if kind.u_is_bbm:
        u_disp = -a * _d1(lambda tt: _d2(in_x(u, tt), x, h), t, h)
    else:
        u_disp = a * _d3(in_x(u, t), x, h)
    if kind.v_is_bbm:
        v_disp = -c * _d1(lambda tt: _d2(in_x(v, tt), x, h), t, h)
    else:
        v_disp = c * _d3(in_x(v, t), x, h)

    ru = (u_t + mu0 * u_x + u_disp + 1j * b * u_xx
          + _d1(in_x(uv, t), x, h) + 1j * mu1 * u0 * v0)
    rv = v_t + v_x + v0 * v_x + v_disp + 0.5 * _d1(in_x(mod2, t), x, h)
    return ru, rv


def leading_coefficient(n, lam, dn, hn):
    """Coefficient of cn**(2n-1) in row 3 for a degree-n ansatz: -n lam (dn^2 + hn^2)."""
    if int(n) != n or n < 3:
        raise DomainError(f"degree must be an integer >= 3, got {n}")
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    return -n * lam * (dn * dn + hn * hn)
