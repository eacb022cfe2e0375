"""Machine checks for constructed solutions: coefficient vanishing, ODE and
PDE residuals, the m -> 1 limit and the amplitude ratio law.

Every check returns a :class:`ResidualReport` (or a :class:`ConvergenceReport`)
whose ``passed`` flag is decided against a tolerance.  Defaults live in
:data:`DEFAULT_TOLERANCES`; the environment variable ``CNOIDAL_TOL`` overrides
them, either as one number applied to every residual check or as a
comma-separated ``name=value`` list (names as in the defaults).
"""
import json
import math
import os
from dataclasses import asdict, dataclass, field

import numpy as np

from cnoidal.elliptic import complete_K
from cnoidal.errors import ConfigError, DegenerateError, DomainError
from cnoidal.model import SampleGrid, coefficient_set, ode_terms, pde_residuals
from cnoidal.solutions import (
    Branch,
    SolitarySolution,
    cnoidal_params,
    evaluate_fields,
    evaluate_profiles,
    quoted_ratio,
    solitary_limit,
)

DEFAULT_TOLERANCES = {
    "coefficients": 1e-9,
    "ode": 1e-8,
    "pde": 1e-5,
    "ratio": 1e-12,
    "limit": 1e-3,
    "slope": 3.5,
}
LIMIT_MODULI = (0.9, 0.99, 0.999, 0.9999)
SOLITARY_HALF_WIDTH = 10.0


def tolerances(overrides=None):
    """Defaults, then ``CNOIDAL_TOL``, then explicit ``overrides``."""
    tol = dict(DEFAULT_TOLERANCES)
    env = os.environ.get("CNOIDAL_TOL", "").strip()
    if env:
        tol.update(parse_tolerances(env))
    if overrides:
        tol.update(overrides)
    return tol


def parse_tolerances(text):
    """Parse ``"1e-8"`` or ``"ode=1e-7,pde=1e-4"`` into a tolerance dict."""
    text = text.strip()
    try:
        value = float(text)
    except ValueError:
        pass
    else:
        return {k: value for k in DEFAULT_TOLERANCES if k != "slope"}
    out = {}
    for item in filter(None, (p.strip() for p in text.split(","))):
        name, sep, raw = item.partition("=")
        name = name.strip()
        if not sep or name not in DEFAULT_TOLERANCES:
            raise ConfigError(f"bad tolerance entry {item!r}; names: {', '.join(DEFAULT_TOLERANCES)}")
        try:
            out[name] = float(raw)
        except ValueError:
            raise ConfigError(f"tolerance {name!r} is not a number: {raw!r}") from None
    return out


@dataclass(frozen=True)
class ResidualReport:
    check: str
    max_abs: float
    rms: float
    grid_size: int
    tolerance: float
    passed: bool
    worst_location: float
    slope: float = None

    def to_dict(self):
        out = {"check": self.check, "passed": bool(self.passed),
               "max_abs": float(self.max_abs), "rms": float(self.rms),
               "tolerance": float(self.tolerance),
               "worst_location": float(self.worst_location)}
        if self.slope is not None:
            out["slope"] = float(self.slope)
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=False)


@dataclass(frozen=True)
class ConvergenceReport:
    m_values: tuple
    gaps: tuple
    slope: float
    coefficient_gaps: dict = field(default_factory=dict)
    omega_gaps: tuple = ()
    profile_gaps: tuple = ()
    tolerance: float = DEFAULT_TOLERANCES["limit"]

    @property
    def monotone(self):
        return all(b < a for a, b in zip(self.gaps, self.gaps[1:]))

    @property
    def passed(self):
        return self.monotone and self.gaps[-1] <= self.tolerance

    def to_dict(self):
        d = asdict(self)
        d["passed"] = self.passed
        return d


def _report(check, values, locations, tol, slope=None):
    values = np.asarray(values, dtype=float)
    i = int(np.argmax(values))
    max_abs = float(values[i])
    rms = float(np.sqrt(np.mean(values ** 2)))
    return ResidualReport(check, max_abs, rms, int(values.size), float(tol),
                          bool(max_abs <= tol), float(locations[i]), slope)


def verify_coefficients(sol, tol=None):
    """Scaled size of the 13 collected coefficients (0 for an exact solution).

    ``worst_location`` encodes the worst entry (j, q) as ``10 j + q``.
    """
    tol = tolerances()["coefficients"] if tol is None else tol
    cs = coefficient_set(sol.kind, sol.phys, sol.prof, sol.wave)
    scaled = cs.scaled()
    keys = list(scaled)
    return _report("coefficients", [scaled[k] for k in keys],
                   [10 * j + q for j, q in keys], tol)


def ode_window(sol):
    """The xi interval that covers one period (or the solitary core)."""
    wave = sol.wave
    if isinstance(sol, SolitarySolution) or wave.m >= 1.0:
        half = SOLITARY_HALF_WIDTH / wave.lam
        return -half, half
    quarter = complete_K(wave.m) / wave.lam
    return 0.0, (4 * quarter if sol.prof.d1 else 2 * quarter)


def verify_ode(sol, n_points=257, tol=None):
    """Residuals of the three reduced ODEs on ``n_points`` equispaced xi.

    Each equation is scaled by the largest single term it contains anywhere
    on the grid.
    """
    if n_points < 3:
        raise DomainError(f"need at least 3 points, got {n_points}")
    tol = tolerances()["ode"] if tol is None else tol
    lo, hi = ode_window(sol)
    xi = np.linspace(lo, hi, n_points)
    worst = np.zeros(n_points)
    for terms in ode_terms(sol.kind, sol.phys, sol.prof, sol.wave, xi):
        scale = max(float(np.max(np.abs(t))) for t in terms)
        r = np.abs(sum(terms))
        worst = np.maximum(worst, r / scale if scale > 0 else r)
    return _report("ode", worst, xi, tol)


def _samplers(sol):
    return (lambda x, t: evaluate_fields(sol, x, t)[0],
            lambda x, t: evaluate_fields(sol, x, t)[1])


def _pde_max(sol, grid, h):
    u, v = _samplers(sol)
    x = np.asarray(grid.x)
    ru, rv = pde_residuals(sol.kind, sol.phys, u, v, x, grid.t, h)
    return np.maximum(np.abs(ru), np.abs(rv)), x


def richardson_step(sol):
    """A step at which FD truncation, not rounding, dominates the residual."""
    wave, prof = sol.wave, sol.prof
    shaped = 2 * wave.lam if (prof.d1 or prof.d2 or prof.h1 or prof.h2) else 0.0
    rate = max(abs(wave.B) + shaped,
               abs(wave.omega - wave.B * wave.sigma) + wave.sigma * shaped, 1e-3)
    return 0.25 / rate


def verify_pde(sol, grid=None, h=1e-3, tol=None, slope_min=None):
    """Finite-difference residuals of the PDEs themselves.

    Passes when the residual at ``h`` is within tolerance and the residual
    shrinks at fourth order (observed slope >= ``slope_min``) between
    :func:`richardson_step` and half of it.  Exactly representable states
    (residual at round-off at both steps) have no slope to measure and pass
    on the first criterion alone.
    """
    tols = tolerances()
    tol = tols["pde"] if tol is None else tol
    slope_min = tols["slope"] if slope_min is None else slope_min
    if grid is None:
        lo, hi = ode_window(sol)
        grid = SampleGrid(tuple(np.linspace(lo, hi, 33)), 0.0)
    res, x = _pde_max(sol, grid, h)
    hs = richardson_step(sol)
    coarse = float(np.max(_pde_max(sol, grid, hs)[0]))
    fine = float(np.max(_pde_max(sol, grid, hs / 2)[0]))
    slope = None
    if coarse > 1e-9:
        slope = math.log2(coarse / fine) if fine > 0 else math.inf
    rep = _report("pde", res, x, tol, slope)
    if slope is not None and slope < slope_min:
        rep = ResidualReport(rep.check, rep.max_abs, rep.rms, rep.grid_size,
                             rep.tolerance, False, rep.worst_location, slope)
    return rep


def _coeff_vector(sol):
    p = sol.prof
    return np.array([p.d0, p.d2, p.h0, p.h2])


def verify_limit(kind, phys, sigma, sign, m_values=LIMIT_MODULI, tol=None):
    """Approach of the cnoidal family to its solitary limit as m -> 1.

    The gap at each m is the larger of the normwise relative distance of
    (d0, d2, h0, h2) and the relative distance of lambda.
    """
    tol = tolerances()["limit"] if tol is None else tol
    target = solitary_limit(kind, phys, sigma, Branch.for_sign(sign))
    ref = _coeff_vector(target)
    norm = float(np.max(np.abs(ref)))
    half = 5.0 / target.lam
    xi = np.linspace(-half, half, 401)
    f_ref, _ = evaluate_profiles(target, xi)
    gaps, omega_gaps, profile_gaps = [], [], []
    per = {name: [] for name in ("d0", "d2", "h0", "h2", "lam", "B")}
    for m in m_values:
        sol = cnoidal_params(kind, phys, sigma, m, sign)
        vec = _coeff_vector(sol)
        for name, a, b in zip(("d0", "d2", "h0", "h2"), vec, ref):
            per[name].append(abs(a - b) / norm)
        per["lam"].append(abs(sol.wave.lam - target.lam) / target.lam)
        per["B"].append(abs(sol.wave.B - target.B))
        gaps.append(max(float(np.max(np.abs(vec - ref))) / norm, per["lam"][-1]))
        omega_gaps.append(abs(sol.wave.omega - target.omega))
        f_m, _ = evaluate_profiles(sol, xi)
        profile_gaps.append(float(np.max(np.abs(f_m - f_ref))))
    x = np.log(1.0 - np.asarray(m_values))
    y = np.log(np.maximum(gaps, 1e-300))
    slope = float(np.polyfit(x, y, 1)[0])
    return ConvergenceReport(tuple(m_values), tuple(gaps), slope,
                             {k: tuple(v) for k, v in per.items()},
                             tuple(omega_gaps), tuple(profile_gaps), tol)


def verify_ratio(sol, tol=None):
    """|h2/d2 - closed-form ratio|."""
    tol = tolerances()["ratio"] if tol is None else tol
    d2, h2 = sol.prof.d2, sol.prof.h2
    if d2 == 0:
        raise DegenerateError("d2 = 0: the amplitude ratio is undefined (m = 0 or zero amplitude)")
    want = quoted_ratio(sol.kind, sol.phys, sol.wave.sigma)
    return _report("ratio", [abs(h2 / d2 - want)], [0.0], tol)
