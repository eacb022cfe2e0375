import io
import math

import numpy as np
import pytest

from cnoidal.elliptic import complete_K
from cnoidal.errors import ConfigError, StabilityError
from cnoidal.model import PhysicalParams, SystemKind
from cnoidal.simulate import (
    BLOWUP_FACTOR,
    SpectralConfig,
    conservation_probe,
    fundamental_period,
    run_propagation,
    time_convergence,
    write_csv,
)
from cnoidal.solutions import cnoidal_params, feasible_solutions, semi_trivial_family
from tests.conftest import FIGURES

KK = SystemKind.KDV_KDV


def figure_solution(kind, m=0.5):
    phys, sigma = FIGURES[kind]
    (sol,) = feasible_solutions(kind, phys, sigma, m)
    return sol


class TestConfig:
    @pytest.mark.parametrize("kw", [dict(n_modes=100), dict(n_modes=8), dict(n_modes=64.0),
                                    dict(domain_length=0.0), dict(domain_length=math.inf),
                                    dict(dt=0.0), dict(t_end=1e-4), dict(n_outputs=0)])
    def test_rejects(self, kw):
        args = dict(n_modes=64, domain_length=1.0, dt=1e-3, t_end=1.0) | kw
        with pytest.raises(ConfigError):
            SpectralConfig(**args)

    def test_period_of_each_family(self):
        sol = figure_solution(KK)
        assert fundamental_period(sol) == pytest.approx(2 * complete_K(0.5) / sol.wave.lam)
        phys, _ = FIGURES[SystemKind.KDV_BBM]
        cn = semi_trivial_family(SystemKind.KDV_BBM, phys, 3, {"h2": 1.0, "m": 0.9})
        assert fundamental_period(cn) == pytest.approx(4 * complete_K(0.9) / cn.wave.lam)
        const = semi_trivial_family(KK, phys, 1)
        assert fundamental_period(const, fallback=3.0) == 3.0

    def test_solitary_is_not_periodic(self):
        phys, sigma = FIGURES[KK]
        with pytest.raises(ConfigError):
            fundamental_period(cnoidal_params(KK, phys, sigma, 1.0, 1))

    def test_domain_must_hold_whole_periods(self):
        sol = figure_solution(KK)
        cfg = SpectralConfig(64, 1.5 * fundamental_period(sol), 1e-2, 0.1)
        with pytest.raises(ConfigError, match="multiple"):
            run_propagation(sol, cfg)

    def test_t_end_must_be_whole_steps(self):
        sol = figure_solution(KK)
        cfg = SpectralConfig.for_solution(sol, 64, dt=0.3, t_end=1.0)
        with pytest.raises(ConfigError):
            run_propagation(sol, cfg)

    def test_unknown_method(self):
        sol = figure_solution(KK)
        with pytest.raises(ConfigError):
            run_propagation(sol, SpectralConfig.for_solution(sol, 32, 0.1, 0.2), method="euler")


def test_constant_state_is_a_fixed_point(kind):
    phys, _ = FIGURES[kind]
    sol = semi_trivial_family(kind, phys, 1, {"h0": 0.8})
    rep = run_propagation(sol, SpectralConfig.for_solution(sol, 32, dt=0.05, t_end=2.0))
    assert rep.linf_error_u == 0 and rep.linf_error_v <= 1e-15
    assert rep.conserved_drift <= 1e-15
    assert rep.errors_over_time[0] == (0.0, 0.0)


@pytest.mark.parametrize("kind", list(SystemKind), ids=lambda k: k.value)
def test_exact_translation_to_unit_time(kind):
    sol = figure_solution(kind)
    rep = run_propagation(sol, SpectralConfig.for_solution(sol, 64, dt=0.01, t_end=1.0))
    assert max(rep.linf_error_u, rep.linf_error_v) <= 1e-8
    assert rep.conserved_drift <= 1e-13
    assert len(rep.times) == 11 and rep.times[-1] == pytest.approx(1.0)


def test_plane_wave_family():
    phys, _ = FIGURES[KK]
    sol = semi_trivial_family(KK, phys, 2, {"B": 0.5, "d0": 0.3, "h0": 1.0, "omega": 1.0})
    rep = run_propagation(sol, SpectralConfig.for_solution(sol, 16, dt=0.01, t_end=0.5))
    assert rep.linf_error_u <= 1e-11 and rep.linf_error_v <= 1e-14


def test_cn_family_uses_the_long_period():
    phys, _ = FIGURES[SystemKind.KDV_BBM]
    sol = semi_trivial_family(SystemKind.KDV_BBM, phys, 3, {"h2": 1.0, "m": 0.9})
    rep = run_propagation(sol, SpectralConfig.for_solution(sol, 64, dt=1e-3, t_end=0.5))
    assert max(rep.linf_error_u, rep.linf_error_v) <= 1e-8


@pytest.mark.parametrize("m", [0.5, 0.9, 0.99])
def test_spectral_convergence_in_modes(m):
    # errors fall geometrically until round-off (reached near 64 modes here),
    # so the ratio is measured on the resolved side
    sol = figure_solution(KK, m)

    def err(n):
        rep = run_propagation(sol, SpectralConfig.for_solution(sol, n, dt=1e-3, t_end=0.02,
                                                               n_outputs=1))
        return max(rep.linf_error_u, rep.linf_error_v)

    e16, e32 = err(16), err(32)
    assert e32 / e16 < 1e-2


def test_fourth_order_in_time(kind):
    sol = figure_solution(kind)
    errors, slopes = time_convergence(sol, n_modes=64, dts=(0.2, 0.1, 0.05), t_end=1.0)
    assert all(s == pytest.approx(4.0, abs=0.3) for s in slopes), (errors, slopes)


def test_stepper_selection():
    sol = figure_solution(KK)
    assert run_propagation(sol, SpectralConfig.for_solution(sol, 256, 1e-3, 1e-3)).method == "ifrk4"
    assert run_propagation(sol, SpectralConfig.for_solution(sol, 16, 1e-3, 1e-3)).method == "rk4"
    forced = run_propagation(sol, SpectralConfig.for_solution(sol, 32, 1e-3, 2e-3), method="ifrk4")
    assert forced.method == "ifrk4" and forced.steps == 2


def test_dealiasing_changes_nothing_for_resolved_data():
    sol = figure_solution(KK)
    a = run_propagation(sol, SpectralConfig.for_solution(sol, 64, 0.01, 0.2))
    b = run_propagation(sol, SpectralConfig.for_solution(sol, 64, 0.01, 0.2, dealias=False))
    assert abs(a.linf_error_v - b.linf_error_v) <= 1e-12


def _gauge_case(turns=1):
    # KdV-BBM cn family with lambda tuned so that B times the period is 2 pi * turns
    phys = PhysicalParams(1.0, 0.25, 1.0, -1.0, 1.5)
    a, m = phys.a, 0.9
    B = (phys.a * phys.mu1 - phys.b) / (2 * phys.a)
    lam = abs(B) * 4 * complete_K(m) / (2 * math.pi * turns)
    h2 = 2 * a * m * m * lam * lam
    return semi_trivial_family(SystemKind.KDV_BBM, phys, 3, {"h2": h2, "m": m})


def test_gauge_matches_direct_evolution():
    # the index-based 2/3 mask selects different physical modes in the two
    # frames, so the comparison runs undealiased with one fixed stepper
    sol = _gauge_case()
    cfg = SpectralConfig.for_solution(sol, 64, dt=0.01, t_end=0.5, dealias=False)
    assert sol.wave.B * cfg.domain_length == pytest.approx(2 * math.pi)
    a = run_propagation(sol, cfg, method="ifrk4", gauge=True, keep_states=True)
    b = run_propagation(sol, cfg, method="ifrk4", gauge=False, keep_states=True)
    assert a.linf_error_u > 1e-7
    assert np.max(np.abs(a.final_state[0] - b.final_state[0])) <= 1e-11
    assert np.max(np.abs(a.final_state[1] - b.final_state[1])) <= 1e-11


def test_direct_evolution_needs_whole_turns():
    sol = figure_solution(KK)
    with pytest.raises(ConfigError, match="2 pi"):
        run_propagation(sol, SpectralConfig.for_solution(sol, 32, 0.01, 0.1), gauge=False)


def test_mass_drift_is_timestep_independent():
    sol = figure_solution(KK)
    drifts = [run_propagation(sol, SpectralConfig.for_solution(sol, 64, dt, 0.5)).conserved_drift
              for dt in (0.05, 0.025)]
    assert max(drifts) <= 1e-13


def test_blow_up_is_detected():
    # without dealiasing, at an unstable step, the explicit scheme diverges
    sol = figure_solution(KK)
    cfg = SpectralConfig.for_solution(sol, 256, dt=0.05, t_end=5.0, dealias=False)
    with pytest.raises(StabilityError, match=f"{BLOWUP_FACTOR}x"):
        run_propagation(sol, cfg, method="rk4")


def test_csv_output():
    sol = figure_solution(KK)
    rep = run_propagation(sol, SpectralConfig.for_solution(sol, 32, 0.05, 0.2, n_outputs=2))
    text = rep.to_csv()
    lines = text.split("\n")
    assert lines[0] == "t,err_u_linf,err_v_linf,mass_drift"
    assert len(lines) == len(rep.times) + 2 and lines[-1] == ""
    buf = io.StringIO()
    write_csv(rep, buf)
    assert buf.getvalue() == text
    assert [float(r.split(",")[0]) for r in lines[1:-1]] == rep.times


class TestConservationProbe:
    def test_constant_states(self):
        assert conservation_probe([np.ones(4), np.ones(4)]) == 0.0

    def test_reports_largest_drift(self):
        assert conservation_probe([np.zeros(3), np.full(3, 0.5), np.full(3, -1.0)]) == 1.0

    def test_needs_two_states(self):
        with pytest.raises(ValueError):
            conservation_probe([np.zeros(3)])
