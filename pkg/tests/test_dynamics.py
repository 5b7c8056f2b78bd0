import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core import dynamics
from core.dynamics import equilibrium, simulate, step
from core.errors import DimensionError, SteadyStateError, ValidationError
from core.topology import ArchitectureKind, ArchitectureSpec, build_architecture

CODES = [kind.value for kind in ArchitectureKind]


def test_first_row_is_source_vector(make_system):
    system = make_system("SDO")
    trajectory = simulate(system, 10)
    assert trajectory.steps == 10
    assert trajectory.states.shape == (11, 5)
    assert np.array_equal(trajectory.states[0], system.source_vector)


def test_zero_steps(make_system):
    trajectory = simulate(make_system("P"), 0)
    assert trajectory.states.shape == (1, 5)
    assert trajectory.is_monotone()


def test_negative_steps_rejected(make_system):
    with pytest.raises(ValidationError) as excinfo:
        simulate(make_system("P"), -1)
    assert excinfo.value.flag == "--steps"


def test_step_matches_simulate(make_system):
    system = make_system("SNC", 0.1, 0.8)
    trajectory = simulate(system, 3)
    assert np.allclose(step(system, trajectory.states[2]), trajectory.states[3])


def test_step_rejects_wrong_dimension(make_system):
    with pytest.raises(DimensionError):
        step(make_system("PA"), np.zeros(4))


def test_parallel_isolated_agents_closed_form(make_system):
    trajectory = simulate(make_system("P"), 20)
    t = np.arange(21)
    expected = 1.0 - 0.8 ** (t + 1)
    assert np.allclose(trajectory.agent(3), expected)


def test_trajectory_is_read_only(make_system):
    trajectory = simulate(make_system("PDC"), 5)
    with pytest.raises(ValueError):
        trajectory.states[0, 0] = 1.0


@pytest.mark.parametrize("code,s,f,expected", [
    ("P", 0.8, 0.1, [1.0] * 5),
    ("P", 0.1, 0.8, [0.2 / 0.9] * 5),
    ("PDC", 0.8, 0.1, [2.0] * 5),
    ("PDC", 0.1, 0.8, [2.0] * 5),
    ("SDO", 0.1, 0.8, [1.1111111, 0.9876543, 0.8779150, 0.7803689, 0.6936612]),
])
def test_equilibrium_values(code, s, f, expected, make_system):
    steady = equilibrium(make_system(code, s, f))
    assert steady.x_eq == pytest.approx(expected, abs=1e-6)
    assert steady.residual < 1e-12


@pytest.mark.parametrize("code", CODES)
@pytest.mark.parametrize("s,f", [(0.8, 0.1), (0.1, 0.8)])
def test_long_run_matches_equilibrium(code, s, f, make_system):
    system = make_system(code, s, f)
    trajectory = simulate(system, 10_000)
    steady = equilibrium(system)
    assert trajectory.final == pytest.approx(steady.x_eq, rel=1e-8)


@pytest.mark.parametrize("s,f", [(0.8, 0.1), (0.1, 0.8)])
def test_symmetric_trajectories(s, f, make_system):
    pdc = simulate(make_system("PDC", s, f), 200).states
    pnc = simulate(make_system("PNC", s, f), 200).states
    assert np.max(np.abs(pdc - pnc)) <= 1e-12
    assert np.max(np.abs(pdc - pdc[:, :1])) <= 1e-12

    sa = simulate(make_system("SA", s, f), 200).states
    assert np.max(np.abs(sa[:, 1:] - sa[:, 1:2])) <= 1e-12
    assert not np.allclose(sa[:, 0], sa[:, 1])


@pytest.mark.parametrize("code", CODES)
def test_lossless_designs_conserve_supply(code, make_system):
    system = make_system(code, 0.1, 0.8)
    x_eq = equilibrium(system).x_eq
    if not system.waste_mask.any():
        assert system.e * x_eq.sum() == pytest.approx(system.b)


def test_symmetric_designs_share_equilibrium(make_system):
    reference = equilibrium(make_system("PDC", 0.1, 0.8)).x_eq
    for code in ("PNC", "PA"):
        assert equilibrium(make_system(code, 0.1, 0.8)).x_eq == pytest.approx(reference)


@pytest.mark.parametrize("code", CODES)
def test_equilibrium_scales_with_source_rate(code, make_system):
    one = equilibrium(make_system(code, 0.1, 0.8)).x_eq
    two = equilibrium(make_system(code, 0.1, 0.8, b=2.0)).x_eq
    assert two == pytest.approx(2.0 * one, rel=1e-12)


def test_no_sink_is_singular(make_system):
    with pytest.raises(SteadyStateError, match="no steady state"):
        equilibrium(make_system("PDC", 0.5, 0.5))


def test_fully_retaining_agents_are_singular(make_system):
    with pytest.raises(SteadyStateError):
        equilibrium(make_system("P", 1.0, 0.0))


def test_open_chain_without_sink_still_drains(make_system):
    steady = equilibrium(make_system("SDO", 0.5, 0.5))
    assert np.all(np.isfinite(steady.x_eq))


@pytest.mark.parametrize("kind", list(ArchitectureKind))
@settings(max_examples=20, deadline=None)
@given(s=st.floats(min_value=0.0, max_value=0.95),
       share=st.floats(min_value=0.0, max_value=1.0))
def test_states_never_decrease(kind, s, share):
    f = share * (0.95 - s)
    system = build_architecture(ArchitectureSpec(kind), s, f)
    trajectory = simulate(system, 100)
    assert trajectory.is_monotone(tol=1e-12 * float(np.abs(trajectory.states).max()))


def test_bad_solve_fails_fixed_point_check(make_system, monkeypatch):
    monkeypatch.setattr(dynamics, "lu_solve", lambda factors, rhs: 2.0 * rhs)
    with pytest.raises(SteadyStateError, match="fixed-point check"):
        equilibrium(make_system("SDO", 0.1, 0.8))
