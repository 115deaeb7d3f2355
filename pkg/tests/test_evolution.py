"""Leapfrog radial Klein-Gordon evolution and the invariant-set machinery."""

import math

import numpy as np
import pytest
from scipy.special import j0

from varkg import (
    BLOWUP_DETECTED,
    BOUNDARY_CONTAMINATION,
    EvolutionState,
    GridFunction,
    GridMismatch,
    InvalidInput,
    InvalidParameter,
    LINEAR_KG,
    NON_FINITE,
    PreconditionFailed,
    REACHED_TMAX,
    RadialGrid,
    TruncationOverflow,
    Unsupported,
    discrete_energy,
    energy_E,
    energy_drift,
    evolve,
    invariant_monitor,
    least_energy,
    make_initial_data,
    radial_laplacian,
    step,
)

from oracle_townes import J0_FIRST_ZERO


def eigenmode(outer=10.0, cells=400):
    """Lowest Dirichlet mode of the 2d linear problem with its period."""
    grid = RadialGrid(2, outer, cells)
    k = J0_FIRST_ZERO / outer
    vals = j0(k * grid.r)
    vals[-1] = 0.0
    period = 2.0 * math.pi / math.sqrt(k * k + 1.0)
    return GridFunction(grid, vals), period


def test_zero_data_stays_zero(nl3):
    grid = RadialGrid(2, 10.0, 100)
    zero = GridFunction.zeros(grid)
    traj = evolve(zero, zero, nl3, t_max=1.0)
    assert traj.termination == REACHED_TMAX
    for rec in traj.records:
        assert rec.energy == 0.0 and rec.h1_norm == 0.0
    assert energy_drift(traj) == 0.0


def test_origin_stencil_consistency():
    # lap(r^2) = 2N everywhere, including the symmetric origin stencil
    for n in (1, 2, 3):
        grid = RadialGrid(n, 5.0, 50)
        lap = radial_laplacian(grid.r**2, grid)
        assert np.abs(lap[:-1] - 2.0 * n).max() <= 1e-10


def test_step_guards(nl3):
    grid = RadialGrid(2, 10.0, 100)
    state = EvolutionState(grid, np.zeros(101), np.zeros(101), 0.0)
    with pytest.raises(InvalidParameter):
        step(state, 0.0, nl3)
    with pytest.raises(InvalidParameter):
        step(state, 1.0, nl3)  # exceeds cfl * h


def test_step_local_order():
    # two half steps vs one full step differ at O(dt^3)
    mode, _ = eigenmode()
    grid = mode.grid

    def defect(dt):
        full = step(EvolutionState(grid, mode.values.copy(),
                                   np.zeros_like(mode.values), 0.0),
                    dt, LINEAR_KG)
        half = step(EvolutionState(grid, mode.values.copy(),
                                   np.zeros_like(mode.values), 0.0),
                    dt / 2.0, LINEAR_KG)
        half = step(half, dt / 2.0, LINEAR_KG)
        return np.abs(full.u - half.u).max()

    d1 = defect(0.008)
    d2 = defect(0.004)
    assert d1 / d2 >= 6.0


def test_eigenmode_period_and_drift():
    mode, period = eigenmode(cells=400)
    traj = evolve(mode, GridFunction.zeros(mode.grid), LINEAR_KG,
                  t_max=period)
    assert traj.termination == REACHED_TMAX
    err = np.abs(traj.final_state.u - mode.values).max()
    assert err <= 5e-3
    assert abs(energy_drift(traj)) <= 1e-4
    times = [rec.t for rec in traj.records]
    assert np.all(np.diff(times) > 0.0)


def test_eigenmode_mesh_convergence():
    errors = []
    for cells in (100, 200):
        mode, period = eigenmode(cells=cells)
        traj = evolve(mode, GridFunction.zeros(mode.grid), LINEAR_KG,
                      t_max=period)
        errors.append(np.abs(traj.final_state.u - mode.values).max())
    assert errors[0] / errors[1] >= 3.5


def test_leapfrog_reversibility(nl3):
    grid = RadialGrid(2, 10.0, 200)
    vals = np.exp(-grid.r**2)
    vals[-1] = 0.0
    u0 = vals.copy()
    state = EvolutionState(grid, vals.copy(), np.zeros(201), 0.0)
    dt = 0.4 * grid.spacing
    for _ in range(100):
        state = step(state, dt, nl3)
    state = EvolutionState(grid, state.u, -state.v, 0.0)
    for _ in range(100):
        state = step(state, dt, nl3)
    assert np.abs(state.u - u0).max() <= 1e-10 * np.abs(u0).max()


def test_evolve_input_validation(nl3):
    grid = RadialGrid(2, 10.0, 100)
    zero = GridFunction.zeros(grid)
    cplx = GridFunction(grid, np.zeros(101, dtype=complex))
    with pytest.raises(InvalidInput):
        evolve(cplx, zero, nl3, t_max=1.0)
    with pytest.raises(InvalidParameter):
        evolve(zero, zero, nl3, t_max=0.0)
    with pytest.raises(InvalidParameter):
        evolve(zero, zero, nl3, t_max=1.0, blowup_factor=1.0)
    other = GridFunction.zeros(RadialGrid(2, 10.0, 120))
    with pytest.raises(GridMismatch):
        evolve(zero, other, nl3, t_max=1.0)


def test_initial_data_at_unity_is_boundary(townes):
    u, report = make_initial_data(townes, 1.0, 1.0)
    assert np.array_equal(u.values, townes.profile.values)
    assert report["energy"] == report["m_ref"]
    assert report["in_invariant_set"] is False


def test_initial_data_inside_set(townes):
    m = least_energy(townes)
    u, report = make_initial_data(townes, 1.05, 1.05)
    assert report["energy"] < m
    assert np.isclose(report["action"], 0.9779 * m, rtol=1e-3)
    assert np.isclose(report["p_value"], 0.729, rtol=0, atol=5e-3)
    assert report["in_invariant_set"] is True


def test_initial_data_below_unity_leaves_set(townes):
    _, report = make_initial_data(townes, 0.9, 1.0)
    assert report["p_value"] < 0.0
    assert report["in_invariant_set"] is False


def test_initial_data_resample_and_guards(townes, phi_1d):
    target = RadialGrid(2, 40.0, 2000)
    u, report = make_initial_data(townes, 1.0, 1.0, grid=target)
    assert u.grid is target
    assert np.isclose(report["energy"], report["m_ref"], rtol=1e-3)
    with pytest.raises(InvalidParameter):
        make_initial_data(townes, 0.0, 1.0)
    with pytest.raises(Unsupported):
        make_initial_data(phi_1d, 1.0, 1.0)
    with pytest.raises(TruncationOverflow):
        make_initial_data(townes, 1.0, 100.0)


def test_discrete_energy_tracks_quadrature(townes, nl3):
    zero = GridFunction.zeros(townes.grid)
    m = least_energy(townes)
    assert np.isclose(discrete_energy(townes.profile, zero, nl3),
                      energy_E(townes.profile, zero, nl3),
                      rtol=0, atol=1e-3 * abs(m))
    other = GridFunction.zeros(RadialGrid(2, 40.0, 2000))
    with pytest.raises(GridMismatch):
        discrete_energy(townes.profile, other, nl3)


def test_unstable_data_blows_up(townes, nl3):
    m = least_energy(townes)
    u, report = make_initial_data(townes, 1.05, 1.05)
    assert report["in_invariant_set"]
    traj = evolve(u, GridFunction.zeros(u.grid), nl3, t_max=20.0,
                  blowup_factor=5.0, m_ref=m, cfl=0.1)
    assert traj.termination == BLOWUP_DETECTED
    monitor = invariant_monitor(traj)
    # membership persists at every record until the escape
    assert monitor.in_set_throughout
    assert monitor.min_p > 0.0
    # P >= 0 forces T >= m on the records (the T/P equivalence)
    assert monitor.min_kinetic >= m - 1e-3 * m
    # the conserved energy stays put while the records remain meaningful
    # (coarse dt here; the dt^2 scaling itself is covered elsewhere)
    assert abs(energy_drift(traj, end=len(traj.records) - 1)) <= 5e-2


def test_monitor_preconditions(townes, nl3):
    grid = RadialGrid(2, 10.0, 100)
    zero = GridFunction.zeros(grid)
    no_ref = evolve(zero, zero, nl3, t_max=0.5)
    with pytest.raises(PreconditionFailed):
        invariant_monitor(no_ref)
    m = least_energy(townes)
    boundary = evolve(zero, zero, nl3, t_max=0.5, m_ref=m)
    with pytest.raises(PreconditionFailed):
        invariant_monitor(boundary)  # E < m but P = 0: not inside
    mode, _ = eigenmode()
    small = GridFunction(mode.grid, 1e-3 * mode.values)
    low = evolve(small, GridFunction.zeros(mode.grid), nl3, t_max=0.2,
                 m_ref=m)
    with pytest.raises(PreconditionFailed):
        invariant_monitor(low)  # E < m but P < 0 at small amplitude


def test_boundary_contamination_detected():
    grid = RadialGrid(2, 10.0, 200)
    vals = np.exp(-4.0 * (grid.r - 5.0) ** 2)
    vals[-1] = 0.0
    pulse = GridFunction(grid, vals)
    traj = evolve(pulse, GridFunction.zeros(grid), LINEAR_KG, t_max=20.0)
    assert traj.termination == BOUNDARY_CONTAMINATION
    assert traj.records[-1].t < 20.0


def test_non_finite_detected(nl3):
    # finite data far beyond the focusing threshold: the cubic term sends
    # the diagnostics (then the state itself) out of range within a step
    grid = RadialGrid(2, 10.0, 100)
    vals = np.full(101, 1e70)
    vals[-1] = 0.0
    huge = GridFunction(grid, vals)
    traj = evolve(huge, GridFunction.zeros(grid), nl3, t_max=1.0)
    assert traj.termination == NON_FINITE
    with pytest.raises(InvalidInput):
        energy_drift(traj)  # only the initial record exists


def test_energy_drift_end_slicing(nl3):
    mode, period = eigenmode(cells=100)
    traj = evolve(mode, GridFunction.zeros(mode.grid), LINEAR_KG,
                  t_max=period)
    full = energy_drift(traj)
    partial = energy_drift(traj, end=3)
    assert abs(partial) <= abs(full) + 1e-15
    with pytest.raises(InvalidInput):
        energy_drift(traj, end=1)
