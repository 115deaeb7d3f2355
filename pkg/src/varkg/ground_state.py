"""Ground states of -Delta(phi) + m0 phi = |phi|^(p-1) phi.

Dimension 1 has the closed-form solitary profile; dimensions 2 and 3 use
radial shooting on the amplitude phi(0).  Both constructors validate the
same invariants: small ODE residual, vanishing Nehari and Pohozaev
combinations, positivity, and monotone decay.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BracketError, ConvergenceError, InvalidInput
from .model import (
    PowerKG,
    action_S,
    check_subcritical,
    nehari_K,
    pohozaev_residual,
)
from .radial_core import GridFunction, RadialGrid, h1_norm_sq

# invariant tolerances, relative to the natural scale of each identity
ODE_RESIDUAL_TOL = 1e-4        # times phi(0)^p
CONSTRAINT_TOL = 1e-3          # times ||phi||_H1^2
DECAY_FLOOR = 1e-10            # profile must dip below this before r = R


@dataclass(frozen=True)
class GroundState:
    """A validated least-energy profile together with its diagnostics."""

    profile: GridFunction
    nonlinearity: PowerKG
    level: float
    center_value: float
    ode_residual: float
    nehari_residual: float
    pohozaev_residual: float

    @property
    def grid(self) -> RadialGrid:
        return self.profile.grid


def least_energy(gs: GroundState) -> float:
    """The action at the ground state (the mountain-pass level)."""
    return gs.level


def equation_residual(v: GridFunction, nl: PowerKG) -> float:
    """Max norm of -lap(phi) + m0 phi - |phi|^(p-1) phi over interior nodes.

    Fourth-order stencils keep the measurement error well below the
    acceptance tolerance on production grids; a radial profile is even in
    r, so ghost nodes across the origin mirror the interior values.
    """
    g = v.grid
    h = g.spacing
    # two mirrored ghost nodes ahead of r=0, one plain ghost past r=R
    ext = np.concatenate((v.values[2:0:-1], v.values, v.values[-1:]))
    # original node k sits at ext index k+2; interior nodes are 1..M-1
    i = np.arange(3, ext.size - 2)
    d2 = (-ext[i - 2] + 16.0 * ext[i - 1] - 30.0 * ext[i]
          + 16.0 * ext[i + 1] - ext[i + 2]) / (12.0 * h**2)
    d1 = (ext[i - 2] - 8.0 * ext[i - 1] + 8.0 * ext[i + 1] - ext[i + 2]) / (12.0 * h)
    lap = d2
    if g.dimension > 1:
        lap = lap + (g.dimension - 1) / g.r[1:-1] * d1
    mid = v.values[1:-1]
    res = -lap + nl.mass * mid - np.abs(mid) ** (nl.p - 1.0) * mid
    return float(np.abs(res).max())


def _validate(profile: GridFunction, nl: PowerKG) -> GroundState:
    vals = profile.values
    a = float(vals[0])
    if a <= 0 or np.any(vals < 0):
        raise ConvergenceError("ground-state profile must be positive")
    if np.any(np.diff(vals) > 0):
        raise ConvergenceError("ground-state profile must decay monotonically")
    ode_res = equation_residual(profile, nl)
    if ode_res > ODE_RESIDUAL_TOL * a**nl.p:
        raise ConvergenceError(
            f"equation residual {ode_res:.3e} exceeds {ODE_RESIDUAL_TOL:.0e} * phi(0)^p")
    h1 = h1_norm_sq(profile)
    kn = nehari_K(profile, nl)
    pz = pohozaev_residual(profile, nl)
    if abs(kn) > CONSTRAINT_TOL * h1:
        raise ConvergenceError(f"Nehari residual {kn:.3e} too large for H1 norm {h1:.3e}")
    if abs(pz) > CONSTRAINT_TOL * h1:
        raise ConvergenceError(f"Pohozaev residual {pz:.3e} too large for H1 norm {h1:.3e}")
    return GroundState(
        profile=profile,
        nonlinearity=nl,
        level=action_S(profile, nl),
        center_value=a,
        ode_residual=ode_res,
        nehari_residual=kn,
        pohozaev_residual=pz,
    )


def closed_form_1d(p: float, omega: float, grid: RadialGrid) -> GroundState:
    """The explicit even solitary wave in dimension 1.

    phi(x) = (m0 (p+1) / 2)^(1/(p-1)) sech(( p-1) sqrt(m0) x / 2)^(2/(p-1)).
    """
    if grid.dimension != 1:
        raise InvalidInput("the closed form lives in dimension 1")
    nl = PowerKG(p, omega)  # raises InvalidMass/InvalidInput for bad parameters
    m0 = nl.mass
    amp = (0.5 * m0 * (p + 1.0)) ** (1.0 / (p - 1.0))
    rate = 0.5 * (p - 1.0) * math.sqrt(m0)
    with np.errstate(over="ignore"):
        sech = 1.0 / np.cosh(rate * grid.r)
    profile = GridFunction(grid, amp * sech ** (2.0 / (p - 1.0)))
    return _validate(profile, nl)


def _classify_shot(a: float, p: float, m0: float, grid: RadialGrid, record: bool):
    """March the radial ODE outward from amplitude a with fixed-step RK4.

    Returns (status, values, filled): status is "cross" when the solution
    goes negative, "diverge" when it exceeds twice the amplitude, "end"
    at r = R; values holds node samples up to index filled-1 when
    record is true.
    """
    n = grid.dimension
    h = grid.spacing
    step = 0.25 * h
    pm1 = p - 1.0
    nm1 = float(n - 1)
    upper = 2.0 * a

    # series start past the coordinate singularity:
    # phi ~ a + c2 r^2 + c4 r^4 with Delta(r^k) = k(k+N-2) r^(k-2)
    c2 = (m0 * a - a**p) / (2.0 * n)
    c4 = c2 * (m0 - p * a**pm1) / (4.0 * (n + 2.0))
    r = h
    phi = a + c2 * r * r + c4 * r**4
    psi = 2.0 * c2 * r + 4.0 * c4 * r**3

    vals = np.empty(grid.cells + 1) if record else None
    if record:
        vals[0] = a
        vals[1] = phi
    filled = 2
    status = "end"

    for i in range(2, grid.cells + 1):
        for _ in range(4):
            # one RK4 substep of (phi' = psi, psi' = m0 phi - |phi|^(p-1) phi - (n-1) psi / r)
            k1p = psi
            k1s = m0 * phi - abs(phi) ** pm1 * phi - nm1 * psi / r
            rh = r + 0.5 * step
            p2 = phi + 0.5 * step * k1p
            s2 = psi + 0.5 * step * k1s
            k2p = s2
            k2s = m0 * p2 - abs(p2) ** pm1 * p2 - nm1 * s2 / rh
            p3 = phi + 0.5 * step * k2p
            s3 = psi + 0.5 * step * k2s
            k3p = s3
            k3s = m0 * p3 - abs(p3) ** pm1 * p3 - nm1 * s3 / rh
            r2 = r + step
            p4 = phi + step * k3p
            s4 = psi + step * k3s
            k4p = s4
            k4s = m0 * p4 - abs(p4) ** pm1 * p4 - nm1 * s4 / r2
            phi += step * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0
            psi += step * (k1s + 2.0 * k2s + 2.0 * k3s + k4s) / 6.0
            r = r2
            if phi < 0.0:
                return "cross", vals, filled
            if phi > upper:
                return "diverge", vals, filled
        if record:
            vals[i] = phi
        filled = i + 1
    return status, vals, filled


def shoot_radial(p: float, omega: float, dimension: int, grid: RadialGrid,
                 bracket: tuple[float, float] = (1.0, 4.0)) -> GroundState:
    """Bisection shooting on the center amplitude.

    The bracket must straddle the critical amplitude: its lower end
    classifies as non-crossing and its upper end crosses zero.  The
    returned profile keeps the last non-crossing shot up to its turning
    point and continues with the matched linear-decay tail
    phi(r*) (r*/r)^((N-1)/2) exp(-sqrt(m0)(r - r*)), which restores decay
    past the double-precision resolution limit of the bisection itself.
    """
    if grid.dimension != dimension:
        raise InvalidInput(f"grid dimension {grid.dimension} != requested {dimension}")
    nl = PowerKG(p, omega)
    check_subcritical(p, dimension)
    m0 = nl.mass
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (0 < lo < hi):
        raise InvalidInput(f"bracket must satisfy 0 < lo < hi, got {bracket!r}")

    status_lo, _, _ = _classify_shot(lo, p, m0, grid, record=False)
    status_hi, _, _ = _classify_shot(hi, p, m0, grid, record=False)
    if status_lo == "cross" or status_hi != "cross":
        raise BracketError(
            f"bracket {bracket!r} does not straddle the critical amplitude "
            f"(lo -> {status_lo}, hi -> {status_hi})")

    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break  # bracket collapsed to adjacent doubles
        status, _, _ = _classify_shot(mid, p, m0, grid, record=False)
        if status == "cross":
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-15 * hi:
            break
    else:
        raise ConvergenceError("bisection failed to collapse the amplitude bracket")

    status, vals, filled = _classify_shot(lo, p, m0, grid, record=True)
    if status == "cross":
        raise ConvergenceError("final shot crossed zero; bracket degenerated")
    kept = vals[:filled]
    i_star = int(np.argmin(kept))
    # back off the turning point onto the clean decay segment: near the
    # turn the shot flattens and r^((N-1)/2) * phi would tick upward
    rate = 0.5 * math.sqrt(m0) * grid.spacing
    while i_star > 1 and kept[i_star - 1] - kept[i_star] < rate * kept[i_star]:
        i_star -= 1
    if i_star <= 1 or kept[i_star] <= 0.0:
        raise ConvergenceError("final shot has no decaying segment")
    r_star = grid.r[i_star]
    v_star = float(kept[i_star])
    tail_r = grid.r[i_star + 1:]
    decay = np.exp(-math.sqrt(m0) * (tail_r - r_star))
    if dimension > 1:
        decay = decay * (r_star / tail_r) ** (0.5 * (dimension - 1))
    out = np.empty(grid.cells + 1)
    out[:i_star + 1] = kept[:i_star + 1]
    out[i_star + 1:] = v_star * decay
    if dimension >= 2:
        out[-1] = 0.0
    if float(out[:-1].min()) > DECAY_FLOOR:
        raise ConvergenceError(
            f"profile never decays below {DECAY_FLOOR:.0e} before r = R; "
            "enlarge the domain")
    return _validate(GridFunction(grid, out), nl)
