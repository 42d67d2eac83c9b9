"""Emden-Fowler coordinates ``s = -log r`` for radial profiles.

In these coordinates a normalised radial extremal becomes an even soliton of
the autonomous equation ``-phi'' + Lambda phi = phi^{p-1}``, and dilations
become translations in ``s``.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import minimize_scalar

from .errors import NoDecayFound


@dataclass(frozen=True)
class EFProfile:
    s_grid: np.ndarray
    phi: np.ndarray
    Lambda: float
    p: float

    @property
    def h(self):
        return float(self.s_grid[1] - self.s_grid[0])

    def csv_rows(self):
        return list(zip(self.s_grid.tolist(), self.phi.tolist()))


def s_grid(S, n_s):
    return np.linspace(-S, S, n_s)


def transform_at(spec, s):
    """``phi(s) = r^{a_c - a} u(r)`` with ``r = e^{-s}`` for a vertex-centred spec."""
    if spec.x0 is not None and any(spec.x0):
        raise ValueError("the transform needs a profile centred at the origin")
    s = np.asarray(s, dtype=float)
    r = np.exp(-s)
    return r**spec.derived.sigma * spec.u_radial(r)


def transform(spec, S=10.0, n_s=2000):
    grid = s_grid(S, n_s)
    dp = spec.derived
    return EFProfile(grid, transform_at(spec, grid), dp.Lambda, dp.p)


def second_derivative(phi, h):
    """Fourth-order centred ``phi''`` at the interior nodes ``2 .. n-3``."""
    return (-phi[:-4] + 16 * phi[1:-3] - 30 * phi[2:-2] + 16 * phi[3:-1] - phi[4:]) / (12 * h * h)


def residual_array(profile):
    phi = profile.phi
    core = phi[2:-2]
    return -second_derivative(phi, profile.h) + profile.Lambda * core - core ** (profile.p - 1)


def ode_residual(profile):
    """Max interior residual of ``-phi'' + Lambda phi - phi^{p-1}``."""
    if profile.phi.size < 200:
        raise ValueError("ode_residual needs at least 200 grid points")
    return float(np.max(np.abs(residual_array(profile))))


def soliton_params(Lambda, p):
    """Amplitude ``A`` and rate ``k`` of ``A cosh(k s)^{-2/(p-2)}``."""
    if Lambda <= 0 or p <= 2:
        raise ValueError("the soliton needs Lambda > 0 and p > 2")
    A = (p * Lambda / 2) ** (1 / (p - 2))
    k = (p - 2) * math.sqrt(Lambda) / 2
    return A, k


def soliton(s, Lambda, p):
    A, k = soliton_params(Lambda, p)
    x = np.abs(k * np.asarray(s, dtype=float))
    log_cosh = x + np.log1p(np.exp(-2 * x)) - math.log(2)
    return A * np.exp(-2 / (p - 2) * log_cosh)


def soliton_profile(Lambda, p, S=10.0, n_s=2000):
    grid = s_grid(S, n_s)
    return EFProfile(grid, soliton(grid, Lambda, p), Lambda, p)


def constant_profile(Lambda, p, S=10.0, n_s=2000):
    """The trivial solution ``phi = Lambda^{1/(p-2)}``."""
    grid = s_grid(S, n_s)
    return EFProfile(grid, np.full(grid.shape, Lambda ** (1 / (p - 2))), Lambda, p)


def adaptive_S(Lambda, p):
    """``10 / k``, capped at ``20 / sqrt(Lambda)``.

    The cap matters for ``p`` near 2: there the tail decays at rate
    ``sqrt(Lambda)`` much faster than ``k``, while a rounding-level miss of
    the separatrix grows at that same rate.
    """
    return min(10.0 / soliton_params(Lambda, p)[1], 20.0 / math.sqrt(Lambda))


def soliton_match(spec, S=10.0, n_s=2000):
    """Sup distance between the transformed spec and the best translate of the soliton."""
    prof = transform(spec, S, n_s)
    dp = spec.derived
    grid = prof.s_grid
    peak = grid[int(np.argmax(prof.phi))]

    def sq(s0):
        return float(np.sum((prof.phi - soliton(grid - s0, dp.Lambda, dp.p)) ** 2))

    h = prof.h
    opt = minimize_scalar(sq, bounds=(peak - 2 * h, peak + 2 * h), method="bounded",
                          options={"xatol": 1e-13})
    s0 = float(opt.x)
    err = float(np.max(np.abs(prof.phi - soliton(grid - s0, dp.Lambda, dp.p))))
    A, k = soliton_params(dp.Lambda, dp.p)
    return {
        "sup_error": err,
        "shift": s0,
        "expected_shift": math.log(spec.lam),
        "amplitude": A,
        "rate": k,
        "Lambda": dp.Lambda,
        "p": dp.p,
    }


# independent recovery by shooting ------------------------------------


def _rhs(Lambda, p):
    def f(s, y):
        return [y[1], Lambda * y[0] - np.abs(y[0]) ** (p - 1) * np.sign(y[0])]

    return f


def _classify(c, Lambda, p, horizon):
    """+1 if the orbit from ``(c, 0)`` crosses zero, -1 if it turns back up, 0 if neither."""

    def crosses(s, y):
        return y[0]

    def turns(s, y):
        return y[1]

    crosses.terminal = True
    crosses.direction = -1
    turns.terminal = True
    turns.direction = 1
    sol = solve_ivp(_rhs(Lambda, p), (0, horizon), [c, 0.0], method="DOP853", rtol=1e-12,
                    atol=1e-30, events=(crosses, turns))
    if sol.t_events[0].size:
        return 1
    if sol.t_events[1].size and sol.t_events[1][0] > 0:
        return -1
    return 0


def bvp_recover(Lambda, p, S=None, n_s=2001, max_bisections=200):
    """Even decaying solution of ``-phi'' + Lambda phi = phi^{p-1}`` found by shooting.

    Bisects ``phi(0)`` between orbits that turn back (too small) and orbits
    that cross zero (too large), with ``phi'(0) = 0``.  Orbits are followed
    well past ``S`` so that a rounding-level miss of the separatrix still
    resolves into one of the two outcomes.  Nothing about the closed-form
    soliton is used.
    """
    if Lambda <= 0 or p <= 2:
        raise ValueError("shooting needs Lambda > 0 and p > 2")
    S = adaptive_S(Lambda, p) if S is None else S
    # the linearised escape rate at phi = 0 is sqrt(Lambda); 60 e-folds swamp 1e-16
    horizon = max(S, 60 / math.sqrt(Lambda))
    lo = Lambda ** (1 / (p - 2)) * (1 + 1e-6)  # just above the constant solution
    if _classify(lo, Lambda, p, horizon) != -1:
        raise NoDecayFound("lower shooting value does not turn back")
    hi = 2 * lo
    for _ in range(60):
        if _classify(hi, Lambda, p, horizon) == 1:
            break
        hi *= 2
    else:
        raise NoDecayFound("no overshooting initial value found")
    for _ in range(max_bisections):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        side = _classify(mid, Lambda, p, horizon)
        if side == 1:
            hi = mid
        elif side == -1:
            lo = mid
        else:
            break
    c = 0.5 * (lo + hi)
    grid = s_grid(S, n_s)
    half = np.abs(grid)
    sol = solve_ivp(_rhs(Lambda, p), (0, S), [c, 0.0], method="DOP853", rtol=1e-12, atol=1e-30,
                    dense_output=True)
    phi = sol.sol(half)[0]
    if not (np.all(phi > 0) and phi[0] < 0.05 * c):
        raise NoDecayFound(f"shooting from phi(0) = {c} does not decay by s = {S}")
    return EFProfile(grid, phi, Lambda, p)


def sweep_pairs():
    """Ten (Lambda, p) pairs for the shooting cross-check."""
    return [(0.25, 6), (4.0, 4), (0.25, 4), (1.0, 3), (1.0, 5), (0.5, 2.5),
            (2.0, 3.5), (0.1, 8), (9.0, 3), (0.64, 10.0 / 3)]
