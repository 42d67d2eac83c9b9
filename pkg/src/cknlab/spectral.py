"""First nontrivial Neumann eigenvalue of cone cross-sections.

Arcs of the circle have the classical closed form ``(pi / theta)^2``.  Caps
of the 2-sphere are separated into Fourier modes ``m``; each mode is a
singular Sturm-Liouville problem on ``(0, theta)``

    -(sin t u')' + m^2 u / sin t = lam sin t u,   u'(theta) = 0,

solved by shooting from the regular end.  A coarse finite-volume solve
brackets each root before refining with Brent's method.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eig_banded, eigh_tridiagonal
from scipy.optimize import brentq

from .errors import NoConvergence

CAP_WINDOW = (0.05, math.pi - 0.05)
SHOOT_RTOL = 1e-10
ROOT_XTOL = 1e-12


@dataclass(frozen=True)
class EigenResult:
    lambda1: float
    branch: str
    mesh_or_tolerance: dict = field(default_factory=dict)


def lambda1_arc(theta):
    if not 0 < theta < 2 * math.pi:
        raise ValueError("arc opening must lie in (0, 2 pi)")
    return EigenResult((math.pi / theta) ** 2, "first-angular", {"method": "closed form"})


def neumann_interval_fd(length, cells, k=1):
    """k-th Neumann eigenvalue of ``-u''`` on ``(0, length)``, cell-centred differences."""
    h = length / cells
    diag = np.full(cells, 2.0)
    diag[0] = diag[-1] = 1.0
    off = np.full(cells - 1, -1.0)
    vals = eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=(k, k))
    return float(vals[0]) / h**2


def lambda1_arc_fd(theta, cells=200):
    """FD value after two Richardson stages (error expands in even powers of h).

    Moderate meshes keep the rounding error of ``1/h^2`` scaling well below
    the remaining ``O(h^6)`` truncation error.
    """
    l1, l2, l4 = (neumann_interval_fd(theta, k * cells) for k in (1, 2, 4))
    r1, r2 = (4 * l2 - l1) / 3, (4 * l4 - l2) / 3
    return (16 * r2 - r1) / 15


# caps -----------------------------------------------------------------


def _fv_bracket(theta, m, cells=400):
    """Low-accuracy lowest eigenvalues of mode ``m`` (finite volumes on a uniform mesh)."""
    h = theta / cells
    t = (np.arange(cells) + 0.5) * h
    faces = np.sin(np.arange(cells + 1) * h)
    faces[-1] = 0.0  # Neumann at theta; the face at 0 vanishes already
    mass = np.sin(t) * h
    diag = (faces[:-1] + faces[1:]) / h + m**2 * h / np.sin(t)
    off = -faces[1:-1] / h
    s = 1 / np.sqrt(mass)
    ab = np.zeros((2, cells))
    ab[0, 1:] = off * s[:-1] * s[1:]
    ab[1] = diag * s**2
    return eig_banded(ab, eigvals_only=True, select="i", select_range=(0, 2))


def _shoot(lam, theta, m, t0=1e-6):
    """``w(theta)`` with ``w = sin t u'`` for the regular solution of mode ``m``."""
    if m == 0:
        y0 = [1.0, math.sin(t0) * (-lam * t0 / 2)]
    else:
        y0 = [t0**m, m * t0 ** (m - 1) * math.sin(t0)]

    def rhs(t, y):
        st = math.sin(t)
        return [y[1] / st, (m * m / st - lam * st) * y[0]]

    sol = solve_ivp(rhs, (t0, theta), y0, method="DOP853", rtol=SHOOT_RTOL, atol=1e-14)
    if not sol.success:
        raise NoConvergence(sol.message)
    u, w = sol.y[:, -1]
    scale = max(abs(u), 1e-300)
    return w / scale


def mode_ground(theta, m):
    """Lowest nonconstant eigenvalue of mode ``m`` (for ``m = 0`` the constant is skipped)."""
    guesses = _fv_bracket(theta, m)
    target = guesses[1] if m == 0 else guesses[0]
    lo, hi = target * 0.97, target * 1.03
    f_lo, f_hi = _shoot(lo, theta, m), _shoot(hi, theta, m)
    grow = 0
    while f_lo * f_hi > 0:
        grow += 1
        if grow > 20:
            raise NoConvergence(f"no sign change near {target} for mode {m}")
        lo, hi = lo * 0.98, hi * 1.02
        f_lo, f_hi = _shoot(lo, theta, m), _shoot(hi, theta, m)
    return brentq(lambda lam: _shoot(lam, theta, m), lo, hi, xtol=ROOT_XTOL, rtol=1e-14)


def lambda1_cap(theta, modes=(0, 1)):
    lo, hi = CAP_WINDOW
    if not lo < theta < hi:
        raise ValueError(f"cap opening must lie in ({lo}, {hi})")
    values = {m: mode_ground(theta, m) for m in modes}
    m = min(values, key=values.get)
    branch = {0: "axisymmetric", 1: "first-angular"}.get(m, f"m={m}")
    return EigenResult(
        float(values[m]),
        branch,
        {"method": "shooting", "rtol": SHOOT_RTOL, "branches": {f"m={k}": float(v) for k, v in values.items()}},
    )


def lambda1_sphere(d):
    """Closed sphere ``S^{d-1}``: degree-1 harmonics give ``d - 1``."""
    return EigenResult(float(d - 1), "first-angular", {"method": "closed form"})


# scans ----------------------------------------------------------------

SCAN_HEADER = ("theta", "lambda1", "branch", "convex", "threshold_ok")


def _family(kind):
    if kind == "arc":
        return 2, math.pi, lambda t: lambda1_arc(t)
    if kind == "cap":
        return 3, math.pi / 2, lambda t: lambda1_cap(t)
    raise ValueError(f"unknown cross-section kind {kind!r}")


def convexity_threshold_scan(kind, theta_grid):
    """Rows ``(theta, lambda1, branch, convex, threshold_ok)`` and the crossing angle.

    ``threshold_ok`` is ``lambda1 >= d - 1 - 1e-9``.  The crossing is where
    ``lambda1`` first drops below ``d - 1``, refined by root finding inside the
    first grid interval that changes sign (None when no interval does).
    """
    d, limit, solve = _family(kind)
    rows = []
    for theta in theta_grid:
        res = solve(float(theta))
        ok = res.lambda1 >= d - 1 - 1e-9
        rows.append((float(theta), res.lambda1, res.branch, bool(theta <= limit + 1e-12), ok))
    crossing = None
    for (t0, l0, *_), (t1, l1, *_) in zip(rows, rows[1:]):
        if l0 - (d - 1) >= 0 > l1 - (d - 1):
            if l0 == d - 1:
                crossing = t0
            else:
                crossing = brentq(lambda t: solve(t).lambda1 - (d - 1), t0, t1, xtol=1e-10)
            break
    return rows, crossing


def default_grid(kind):
    """Multiples of pi/6 (arcs) or pi/12 (caps); both contain the convexity limit."""
    step = math.pi / 6 if kind == "arc" else math.pi / 12
    return [k * step for k in range(1, 12)]
