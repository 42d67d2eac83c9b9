"""Radial quadrature of the growth estimates along the extremal.

Along a radial profile every integral over a g-ball reduces to
``|A| * int_0^X rho^{alpha n - 1} h(rho) d rho`` where ``X = R^{1/alpha}``
(g-balls of radius R are Euclidean balls of radius ``R^{1/alpha}``).  The
substitution ``rho = e^s`` turns the power-law weight into an exponentially
decaying smooth integrand, integrated with Gauss-Legendre on uniform panels.
"""

import math
from dataclasses import dataclass

import numpy as np

from .cones import ConeSpec
from .errors import QOutOfRange, QuadratureFailure

GL_NODES = 20
TAIL_DECAY = 42.0  # exp(-42) ~ 6e-19


@dataclass(frozen=True)
class GrowthReport:
    radii: tuple
    values: tuple
    ratios: tuple
    fitted_exponent: float
    ratio_sup: float

    def csv_rows(self):
        return [(r, v, q) for r, v, q in zip(self.radii, self.values, self.ratios)]


def radial_integral(h, upper, exponent, panel_width=None, rate=None, scale=None):
    """``int_0^upper rho^{exponent - 1} h(rho) d rho`` for bounded smooth ``h``.

    ``rate`` is the largest exponential rate of the integrand in ``s = log rho``
    and sets the panel width (defaults to ``exponent``).  ``scale`` is the
    radius where ``h`` changes regime; a decaying integrand peaks there rather
    than at ``upper``, so the truncated tail is measured from the smaller of
    the two.
    """
    if exponent <= 0:
        raise QuadratureFailure("the radial weight must be integrable at the origin")
    rate = max(exponent, 1.0) if rate is None else max(rate, exponent, 1.0)
    width = min(0.5, 1.0 / rate) if panel_width is None else panel_width
    s_hi = math.log(upper)
    s_peak = s_hi if scale is None else min(s_hi, math.log(scale))
    s_lo = s_peak - TAIL_DECAY / exponent
    panels = max(4, int(math.ceil((s_hi - s_lo) / width)))
    edges = np.linspace(s_lo, s_hi, panels + 1)
    nodes, weights = np.polynomial.legendre.leggauss(GL_NODES)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    s = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    rho = np.exp(s)
    vals = np.exp(exponent * s) * h(rho)
    total = float(np.sum(w * vals))
    if not np.isfinite(total):
        raise QuadratureFailure("non-finite radial integral")
    return total


def _angular(derived, cone):
    cone = ConeSpec.full(derived.d) if cone is None else cone
    return cone.angular_measure(derived.d)


def _fit_exponent(radii, values):
    if len(radii) < 2:
        return math.nan
    lr, lv = np.log(radii), np.log(values)
    return float(np.polyfit(lr, lv, 1)[0])


def volume_growth(derived, R_list, cone=None, panel_width=None):
    """Weighted measure of g-balls; ``value / R^n`` should be ``|A| / (alpha n)``."""
    R = np.asarray(R_list, dtype=float)
    en = derived.alpha * derived.n
    ang = _angular(derived, cone)
    vals = [ang * radial_integral(lambda rho: np.ones_like(rho), r ** (1 / derived.alpha), en, panel_width)
            for r in R]
    ratios = [v / r**derived.n for v, r in zip(vals, R)]
    return GrowthReport(tuple(R), tuple(vals), tuple(ratios), _fit_exponent(R, vals), float(max(ratios)))


def closed_form_volume_constant(derived, cone=None):
    return _angular(derived, cone) / (derived.alpha * derived.n)


def _radial_v(spec):
    """Jet-based radial ``v`` and ``v'`` along the first axis (vectorised in rho)."""
    d = spec.derived.d

    def along_axis(rho):
        pts = np.zeros((d, rho.size))
        pts[0] = rho
        return pts

    def v_and_dv(rho):
        j = spec.v_jet(along_axis(rho), 1)
        return j.value, j.gradient[0]

    return v_and_dv


def gradient_energy(spec, r, cone=None, panel_width=None):
    """``int_{B_r^g} e^{-f} |grad_g v|_g^2 dV_g`` for the induced ``v``."""
    dp = spec.derived
    v_and_dv = _radial_v(spec)

    def h(rho):
        _, dv = v_and_dv(rho)
        return rho ** (2 - 2 * dp.alpha) * dv**2

    return _angular(dp, cone) * radial_integral(
        h, r ** (1 / dp.alpha), dp.alpha * dp.n, panel_width, rate=dp.alpha * (dp.n + 2), scale=1 / spec.lam
    )


def prop33_check(spec, r_list=None, cone=None, panel_width=None):
    """Small-ball gradient energy; ``I(r) / r^2 -> 0`` with log-log slope ``n + 2``."""
    r = np.asarray([2.0**-k for k in range(9)] if r_list is None else r_list, dtype=float)
    vals = [gradient_energy(spec, rr, cone, panel_width) for rr in r]
    ratios = [v / rr**2 for v, rr in zip(vals, r)]
    return GrowthReport(tuple(r), tuple(vals), tuple(ratios), _fit_exponent(r, vals), float(max(ratios)))


def potential_mass(spec, q, R, cone=None, panel_width=None):
    """``int_{B_{2R}^g} e^{-f} v^{-q} dV_g``."""
    dp = spec.derived
    v_and_dv = _radial_v(spec)

    def h(rho):
        v, _ = v_and_dv(rho)
        return v ** (-q)

    en = dp.alpha * dp.n
    return _angular(dp, cone) * radial_integral(
        h, (2 * R) ** (1 / dp.alpha), en, panel_width, rate=max(en, 2 * dp.alpha * q), scale=1 / spec.lam
    )


def lemma44_check(spec, q, R_list=None, cone=None, panel_width=None):
    """``sup_R M(R) / R^{n-q}`` for ``0 <= q <= n/2 + 1``."""
    dp = spec.derived
    if not 0 <= q <= dp.n / 2 + 1 + 1e-12:
        raise QOutOfRange(f"q = {q} outside [0, n/2 + 1] = [0, {dp.n / 2 + 1}]")
    R = np.asarray(np.logspace(0, 3, 13) if R_list is None else R_list, dtype=float)
    vals = [potential_mass(spec, q, r, cone, panel_width) for r in R]
    ratios = [v / r ** (dp.n - q) for v, r in zip(vals, R)]
    return GrowthReport(tuple(R), tuple(vals), tuple(ratios), _fit_exponent(R, vals), float(max(ratios)))


def tail_non_increasing(report, fraction=0.5, rtol=1e-12):
    """True when the ratios over the last ``fraction`` of radii never increase."""
    tail = np.asarray(report.ratios[int(len(report.ratios) * (1 - fraction)):])
    return bool(np.all(np.diff(tail) <= rtol * np.abs(tail[:-1])))
