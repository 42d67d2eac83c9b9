import math

import numpy as np
import pytest
from scipy.integrate import quad

from cknlab import extremals as ex
from cknlab import integrals as integ
from cknlab.cones import ConeSpec, sphere_measure
from cknlab.errors import QOutOfRange, QuadratureFailure
from cknlab.fields import ExtremalSpec
from cknlab.params import CknParams, derive, random_admissible

NAMED = [(0.0, 0.0, 3), (0.0, 0.5, 3), (-0.5, 0.0, 2), (-2.0, -1.5, 2)]


def _spec(abd):
    return ex.normalize(ExtremalSpec.from_abd(*abd))


def test_radial_integral_power():
    # int_0^2 rho^{2} d rho = 8/3
    assert integ.radial_integral(lambda r: np.ones_like(r), 2.0, 3.0) == pytest.approx(8 / 3, rel=1e-14)
    with pytest.raises(QuadratureFailure):
        integ.radial_integral(lambda r: r, 1.0, 0.0)


def test_sobolev_ball_volume():
    dp = derive(CknParams(0.0, 0.0, 3))
    rep = integ.volume_growth(dp, [1.0, 2.0, 3.0])
    assert rep.values == pytest.approx([4 * math.pi / 3 * R**3 for R in (1, 2, 3)], rel=1e-13)
    assert integ.closed_form_volume_constant(dp) == pytest.approx(4 * math.pi / 3, rel=1e-15)


def test_weighted_volume_ratio():
    dp = derive(CknParams(0.0, 0.5, 3))
    rep = integ.volume_growth(dp, [1.0, 2.0, 4.0, 8.0])
    c = 4 * math.pi / (0.25 * 6)
    assert np.max(np.abs(np.asarray(rep.ratios) / c - 1)) <= 1e-10
    assert rep.fitted_exponent == pytest.approx(6, rel=1e-10)


def test_arc_volume_uses_opening():
    dp = derive(CknParams(-0.5, 0.0, 2))
    rep = integ.volume_growth(dp, [1.0, 5.0], ConeSpec.arc(math.pi / 2))
    assert rep.ratios == pytest.approx([math.pi / 2 / (dp.alpha * dp.n)] * 2, rel=1e-12)


def test_random_volume_ratios():
    rng = np.random.default_rng(11)
    for _ in range(10):
        dp = derive(random_admissible(rng, min_gap=0.05), strict=True)
        rep = integ.volume_growth(dp, [1.0, 2.0, 5.0, 10.0])
        c = sphere_measure(dp.d) / (dp.alpha * dp.n)
        assert np.max(np.abs(np.asarray(rep.ratios) / c - 1)) <= 1e-10


@pytest.mark.parametrize("abd", NAMED)
def test_gradient_energy_closed_form(abd):
    spec = _spec(abd)
    dp = spec.derived
    c1 = spec.v_scale
    for r in (1.0, 0.5, 0.01):
        want = sphere_measure(dp.d) * 4 * dp.alpha * c1**2 * r ** (dp.n + 2) / (dp.n + 2)
        assert integ.gradient_energy(spec, r) == pytest.approx(want, rel=1e-12)


@pytest.mark.parametrize("abd", NAMED)
def test_small_ball_energy_slope_and_decay(abd):
    spec = _spec(abd)
    rep = integ.prop33_check(spec)
    assert abs(rep.fitted_exponent / (spec.derived.n + 2) - 1) <= 0.02
    ratios = np.asarray(rep.ratios)
    assert np.all(np.diff(ratios) < 0) and ratios[-1] < 1e-3 * ratios[0]
    assert rep.radii[0] == 1.0 and rep.radii[-1] == 2.0**-8


def _mass_oracle(spec, q, R):
    # t = rho^alpha turns the weight into t^{n-1} dt / alpha
    dp = spec.derived
    c1, l2 = spec.v_scale, spec.lam ** (2 * dp.alpha)
    val, _ = quad(lambda t: t ** (dp.n - 1) * (c1 * (1 + l2 * t * t)) ** (-q), 0, 2 * R, limit=200,
                  epsabs=0, epsrel=1e-13)
    return sphere_measure(dp.d) / dp.alpha * val


@pytest.mark.parametrize("abd", NAMED)
def test_potential_mass_vs_quad(abd):
    spec = _spec(abd)
    n = spec.derived.n
    for q in (0.0, 2.0, n / 2 + 1):
        for R in (1.0, 30.0):
            assert integ.potential_mass(spec, q, R) == pytest.approx(_mass_oracle(spec, q, R), rel=1e-10)


def test_potential_mass_dilated():
    spec = _spec((0.0, 0.5, 3)).with_(lam=7.0)
    for q in (2.0, 4.0):
        assert integ.potential_mass(spec, q, 30.0) == pytest.approx(_mass_oracle(spec, q, 30.0), rel=1e-10)


def test_annulus_mass_q0_is_volume_of_double_ball():
    spec = _spec((0.0, 0.5, 3))
    dp = spec.derived
    rep = integ.lemma44_check(spec, 0.0)
    c_star = integ.closed_form_volume_constant(dp)
    assert rep.ratio_sup == pytest.approx(2**dp.n * c_star, rel=1e-10)


def test_annulus_mass_sobolev_q2_decays():
    rep = integ.lemma44_check(_spec((0.0, 0.0, 3)), 2.0)
    assert integ.tail_non_increasing(rep)
    assert rep.ratios[-1] < 0.01 * rep.ratios[0]


@pytest.mark.parametrize("abd", NAMED)
def test_annulus_mass_endpoint_finite(abd):
    spec = _spec(abd)
    rep = integ.lemma44_check(spec, spec.derived.n / 2 + 1)
    assert math.isfinite(rep.ratio_sup)
    assert rep.radii[0] == 1.0 and rep.radii[-1] == pytest.approx(1e3)
    assert integ.tail_non_increasing(rep)


def test_annulus_mass_rejects_q():
    spec = _spec((0.0, 0.0, 3))
    with pytest.raises(QOutOfRange):
        integ.lemma44_check(spec, -0.1)
    with pytest.raises(QOutOfRange):
        integ.lemma44_check(spec, spec.derived.n / 2 + 1.01)


@pytest.mark.parametrize("abd", NAMED)
def test_halving_the_panels(abd):
    spec = _spec(abd)
    dp = spec.derived
    w = 0.25
    pairs = [
        (integ.volume_growth(dp, [3.0], panel_width=w).values[0],
         integ.volume_growth(dp, [3.0], panel_width=w / 2).values[0]),
        (integ.gradient_energy(spec, 0.3, panel_width=w), integ.gradient_energy(spec, 0.3, panel_width=w / 2)),
        (integ.potential_mass(spec, 2.0, 10.0, panel_width=w), integ.potential_mass(spec, 2.0, 10.0, panel_width=w / 2)),
    ]
    for a, b in pairs:
        assert abs(a - b) <= 1e-10 * abs(b)


def test_csv_rows():
    rep = integ.volume_growth(derive(CknParams(0.0, 0.0, 3)), [1.0, 2.0])
    assert [len(r) for r in rep.csv_rows()] == [3, 3]
