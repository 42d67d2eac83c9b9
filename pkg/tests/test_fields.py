import math

import numpy as np
import pytest

from cknlab import jets
from cknlab.cones import ConeSpec
from cknlab.fields import (
    Dilated,
    ExtremalSpec,
    GaussianBump,
    LinearPerturbation,
    RandomMix,
    Rigidity,
    eval_jet,
    sample_points,
)


def test_rigidity_flat_example():
    j = eval_jet(Rigidity(1.0, 1.0, 1.0), np.array([1.0, 0.0, 0.0]), 2)
    assert j.value == pytest.approx(2)
    assert list(j.gradient) == pytest.approx([2, 0, 0])
    assert np.allclose(j.hessian, 2 * np.eye(3))


def test_sobolev_extremal_values():
    spec = ExtremalSpec.from_abd(0.0, 0.0, 3)
    j = eval_jet(spec, np.array([1.0, 0.0, 0.0]), 1)
    assert j.value == pytest.approx(2**-0.5, rel=1e-15)
    assert j.gradient[0] == pytest.approx(-(2**-1.5), rel=1e-14)


def test_order_cap():
    with pytest.raises(ValueError):
        eval_jet(RandomMix(1, 2), np.array([1.0, 0.0]), 4)


def test_annulus_determinism_and_radii():
    a = sample_points("annulus", 3, 1)
    b = sample_points("annulus", 3, 1)
    assert np.array_equal(a, b)
    big = sample_points("annulus", 10_000, 2, d=4)
    r = np.linalg.norm(big, axis=0)
    assert r.min() >= 0.3 and r.max() <= 3.0


@pytest.mark.parametrize("cone", [ConeSpec.arc(math.pi / 2), ConeSpec.arc(1.5 * math.pi), ConeSpec.cap(math.pi / 3)])
def test_cone_sampling_stays_inside(cone):
    pts = sample_points("cone", 100, 3, cone=cone)
    assert np.all(cone.contains(pts))
    edge = sample_points("cone", 20, 3, cone=cone, boundary=True)
    assert np.all(cone.contains(edge))


def test_boundary_points_are_on_boundary():
    cap = ConeSpec.cap(math.pi / 3)
    pts = sample_points("cone", 20, 4, cone=cap, boundary=True)
    polar = np.arccos(pts[2] / np.linalg.norm(pts, axis=0))
    assert np.allclose(polar, math.pi / 3, atol=1e-14)


def test_sampling_errors():
    with pytest.raises(ValueError):
        sample_points("annulus", 0, 1)
    with pytest.raises(ValueError):
        sample_points("cone", 5, 1)
    with pytest.raises(ValueError):
        sample_points("ball", 5, 1)


def _positive_fields(d):
    """Fields with the floor they are guaranteed to stay above on the annulus."""
    out = [(RandomMix(s, d), 0.5) for s in range(10)]
    out.append((GaussianBump(tuple([0.5] * d), 1.0), 0.5))
    # tilt of at most 0.3 * 3 on a floor of 2
    out.append((LinearPerturbation(RandomMix(3, d, floor=2.0), 0.3), 1.1))
    out.append((Rigidity(0.5, 0.5, 0.8), 0.5))
    return out


@pytest.mark.parametrize("d", [2, 3, 4])
def test_fields_positive(d):
    x = sample_points("annulus", 500, d, d=d)
    for fld, floor in _positive_fields(d):
        assert np.all(fld.jet(x, 0).value >= floor / 2)


def test_random_mix_is_seed_determined():
    a = RandomMix(42, 3)
    b = RandomMix(42, 3)
    assert a.bumps == b.bumps
    assert a.bumps != RandomMix(43, 3).bumps


@pytest.mark.parametrize("abd", [(0.0, 0.0, 3), (0.0, 0.5, 3), (-0.5, 0.0, 2), (-2.0, -1.5, 2), (-0.3, 0.2, 4)])
def test_induced_v_identity(abd):
    spec = ExtremalSpec.from_abd(*abd, lam=1.7, mu=0.6)
    x = sample_points("annulus", 200, 5, d=abd[2])
    u = spec.u_jet(x, 0).value
    v = spec.v_jet(x, 0).value
    n = spec.derived.n
    assert np.max(np.abs(v * u ** (2 / (n - 2)) - 1)) <= 1e-13


def test_extremal_center_only_with_alpha_one():
    spec = ExtremalSpec.from_abd(0.0, 0.0, 3, x0=(0.2, 0.0, 0.0))
    assert spec.x0 == (0.2, 0.0, 0.0)
    with pytest.raises(ValueError):
        ExtremalSpec.from_abd(0.0, 0.0, 3, x0=(0.2, 0.0))
    with pytest.raises(ValueError):
        ExtremalSpec.from_abd(0.0, 0.0, 3, lam=0.0)


def test_dilated_matches_absorbed_parameters():
    spec = ExtremalSpec.from_abd(0.0, 0.5, 3)
    x = sample_points("annulus", 50, 6)
    sigma = spec.derived.sigma
    for lam in (0.5, 2.0):
        got = Dilated(spec, lam, sigma).jet(x, 2)
        want = spec.with_(lam=lam, mu=lam**sigma).u_jet(x, 2)
        assert np.max(np.abs(got.coeffs - want.coeffs) / (1 + np.abs(want.coeffs))) <= 1e-13


def test_radial_helpers_agree_with_jets():
    spec = ExtremalSpec.from_abd(-0.5, 0.0, 2, lam=1.3, mu=2.0)
    x = sample_points("annulus", 30, 7, d=2)
    r = np.linalg.norm(x, axis=0)
    assert np.allclose(spec.u_radial(r), spec.u_jet(x, 0).value, rtol=1e-14)
    assert np.allclose(spec.v_radial(r), spec.v_jet(x, 0).value, rtol=1e-14)
    assert isinstance(spec.v_jet(x, 1), jets.Jet)
