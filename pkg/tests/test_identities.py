import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from cknlab import extremals as ex
from cknlab import geometry as geo
from cknlab import identities as ids
from cknlab import jets
from cknlab.errors import NonPositiveField, UnnormalizedSpec
from cknlab.fields import ExtremalSpec, LinearPerturbation, RadialPower, RandomMix, Rigidity, sample_points


def _setup(field, d, alpha, n, count=500, seed=0, order=3):
    x = sample_points("annulus", count, seed, d=d)
    return field.jet(x, order), geo.make_frame(x, alpha, n, order=order)


# P ------------------------------------------------------------------------


def test_p_of_constant():
    x = sample_points("annulus", 10, 0)
    fr = geo.make_frame(x, 0.7, 5.0, order=1)
    v = jets.Jet.constant(np.full(10, 2.5), 3, 1)
    assert np.allclose(ids.p_value(v, fr), 2 / (3 * 2.5), rtol=1e-15)


def test_p_asymptote_on_rigidity_family():
    alpha, n = 1.5, 4.0
    x = 3 * sample_points("annulus", 20, 1, r_min=1, r_max=1)
    fr = geo.make_frame(x, alpha, n, order=1)
    p = ids.p_value(Rigidity(1.0, 1.0, alpha).jet(x, 1), fr)
    assert np.all(np.abs(p / (2 * n * alpha**2) - 1) <= 0.05)


def test_p_rejects_nonpositive():
    x = sample_points("annulus", 5, 0)
    with pytest.raises(NonPositiveField):
        ids.p_value(jets.Jet.constant(np.full(5, -1.0), 3, 1), geo.make_frame(x, 1.0, 3.0, order=1))


# k ------------------------------------------------------------------------


def test_k_vanishes_on_rigidity_family():
    for d, alpha, n in ((2, 0.6, 3.0), (3, 0.5, 5.0), (4, 1.3, 6.0), (3, 1.0, 3.0)):
        v, fr = _setup(Rigidity(0.8, 1.7, alpha), d, alpha, n, order=2)
        assert np.max(np.abs(ids.k_direct(v, fr)) / ids.k_scale(v, fr)) <= 1e-10


def test_k_of_linear_field_in_flat_space():
    x = sample_points("annulus", 50, 2, d=3)
    v = jets.seed_coordinate(0, x, 2) + 5.0
    fr = geo.make_frame(x, 1.0, 3.0, order=2)
    assert np.max(np.abs(ids.k_direct(v, fr))) <= 1e-15


def test_k_nonnegative_under_cd():
    v, fr = _setup(RandomMix(4, 3), 3, 0.4, 4.0, order=2)
    assert np.all(ids.k_direct(v, fr) >= -1e-12 * ids.k_scale(v, fr))
    assert np.all(ids.w_f(v, fr) >= -1e-14)


def test_k_decomposition_matches():
    rng = np.random.default_rng(3)
    for trial in range(20):
        d = (2, 3, 4)[trial % 3]
        alpha = rng.uniform(0.2, 1.5)
        n = rng.uniform(max(d, 2.1), 8)
        v, fr = _setup(RandomMix(trial, d), d, alpha, n, count=50, seed=trial, order=2)
        a, b = ids.k_direct(v, fr), ids.k_decomposed(v, fr)
        assert np.max(np.abs(a - b) / (np.abs(a) + np.abs(b) + 1)) <= 1e-10


def test_decomposition_collapses_when_n_equals_d():
    v, fr = _setup(RandomMix(5, 3), 3, 0.6, 3.0, order=2)
    terms = ids.k_decomposition_terms(v, fr)
    assert np.all(terms["middle"] == 0)
    w = geo.g_gradient(v, fr)
    x, r2 = fr.x, fr.r2
    angular = np.sum(w**2, axis=0) - np.sum(w * x, axis=0) ** 2 / r2
    assert np.allclose(terms["W_f"], (1 - 0.36) * angular / r2, rtol=1e-13, atol=1e-15)


def test_w_f_vanishes_for_radial_fields():
    v, fr = _setup(RadialPower(1.3), 3, 0.7, 5.0, order=2)
    scale = np.abs(ids.k_decomposition_terms(v, fr)["traceless"]) + 1
    assert np.max(np.abs(ids.w_f(v, fr)) / scale) <= 1e-13


def test_perturbation_probe_detects_nonzero_k():
    d, alpha, n = 3, 0.5, 4.0
    assert alpha**2 < (d - 2) / (n - 2)
    bent = LinearPerturbation(Rigidity(1.0, 1.0, alpha), 0.1)
    v, fr = _setup(bent, d, alpha, n, order=2)
    assert np.max(ids.k_direct(v, fr)) > 1e-4


# weighted Bochner identity --------------------------------------------------


def test_bochner_random_mix():
    v, fr = _setup(RandomMix(6, 3), 3, 0.6, 4.0)
    rep = ids.lemma_a1_check(v, fr)
    assert rep.samples == 500 and rep.pass_
    assert rep.max_rel_residual <= 1e-8


def test_bochner_flat():
    v, fr = _setup(RandomMix(7, 3), 3, 1.0, 3.0)
    assert ids.lemma_a1_check(v, fr, tol=1e-10).pass_


def test_bochner_on_extremal():
    spec = ex.normalize(ExtremalSpec.from_abd(0.0, 0.5, 3))
    x = sample_points("annulus", 100, 8)
    dp = spec.derived
    lhs, rhs = ids.lemma_a1_sides(spec.v_jet(x, 3), geo.make_frame(x, dp.alpha, dp.n))
    assert np.max(np.abs(lhs)) <= 1e-10 and np.max(np.abs(rhs)) <= 1e-10


def test_bochner_needs_order_three():
    v, fr = _setup(RandomMix(7, 3), 3, 1.0, 3.0, order=2)
    with pytest.raises(ValueError):
        ids.lemma_a1_sides(v, fr)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(0.2, 1.5), st.floats(-3.0, 8.0))
def test_bochner_any_real_n(seed, alpha, n):
    # the identity holds for every real n, not only n >= d; n = 0 and n = 2 are
    # poles of k[v] and P
    assume(abs(n) > 0.05 and abs(n - 2) > 0.05)
    d = 2 + seed % 3
    v, fr = _setup(RandomMix(seed, d), d, alpha, n, count=30, seed=seed)
    lhs, rhs = ids.lemma_a1_sides(v, fr)
    assert np.max(np.abs(lhs - rhs) / (np.abs(lhs) + np.abs(rhs) + 1)) <= 1e-8


# L v = P on the extremal ----------------------------------------------------


@pytest.mark.parametrize("abd", [(0.0, 0.0, 3), (0.0, 0.5, 3)])
def test_lv_equals_p_on_normalized_extremal(abd):
    spec = ex.normalize(ExtremalSpec.from_abd(*abd))
    x = sample_points("annulus", 100, 9)
    dp = spec.derived
    lhs, rhs, drift = ids.lemma31_sides(spec.v_jet(x, 3), geo.make_frame(x, dp.alpha, dp.n))
    assert np.max(np.abs(lhs)) <= 1e-9 and np.max(np.abs(rhs)) <= 1e-9
    rep, err = ids.lemma31_on_extremal(spec, x)
    assert rep.pass_ and err <= 1e-9


def test_lv_equals_p_flags_unnormalized_spec():
    spec = ExtremalSpec.from_abd(0.0, 0.0, 3)
    x = sample_points("annulus", 100, 9)
    with pytest.raises(UnnormalizedSpec):
        ids.lemma31_on_extremal(spec, x)
    _, err = ids.lemma31_on_extremal(spec, x, require_normalized=False)
    assert err > 0.1


# grad P -------------------------------------------------------------------


def test_gradP_chain_rule_random():
    v, fr = _setup(RandomMix(10, 3), 3, 0.8, 5.0, order=2)
    rep = ids.gradP_chain_rule(v, fr)
    assert rep.samples == 500 and rep.max_rel_residual <= 1e-10


def test_gradP_of_constant_is_zero():
    x = sample_points("annulus", 10, 0)
    fr = geo.make_frame(x, 0.7, 5.0, order=2)
    lhs, rhs = ids.gradP_sides(jets.Jet.constant(np.full(10, 2.0), 3, 2), fr)
    assert np.all(lhs == 0) and np.all(rhs == 0)


def test_gradP_vanishes_on_matching_rigidity():
    alpha, n = 0.7, 5.0
    # P v = 2/(n-2) + 2 n alpha^2 c1^2 |x|^{2 alpha} is a constant multiple of v
    # iff c1 c2 = 1/(n (n-2) alpha^2), and then P = 2 n alpha^2 c1
    c1 = 1.3
    fld = Rigidity(c1, 1 / (n * (n - 2) * alpha**2 * c1), alpha)
    v, fr = _setup(fld, 3, alpha, n, order=2)
    lhs, rhs = ids.gradP_sides(v, fr)
    p = ids.p_value(v, fr)
    assert np.max(np.abs(lhs)) <= 1e-12 * np.max(p)
    assert np.max(np.abs(rhs)) <= 1e-12 * np.max(p)
    assert np.allclose(p, 2 * n * alpha**2 * c1, rtol=1e-13)


# sample sets and reports -------------------------------------------------------


def test_sample_sets_cover_the_ranges():
    sets = ids.sample_sets(1050, seed=0)
    assert sum(s.size for s in sets) == 1050
    assert {s.d for s in sets} == {2, 3, 4}
    for s in sets:
        assert np.all(s.n >= max(s.d, 2.1)) and np.all(s.n <= 8)
        assert np.all((s.alpha >= 0.2) & (s.alpha <= 1.5))
        assert np.all(s.v_jet.value > 0)


def test_sample_sets_deterministic():
    a = ids.sample_sets(200, seed=4)
    b = ids.sample_sets(200, seed=4)
    for x, y in zip(a, b):
        assert np.array_equal(x.points, y.points) and np.array_equal(x.v_jet.coeffs, y.v_jet.coeffs)


def test_suite_passes_on_1050_samples():
    reps = ids.run_suite(ids.sample_sets(1050, seed=0))
    assert reps["lemma_a1"].samples >= 1000
    assert all(r.pass_ for r in reps.values())
    assert reps["lemma_a1"].max_rel_residual <= 1e-8
    assert reps["k_decomposition"].max_rel_residual <= 1e-10


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_suite_passes_for_any_seed(seed):
    reps = ids.run_suite(ids.sample_sets(90, seed=seed))
    assert all(r.pass_ for r in reps.values())


def test_merge_is_partition_independent():
    sets = ids.sample_sets(300, seed=5, d=3)
    ss = sets[0]
    fr = ss.frame(3)
    lhs, rhs = ids.lemma_a1_sides(ss.v_jet, fr)
    whole = ids.report("lemma_a1", lhs, rhs, ss.points)
    parts = [(lhs[i::3], rhs[i::3], ss.points[:, i::3]) for i in range(3)]
    merged = ids.merge_reports("lemma_a1", parts)
    assert merged.samples == whole.samples
    assert merged.max_rel_residual == whole.max_rel_residual
    assert merged.max_abs_residual == whole.max_abs_residual
    assert merged.worst_point == whole.worst_point


def test_report_dict_uses_pass_key():
    d = ids.report("k_decomposition", np.zeros(3), np.zeros(3), np.ones((2, 3))).to_dict()
    assert d["pass"] is True and "pass_" not in d
