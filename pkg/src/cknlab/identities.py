"""Pointwise checks of the P-function machinery on arbitrary positive fields.

Every routine takes the jet of ``v`` and a :class:`~cknlab.geometry.GeomFrame`
(both possibly batched) and returns arrays over the batch.  Residuals are
normalised by ``|lhs| + |rhs| + 1``.
"""

from dataclasses import asdict, dataclass

import numpy as np

from . import geometry as geo
from . import jets
from .errors import NonPositiveField, UnnormalizedSpec

TOLERANCES = {
    "lemma_a1": 1e-8,
    "k_decomposition": 1e-10,
    "gradP_chain_rule": 1e-10,
    "lemma31": 1e-9,
}


@dataclass(frozen=True)
class IdentityReport:
    identity_name: str
    samples: int
    max_abs_residual: float
    max_rel_residual: float
    worst_point: tuple
    pass_: bool

    def to_dict(self):
        out = asdict(self)
        out["pass"] = out.pop("pass_")
        return out


def report(name, lhs, rhs, points, tol=None):
    """Merge pointwise residuals into an :class:`IdentityReport` (max-reduction)."""
    tol = TOLERANCES.get(name, 1e-10) if tol is None else tol
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    absres = np.abs(lhs - rhs)
    rel = absres / (np.abs(lhs) + np.abs(rhs) + 1.0)
    while rel.ndim > 1:
        absres = absres.max(axis=0)
        rel = rel.max(axis=0)
    rel = np.atleast_1d(rel)
    absres = np.atleast_1d(absres)
    worst = int(np.argmax(rel))
    pts = np.asarray(points, dtype=float).reshape(np.shape(points)[0], -1)
    return IdentityReport(
        identity_name=name,
        samples=int(rel.size),
        max_abs_residual=float(absres.max()),
        max_rel_residual=float(rel.max()),
        worst_point=tuple(float(c) for c in pts[:, worst]),
        pass_=bool(rel.max() <= tol),
    )


def _check_positive(v_jet):
    if np.any(v_jet.value <= 0):
        raise NonPositiveField("v must be positive at every sample point")


def p_value(v_jet, frame):
    _check_positive(v_jet)
    n = frame.n
    g2 = geo.grad_norms(v_jet, frame)["grad_g_norm_sq"]
    return 2 / ((n - 2) * v_jet.value) + 0.5 * n * g2 / v_jet.value


def p_jet(v_jet, frame):
    """Jet of P (order lowered by one relative to ``v_jet``)."""
    _check_positive(v_jet)
    order = v_jet.order - 1
    v = v_jet.truncate(order)
    comps = geo.gradient_field_jets(v_jet, frame)
    g2 = None
    for i, c in enumerate(comps):
        term = c * v_jet.partial(i)
        g2 = term if g2 is None else g2 + term
    inv_v = jets.reciprocal(v)
    n = frame.n
    return inv_v * (2 / (n - 2)) + g2 * inv_v * (0.5 * n)


def k_terms(v_jet, frame):
    """The four terms of k[v] in its defining form, each as an array."""
    w = geo.g_gradient(v_jet, frame)
    hess = geo.hessian_g(v_jet, frame).g_norm_sq()
    drift = geo.laplace_and_drift(v_jet, frame)["drift_L"]
    return {
        "hessian": hess,
        "drift": -(drift**2) / frame.n,
        "ricci": geo.ricci_closed_form(frame).apply(w),
        "hess_f": geo.hess_f_closed_form(frame).apply(w),
    }


def k_scale(v_jet, frame):
    """Natural magnitude ``1 + sum |terms|`` used to normalise k tolerances."""
    return 1.0 + sum(np.abs(t) for t in k_terms(v_jet, frame).values())


def k_direct(v_jet, frame):
    return sum(k_terms(v_jet, frame).values())


def k_decomposition_terms(v_jet, frame):
    d, n, alpha = frame.d, frame.n, frame.alpha
    x, r2 = frame.x, frame.r2
    hess = geo.hessian_g(v_jet, frame)
    lap = geo.laplace_and_drift(v_jet, frame)["laplace_g"]
    traceless = geo.TensorAtPoint(
        hess.components - (lap / d * frame.conformal_factor) * geo._eye(d, x.shape[1:]),
        frame.conformal_factor,
    )
    # grad_g v as a vector; the dot products and norms below are Euclidean
    w = geo.g_gradient(v_jet, frame)
    wx = np.sum(w * x, axis=0)
    middle = (n - d) / (n * d) * (lap - alpha * d * wx / r2) ** 2
    wf = (d - 2 - alpha**2 * (n - 2)) / r2 * (np.sum(w**2, axis=0) - wx**2 / r2)
    return {"traceless": traceless.g_norm_sq(), "middle": middle, "W_f": wf}


def w_f(v_jet, frame):
    return k_decomposition_terms(v_jet, frame)["W_f"]


def k_decomposed(v_jet, frame):
    return sum(k_decomposition_terms(v_jet, frame).values())


def lemma_a1_sides(v_jet, frame):
    """Both sides of the weighted Bochner-type identity for arbitrary real n.

    The left side is the weighted divergence of an explicit vector field whose
    components are assembled as order-1 jets, so the divergence is exact.
    """
    _check_positive(v_jet)
    if v_jet.order < 3:
        raise ValueError("the Bochner identity needs an order-3 jet of v")
    n = frame.n
    v1 = v_jet.truncate(1)
    dv = [v_jet.partial(i).truncate(1) for i in range(frame.d)]
    inv = geo._exp_of(frame, -2.0, 0.0, 1)

    grad_g = geo.gradient_field_jets(v_jet, frame)
    g2 = None
    for i, c in enumerate(grad_g):
        term = c * v_jet.partial(i)
        g2 = term if g2 is None else g2 + term
    drift = geo.drift_jet(v_jet, frame)
    pj = p_jet(v_jet, frame).truncate(1)
    weight = jets.power(v1, 1 - n)

    coef = drift * (-n) + pj * (n - 1)
    comps = []
    for i in range(frame.d):
        comp = inv * (g2.partial(i) * (0.5 * n) + coef * dv[i])
        comps.append(weight * comp)
    lhs = geo.weighted_divergence(comps, frame)

    v = v_jet.value
    k = k_direct(v_jet, frame)
    lv = drift.value
    p = pj.value
    l_pow = geo.laplace_and_drift(jets.power(v_jet.truncate(2), 1 - n), frame)["drift_L"]
    rhs = n * v ** (1 - n) * k + v * (lv - p) * l_pow
    return lhs, rhs


def lemma31_sides(v_jet, frame):
    """Sides of ``e^f div_g(e^{-f} v^{2-n} grad_g P) = n v^{1-n} k[v]`` plus the residual of ``Lv = P``."""
    _check_positive(v_jet)
    n = frame.n
    pj = p_jet(v_jet, frame)
    v1 = v_jet.truncate(1)
    weight = jets.power(v1, 2 - n)
    comps = [weight * c for c in geo.gradient_field_jets(pj, frame)]
    lhs = geo.weighted_divergence(comps, frame)
    rhs = n * v_jet.value ** (1 - n) * k_direct(v_jet, frame)
    drift = geo.laplace_and_drift(v_jet, frame)["drift_L"]
    return lhs, rhs, drift - pj.value


def gradP_sides(v_jet, frame):
    """``d_i P`` from the jet of P versus ``-(P/v) d_i v + n/(2v) d_i |grad_g v|^2``."""
    pj = p_jet(v_jet, frame)
    lhs = pj.gradient
    g2 = None
    for i, c in enumerate(geo.gradient_field_jets(v_jet, frame)):
        term = c * v_jet.partial(i)
        g2 = term if g2 is None else g2 + term
    v = v_jet.value
    p = p_value(v_jet, frame)
    rhs = -(p / v) * v_jet.gradient + (0.5 * frame.n / v) * g2.gradient
    return lhs, rhs


def lemma_a1_check(v_jet, frame, points=None, tol=None):
    lhs, rhs = lemma_a1_sides(v_jet, frame)
    return report("lemma_a1", lhs, rhs, frame.x if points is None else points, tol)


def gradP_chain_rule(v_jet, frame, tol=None):
    lhs, rhs = gradP_sides(v_jet, frame)
    return report("gradP_chain_rule", lhs, rhs, frame.x, tol)


def lemma31_on_extremal(spec, points, tol=None, require_normalized=True):
    """Check (3.5) on the ``v`` induced by an extremal.

    Returns the identity report and the max residual of ``Lv = P`` so callers
    can see whether the spec actually solves the normalised equation.
    """
    dp = spec.derived
    frame = geo.make_frame(points, dp.alpha, dp.n)
    v_jet = spec.v_jet(points, 3)
    lhs, rhs, drift_res = lemma31_sides(v_jet, frame)
    rep = report("lemma31", lhs, rhs, points, tol)
    drift_err = float(np.max(np.abs(drift_res)))
    if require_normalized and drift_err > 1e-6:
        raise UnnormalizedSpec(f"Lv - P reaches {drift_err:.3g}; normalise the spec first")
    return rep, drift_err


# seeded sample sets ------------------------------------------------------


@dataclass(frozen=True)
class SampleSet:
    """Concatenated jets of many fields at many points, with per-point alpha and n."""

    d: int
    points: np.ndarray
    v_jet: jets.Jet
    alpha: np.ndarray
    n: np.ndarray

    @property
    def size(self):
        return self.points.shape[1]

    def frame(self, order=3):
        return geo.make_frame(self.points, self.alpha, self.n, order=order)


def _concat(jet_list):
    first = jet_list[0]
    return jets.Jet(first.dim, first.order, np.concatenate([j.coeffs for j in jet_list], axis=1))


def _random_field(kind, d, rng):
    from .fields import GaussianBump, LinearPerturbation, RandomMix

    if kind == 0:
        return RandomMix(int(rng.integers(2**31)), d)
    if kind == 1:
        return GaussianBump(tuple(rng.uniform(-2, 2, d)), float(rng.uniform(0.8, 2.5)))
    return LinearPerturbation(RandomMix(int(rng.integers(2**31)), d, floor=2.0), float(rng.uniform(-0.3, 0.3)),
                              int(rng.integers(d)))


def sample_sets(total=1050, seed=0, dims=(2, 3, 4), per_field=25, d=None, n=None, alpha=None,
                alpha_range=(0.2, 1.5), n_max=8.0, order=3):
    """Seeded ``(field, point, d, n, alpha)`` tuples grouped by dimension.

    Fields cycle through random Gaussian mixtures, single bumps and linearly
    tilted mixtures; ``n`` is uniform on ``[d, n_max]`` (``[2.1, n_max]`` when
    ``d = 2``, where ``n = 2`` is singular) unless fixed.
    """
    rng = np.random.default_rng(seed)
    dims = (d,) if d is not None else tuple(dims)
    buckets = {dd: ([], [], [], []) for dd in dims}
    count = k = 0
    from .fields import sample_points

    while count < total:
        dd = dims[k % len(dims)]
        m = min(per_field, total - count)
        fld = _random_field(k % 3, dd, rng)
        pts = sample_points("annulus", m, int(rng.integers(2**31)), d=dd)
        lo = max(dd, 2.1)
        nn = np.full(m, float(n)) if n is not None else rng.uniform(lo, n_max, m)
        aa = np.full(m, float(alpha)) if alpha is not None else rng.uniform(*alpha_range, m)
        b = buckets[dd]
        b[0].append(pts)
        b[1].append(fld.jet(pts, order))
        b[2].append(aa)
        b[3].append(nn)
        count += m
        k += 1
    return [
        SampleSet(dd, np.concatenate(b[0], axis=1), _concat(b[1]), np.concatenate(b[2]), np.concatenate(b[3]))
        for dd, b in buckets.items() if b[0]
    ]


def merge_reports(name, parts, tol=None):
    """Combine per-dimension ``(lhs, rhs, points)`` triples into one report."""
    tol = TOLERANCES.get(name, 1e-10) if tol is None else tol
    reps = [report(name, lhs, rhs, pts, tol) for lhs, rhs, pts in parts]
    worst = max(reps, key=lambda r: r.max_rel_residual)
    return IdentityReport(
        identity_name=name,
        samples=sum(r.samples for r in reps),
        max_abs_residual=max(r.max_abs_residual for r in reps),
        max_rel_residual=worst.max_rel_residual,
        worst_point=worst.worst_point,
        pass_=all(r.pass_ for r in reps),
    )


def run_suite(sets):
    """The weighted Bochner identity, the k decomposition and the chain rule for grad P over sample sets."""
    a1, kd, gp = [], [], []
    for ss in sets:
        fr = ss.frame(3)
        a1.append((*lemma_a1_sides(ss.v_jet, fr), ss.points))
        v2 = ss.v_jet.truncate(2)
        fr2 = ss.frame(2)
        kd.append((k_direct(v2, fr2), k_decomposed(v2, fr2), ss.points))
        gp.append((*gradP_sides(v2, fr2), ss.points))
    return {
        "lemma_a1": merge_reports("lemma_a1", a1),
        "k_decomposition": merge_reports("k_decomposition", kd),
        "gradP_chain_rule": merge_reports("gradP_chain_rule", gp),
    }
