"""The acceptance criteria as functions returning :class:`Criterion` results.

Shared by ``cknlab all`` and the test suite.  Every criterion is
deterministic for a fixed seed and reports its measured quantities.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import emden_fowler as ef
from . import extremals as ex
from . import geometry as geo
from . import identities as ids
from . import integrals as integ
from . import rayleigh as ray
from . import spectral as sp
from .cones import ConeSpec
from .fields import ExtremalSpec, LinearPerturbation, Rigidity, sample_points
from .params import CknParams, derive


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    passed: bool
    metrics: dict = field(default_factory=dict)

    def line(self):
        return f"criterion {self.number:2d} [{'PASS' if self.passed else 'FAIL'}] {self.title}"

    def to_dict(self):
        return {"number": self.number, "title": self.title, "pass": self.passed, "metrics": self.metrics}


NAMED_CASES = [(0.0, 0.0, 3), (0.0, 0.5, 3), (-0.5, 0.0, 2), (-2.0, -1.5, 2)]


# 1-3: pointwise identities ---------------------------------------------


def criterion_1(seed=0, total=1050):
    t0 = time.perf_counter()
    rep = ids.run_suite(ids.sample_sets(total, seed))["lemma_a1"]
    elapsed = time.perf_counter() - t0
    return Criterion(
        1, "weighted Bochner identity on random fields",
        rep.pass_ and rep.samples >= 1000 and elapsed <= 10.0,
        {"report": rep.to_dict(), "runtime_within_10s": elapsed <= 10.0},
    )


def _rigidity_sets(seed, groups=60, per=10):
    """Jets of ``c1 |x - x0|^{2 alpha} + c2``.

    A free centre ``x0`` needs a translation-invariant structure, i.e.
    ``alpha = 1`` and ``n = d`` (flat metric, constant weight).
    """
    rng = np.random.default_rng(seed)
    out = []
    for g in range(groups):
        d = (2, 3, 4)[g % 3]
        n = float(rng.uniform(max(d, 2.1), 8))
        alpha = float(rng.uniform(0.2, 1.5))
        x0 = None
        if g % 4 == 0 and d > 2:
            alpha, n, x0 = 1.0, float(d), tuple(rng.uniform(-1, 1, d))
        fld = Rigidity(float(rng.uniform(0.2, 2)), float(rng.uniform(0.2, 2)), alpha, x0)
        pts = sample_points("annulus", per, int(rng.integers(2**31)), d=d)
        if x0 is not None:
            # keep samples away from the centre
            pts = pts + np.asarray(x0)[:, None]
        out.append((fld, pts, alpha, n))
    return out


def _k_over_scale(v_jet, frame):
    return ids.k_direct(v_jet, frame) / ids.k_scale(v_jet, frame)


def criterion_2(seed=0, total=1050):
    sets = ids.sample_sets(total, seed, order=2)
    decomp = ids.run_suite(ids.sample_sets(total, seed))["k_decomposition"]

    # sign of k under the curvature-dimension condition, on the shared set and on a CD-only set
    worst_cd, cd_count = math.inf, 0
    rng = np.random.default_rng(seed + 1)
    cd_sets = []
    for d in (3, 4):
        n = rng.uniform(d, 8, 400)
        alpha = rng.uniform(0, 1, 400) * np.sqrt((d - 2) / (n - 2))
        cd_sets.append(ids.sample_sets(400, int(rng.integers(2**31)), d=d, order=2)[0])
        cd_sets[-1] = ids.SampleSet(d, cd_sets[-1].points, cd_sets[-1].v_jet, alpha, n)
    for ss in list(sets) + cd_sets:
        mask = ss.alpha**2 <= (ss.d - 2) / (ss.n - 2)
        if not np.any(mask):
            continue
        ratio = _k_over_scale(ss.v_jet, ss.frame(2))[mask]
        worst_cd = min(worst_cd, float(ratio.min()))
        cd_count += int(mask.sum())
    sign_ok = cd_count > 0 and worst_cd >= -1e-12

    # vanishing on the rigidity family, positivity after a perturbation
    worst_rigid, probe = 0.0, 0.0
    for fld, pts, alpha, n in _rigidity_sets(seed):
        fr = geo.make_frame(pts, alpha, n, order=2)
        worst_rigid = max(worst_rigid, float(np.max(np.abs(_k_over_scale(fld.jet(pts, 2), fr)))))
        bent = LinearPerturbation(fld, 0.2, 0)
        probe = max(probe, float(np.max(ids.k_direct(bent.jet(pts, 2), fr))))
    return Criterion(
        2, "k decomposition, sign under CD(0,n), rigidity and perturbation probe",
        decomp.pass_ and sign_ok and worst_rigid <= 1e-10 and probe > 1e-4,
        {
            "decomposition": decomp.to_dict(),
            "cd_samples": cd_count,
            "min_k_over_scale_under_cd": worst_cd,
            "max_abs_k_over_scale_rigidity": worst_rigid,
            "max_k_perturbed": probe,
        },
    )


def criterion_3(seed=0, count=600):
    rng = np.random.default_rng(seed)
    worst, min_eig, samples = 0.0, math.inf, 0
    for d in (2, 3, 4):
        m = count // 3
        pts = sample_points("annulus", m, int(rng.integers(2**31)), d=d)
        alpha = rng.uniform(0.2, 1.5, m)
        n = rng.uniform(max(d, 2.1), 8, m)
        fr = geo.make_frame(pts, alpha, n, order=3)
        closed = geo.ricci_closed_form(fr).components
        conf = geo.ricci_conformal_formula(fr).components
        oracle = geo.ricci_numeric_oracle(fr).components
        for a, b in ((closed, conf), (closed, oracle), (conf, oracle)):
            rel = np.abs(a - b) / (np.abs(a) + np.abs(b) + 1)
            worst = max(worst, float(rel.max()))
        small = alpha <= 1
        for comp in (closed, oracle):
            tens = geo.TensorAtPoint(comp[..., small], fr.conformal_factor[small])
            scale = 1 + np.max(np.abs(tens.components), axis=(0, 1))
            min_eig = min(min_eig, float(np.min(tens.min_eigenvalue() / scale)))
        samples += m
    return Criterion(
        3, "Ricci tensor: closed form, conformal formula, Christoffel oracle",
        samples >= 500 and worst <= 1e-8 and min_eig >= -1e-12,
        {"samples": samples, "max_rel_disagreement": worst, "min_scaled_eigenvalue_alpha_le_1": min_eig},
    )


# 4-5: extremals ---------------------------------------------------------


def criterion_4(seed=0):
    sweep = ex.parameter_sweep(20, seed)
    worst_spread = 0.0
    for cp in sweep:
        raw = ExtremalSpec(derive(cp, strict=True))
        rep = ex.estimate_kappa(raw, ex.default_points(raw), max_rel_spread=math.inf)
        worst_spread = max(worst_spread, rep.relative_spread)
    sob = ExtremalSpec.from_abd(0.0, 0.0, 3)
    kappa_sob = ex.estimate_kappa(sob).kappa_mean
    worst_res, worst_p = 0.0, 0.0
    for cp in [CknParams(*c) for c in NAMED_CASES] + sweep:
        spec = ex.normalize(ExtremalSpec(derive(cp, strict=True)))
        pts = ex.default_points(spec)
        worst_res = max(worst_res, ex.equation_residual(spec, pts))
        dp = spec.derived
        pv = ids.p_value(spec.v_jet(pts, 1), geo.make_frame(pts, dp.alpha, dp.n, order=1))
        worst_p = max(worst_p, float(np.max(np.abs(pv - ex.p_closed_form(spec)))))
    sob_p = ex.check_P_constant(ex.normalize(sob)).metrics["P_mean"]
    return Criterion(
        4, "extremal: kappa constancy, normalisation, P constant",
        worst_spread <= 1e-10 and abs(kappa_sob - 3) <= 1e-11 and worst_res <= 1e-9 and worst_p <= 1e-8,
        {
            "max_kappa_relative_spread": worst_spread,
            "kappa_sobolev": kappa_sob,
            "max_equation_residual": worst_res,
            "max_abs_P_error": worst_p,
            "P_sobolev": sob_p,
            "P_sobolev_expected": 2 * math.sqrt(3),
        },
    )


def criterion_5():
    rows = ex.neumann_suite()
    pos = max(r.metrics["max_abs_flux"] for _, r, want in rows if want)
    neg = min(r.metrics["max_abs_flux"] for _, r, want in rows if not want)
    return Criterion(
        5, "cone Neumann condition and off-vertex control",
        pos <= 1e-12 and neg >= 1e-2,
        {"max_flux_vertex_centred": pos, "min_flux_off_vertex": neg,
         "cases": [{"case": name, **r.to_dict()} for name, r, _ in rows]},
    )


# 6: integrals -------------------------------------------------------------


def criterion_6(seed=0):
    R = [1.0, 2.0, 4.0, 8.0, 10.0]
    rng = np.random.default_rng(seed)
    vol_cases = [(derive(CknParams(*c), strict=True), None) for c in NAMED_CASES]
    vol_cases += [(derive(CknParams(-0.5, 0.0, 2)), ConeSpec.arc(math.pi / 2)),
                  (derive(CknParams(0.0, 0.0, 3)), ConeSpec.cap(math.pi / 3))]
    from .params import random_admissible

    vol_cases += [(derive(random_admissible(rng, min_gap=0.05), strict=True), None) for _ in range(10)]
    worst_vol = 0.0
    for dp, cone in vol_cases:
        g = integ.volume_growth(dp, R, cone)
        c = integ.closed_form_volume_constant(dp, cone)
        worst_vol = max(worst_vol, float(np.max(np.abs(np.asarray(g.ratios) / c - 1))))
    slopes, decay_ok, sups = [], True, {}
    for case in NAMED_CASES:
        spec = ex.normalize(ExtremalSpec.from_abd(*case))
        n = spec.derived.n
        pr = integ.prop33_check(spec)
        slopes.append(abs(pr.fitted_exponent / (n + 2) - 1))
        ratios = np.asarray(pr.ratios)
        decay_ok &= bool(np.all(np.diff(ratios) < 0) and ratios[-1] < 1e-3 * ratios[0])
        for q in (0.0, 2.0, n / 2 + 1):
            rep = integ.lemma44_check(spec, q)
            sups[f"{case}_q={q:g}"] = rep.ratio_sup
    finite = all(math.isfinite(v) for v in sups.values())
    return Criterion(
        6, "volume growth, small-ball gradient energy, annulus bounds",
        worst_vol <= 1e-10 and max(slopes) <= 0.02 and decay_ok and finite,
        {"max_volume_ratio_error": worst_vol, "max_relative_slope_error": max(slopes),
         "gradient_ratio_decays": decay_ok, "lemma44_ratio_sup": sups},
    )


# 7: spectra ---------------------------------------------------------------


def criterion_7():
    thetas = np.linspace(0.3, 2 * math.pi - 0.3, 20)
    fd_err = max(abs(sp.lambda1_arc(t).lambda1 - sp.lambda1_arc_fd(t)) for t in thetas)
    hemi = sp.lambda1_cap(math.pi / 2)
    arc_rows, arc_cross = sp.convexity_threshold_scan("arc", sp.default_grid("arc"))
    cap_rows, cap_cross = sp.convexity_threshold_scan("cap", sp.default_grid("cap"))
    convex_ok = all(r[4] for r in arc_rows + cap_rows if r[3])
    nonconvex = sp.lambda1_arc(3 * math.pi / 2).lambda1
    return Criterion(
        7, "Neumann spectra of arcs and caps",
        fd_err <= 1e-8 and abs(hemi.lambda1 - 2) <= 1e-6 and convex_ok
        and abs(nonconvex - 4 / 9) <= 1e-12 and nonconvex < 1,
        {"max_arc_fd_error": fd_err, "hemisphere": hemi.lambda1, "hemisphere_branch": hemi.branch,
         "convex_threshold_ok": convex_ok, "arc_crossing": arc_cross, "cap_crossing": cap_cross,
         "arc_3pi_over_2": nonconvex},
    )


# 8: Emden-Fowler ------------------------------------------------------------


def criterion_8():
    res, match = {}, {}
    for case in NAMED_CASES[:3]:
        spec = ex.normalize(ExtremalSpec.from_abd(*case))
        res[str(case)] = ef.ode_residual(ef.transform(spec, 10.0, 2000))
        match[str(case)] = ef.soliton_match(spec)["sup_error"]
    bvp = {}
    for L, p in ef.sweep_pairs():
        prof = ef.bvp_recover(L, p)
        bvp[f"Lambda={L:g},p={p:g}"] = float(np.max(np.abs(prof.phi - ef.soliton(prof.s_grid, L, p))))
    return Criterion(
        8, "Emden-Fowler ODE, soliton match, shooting recovery",
        max(res.values()) <= 1e-8 and max(match.values()) <= 1e-9 and len(bvp) >= 10 and max(bvp.values()) <= 1e-4,
        {"ode_residual": res, "soliton_sup_error": match, "shooting_sup_error": bvp},
    )


# 9: symmetry breaking -------------------------------------------------------


def criterion_9(seed=0):
    _, sym = ray.run_params(-0.5, 0.0, seed)
    _, brk = ray.run_params(-2.0, -1.5, seed)
    admissible = all(r.E_full <= r.E_radial + 1e-6 for r in (sym, brk))
    return Criterion(
        9, "symmetry versus breaking on the cylinder",
        sym.deficit <= 1e-3 and brk.deficit >= 0.01 and brk.breaking_detected and admissible
        and sym.converged and brk.converged,
        {"symmetric": sym.to_dict(), "breaking": brk.to_dict()},
    )


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9,
}


def run_all(seed=0):
    """Criteria 1-9 (criterion 10, determinism of this very run, is checked by re-running it)."""
    out = []
    for k, fn in CRITERIA.items():
        out.append(fn(seed) if "seed" in fn.__code__.co_varnames else fn())
    return out
