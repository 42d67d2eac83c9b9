"""Geometry of the weighted conformal manifold (R^d \\ {0}, |x|^{2(alpha-1)} delta, e^{-f}).

All tensors are kept in raw coordinate components; the conformal factor
``e^{2 phi}`` travels with them so that g-norms can be formed by contracting
with ``e^{-2 phi}`` per index.  Points may be batched: ``x`` has shape
``(d, *batch)`` and ``alpha``, ``n`` may be arrays broadcastable to the batch.
"""

from dataclasses import dataclass

import numpy as np

from . import jets
from .jets import Jet


@dataclass(frozen=True)
class TensorAtPoint:
    """Symmetric 2-tensor components ``(d, d, *batch)`` plus the conformal factor."""

    components: np.ndarray
    metric_weight: np.ndarray

    def g_norm_sq(self):
        return np.sum(self.components**2, axis=(0, 1)) / self.metric_weight**2

    def apply(self, w):
        """``T(w, w)`` for a vector with coordinate components ``w``."""
        return np.einsum("ij...,i...,j...->...", self.components, w, w)

    def g_trace(self):
        return np.einsum("ii...->...", self.components) / self.metric_weight

    def min_eigenvalue(self):
        comp = np.moveaxis(self.components, (0, 1), (-2, -1))
        return np.linalg.eigvalsh(comp)[..., 0]

    def asymmetry(self):
        return np.max(np.abs(self.components - np.swapaxes(self.components, 0, 1)))


@dataclass(frozen=True)
class GeomFrame:
    x: np.ndarray
    alpha: np.ndarray
    n: np.ndarray
    d: int
    phi_jet: Jet
    f_jet: Jet
    conformal_factor: np.ndarray

    @property
    def r2(self):
        return np.sum(self.x**2, axis=0)

    @property
    def order(self):
        return self.phi_jet.order


def make_frame(x, alpha, n, order=3):
    """Frame at ``x`` (away from the origin) for the metric exponent ``alpha`` and weight dimension ``n``."""
    x = np.asarray(x, dtype=float)
    d = x.shape[0]
    r2 = np.sum(x**2, axis=0)
    if np.any(r2 == 0):
        raise ValueError("the conformal metric is singular at the origin")
    alpha = np.asarray(alpha, dtype=float)
    n = np.asarray(n, dtype=float)
    log_r2 = jets.log(jets.norm_sq(jets.coordinates(x, order)))
    phi = log_r2 * (0.5 * (alpha - 1))
    f = log_r2 * (-0.5 * alpha * (n - d))
    return GeomFrame(
        x=x, alpha=alpha, n=n, d=d, phi_jet=phi, f_jet=f, conformal_factor=np.exp(2 * phi.value)
    )


def _exp_of(frame, c_phi, c_f, order):
    """Jet of ``exp(c_phi * phi + c_f * f)`` truncated to ``order``."""
    arg = frame.phi_jet.truncate(order) * c_phi + frame.f_jet.truncate(order) * c_f
    return jets.exp(arg)


def grad_norms(v_jet, frame):
    grad = v_jet.gradient
    return {"grad": grad, "grad_g_norm_sq": np.sum(grad**2, axis=0) / frame.conformal_factor}


def g_gradient(v_jet, frame):
    """Coordinate components of ``grad_g v`` as a vector (``e^{-2 phi} d_i v``)."""
    return v_jet.gradient / frame.conformal_factor


def hessian_g(v_jet, frame):
    """Covariant Hessian of ``v`` for the conformal metric."""
    d = frame.d
    grad = v_jet.gradient
    dphi = frame.phi_jet.gradient
    dot = np.sum(dphi * grad, axis=0)
    eye = _eye(d, grad.shape[1:])
    comp = (
        v_jet.hessian
        + dot * eye
        - (dphi[:, None] * grad[None, :] + grad[:, None] * dphi[None, :])
    )
    return TensorAtPoint(comp, frame.conformal_factor)


def _eye(d, batch):
    return np.eye(d).reshape((d, d) + (1,) * len(batch)) * np.ones((1, 1) + tuple(batch))


def laplace_and_drift(v_jet, frame):
    grad = v_jet.gradient
    lap_euclid = np.trace(v_jet.hessian, axis1=0, axis2=1)
    dphi = frame.phi_jet.gradient
    df = frame.f_jet.gradient
    laplace_g = (lap_euclid + (frame.d - 2) * np.sum(dphi * grad, axis=0)) / frame.conformal_factor
    drift = laplace_g - np.sum(df * grad, axis=0) / frame.conformal_factor
    return {"laplace_g": laplace_g, "drift_L": drift}


def gradient_field_jets(h_jet, frame):
    """Jets (order lowered by one) of the components ``e^{-2 phi} d_i h`` of ``grad_g h``."""
    order = h_jet.order - 1
    inv = _exp_of(frame, -2.0, 0.0, order)
    return [inv * h_jet.partial(i) for i in range(frame.d)]


def weighted_divergence(components, frame):
    """Value of ``e^f div_g(e^{-f} Y)`` from order >= 1 jets of the components ``Y^i``."""
    order = components[0].order
    w = _exp_of(frame, float(frame.d), -1.0, order)
    total = 0.0
    for i, comp in enumerate(components):
        total = total + (w * comp).partial(i).value
    return total * np.exp(frame.f_jet.value - frame.d * frame.phi_jet.value)


def drift_jet(v_jet, frame):
    """Jet (order lowered by two) of ``L v = e^f div_g(e^{-f} grad_g v)``."""
    order = v_jet.order - 1
    w = _exp_of(frame, float(frame.d), -1.0, order)
    total = None
    for i, comp in enumerate(gradient_field_jets(v_jet, frame)):
        term = (w * comp).partial(i)
        total = term if total is None else total + term
    back = _exp_of(frame, -float(frame.d), 1.0, order - 1)
    return back * total


def drift_via_divergence(v_jet, frame):
    return weighted_divergence(gradient_field_jets(v_jet, frame), frame)


def ricci_closed_form(frame):
    d, x, r2 = frame.d, frame.x, frame.r2
    coef = (d - 2) * (1 - frame.alpha**2) / r2
    comp = coef * (_eye(d, x.shape[1:]) - x[:, None] * x[None, :] / r2)
    return TensorAtPoint(comp, frame.conformal_factor)


def hess_f_closed_form(frame):
    d, x, r2 = frame.d, frame.x, frame.r2
    coef = -(frame.alpha**2) * (frame.n - d) / r2
    comp = coef * (_eye(d, x.shape[1:]) - 2 * x[:, None] * x[None, :] / r2)
    return TensorAtPoint(comp, frame.conformal_factor)


def ricci_conformal_formula(frame):
    """Ricci tensor of ``e^{2 phi} delta`` from the generic conformal-change formula."""
    d = frame.d
    dphi = frame.phi_jet.gradient
    hphi = frame.phi_jet.hessian
    lap = np.trace(hphi, axis1=0, axis2=1)
    eye = _eye(d, frame.x.shape[1:])
    comp = -(d - 2) * (hphi - dphi[:, None] * dphi[None, :]) - (lap + (d - 2) * np.sum(dphi**2, axis=0)) * eye
    return TensorAtPoint(comp, frame.conformal_factor)


def christoffel_from_metric(metric, inverse_diag):
    """Christoffel symbols ``Gamma[k][i][j]`` as jets from metric component jets.

    ``metric[i][j]`` are jets of order >= 2; ``inverse_diag[k]`` is the jet of
    ``g^{kk}`` (diagonal metrics only).  Output order is one less than the input.
    """
    d = len(metric)
    dg = [[[metric[i][j].partial(m) for m in range(d)] for j in range(d)] for i in range(d)]
    gam = []
    for k in range(d):
        inv = inverse_diag[k].truncate(dg[0][0][0].order)
        rows = []
        for i in range(d):
            row = []
            for j in range(d):
                row.append(inv * (dg[j][k][i] + dg[i][k][j] - dg[i][j][k]) * 0.5)
            rows.append(row)
        gam.append(rows)
    return gam


def ricci_numeric_oracle(frame):
    """Ricci tensor from Christoffel symbols of the metric jets (independent of the closed forms)."""
    d = frame.d
    e2phi = _exp_of(frame, 2.0, 0.0, 2)
    em2phi = _exp_of(frame, -2.0, 0.0, 2)
    zero = e2phi * 0.0
    metric = [[e2phi if i == j else zero for j in range(d)] for i in range(d)]
    gam = christoffel_from_metric(metric, [em2phi] * d)
    G = np.array([[[gam[k][i][j].value for j in range(d)] for i in range(d)] for k in range(d)])
    # dG[m, k, i, j] = d_m Gamma^k_ij
    dG = np.array(
        [[[[gam[k][i][j].partial(m).value for j in range(d)] for i in range(d)] for k in range(d)] for m in range(d)]
    )
    term1 = np.einsum("kkij...->ij...", dG)
    term2 = np.einsum("ikkj...->ij...", dG)
    trace_g = np.einsum("kkl...->l...", G)
    term3 = np.einsum("l...,lij...->ij...", trace_g, G)
    term4 = np.einsum("kil...,lkj...->ij...", G, G)
    return TensorAtPoint(term1 - term2 + term3 - term4, frame.conformal_factor)


def covariant_hessian_oracle(v_jet, frame):
    """``H v - Gamma^k_ij d_k v`` with Christoffel symbols from the metric jets."""
    d = frame.d
    e2phi = _exp_of(frame, 2.0, 0.0, 2)
    em2phi = _exp_of(frame, -2.0, 0.0, 2)
    zero = e2phi * 0.0
    metric = [[e2phi if i == j else zero for j in range(d)] for i in range(d)]
    gam = christoffel_from_metric(metric, [em2phi] * d)
    G = np.array([[[gam[k][i][j].value for j in range(d)] for i in range(d)] for k in range(d)])
    comp = v_jet.hessian - np.einsum("kij...,k...->ij...", G, v_jet.gradient)
    return TensorAtPoint(comp, frame.conformal_factor)
