"""Scalar test fields that can be evaluated as jets.

Fields cover the extremal family, the rigidity family ``c1 |x - x0|^{2 alpha} + c2``
and smooth positive fields used to fuzz the differential identities.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import jets
from .cones import ConeSpec
from .params import CknParams, DerivedParams, derive

R_MIN, R_MAX = 0.3, 3.0


def _shifted_r2(x, x0, order):
    x = np.asarray(x, dtype=float)
    coords = jets.coordinates(x, order)
    x0 = np.zeros(x.shape[0]) if x0 is None else np.asarray(x0, dtype=float)
    return jets.norm_sq([c - float(c0) for c, c0 in zip(coords, x0)])


@dataclass(frozen=True)
class ExtremalSpec:
    """``u(x) = mu (1 + (lam |x - x0|)^beta)^(-2/(p-2))`` with ``beta = (p-2)(a_c-a)``."""

    derived: DerivedParams
    lam: float = 1.0
    mu: float = 1.0
    x0: tuple | None = None

    def __post_init__(self):
        if self.lam <= 0 or self.mu <= 0:
            raise ValueError("dilation and amplitude must be positive")
        if self.derived.p <= 2:
            raise ValueError("the extremal family needs p > 2 (b < 1 + a)")
        if self.x0 is not None:
            x0 = tuple(float(c) for c in self.x0)
            object.__setattr__(self, "x0", x0)
            if len(x0) != self.derived.d:
                raise ValueError("center has the wrong dimension")

    @classmethod
    def from_abd(cls, a, b, d, **kw):
        return cls(derive(CknParams(a, b, d), strict=True), **kw)

    @property
    def params(self):
        return self.derived.params

    @property
    def v_scale(self):
        """Coefficient ``mu^{-2/(n-2)}`` of the induced ``v``."""
        return self.mu ** (-2 / (self.derived.n - 2))

    def with_(self, **kw):
        return replace(self, **kw)

    def u_jet(self, x, order):
        dp = self.derived
        r2 = _shifted_r2(x, self.x0, order) * self.lam**2
        base = 1.0 + jets.power(r2, dp.beta / 2)
        return jets.power(base, -2 / (dp.p - 2)) * self.mu

    def v_jet(self, x, order):
        dp = self.derived
        r2 = _shifted_r2(x, self.x0, order) * self.lam**2
        return (1.0 + jets.power(r2, dp.alpha)) * self.v_scale

    def jet(self, x, order):
        return self.u_jet(x, order)

    def u_radial(self, r):
        dp = self.derived
        r = np.asarray(r, dtype=float)
        return self.mu * (1 + (self.lam * r) ** dp.beta) ** (-2 / (dp.p - 2))

    def v_radial(self, r):
        r = np.asarray(r, dtype=float)
        return self.v_scale * (1 + (self.lam * r) ** (2 * self.derived.alpha))


@dataclass(frozen=True)
class Rigidity:
    """``c1 |x - x0|^{2 alpha} + c2``."""

    c1: float
    c2: float
    alpha: float
    x0: tuple | None = None

    def jet(self, x, order):
        return jets.power(_shifted_r2(x, self.x0, order), self.alpha) * self.c1 + self.c2


@dataclass(frozen=True)
class RadialPower:
    """``|x|^gamma``."""

    gamma: float

    def jet(self, x, order):
        return jets.power(_shifted_r2(x, None, order), self.gamma / 2)


@dataclass(frozen=True)
class GaussianBump:
    """``floor + height exp(-|x - center|^2 / width^2)``."""

    center: tuple
    width: float
    floor: float = 0.5
    height: float = 1.0

    def jet(self, x, order):
        r2 = _shifted_r2(x, self.center, order)
        return jets.exp(r2 * (-1.0 / self.width**2)) * self.height + self.floor


@dataclass(frozen=True)
class RandomMix:
    """``floor + sum_j c_j exp(-|x - z_j|^2 / w_j^2)`` with terms drawn from ``seed``."""

    seed: int
    d: int
    floor: float = 0.5
    terms: int = 4
    bumps: tuple = field(init=False, repr=False)

    def __post_init__(self):
        rng = np.random.default_rng(self.seed)
        bumps = []
        for _ in range(self.terms):
            z = rng.uniform(-R_MAX, R_MAX, self.d)
            w = rng.uniform(0.7, 2.5)
            c = rng.uniform(0.2, 1.5)
            bumps.append((tuple(z), float(w), float(c)))
        object.__setattr__(self, "bumps", tuple(bumps))

    def jet(self, x, order):
        out = None
        for z, w, c in self.bumps:
            term = jets.exp(_shifted_r2(x, z, order) * (-1.0 / w**2)) * c
            out = term if out is None else out + term
        return out + self.floor


@dataclass(frozen=True)
class LinearPerturbation:
    """``base + eps * x_axis``."""

    base: object
    eps: float
    axis: int = 0

    def jet(self, x, order):
        return self.base.jet(x, order) + jets.seed_coordinate(self.axis, x, order) * self.eps


@dataclass(frozen=True)
class Dilated:
    """``lam^sigma * base(lam x)``, the CKN rescaling when ``sigma = a_c - a``."""

    base: object
    lam: float
    sigma: float

    def jet(self, x, order):
        x = np.asarray(x, dtype=float)
        inner = self.base.jet(x * self.lam, order).scale_argument(self.lam)
        return inner * self.lam**self.sigma


def eval_jet(fld, x, order):
    """Jet of ``fld`` at the point(s) ``x`` (shape ``(d,)`` or ``(d, m)``)."""
    if order > jets.MAX_ORDER:
        raise ValueError(f"order must be <= {jets.MAX_ORDER}")
    return fld.jet(x, order)


def sample_points(mode, count, seed, d=3, cone=None, boundary=False, r_min=R_MIN, r_max=R_MAX):
    """Deterministic sample of ``count`` points, returned with shape ``(d, count)``.

    Radii are uniform in log-radius over ``[r_min, r_max]``.  ``mode`` is
    ``"annulus"`` (full directions) or ``"cone"`` (directions from ``cone``,
    optionally on its boundary).
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    radii = np.exp(rng.uniform(math.log(r_min), math.log(r_max), count))
    if mode == "annulus":
        dirs = ConeSpec.full(d).sample_directions(count, rng)
    elif mode == "cone":
        if cone is None:
            raise ValueError("cone mode needs a ConeSpec")
        dirs = cone.sample_directions(count, rng, boundary=boundary)
    else:
        raise ValueError(f"unknown sampling mode {mode!r}")
    return dirs * radii
