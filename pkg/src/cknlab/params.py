"""Derived CKN parameters and the regime classification of a parameter point."""

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateExponent, InadmissibleParams


@dataclass(frozen=True)
class CknParams:
    a: float
    b: float
    d: int

    @property
    def a_c(self):
        return (self.d - 2) / 2

    def violations(self):
        """Human-readable list of violated admissibility constraints (empty if admissible)."""
        out = []
        if self.d < 2 or int(self.d) != self.d:
            out.append(f"d must be an integer >= 2, got {self.d}")
            return out
        if not self.a < self.a_c:
            out.append(f"need a < a_c = {self.a_c}, got a = {self.a}")
        if self.d == 2 and not self.a < self.b:
            out.append(f"d = 2 needs a < b, got a = {self.a}, b = {self.b}")
        if self.d >= 3 and not self.a <= self.b:
            out.append(f"need a <= b, got a = {self.a}, b = {self.b}")
        if not self.b <= 1 + self.a:
            out.append(f"need b <= 1 + a, got a = {self.a}, b = {self.b}")
        return out

    @property
    def admissible(self):
        return not self.violations()

    @property
    def strict(self):
        return self.admissible and self.b < 1 + self.a


@dataclass(frozen=True)
class DerivedParams:
    params: CknParams
    d: int
    p: float
    a_c: float
    alpha: float
    n: float
    beta: float
    sigma: float
    Lambda: float
    kappa: float | None = None

    @property
    def alpha_fs(self):
        """Felli-Schneider threshold sqrt((d-1)/(n-1))."""
        return fs_threshold(self.d, self.n)

    @property
    def alpha_cd(self):
        """CD(0, n) threshold sqrt((d-2)/(n-2))."""
        if math.isinf(self.n):
            return 0.0
        return math.sqrt((self.d - 2) / (self.n - 2))

    def with_kappa(self, kappa):
        return replace(self, kappa=kappa)


@dataclass(frozen=True)
class RegimeReport:
    admissible: bool
    strict: bool
    fs_breaking: bool
    del_symmetric: bool
    cd0n: bool
    thm11_dimension: bool
    thm11_applies: bool


def fs_threshold(d, n):
    if math.isinf(n):
        return 0.0
    return math.sqrt((d - 1) / (n - 1))


def derive(params, strict=False):
    """All derived scalars of an admissible parameter triple.

    With ``strict=True`` the degenerate endpoint ``b = 1 + a`` (``p = 2``,
    infinite intrinsic dimension) is rejected.
    """
    problems = params.violations()
    if problems:
        raise InadmissibleParams("; ".join(problems))
    a, b, d = params.a, params.b, int(params.d)
    a_c = (d - 2) / 2
    gap = 1 + a - b
    if gap == 0:
        if strict:
            raise DegenerateExponent(f"b = 1 + a gives p = 2 for (a={a}, b={b})")
        n = math.inf
        p = 2.0
        alpha = 0.0
    else:
        n = d / gap
        p = 2 * d / (d - 2 + 2 * (b - a))
        alpha = gap * (a_c - a) / (a_c - a + b)
    sigma = a_c - a
    return DerivedParams(
        params=params,
        d=d,
        p=p,
        a_c=a_c,
        alpha=alpha,
        n=n,
        beta=(p - 2) * sigma,
        sigma=sigma,
        Lambda=sigma**2,
    )


def classify(derived, abstract_window=False):
    """Regime flags; reads nothing but the derived scalars.

    ``abstract_window`` swaps the dimension window (5/2, 5] for (3/2, 5].
    """
    lower = 1.5 if abstract_window else 2.5
    alpha, n, d = derived.alpha, derived.n, derived.d
    admissible = derived.params.admissible
    strict = derived.params.strict
    # compare squares: alpha >= 0 and squaring avoids sqrt rounding at the boundary
    if math.isinf(n):
        symmetric = cd0n = alpha == 0
    else:
        symmetric = alpha**2 <= (d - 1) / (n - 1)
        cd0n = alpha**2 <= (d - 2) / (n - 2)
    dim_ok = lower < n <= 5
    return RegimeReport(
        admissible=admissible,
        strict=strict,
        fs_breaking=not symmetric,
        del_symmetric=symmetric,
        cd0n=cd0n,
        thm11_dimension=dim_ok,
        thm11_applies=cd0n and dim_ok,
    )


_EMPTY = RegimeReport(False, False, False, False, False, False, False)


def region_grid(d, a_range, b_range, resolution):
    """Regime flags on a regular (a, b) grid; inadmissible points are kept and flagged.

    ``resolution`` is an int (same on both axes) or a pair.
    """
    if np.ndim(resolution) == 0:
        resolution = (resolution, resolution)
    na, nb = (int(r) for r in resolution)
    if na < 2 or nb < 2:
        raise ValueError("resolution must be >= 2 on each axis")
    rows = []
    for a in np.linspace(a_range[0], a_range[1], na):
        for b in np.linspace(b_range[0], b_range[1], nb):
            cp = CknParams(float(a), float(b), d)
            if cp.admissible:
                rows.append((float(a), float(b), classify(derive(cp))))
            else:
                rows.append((float(a), float(b), _EMPTY))
    return rows


REGION_HEADER = ("a", "b", "admissible", "strict", "fs_breaking", "del_symmetric", "cd0n", "thm11_applies")


def region_rows(grid):
    """Flatten :func:`region_grid` output into CSV-ready tuples."""
    return [
        (a, b, r.admissible, r.strict, r.fs_breaking, r.del_symmetric, r.cd0n, r.thm11_applies)
        for a, b, r in grid
    ]


def random_admissible(rng, d=None, strict=True, min_gap=0.0):
    """Draw an admissible (a, b, d); ``min_gap`` bounds 1 + a - b from below."""
    while True:
        dd = int(rng.integers(2, 5)) if d is None else d
        a_c = (dd - 2) / 2
        a = float(rng.uniform(-3.0, a_c - 1e-3))
        b = float(rng.uniform(a, 1 + a - min_gap))
        cp = CknParams(a, b, dd)
        if cp.admissible and (cp.strict or not strict):
            return cp
