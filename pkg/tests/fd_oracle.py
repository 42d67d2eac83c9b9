"""Finite-difference derivatives used as an independent oracle for jets.

Stencils are tensor products of fourth-order centred 1D stencils with step
``h = 1e-3``.  Second-order stencils for the third partials would carry a
truncation error ``h^2 f^(5) / 4``, about 3e-5 near ``|x| = 0.3`` for the
power-law fields, which swamps the 1e-6 comparison; with the fourth-order
stencil the third partials are rounding-limited at 1e-3 and use ``h = 2e-3``.
"""

import itertools

import numpy as np

H = 1e-3
H3 = 2e-3

_FOURTH = {
    0: {0: 1.0},
    1: {-2: 1 / 12, -1: -8 / 12, 1: 8 / 12, 2: -1 / 12},
    2: {-2: -1 / 12, -1: 16 / 12, 0: -30 / 12, 1: 16 / 12, 2: -1 / 12},
}
_FOURTH[3] = {-3: 1 / 8, -2: -1.0, -1: 13 / 8, 1: -13 / 8, 2: 1.0, 3: -1 / 8}


def fd_partial(value_fn, x, multi_index, h=None):
    """Raw partial ``d^I f`` at points ``x`` of shape ``(d, m)``.

    ``value_fn`` maps points of shape ``(d, k)`` to values of shape ``(k,)``.
    """
    x = np.asarray(x, dtype=float)
    if h is None:
        h = H3 if sum(multi_index) == 3 else H
    stencils = [_FOURTH[k] for k in multi_index]
    total = np.zeros(x.shape[1])
    for combo in itertools.product(*(s.items() for s in stencils)):
        offset = np.array([o for o, _ in combo], dtype=float) * h
        weight = np.prod([w for _, w in combo])
        total += weight * value_fn(x + offset[:, None])
    return total / h ** sum(multi_index)


def multi_indices(d, max_order=3):
    for order in range(1, max_order + 1):
        for idx in itertools.product(range(order + 1), repeat=d):
            if sum(idx) == order:
                yield idx


def jet_vs_fd(field, x, max_order=3, h=None):
    """Largest ``|jet - fd| / max(1, |jet|)`` over all partials up to ``max_order``."""
    jet = field.jet(x, max_order)

    def value(pts):
        return field.jet(pts, 0).value

    worst = 0.0
    for idx in multi_indices(x.shape[0], max_order):
        exact = jet[idx]
        approx = fd_partial(value, x, idx, h)
        worst = max(worst, float(np.max(np.abs(exact - approx) / np.maximum(1.0, np.abs(exact)))))
    return worst
