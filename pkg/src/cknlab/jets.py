"""Truncated multivariate Taylor arithmetic ("jets").

A :class:`Jet` holds every raw partial derivative ``d^I f`` with ``|I| <= order``
of a scalar field at a point (no factorial scaling).  Coefficients are stored
in a graded order, so truncating to a lower order is a slice.  Every jet may
carry a trailing batch shape: ``coeffs`` has shape ``(N, *batch)`` and one
jet then describes the same field at many points at once.

Products use the Leibniz rule, compositions with univariate functions use the
truncated Faa di Bruno series ``h(f) = sum_m h^(m)(f0)/m! (f - f0)^m``, which is
exact up to the stored order because ``f - f0`` has zero value.
"""

from functools import lru_cache
from itertools import product
from math import comb, factorial

import numpy as np

from .errors import DomainError, OrderMismatch, OrderUnderflow

MAX_DIM = 4
MAX_ORDER = 3


def _multi_indices(dim, order):
    out = []
    for deg in range(order + 1):
        block = [idx for idx in product(range(deg + 1), repeat=dim) if sum(idx) == deg]
        out.extend(sorted(block, reverse=True))
    return out


class _Tables:
    def __init__(self, dim, order):
        self.indices = _multi_indices(dim, order)
        self.lookup = {idx: k for k, idx in enumerate(self.indices)}
        self.size = len(self.indices)
        self.degree = np.array([sum(idx) for idx in self.indices])

        rows_i, rows_j, weights, outs = [], [], [], []
        for o, out_idx in enumerate(self.indices):
            for sub in product(*(range(m + 1) for m in out_idx)):
                rest = tuple(m - s for m, s in zip(out_idx, sub))
                w = 1
                for m, s in zip(out_idx, sub):
                    w *= comb(m, s)
                rows_i.append(self.lookup[sub])
                rows_j.append(self.lookup[rest])
                weights.append(float(w))
                outs.append(o)
        self.mul_i = np.array(rows_i)
        self.mul_j = np.array(rows_j)
        self.mul_w = np.array(weights)
        scatter = np.zeros((self.size, len(outs)))
        scatter[outs, np.arange(len(outs))] = 1.0
        self.scatter = scatter

        # jet of d_i f (order-1) reads entries I + e_i of the jet of f
        self.extract = []
        if order >= 1:
            lower = _multi_indices(dim, order - 1)
            for axis in range(dim):
                pos = []
                for idx in lower:
                    shifted = list(idx)
                    shifted[axis] += 1
                    pos.append(self.lookup[tuple(shifted)])
                self.extract.append(np.array(pos))


@lru_cache(maxsize=None)
def tables(dim, order):
    if not 1 <= dim <= MAX_DIM:
        raise ValueError(f"jet dimension must be in 1..{MAX_DIM}, got {dim}")
    if not 0 <= order <= MAX_ORDER:
        raise ValueError(f"jet order must be in 0..{MAX_ORDER}, got {order}")
    return _Tables(dim, order)


def coefficient_count(dim, order):
    return comb(dim + order, order)


class Jet:
    """Raw partial derivatives up to ``order`` of a scalar field in ``dim`` variables."""

    __slots__ = ("dim", "order", "coeffs")
    __array_priority__ = 100

    def __init__(self, dim, order, coeffs):
        coeffs = np.asarray(coeffs, dtype=float)
        tab = tables(dim, order)
        if coeffs.shape[0] != tab.size:
            raise ValueError(
                f"expected {tab.size} coefficients for dim={dim}, order={order}, "
                f"got {coeffs.shape[0]}"
            )
        self.dim = dim
        self.order = order
        self.coeffs = coeffs

    # construction -----------------------------------------------------

    @classmethod
    def constant(cls, value, dim, order):
        value = np.asarray(value, dtype=float)
        coeffs = np.zeros((tables(dim, order).size,) + value.shape)
        coeffs[0] = value
        return cls(dim, order, coeffs)

    @classmethod
    def seed(cls, axis, x, order):
        """Jet of the coordinate function ``x_axis`` at the point(s) ``x``."""
        return seed_coordinate(axis, x, order)

    # access -----------------------------------------------------------

    @property
    def batch_shape(self):
        return self.coeffs.shape[1:]

    @property
    def value(self):
        return self.coeffs[0]

    def __getitem__(self, multi_index):
        multi_index = tuple(multi_index)
        if len(multi_index) != self.dim:
            raise IndexError(f"multi-index must have length {self.dim}")
        return self.coeffs[tables(self.dim, self.order).lookup[multi_index]]

    def derivative(self, *axes):
        """Raw partial along the given axes, e.g. ``j.derivative(0, 1)`` is d0 d1 f."""
        idx = [0] * self.dim
        for ax in axes:
            idx[ax] += 1
        return self[idx]

    @property
    def gradient(self):
        self._need(1)
        return np.stack([self.derivative(i) for i in range(self.dim)])

    @property
    def hessian(self):
        self._need(2)
        d = self.dim
        return np.stack(
            [np.stack([self.derivative(i, j) for j in range(d)]) for i in range(d)]
        )

    @property
    def third(self):
        self._need(3)
        d = self.dim
        return np.stack(
            [
                np.stack(
                    [np.stack([self.derivative(i, j, k) for k in range(d)]) for j in range(d)]
                )
                for i in range(d)
            ]
        )

    def as_dict(self):
        return {idx: self.coeffs[k] for k, idx in enumerate(tables(self.dim, self.order).indices)}

    def _need(self, order):
        if self.order < order:
            raise OrderUnderflow(f"jet of order {self.order} has no order-{order} data")

    # structural operations --------------------------------------------

    def truncate(self, order):
        if order > self.order:
            raise OrderMismatch(f"cannot raise jet order {self.order} to {order}")
        if order == self.order:
            return self
        return Jet(self.dim, order, self.coeffs[: tables(self.dim, order).size])

    def partial(self, axis):
        """Jet of ``d_axis f`` (order lowered by one)."""
        return partial_extract(self, axis)

    def scale_argument(self, factor):
        """Jet of ``x -> f(factor * x)`` given the jet of ``f`` at ``factor * x``."""
        deg = tables(self.dim, self.order).degree
        shape = (-1,) + (1,) * len(self.batch_shape)
        return Jet(self.dim, self.order, self.coeffs * (float(factor) ** deg).reshape(shape))

    # arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.dim != self.dim or other.order != self.order:
                raise OrderMismatch(
                    f"jet mismatch: (dim={self.dim}, order={self.order}) vs "
                    f"(dim={other.dim}, order={other.order})"
                )
            return other
        return None

    def __add__(self, other):
        j = self._coerce(other)
        if j is None:
            coeffs = np.array(np.broadcast_arrays(self.coeffs, np.zeros(np.shape(other)))[0])
            coeffs[0] = coeffs[0] + other
            return Jet(self.dim, self.order, coeffs)
        return Jet(self.dim, self.order, self.coeffs + j.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.dim, self.order, -self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        j = self._coerce(other)
        if j is None:
            return Jet(self.dim, self.order, self.coeffs * np.asarray(other, dtype=float))
        return mul(self, j)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * reciprocal(other)
        return Jet(self.dim, self.order, self.coeffs / np.asarray(other, dtype=float))

    def __rtruediv__(self, other):
        return reciprocal(self) * other

    def __pow__(self, r):
        return power(self, r)

    def __repr__(self):
        return f"Jet(dim={self.dim}, order={self.order}, value={self.value!r})"


def seed_coordinate(axis, x, order):
    x = np.asarray(x, dtype=float)
    dim = x.shape[0]
    if not 0 <= axis < dim:
        raise IndexError(f"axis {axis} out of range for dim {dim}")
    tab = tables(dim, order)
    coeffs = np.zeros((tab.size,) + x.shape[1:])
    coeffs[0] = x[axis]
    if order >= 1:
        e = [0] * dim
        e[axis] = 1
        coeffs[tab.lookup[tuple(e)]] = 1.0
    return Jet(dim, order, coeffs)


def coordinates(x, order):
    """Seed every coordinate at ``x``; returns a list of ``dim`` jets."""
    x = np.asarray(x, dtype=float)
    return [seed_coordinate(i, x, order) for i in range(x.shape[0])]


def mul(a, b):
    tab = tables(a.dim, a.order)
    terms = a.coeffs[tab.mul_i] * b.coeffs[tab.mul_j]
    batch = terms.shape[1:]
    terms = terms.reshape(terms.shape[0], -1) * tab.mul_w[:, None]
    out = (tab.scatter @ terms).reshape((tab.size,) + batch)
    return Jet(a.dim, a.order, out)


def compose(j, taylor):
    """Apply a univariate function given its Taylor coefficients ``h^(m)(f0)/m!``.

    ``taylor`` is a sequence of ``order + 1`` arrays broadcastable to the batch.
    """
    shifted = Jet(j.dim, j.order, j.coeffs.copy())
    shifted.coeffs[0] = 0.0
    out = Jet.constant(np.broadcast_to(taylor[0], j.batch_shape), j.dim, j.order)
    power_m = None
    for m in range(1, j.order + 1):
        power_m = shifted if power_m is None else mul(power_m, shifted)
        out = out + power_m * taylor[m]
    return out


def reciprocal(j):
    x = j.value
    if np.any(x == 0):
        raise DomainError("reciprocal of a jet with zero value")
    return compose(j, [(-1.0) ** m * x ** (-m - 1) for m in range(j.order + 1)])


def power(j, r):
    """``j ** r``; ``r`` may be an array broadcastable to the batch."""
    x = j.value
    if np.ndim(r) == 0 and float(r).is_integer() and r >= 0:
        n = int(r)
        out = Jet.constant(np.ones_like(x), j.dim, j.order)
        base = j
        while n:
            if n & 1:
                out = mul(out, base)
            n >>= 1
            if n:
                base = mul(base, base)
        return out
    r = np.asarray(r, dtype=float)
    if np.any(x <= 0):
        raise DomainError(f"power {r} of a jet with non-positive value")
    coef = []
    c = np.ones_like(r)
    for m in range(j.order + 1):
        coef.append(c * x ** (r - m))
        c = c * (r - m) / (m + 1)
    return compose(j, coef)


def sqrt(j):
    return power(j, 0.5)


def log(j):
    x = j.value
    if np.any(x <= 0):
        raise DomainError("log of a jet with non-positive value")
    coef = [np.log(x)] + [(-1.0) ** (m + 1) / (m * x**m) for m in range(1, j.order + 1)]
    return compose(j, coef)


def exp(j):
    ex = np.exp(j.value)
    return compose(j, [ex / factorial(m) for m in range(j.order + 1)])


def partial_extract(j, axis):
    if j.order < 1:
        raise OrderUnderflow("cannot differentiate an order-0 jet")
    if not 0 <= axis < j.dim:
        raise IndexError(f"axis {axis} out of range for dim {j.dim}")
    pos = tables(j.dim, j.order).extract[axis]
    return Jet(j.dim, j.order - 1, j.coeffs[pos])


def norm_sq(xs):
    """Jet of ``sum_i xs[i]**2`` for a list of jets."""
    out = mul(xs[0], xs[0])
    for x in xs[1:]:
        out = out + mul(x, x)
    return out


def arith(op, *operands, r=None):
    """Dispatch by name; mirrors the operator methods for table-driven callers."""
    if op == "add":
        return operands[0] + operands[1]
    if op == "sub":
        return operands[0] - operands[1]
    if op == "mul":
        return operands[0] * operands[1]
    if op == "scale":
        return operands[0] * r
    if op == "reciprocal":
        return reciprocal(operands[0])
    if op == "power":
        return power(operands[0], r)
    if op == "log":
        return log(operands[0])
    if op == "exp":
        return exp(operands[0])
    raise ValueError(f"unknown jet operation {op!r}")
