"""Cone catalogue: full space, planar arcs (d=2) and axisymmetric caps (d=3)."""

import math
from dataclasses import dataclass

import numpy as np


def sphere_measure(d):
    """Surface measure of the unit sphere S^{d-1}."""
    return 2 * math.pi ** (d / 2) / math.gamma(d / 2)


@dataclass(frozen=True)
class ConeSpec:
    kind: str = "full_space"
    theta: float | None = None
    d: int | None = None

    def __post_init__(self):
        if self.kind == "full_space":
            return
        if self.kind == "arc":
            if not 0 < self.theta < 2 * math.pi:
                raise ValueError("arc opening must lie in (0, 2 pi)")
            object.__setattr__(self, "d", 2)
        elif self.kind == "cap":
            if not 0 < self.theta < math.pi:
                raise ValueError("cap angle must lie in (0, pi)")
            object.__setattr__(self, "d", 3)
        else:
            raise ValueError(f"unknown cone kind {self.kind!r}")

    @classmethod
    def full(cls, d):
        return cls("full_space", None, d)

    @classmethod
    def arc(cls, theta):
        return cls("arc", float(theta))

    @classmethod
    def cap(cls, theta):
        return cls("cap", float(theta))

    @property
    def convex(self):
        if self.kind == "arc":
            return self.theta <= math.pi
        if self.kind == "cap":
            return self.theta <= math.pi / 2
        return True

    def angular_measure(self, d=None):
        if self.kind == "arc":
            return self.theta
        if self.kind == "cap":
            return 2 * math.pi * (1 - math.cos(self.theta))
        return sphere_measure(d if d is not None else self.d)

    def contains(self, x, tol=1e-12):
        """True where the direction of ``x`` (shape ``(d, m)``) lies in the closed cross-section."""
        x = np.asarray(x, dtype=float)
        if self.kind == "full_space":
            return np.ones(x.shape[1:], dtype=bool)
        if self.kind == "arc":
            ang = np.mod(np.arctan2(x[1], x[0]), 2 * math.pi)
            return (ang <= self.theta + tol) | (ang >= 2 * math.pi - tol)
        polar = np.arccos(np.clip(x[2] / np.linalg.norm(x, axis=0), -1, 1))
        return polar <= self.theta + tol

    def sample_directions(self, count, rng, boundary=False):
        if self.kind == "arc":
            if boundary:
                ang = np.where(np.arange(count) % 2 == 0, 0.0, self.theta)
            else:
                ang = rng.uniform(0, self.theta, count)
            return np.stack([np.cos(ang), np.sin(ang)])
        if self.kind == "cap":
            az = rng.uniform(0, 2 * math.pi, count)
            if boundary:
                t = np.full(count, self.theta)
            else:
                t = np.arccos(rng.uniform(math.cos(self.theta), 1.0, count))
            return np.stack([np.sin(t) * np.cos(az), np.sin(t) * np.sin(az), np.cos(t)])
        g = rng.standard_normal((self.d, count))
        return g / np.linalg.norm(g, axis=0)

    def outward_normals(self, x):
        """Unit outward normals at boundary points ``x`` of shape ``(d, m)``."""
        x = np.asarray(x, dtype=float)
        if self.kind == "arc":
            ang = np.mod(np.arctan2(x[1], x[0]), 2 * math.pi)
            on_start = np.abs(ang) < np.abs(ang - self.theta)
            start = np.stack([np.zeros_like(ang), -np.ones_like(ang)])
            end = np.stack([-np.sin(self.theta) * np.ones_like(ang), np.cos(self.theta) * np.ones_like(ang)])
            return np.where(on_start, start, end)
        if self.kind == "cap":
            az = np.arctan2(x[1], x[0])
            c, s = math.cos(self.theta), math.sin(self.theta)
            return np.stack([c * np.cos(az), c * np.sin(az), -s * np.ones_like(az)])
        raise ValueError("full space has no boundary")
