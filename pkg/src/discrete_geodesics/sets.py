"""Closed convex endpoint sets with closed-form Euclidean projections."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_SLACK = 1e-12


class EndpointSet:
    """Base class; subclasses provide ``contains``, ``project`` and ``center``."""

    kind: str = ""
    bounded: bool = True

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    def project(self, x) -> np.ndarray:
        raise NotImplementedError

    def center(self) -> np.ndarray:
        """A representative point of the set."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError(f"expected a point of shape ({self.dim},), got {x.shape}")
        return x


def _vec(v) -> np.ndarray:
    a = np.array(v, dtype=float)
    if a.ndim != 1 or a.size == 0 or not np.all(np.isfinite(a)):
        raise ValueError(f"expected a finite 1-D vector, got {v!r}")
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Point(EndpointSet):
    p: np.ndarray
    kind = "point"

    def __post_init__(self):
        object.__setattr__(self, "p", _vec(self.p))

    @property
    def dim(self):
        return self.p.size

    def contains(self, x):
        return bool(np.linalg.norm(self._check(x) - self.p) <= _SLACK * max(1.0, np.abs(self.p).max()))

    def project(self, x):
        self._check(x)
        return self.p.copy()

    def center(self):
        return self.p.copy()

    def to_dict(self):
        return {"kind": "point", "p": self.p.tolist()}


@dataclass(frozen=True, eq=False)
class Ball(EndpointSet):
    center_: np.ndarray
    radius: float
    kind = "ball"

    def __post_init__(self):
        object.__setattr__(self, "center_", _vec(self.center_))
        if not self.radius >= 0:
            raise ValueError(f"radius must be nonnegative, got {self.radius}")

    @property
    def dim(self):
        return self.center_.size

    def contains(self, x):
        return bool(np.linalg.norm(self._check(x) - self.center_) <= self.radius + _SLACK * max(1.0, self.radius))

    def project(self, x):
        d = self._check(x) - self.center_
        r = np.linalg.norm(d)
        if r <= self.radius:
            return np.array(x, dtype=float)
        return self.center_ + d * (self.radius / r)

    def center(self):
        return self.center_.copy()

    def to_dict(self):
        return {"kind": "ball", "center": self.center_.tolist(), "radius": float(self.radius)}


@dataclass(frozen=True, eq=False)
class Box(EndpointSet):
    lo: np.ndarray
    hi: np.ndarray
    kind = "box"

    def __post_init__(self):
        object.__setattr__(self, "lo", _vec(self.lo))
        object.__setattr__(self, "hi", _vec(self.hi))
        if self.lo.shape != self.hi.shape or np.any(self.lo > self.hi):
            raise ValueError("box needs lo <= hi of equal length")

    @property
    def dim(self):
        return self.lo.size

    def contains(self, x):
        x = self._check(x)
        return bool(np.all(x >= self.lo - _SLACK) and np.all(x <= self.hi + _SLACK))

    def project(self, x):
        return np.clip(self._check(x), self.lo, self.hi)

    def center(self):
        return 0.5 * (self.lo + self.hi)

    def to_dict(self):
        return {"kind": "box", "lo": self.lo.tolist(), "hi": self.hi.tolist()}


@dataclass(frozen=True, eq=False)
class HalfSpace(EndpointSet):
    """``{x : normal . x <= offset}``."""

    normal: np.ndarray
    offset: float
    kind = "halfspace"
    bounded = False

    def __post_init__(self):
        object.__setattr__(self, "normal", _vec(self.normal))
        if not np.any(self.normal):
            raise ValueError("half-space normal must be nonzero")

    @property
    def dim(self):
        return self.normal.size

    def contains(self, x):
        x = self._check(x)
        return bool(self.normal @ x <= self.offset + _SLACK * max(1.0, np.linalg.norm(self.normal)))

    def project(self, x):
        x = self._check(x)
        excess = self.normal @ x - self.offset
        if excess <= 0:
            return x.copy()
        return x - excess / (self.normal @ self.normal) * self.normal

    def center(self):
        # closest point of the set to the origin
        return self.project(np.zeros(self.dim))

    def to_dict(self):
        return {"kind": "halfspace", "normal": self.normal.tolist(), "offset": float(self.offset)}


def as_endpoint_set(x) -> EndpointSet:
    return x if isinstance(x, EndpointSet) else Point(x)


def check_instance(x0: EndpointSet, x1: EndpointSet) -> None:
    """Both sets share a dimension and at least one is bounded."""
    if x0.dim != x1.dim:
        raise ValueError(f"endpoint sets have different dimensions ({x0.dim} vs {x1.dim})")
    if not (x0.bounded or x1.bounded):
        raise ValueError("at least one endpoint set must be bounded")


def set_from_dict(d: dict) -> EndpointSet:
    kind = d.get("kind")
    if kind == "point":
        return Point(d["p"])
    if kind == "ball":
        return Ball(d["center"], float(d["radius"]))
    if kind == "box":
        return Box(d["lo"], d["hi"])
    if kind == "halfspace":
        return HalfSpace(d["normal"], float(d["offset"]))
    raise ValueError(f"unknown endpoint set kind {kind!r}")
