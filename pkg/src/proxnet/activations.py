"""Catalog of proximal activation operators.

Each member is the proximal map of a proper l.s.c. convex function ``phi``
whose minimum sits at the origin, so ``prox(0) = 0``, the map is firmly
nonexpansive, and scalar members are increasing and 1-Lipschitz. Every member
also exposes its ``phi`` value and an exact, closed-form representation of the
subdifferential ``d phi`` (per-coordinate intervals, or a euclidean ball for
the group-threshold kind), which makes inclusion checks exact rather than
numerical.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

INF = math.inf


# --- subgradient set representations ---------------------------------------


class SubgradientSet(ABC):
    """A closed convex subset of R^d supporting exact distance queries."""

    is_empty = False

    @abstractmethod
    def distance(self, u: np.ndarray) -> float:
        """Euclidean distance from ``u`` to the set (inf when empty)."""


class EmptySet(SubgradientSet):
    """The subdifferential at a point outside dom phi."""

    is_empty = True

    def distance(self, u: np.ndarray) -> float:
        return INF


EMPTY = EmptySet()


@dataclass(frozen=True)
class IntervalBox(SubgradientSet):
    """Product of per-coordinate closed intervals; endpoints may be +-inf."""

    lower: np.ndarray
    upper: np.ndarray

    def distance(self, u: np.ndarray) -> float:
        per_coord = np.maximum(np.maximum(self.lower - u, u - self.upper), 0.0)
        return float(np.linalg.norm(per_coord))

    def contains(self, u: np.ndarray, tol: float = 0.0) -> bool:
        return self.distance(u) <= tol


@dataclass(frozen=True)
class Ball(SubgradientSet):
    """Closed euclidean ball; radius 0 encodes a single point."""

    center: np.ndarray
    radius: float

    def distance(self, u: np.ndarray) -> float:
        return max(float(np.linalg.norm(u - self.center)) - self.radius, 0.0)


# --- the catalog ------------------------------------------------------------


class Activation(ABC):
    """One member of the activation catalog (prox, phi, subdifferential)."""

    kind: str = ""

    @property
    def param(self) -> float | None:
        return None

    @abstractmethod
    def prox(self, x: np.ndarray) -> np.ndarray:
        """The proximal map of phi: the unique minimizer of phi(y) + |x-y|^2/2."""

    @abstractmethod
    def phi(self, x: np.ndarray) -> float:
        """phi(x), possibly +inf for indicator kinds."""

    @abstractmethod
    def subgradient(self, z: np.ndarray, dom_tol: float = 0.0) -> SubgradientSet:
        """The set d phi(z); points within ``dom_tol`` of dom phi are projected
        onto it first, anything further out yields EMPTY."""

    def subgradient_contains(self, z: np.ndarray, u: np.ndarray, tol: float = 0.0) -> bool:
        """True iff dist(u, d phi(z)) <= tol; False when d phi(z) is empty."""
        if z.shape != u.shape:
            raise ValueError(f"shape mismatch: z {z.shape} vs u {u.shape}")
        return self.subgradient(z, dom_tol=tol).distance(u) <= tol

    def __eq__(self, other):
        return (
            isinstance(other, Activation)
            and self.kind == other.kind
            and self.param == other.param
        )

    def __hash__(self):
        return hash((self.kind, self.param))

    def __repr__(self):
        if self.param is None:
            return f"{type(self).__name__}()"
        return f"{type(self).__name__}({self.param!r})"


class Identity(Activation):
    """phi = 0; prox is the identity."""

    kind = "identity"

    def prox(self, x):
        return np.array(x, dtype=float)

    def phi(self, x):
        return 0.0

    def subgradient(self, z, dom_tol=0.0):
        zero = np.zeros_like(z)
        return IntervalBox(zero, zero)


class Relu(Activation):
    """phi = indicator of the nonnegative orthant; prox is max(x, 0)."""

    kind = "relu"

    def prox(self, x):
        return np.maximum(x, 0.0)

    def phi(self, x):
        return 0.0 if np.all(x >= 0.0) else INF

    def subgradient(self, z, dom_tol=0.0):
        if np.any(z < -dom_tol):
            return EMPTY
        z = np.maximum(z, 0.0)
        lower = np.where(z > 0.0, 0.0, -INF)
        upper = np.zeros_like(z)
        return IntervalBox(lower, upper)


@dataclass(frozen=True, repr=False, eq=False)
class SoftThreshold(Activation):
    """phi = lam * |x|_1; prox shrinks each coordinate toward 0 by lam."""

    lam: float
    kind = "soft_threshold"

    def __post_init__(self):
        _require_positive(self.kind, self.lam)

    @property
    def param(self):
        return self.lam

    def prox(self, x):
        return np.sign(x) * np.maximum(np.abs(x) - self.lam, 0.0)

    def phi(self, x):
        return float(self.lam * np.sum(np.abs(x)))

    def subgradient(self, z, dom_tol=0.0):
        lower = np.where(z > 0.0, self.lam, np.where(z < 0.0, -self.lam, -self.lam))
        upper = np.where(z > 0.0, self.lam, np.where(z < 0.0, -self.lam, self.lam))
        return IntervalBox(lower, upper)


@dataclass(frozen=True, repr=False, eq=False)
class Clip(Activation):
    """phi = indicator of the box [-c, c]^d; prox clamps coordinatewise."""

    c: float
    kind = "clip"

    def __post_init__(self):
        _require_positive(self.kind, self.c)

    @property
    def param(self):
        return self.c

    def prox(self, x):
        return np.clip(x, -self.c, self.c)

    def phi(self, x):
        return 0.0 if np.all(np.abs(x) <= self.c) else INF

    def subgradient(self, z, dom_tol=0.0):
        if np.any(np.abs(z) > self.c + dom_tol):
            return EMPTY
        z = np.clip(z, -self.c, self.c)
        lower = np.where(z <= -self.c, -INF, 0.0)
        upper = np.where(z >= self.c, INF, 0.0)
        return IntervalBox(lower, upper)


@dataclass(frozen=True, repr=False, eq=False)
class Shrink(Activation):
    """phi = (lam/2) |x|^2; prox divides by 1 + lam."""

    lam: float
    kind = "shrink"

    def __post_init__(self):
        _require_positive(self.kind, self.lam)

    @property
    def param(self):
        return self.lam

    def prox(self, x):
        return x / (1.0 + self.lam)

    def phi(self, x):
        return float(0.5 * self.lam * np.sum(x**2))

    def subgradient(self, z, dom_tol=0.0):
        g = self.lam * z
        return IntervalBox(g, g)


@dataclass(frozen=True, repr=False, eq=False)
class GroupSoftThreshold(Activation):
    """phi = lam * |x|_2 on the whole block; prox shrinks the radius.

    The one genuinely vector-valued member: its subdifferential at the origin
    is the euclidean ball of radius lam, not a coordinate box.
    """

    lam: float
    kind = "group_soft_threshold"

    def __post_init__(self):
        _require_positive(self.kind, self.lam)

    @property
    def param(self):
        return self.lam

    def prox(self, x):
        norm = float(np.linalg.norm(x))
        if norm <= self.lam:
            return np.zeros_like(x)
        return (1.0 - self.lam / norm) * x

    def phi(self, x):
        return float(self.lam * np.linalg.norm(x))

    def subgradient(self, z, dom_tol=0.0):
        norm = float(np.linalg.norm(z))
        if norm == 0.0:
            return Ball(np.zeros_like(z), self.lam)
        return Ball(self.lam * z / norm, 0.0)


def _require_positive(kind: str, value: float):
    if not (value > 0.0 and math.isfinite(value)):
        raise ConfigError(f"activation {kind!r}: param must be a positive finite real, got {value!r}")


CATALOG = ("identity", "relu", "soft_threshold", "clip", "shrink", "group_soft_threshold")

_PARAMETRIC = {
    "soft_threshold": SoftThreshold,
    "clip": Clip,
    "shrink": Shrink,
    "group_soft_threshold": GroupSoftThreshold,
}


def make_activation(kind: str, param: float | None = None) -> Activation:
    """Build a catalog member by name, validating the parameter."""
    if kind == "identity" or kind == "relu":
        if param is not None:
            raise ConfigError(f"activation {kind!r} takes no param")
        return Identity() if kind == "identity" else Relu()
    if kind in _PARAMETRIC:
        if param is None:
            raise ConfigError(f"activation {kind!r} requires a positive param")
        return _PARAMETRIC[kind](float(param))
    raise ConfigError(f"unknown activation kind {kind!r} (choose from {', '.join(CATALOG)})")


# --- spec-level operation aliases -------------------------------------------


def prox_apply(a: Activation, v: np.ndarray) -> np.ndarray:
    return a.prox(np.asarray(v, dtype=float))


def phi_value(a: Activation, v: np.ndarray) -> float:
    return a.phi(np.asarray(v, dtype=float))


def subgradient_contains(a: Activation, z: np.ndarray, u: np.ndarray, tol: float = 0.0) -> bool:
    return a.subgradient_contains(np.asarray(z, dtype=float), np.asarray(u, dtype=float), tol)
