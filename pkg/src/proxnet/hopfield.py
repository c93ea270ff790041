"""Continuous-time Hopfield models x'(t) = -D x + W sigma(x) + b.

D is block-diagonal positive self-inhibition (d_i * I on block i) and sigma
applies one catalog activation per block. Setting z = sigma(x), an
equilibrium satisfies z = prox_phi(D^{-1}(W z + b)), a fixed-point equation
of the same contraction type as the layered network solvers: when
|D^{-1} W| < 1 the equilibrium is unique and Banach iteration finds it. The
RK4 simulator provides an independent dynamical check and does not require
contraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .activations import Activation
from .errors import BlowUpError, DimensionMismatch, NoConvergence, NotContractive
from .linalg import as_matrix, as_vector, spectral_norm
from .network import CONTRACTION_BOUNDARY, DEFAULT_MAX_ITER, DEFAULT_TOL


@dataclass(frozen=True)
class HopfieldModel:
    """State dynamics data: self-inhibition, weights, bias, block activations."""

    self_inhibition: tuple[float, ...]  # d_i > 0, one per block
    weights: np.ndarray  # square on the total state dimension
    bias: np.ndarray
    activations: tuple[Activation, ...]  # one per block
    block_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.block_dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"block dims must be positive, got {dims}")
        object.__setattr__(self, "block_dims", dims)
        inhibition = tuple(float(d) for d in self.self_inhibition)
        if len(inhibition) != len(dims):
            raise DimensionMismatch("self_inhibition", len(dims), len(inhibition))
        if any(not (d > 0.0 and math.isfinite(d)) for d in inhibition):
            raise ValueError(f"self-inhibition entries must be positive, got {inhibition}")
        object.__setattr__(self, "self_inhibition", inhibition)
        total = sum(dims)
        w = as_matrix(self.weights, "hopfield weights")
        if w.shape != (total, total):
            raise DimensionMismatch("hopfield weights", (total, total), w.shape)
        object.__setattr__(self, "weights", w)
        b = as_vector(self.bias, "hopfield bias")
        if b.shape[0] != total:
            raise DimensionMismatch("hopfield bias", total, b.shape[0])
        object.__setattr__(self, "bias", b)
        acts = tuple(self.activations)
        if len(acts) != len(dims):
            raise DimensionMismatch("activations", len(dims), len(acts))
        object.__setattr__(self, "activations", acts)

    @property
    def total_dim(self) -> int:
        return sum(self.block_dims)

    @property
    def n_blocks(self) -> int:
        return len(self.block_dims)

    def d_diagonal(self) -> np.ndarray:
        """Per-coordinate expansion of D's diagonal."""
        return np.repeat(np.asarray(self.self_inhibition), self.block_dims)

    def sigma(self, x: np.ndarray) -> np.ndarray:
        """Blockwise activation (sigma_1(x_1), ..., sigma_n(x_n))."""
        out = np.empty_like(x)
        start = 0
        for act, d in zip(self.activations, self.block_dims):
            out[start:start + d] = act.prox(x[start:start + d])
            start += d
        return out

    def contraction_factor(self, seed: int = 0) -> float:
        """|D^{-1} W| via the assembled row-scaled matrix (the sharp value)."""
        scaled = self.weights / self.d_diagonal()[:, None]
        return spectral_norm(scaled, seed=seed)


@dataclass(frozen=True)
class EquilibriumResult:
    x_star: np.ndarray
    z_star: np.ndarray  # sigma(x_star), the prox-space fixed point
    residual: float  # |-D x* + W sigma(x*) + b|
    contraction_factor: float
    iterations: int


def dynamics_residual(m: HopfieldModel, x: np.ndarray) -> float:
    """|-D x + W sigma(x) + b| at a candidate state."""
    x = np.asarray(x, dtype=float)
    if x.shape[0] != m.total_dim:
        raise DimensionMismatch("dynamics_residual", m.total_dim, x.shape[0])
    return float(np.linalg.norm(-m.d_diagonal() * x + m.weights @ m.sigma(x) + m.bias))


def equilibrium_via_prox(
    m: HopfieldModel,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    z0: np.ndarray | None = None,
    seed: int = 0,
) -> EquilibriumResult:
    """Unique equilibrium via the prox reduction z <- prox_phi(D^{-1}(W z + b)).

    Requires |D^{-1} W| < 1, which makes the iteration a contraction with that
    factor; the Banach stopping rule certifies |z - z*| <= tol. The state is
    recovered as x* = D^{-1}(W z* + b).
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")
    theta = m.contraction_factor(seed=seed)
    if theta >= CONTRACTION_BOUNDARY:
        raise NotContractive("scaled weight norm |D^-1 W|", theta)
    d_diag = m.d_diagonal()
    factor = theta / (1.0 - theta)
    z = np.zeros(m.total_dim) if z0 is None else np.asarray(z0, dtype=float)
    if z.shape[0] != m.total_dim:
        raise DimensionMismatch("z0", m.total_dim, z.shape[0])
    iterations = 0
    bound = math.inf
    for _ in range(max_iter):
        x = (m.weights @ z + m.bias) / d_diag
        z_next = m.sigma(x)
        iterations += 1
        step = float(np.linalg.norm(z_next - z))
        z = z_next
        bound = factor * step
        if bound <= tol:
            x_star = (m.weights @ z + m.bias) / d_diag
            return EquilibriumResult(
                x_star=x_star,
                z_star=z,
                residual=dynamics_residual(m, x_star),
                contraction_factor=theta,
                iterations=iterations,
            )
    raise NoConvergence(
        f"hopfield equilibrium: bound {bound:.3e} > tol {tol:.3e} after {iterations} iterations",
        last=z,
        bound=bound,
        iterations=iterations,
    )


def simulate(
    m: HopfieldModel, x0: np.ndarray, dt: float, t_end: float
) -> tuple[np.ndarray, np.ndarray]:
    """Classical fixed-step RK4 integration of the dynamics.

    Returns (times, states) with one row per step including t=0. Raises
    :class:`BlowUpError` if the state leaves the finite floats.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    if t_end < dt:
        raise ValueError("t_end must be >= dt")
    x = as_vector(x0, "x0")
    if x.shape[0] != m.total_dim:
        raise DimensionMismatch("simulate x0", m.total_dim, x.shape[0])
    d_diag = m.d_diagonal()

    def rhs(state):
        return -d_diag * state + m.weights @ m.sigma(state) + m.bias

    steps = int(round(t_end / dt))
    times = np.empty(steps + 1)
    states = np.empty((steps + 1, m.total_dim))
    times[0] = 0.0
    states[0] = x
    for k in range(steps):
        k1 = rhs(x)
        k2 = rhs(x + 0.5 * dt * k1)
        k3 = rhs(x + 0.5 * dt * k2)
        k4 = rhs(x + dt * k3)
        x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = (k + 1) * dt
        if not np.all(np.isfinite(x)):
            raise BlowUpError(t)
        times[k + 1] = t
        states[k + 1] = x
    return times, states
