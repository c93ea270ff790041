"""Layered networks g_i(x) = sigma_i(W_i x + b_i) and their fixed points.

The recurrent composition g = g_n o ... o g_1 maps the input space back to
itself. When the product of the weight-operator norms theta_n is < 1, g is a
theta_n-contraction, so Banach iteration converges to the unique fixed point
from any start and every step yields a certified a-posteriori error bound
theta/(1-theta) * |x_{k+1} - x_k|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .activations import Activation
from .errors import DimensionMismatch, NoConvergence, NotContractive, PreconditionError
from .linalg import (
    DEFAULT_SPECTRAL_MAX_ITER,
    DEFAULT_SPECTRAL_REL_TOL,
    BlockVector,
    apply,
    as_matrix,
    as_vector,
    spectral_norm,
)

# theta_n this close to (or above) 1 is rejected: the contraction argument
# needs a strict inequality and theta_n itself carries spectral-norm error.
CONTRACTION_BOUNDARY = 1.0 - 1e-12

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100_000


@dataclass(frozen=True)
class Layer:
    """One layer: weights (d_i x d_{i-1}), bias (d_i), and an activation."""

    weights: np.ndarray
    bias: np.ndarray
    activation: Activation

    def __post_init__(self):
        object.__setattr__(self, "weights", as_matrix(self.weights, "layer weights"))
        object.__setattr__(self, "bias", as_vector(self.bias, "layer bias"))
        if self.weights.shape[0] != self.bias.shape[0]:
            raise DimensionMismatch("layer bias", self.weights.shape[0], self.bias.shape[0])

    @property
    def in_dim(self) -> int:
        return self.weights.shape[1]

    @property
    def out_dim(self) -> int:
        return self.weights.shape[0]


def layer_apply(layer: Layer, x: np.ndarray, context: str = "layer") -> np.ndarray:
    """sigma(W x + b)."""
    return layer.activation.prox(apply(layer.weights, x, context) + layer.bias)


@dataclass(frozen=True)
class Network:
    """An ordered stack of layers; recurrent when d_0 == d_n."""

    layers: tuple[Layer, ...]

    def __post_init__(self):
        layers = tuple(self.layers)
        if not layers:
            raise ValueError("Network needs at least one layer")
        for i in range(1, len(layers)):
            if layers[i].in_dim != layers[i - 1].out_dim:
                raise DimensionMismatch(
                    f"layer {i + 1} input", layers[i - 1].out_dim, layers[i].in_dim
                )
        object.__setattr__(self, "layers", layers)

    @property
    def n(self) -> int:
        return len(self.layers)

    @property
    def in_dim(self) -> int:
        return self.layers[0].in_dim

    @property
    def out_dim(self) -> int:
        return self.layers[-1].out_dim

    @property
    def recurrent(self) -> bool:
        return self.in_dim == self.out_dim

    @property
    def layer_dims(self) -> tuple[int, ...]:
        """(d_1, ..., d_n): the output dimension of each layer."""
        return tuple(l.out_dim for l in self.layers)


@dataclass(frozen=True)
class AnalysisReport:
    """Contraction data for a network."""

    per_layer_norms: tuple[float, ...]
    theta_n: float  # product of the per-layer operator norms
    w_max: float  # max per-layer operator norm = norm of the block operator
    product_contractive: bool  # theta_n < 1 (strict)
    uniformly_contractive: bool  # w_max < 1 (strict)
    bias_norm: float  # norm of (b_1, ..., b_n) in the product space
    norm_rel_tol: float  # tolerance the norms were computed with


@dataclass(frozen=True)
class FixedPointResult:
    point: np.ndarray
    iterations: int
    last_step_norm: float
    certified_error: float  # a-posteriori Banach bound on |point - x*|
    converged: bool


def forward(net: Network, x0: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    """Run x0 through every layer; returns the output and the per-layer trajectory."""
    x = as_vector(x0, "input")
    trajectory = []
    for i, layer in enumerate(net.layers):
        x = layer_apply(layer, x, context=f"layer {i + 1}")
        trajectory.append(x)
    return x, trajectory


def analyze(
    net: Network,
    rel_tol: float = DEFAULT_SPECTRAL_REL_TOL,
    max_iter: int = DEFAULT_SPECTRAL_MAX_ITER,
    seed: int = 0,
) -> AnalysisReport:
    """Per-layer spectral norms and the derived contraction flags."""
    norms = tuple(
        spectral_norm(l.weights, rel_tol=rel_tol, max_iter=max_iter, seed=seed)
        for l in net.layers
    )
    theta_n = float(np.prod(norms))
    w_max = max(norms)
    bias_norm = float(np.sqrt(sum(float(np.sum(l.bias**2)) for l in net.layers)))
    return AnalysisReport(
        per_layer_norms=norms,
        theta_n=theta_n,
        w_max=w_max,
        product_contractive=theta_n < CONTRACTION_BOUNDARY,
        uniformly_contractive=w_max < CONTRACTION_BOUNDARY,
        bias_norm=bias_norm,
        norm_rel_tol=rel_tol,
    )


def _require_recurrent(net: Network, what: str):
    if not net.recurrent:
        raise PreconditionError(
            f"{what} needs a recurrent network (d_0 = d_n), got d_0={net.in_dim}, d_n={net.out_dim}"
        )


def sequential_iterates(net: Network, x0: np.ndarray) -> Iterator[np.ndarray]:
    """x0, g(x0), g(g(x0)), ... (unbounded; callers decide when to stop)."""
    _require_recurrent(net, "sequential iteration")
    x = as_vector(x0, "start")
    if x.shape[0] != net.in_dim:
        raise DimensionMismatch("start", net.in_dim, x.shape[0])
    while True:
        yield x
        x, _ = forward(net, x)


def apriori_iteration_bound(theta: float, first_step: float, tol: float) -> int | None:
    """Banach a-priori estimate of the iterations needed to certify ``tol``.

    Diagnostic only: k with theta^k/(1-theta) * first_step <= tol. None when
    the start is already exact.
    """
    if first_step == 0.0:
        return None
    target = tol * (1.0 - theta) / first_step
    if target >= 1.0 or theta == 0.0:
        return 1
    return int(math.ceil(math.log(target) / math.log(theta)))


def solve_sequential(
    net: Network,
    x0: np.ndarray | None = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    analysis: AnalysisReport | None = None,
) -> FixedPointResult:
    """Banach iteration x_{k+1} = g(x_k) with a certified stopping rule.

    Stops once theta/(1-theta) * |x_{k+1} - x_k| <= tol, which bounds the
    distance of the returned point to the unique fixed point by ``tol``; the
    fixed-point residual |g(p) - p| is then at most 2*tol. Refuses when the
    network is not recurrent or theta_n >= 1.
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")
    _require_recurrent(net, "solve_sequential")
    report = analysis if analysis is not None else analyze(net)
    theta = report.theta_n
    if theta >= CONTRACTION_BOUNDARY:
        raise NotContractive("theta_n (product of weight norms)", theta, report.norm_rel_tol)
    if x0 is None:
        x0 = np.zeros(net.in_dim)
    factor = theta / (1.0 - theta)
    prev = as_vector(x0, "start")
    iterations = 0
    step = math.inf
    bound = math.inf
    for _ in range(max_iter):
        cur, _ = forward(net, prev)
        iterations += 1
        step = float(np.linalg.norm(cur - prev))
        bound = factor * step
        if bound <= tol:
            return FixedPointResult(
                point=cur,
                iterations=iterations,
                last_step_norm=step,
                certified_error=bound,
                converged=True,
            )
        prev = cur
    raise NoConvergence(
        f"sequential solver: bound {bound:.3e} > tol {tol:.3e} after {iterations} iterations",
        last=prev,
        bound=bound,
        iterations=iterations,
    )


def lift_trajectory(net: Network, xn_star: np.ndarray) -> BlockVector:
    """Per-layer trajectory (g_1(x), g_2(g_1(x)), ..., g(x)) as a block vector.

    Applied to a fixed point of g this produces the unique member of the
    trajectory set: the block solution whose last block reproduces the input.
    """
    _require_recurrent(net, "lift_trajectory")
    _, trajectory = forward(net, xn_star)
    return BlockVector(tuple(trajectory))
