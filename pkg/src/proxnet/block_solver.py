"""Product-space formulation of the recurrent fixed-point problem.

On H = H_1 x ... x H_n the network data become a cyclic shift S, a block
weight operator W (block i of W(S(x)) is W_i x_{i-1}, indices mod n), the
separable function psi(x) = sum_i phi_i(x_i) - <x, b>, and the single map
T = prox_psi o W o S whose fixed points are exactly the per-layer
trajectories of the recurrent fixed points. T itself may expand a single
step when some |W_i| >= 1, but each full cycle of n steps contracts by
theta_n, so convergence is monitored on n-step displacements.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotContractive, PreconditionError
from .linalg import BlockVector, apply, block_norm, spectral_norm
from .network import (
    CONTRACTION_BOUNDARY,
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    AnalysisReport,
    Network,
    analyze,
)

MONOTONE_EIG_TOL = 1e-10
DEFAULT_MONOTONE_DIM_CAP = 2_000


@dataclass(frozen=True)
class BlockNetwork:
    """A recurrent network viewed on the product space H_1 x ... x H_n."""

    source: Network

    def __post_init__(self):
        if not self.source.recurrent:
            raise PreconditionError(
                "BlockNetwork needs a recurrent network (d_0 = d_n), "
                f"got d_0={self.source.in_dim}, d_n={self.source.out_dim}"
            )

    @property
    def n(self) -> int:
        return self.source.n

    @property
    def dims(self) -> tuple[int, ...]:
        return self.source.layer_dims

    @property
    def block_bias(self) -> BlockVector:
        return BlockVector(tuple(l.bias for l in self.source.layers))

    def zero(self) -> BlockVector:
        return BlockVector.zeros(self.dims)

    def analysis(self, **kwargs) -> AnalysisReport:
        return analyze(self.source, **kwargs)


def shift_apply(x: BlockVector) -> BlockVector:
    """Cyclic shift (x_1, ..., x_n) -> (x_n, x_1, ..., x_{n-1})."""
    return BlockVector((x.blocks[-1],) + x.blocks[:-1])


def block_weight_apply(bn: BlockNetwork, x: BlockVector) -> BlockVector:
    """W o S in one pass: block i of the result is W_i x_{i-1} (x_0 = x_n)."""
    if len(x) != bn.n:
        raise DimensionMismatch("block_weight_apply", bn.n, len(x))
    shifted = shift_apply(x)
    out = []
    for i, layer in enumerate(bn.source.layers):
        out.append(apply(layer.weights, shifted.blocks[i], context=f"layer {i + 1}"))
    return BlockVector(tuple(out))


def prox_psi_apply(bn: BlockNetwork, x: BlockVector) -> BlockVector:
    """prox of psi = phi - <., b>, which reduces to prox_phi(x + b) blockwise.

    The reduction follows from d psi = d phi - b and the resolvent form of the
    prox; it is cross-validated by the subgradient characterization tests.
    """
    if len(x) != bn.n:
        raise DimensionMismatch("prox_psi_apply", bn.n, len(x))
    out = []
    for layer, xi in zip(bn.source.layers, x.blocks):
        out.append(layer.activation.prox(xi + layer.bias))
    return BlockVector(tuple(out))


def block_map(bn: BlockNetwork, x: BlockVector) -> BlockVector:
    """One application of T = prox_psi o W o S."""
    return prox_psi_apply(bn, block_weight_apply(bn, x))


def solve_block(
    bn: BlockNetwork,
    x0: BlockVector | None = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    analysis: AnalysisReport | None = None,
) -> tuple[BlockVector, int]:
    """Iterate T until the n-step displacement certifies distance <= tol.

    T^n is a theta_n-contraction blockwise, so once
    theta/(1-theta) * |x_{k} - x_{k-n}| <= tol the current iterate is within
    ``tol`` of the unique block fixed point.
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")
    report = analysis if analysis is not None else bn.analysis()
    theta = report.theta_n
    if theta >= CONTRACTION_BOUNDARY:
        raise NotContractive("theta_n (product of weight norms)", theta, report.norm_rel_tol)
    factor = theta / (1.0 - theta)
    x = bn.zero() if x0 is None else x0
    if x.dims != bn.dims:
        raise DimensionMismatch("block start", bn.dims, x.dims)
    history: deque[BlockVector] = deque([x], maxlen=bn.n + 1)
    iterations = 0
    bound = math.inf
    for _ in range(max_iter):
        x = block_map(bn, x)
        iterations += 1
        history.append(x)
        if len(history) == bn.n + 1:
            bound = factor * x.distance(history[0])
            if bound <= tol:
                return x, iterations
    raise NoConvergence(
        f"block solver: bound {bound:.3e} > tol {tol:.3e} after {iterations} iterations",
        last=x,
        bound=bound,
        iterations=iterations,
    )


@dataclass(frozen=True)
class InclusionReport:
    """Residuals of a candidate block point against the inclusion system.

    ``per_layer_residuals`` are exact distances of u_i = b_i - x_i + W_i x_{i-1}
    to the subdifferential d phi_i(x_i); ``prox_residuals`` cross-check the
    equivalent prox form |x_i - prox_i(W_i x_{i-1} + b_i)|.
    """

    per_layer_residuals: tuple[float, ...]
    max_residual: float
    prox_residuals: tuple[float, ...]
    max_prox_residual: float
    satisfied: bool  # max_residual <= tol
    prox_satisfied: bool  # max_prox_residual <= tol
    tol: float


def verify_inclusion(bn: BlockNetwork, x: BlockVector, tol: float = 1e-8) -> InclusionReport:
    """Test membership u_i in d phi_i(x_i) for every layer (indices mod n)."""
    if len(x) != bn.n:
        raise DimensionMismatch("verify_inclusion", bn.n, len(x))
    shifted = shift_apply(x)
    sub_res = []
    prox_res = []
    for i, layer in enumerate(bn.source.layers):
        wx = apply(layer.weights, shifted.blocks[i], context=f"layer {i + 1}")
        xi = x.blocks[i]
        u = layer.bias - xi + wx
        sub_res.append(layer.activation.subgradient(xi, dom_tol=tol).distance(u))
        prox_res.append(float(np.linalg.norm(xi - layer.activation.prox(wx + layer.bias))))
    max_sub = max(sub_res)
    max_prox = max(prox_res)
    return InclusionReport(
        per_layer_residuals=tuple(sub_res),
        max_residual=max_sub,
        prox_residuals=tuple(prox_res),
        max_prox_residual=max_prox,
        satisfied=max_sub <= tol,
        prox_satisfied=max_prox <= tol,
        tol=tol,
    )


@dataclass(frozen=True)
class BoundReport:
    """The norm bound |x| <= |b| / (1 - w_max) evaluated on a candidate."""

    bound: float
    actual: float
    holds: bool
    margin: float


def verify_bound(
    bn: BlockNetwork,
    x: BlockVector,
    slack: float = 0.0,
    analysis: AnalysisReport | None = None,
) -> BoundReport:
    """Check the fixed-point norm bound; refuses when w_max >= 1."""
    if slack < 0:
        raise ValueError("slack must be >= 0")
    report = analysis if analysis is not None else bn.analysis()
    if report.w_max >= CONTRACTION_BOUNDARY:
        raise NotContractive("w_max (max weight norm)", report.w_max, report.norm_rel_tol)
    bound = report.bias_norm / (1.0 - report.w_max)
    actual = block_norm(x)
    return BoundReport(
        bound=bound,
        actual=actual,
        holds=actual <= bound + slack,
        margin=bound - actual,
    )


def assemble_block_weight(bn: BlockNetwork) -> np.ndarray:
    """Dense matrix of W o S on the flattened product space."""
    dims = bn.dims
    total = sum(dims)
    offsets = np.cumsum((0,) + dims)
    mat = np.zeros((total, total))
    for i, layer in enumerate(bn.source.layers):
        src = (i - 1) % bn.n  # block feeding layer i+1 (layer 1 reads block n)
        mat[offsets[i]:offsets[i + 1], offsets[src]:offsets[src + 1]] = layer.weights
    return mat


def check_monotone(
    bn: BlockNetwork, dim_cap: int = DEFAULT_MONOTONE_DIM_CAP
) -> tuple[float, bool]:
    """Minimum eigenvalue of the symmetric part of I - W o S.

    Returns (min_eig, monotone); the operator is monotone iff its symmetric
    part is positive semidefinite (up to a small eigenvalue tolerance).
    """
    total = sum(bn.dims)
    if total > dim_cap:
        raise PreconditionError(
            f"monotonicity check assembles a {total}x{total} matrix, above the cap {dim_cap}"
        )
    mat = np.eye(total) - assemble_block_weight(bn)
    sym = 0.5 * (mat + mat.T)
    min_eig = float(np.linalg.eigvalsh(sym)[0])
    return min_eig, min_eig >= -MONOTONE_EIG_TOL


def block_operator_norm_identity(bn: BlockNetwork, seed: int = 0) -> tuple[float, float]:
    """(assembled-matrix norm of W o S, max per-layer norm) - a test oracle pair."""
    lhs = spectral_norm(assemble_block_weight(bn), seed=seed)
    rhs = max(
        spectral_norm(l.weights, seed=seed) for l in bn.source.layers
    )
    return lhs, rhs
