"""Dense real vectors, matrices, block vectors, and spectral norms.

Everything lives in finite-dimensional real coordinate spaces. Vectors and
matrices are plain float64 numpy arrays; the helpers here validate them and
mark them read-only so every downstream value is immutable and safe to share
between threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, SpectralNormError

DEFAULT_SPECTRAL_REL_TOL = 1e-10
DEFAULT_SPECTRAL_MAX_ITER = 10_000


def as_vector(v, context: str = "vector") -> np.ndarray:
    """Validate and freeze a 1-D float64 array (dimension >= 1, all finite)."""
    arr = np.array(v, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise ValueError(f"{context}: expected a 1-D array, got shape {arr.shape}")
    if arr.size < 1:
        raise ValueError(f"{context}: dimension must be >= 1")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{context}: entries must be finite")
    arr.flags.writeable = False
    return arr


def as_matrix(m, context: str = "matrix") -> np.ndarray:
    """Validate and freeze a 2-D float64 array (rows, cols >= 1, all finite)."""
    arr = np.array(m, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"{context}: expected a 2-D array, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{context}: both dimensions must be >= 1, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{context}: entries must be finite")
    arr.flags.writeable = False
    return arr


def apply(m: np.ndarray, v: np.ndarray, context: str = "apply") -> np.ndarray:
    """Matrix-vector product M @ v with an explicit dimension check."""
    if m.shape[1] != v.shape[0]:
        raise DimensionMismatch(context, m.shape[1], v.shape[0])
    return m @ v


def adjoint_apply(m: np.ndarray, v: np.ndarray, context: str = "adjoint_apply") -> np.ndarray:
    """Adjoint (transpose) product M.T @ v; satisfies <Mx, y> = <x, M.T y>."""
    if m.shape[0] != v.shape[0]:
        raise DimensionMismatch(context, m.shape[0], v.shape[0])
    return m.T @ v


def spectral_norm(
    m: np.ndarray,
    rel_tol: float = DEFAULT_SPECTRAL_REL_TOL,
    max_iter: int = DEFAULT_SPECTRAL_MAX_ITER,
    seed: int = 0,
) -> float:
    """Largest singular value of ``m`` by power iteration on the Gram matrix.

    Parameters
    ----------
    m : (r, c) array
    rel_tol : relative tolerance on the returned value (> 0).
    max_iter : iteration budget (>= 1); exceeding it raises
        :class:`SpectralNormError` carrying the last estimate.
    seed : seeds the random start vector, making the result deterministic.

    The iteration stops once the eigen-residual ``|G x - lam x|`` drops below
    ``rel_tol * lam``, which certifies a relative error of at most ``rel_tol``
    on the dominant eigenvalue of ``G = m.T m``.
    """
    if rel_tol <= 0:
        raise ValueError("rel_tol must be > 0")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    m = np.asarray(m, dtype=float)
    if not np.any(m):
        return 0.0
    gram = m.T @ m
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(gram.shape[0])
    x /= np.linalg.norm(x)
    lam = 0.0
    for _ in range(max_iter):
        y = gram @ x
        lam = float(x @ y)
        if lam > 0.0 and np.linalg.norm(y - lam * x) <= rel_tol * lam:
            return float(np.sqrt(lam))
        norm_y = np.linalg.norm(y)
        if norm_y == 0.0:
            # start vector fell in the kernel; re-draw
            x = rng.standard_normal(gram.shape[0])
            x /= np.linalg.norm(x)
            continue
        x = y / norm_y
    raise SpectralNormError(float(np.sqrt(max(lam, 0.0))), max_iter, rel_tol)


@dataclass(frozen=True)
class BlockVector:
    """A point in a product space H_1 x ... x H_n, stored block by block."""

    blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        frozen = tuple(as_vector(b, f"block {i + 1}") for i, b in enumerate(self.blocks))
        if len(frozen) < 1:
            raise ValueError("BlockVector needs at least one block")
        object.__setattr__(self, "blocks", frozen)

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(b.shape[0] for b in self.blocks)

    def flatten(self) -> np.ndarray:
        return np.concatenate(self.blocks)

    @staticmethod
    def from_flat(flat: np.ndarray, dims: tuple[int, ...]) -> "BlockVector":
        flat = np.asarray(flat, dtype=float)
        if flat.shape[0] != sum(dims):
            raise DimensionMismatch("from_flat", sum(dims), flat.shape[0])
        offsets = np.cumsum((0,) + tuple(dims))
        return BlockVector(tuple(flat[offsets[i]:offsets[i + 1]] for i in range(len(dims))))

    @staticmethod
    def zeros(dims: tuple[int, ...]) -> "BlockVector":
        return BlockVector(tuple(np.zeros(d) for d in dims))

    def distance(self, other: "BlockVector") -> float:
        if self.dims != other.dims:
            raise DimensionMismatch("BlockVector.distance", self.dims, other.dims)
        return float(
            np.sqrt(sum(float(np.sum((a - b) ** 2)) for a, b in zip(self.blocks, other.blocks)))
        )


def block_norm(x: BlockVector) -> float:
    """Product-space norm sqrt(sum_i |x_i|^2)."""
    return float(np.sqrt(sum(float(np.sum(b**2)) for b in x.blocks)))
