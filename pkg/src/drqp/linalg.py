"""Dense linear algebra: SPD solves, pseudoinverse application, product-space vectors.

All vectors and matrices are float64 numpy arrays. Problem sizes are desk
scale, so everything is dense and factorizations are direct.
"""

from __future__ import annotations

import dataclasses

import numpy as np
import scipy.linalg


def as_vector(x) -> np.ndarray:
    """Coerce to a 1-D float64 array (copies)."""
    v = np.array(x, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {v.shape}")
    return v


def as_matrix(x) -> np.ndarray:
    """Coerce to a 2-D float64 array (copies)."""
    m = np.array(x, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    return m


def inner(a: np.ndarray, b: np.ndarray) -> float:
    """Euclidean inner product of two equal-length vectors."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(a @ b)


def spd_solve(M: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve Mx = b for symmetric positive definite M via Cholesky."""
    M = np.asarray(M, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if b.shape != (M.shape[0],):
        raise ValueError(f"dimension mismatch: {M.shape} vs {b.shape}")
    scale = max(1.0, float(np.abs(M).max(initial=0.0)))
    if not np.allclose(M, M.T, rtol=0.0, atol=1e-10 * scale):
        raise ValueError("matrix not positive definite")
    try:
        factor = scipy.linalg.cho_factor(M, lower=True)
    except np.linalg.LinAlgError as exc:
        raise ValueError("matrix not positive definite") from exc
    return scipy.linalg.cho_solve(factor, b)


def pseudo_inverse_apply(
    M: np.ndarray, b: np.ndarray, rank_tol: float = 1e-9
) -> tuple[np.ndarray, bool]:
    """Apply the Moore-Penrose inverse of a symmetric PSD matrix to b.

    Eigenvalues below ``rank_tol`` times the largest eigenvalue are treated
    as zero. Returns ``(M^+ b, in_range)`` where ``in_range`` is True iff the
    component of b orthogonal to the (numerical) range of M has norm at most
    ``rank_tol * (1 + ||b||)``.
    """
    M = np.asarray(M, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or b.shape != (M.shape[0],):
        raise ValueError(f"dimension mismatch: {M.shape} vs {b.shape}")
    w, V = np.linalg.eigh(0.5 * (M + M.T))
    wmax = float(w.max(initial=0.0))
    keep = w > rank_tol * wmax if wmax > 0.0 else np.zeros_like(w, dtype=bool)
    coeffs = V.T @ b
    if np.any(keep):
        x = V[:, keep] @ (coeffs[keep] / w[keep])
        b_range = V[:, keep] @ coeffs[keep]
    else:
        x = np.zeros_like(b)
        b_range = np.zeros_like(b)
    resid = float(np.linalg.norm(b - b_range))
    in_range = resid <= rank_tol * (1.0 + float(np.linalg.norm(b)))
    return x, in_range


@dataclasses.dataclass(frozen=True)
class ProductVector:
    """Element (z, y) of the product space H1 x H2.

    The inner product is the sum of the blockwise inner products. Instances
    are treated as immutable; arithmetic returns new vectors.
    """

    z: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "z", as_vector(self.z))
        object.__setattr__(self, "y", as_vector(self.y))

    @staticmethod
    def zeros(n: int, m: int) -> "ProductVector":
        return ProductVector(np.zeros(n), np.zeros(m))

    @classmethod
    def from_stacked(cls, v: np.ndarray, n: int) -> "ProductVector":
        v = as_vector(v)
        return cls(v[:n], v[n:])

    def stacked(self) -> np.ndarray:
        return np.concatenate([self.z, self.y])

    def inner(self, other: "ProductVector") -> float:
        return inner(self.z, other.z) + inner(self.y, other.y)

    def norm(self) -> float:
        return float(np.sqrt(self.inner(self)))

    def __add__(self, other: "ProductVector") -> "ProductVector":
        return ProductVector(self.z + other.z, self.y + other.y)

    def __sub__(self, other: "ProductVector") -> "ProductVector":
        return ProductVector(self.z - other.z, self.y - other.y)

    def __neg__(self) -> "ProductVector":
        return ProductVector(-self.z, -self.y)

    def __mul__(self, scalar: float) -> "ProductVector":
        return ProductVector(self.z * scalar, self.y * scalar)

    __rmul__ = __mul__
