"""Catalog of closed convex sets with projection, support, and cone calculus.

Supported kinds: boxes with extended-real bounds, the nonnegative orthant,
the zero set {0}, the whole space, the second-order cone, its polar, and
finite products of these. Support functions take values in (-inf, +inf];
plain floats with ``np.inf`` encode the extended reals.

Every kind here satisfies ``dom sigma_S = polar(rec S)`` exactly, which the
certificate checks rely on: support values are finite precisely on the polar
of the recession cone.
"""

from __future__ import annotations

import numpy as np

from .linalg import as_vector

_SOC_MEMBER_TOL = 1e-12


class ConvexSet:
    """Base class; concrete kinds implement the closed-form calculus."""

    dim: int

    def project(self, x: np.ndarray) -> np.ndarray:
        """Nearest point of the set to x."""
        raise NotImplementedError

    def support(self, u: np.ndarray) -> float:
        """sup_{x in S} <x, u>, possibly +inf."""
        raise NotImplementedError

    def recession_cone(self) -> "ConvexSet":
        """The recession cone, in canonical form."""
        raise NotImplementedError

    def polar_of_recession(self) -> "ConvexSet":
        """Polar cone of the recession cone, in canonical form."""
        raise NotImplementedError

    def distance(self, x: np.ndarray) -> float:
        x = self._check(x)
        return float(np.linalg.norm(x - self.project(x)))

    def contains(self, x: np.ndarray, tol: float = 1e-9) -> bool:
        return self.distance(x) <= tol

    def _check(self, x) -> np.ndarray:
        x = as_vector(x)
        if x.shape != (self.dim,):
            raise ValueError(f"dimension mismatch: set dim {self.dim}, vector {x.shape}")
        return x


class Box(ConvexSet):
    """Coordinatewise interval constraints; bounds may be -inf/+inf.

    Degenerate coordinates (lower == upper) are allowed and act as affine
    point constraints.
    """

    def __init__(self, lower, upper):
        self.lower = as_vector(lower)
        self.upper = as_vector(upper)
        if self.lower.shape != self.upper.shape:
            raise ValueError("box bounds must have equal length")
        if np.any(self.lower > self.upper):
            raise ValueError("box requires lower <= upper coordinatewise")
        if np.any(self.lower == np.inf) or np.any(self.upper == -np.inf):
            raise ValueError("box bounds must leave every coordinate nonempty")
        if np.any(np.isnan(self.lower)) or np.any(np.isnan(self.upper)):
            raise ValueError("box bounds must not be NaN")
        self.dim = self.lower.shape[0]

    def project(self, x):
        return np.clip(self._check(x), self.lower, self.upper)

    def support(self, u):
        u = self._check(u)
        terms = np.zeros(self.dim)
        pos = u > 0
        neg = u < 0
        terms[pos] = u[pos] * self.upper[pos]
        terms[neg] = u[neg] * self.lower[neg]
        return float(np.sum(terms))

    def _coordinate_kinds(self) -> np.ndarray:
        # 'z' pinned, 'n' lower-bounded ray, 'p' upper-bounded ray, 'f' free
        lo_fin = np.isfinite(self.lower)
        up_fin = np.isfinite(self.upper)
        kinds = np.empty(self.dim, dtype="U1")
        kinds[lo_fin & up_fin] = "z"
        kinds[lo_fin & ~up_fin] = "n"
        kinds[~lo_fin & up_fin] = "p"
        kinds[~lo_fin & ~up_fin] = "f"
        return kinds

    def recession_cone(self):
        return _cone_from_kinds(self._coordinate_kinds())

    def polar_of_recession(self):
        flipped = {"z": "f", "n": "p", "p": "n", "f": "z"}
        kinds = self._coordinate_kinds()
        return _cone_from_kinds(np.array([flipped[k] for k in kinds], dtype="U1"))

    def __eq__(self, other):
        return (
            isinstance(other, Box)
            and np.array_equal(self.lower, other.lower)
            and np.array_equal(self.upper, other.upper)
        )

    def __repr__(self):
        return f"Box({self.lower.tolist()}, {self.upper.tolist()})"


class NonnegOrthant(ConvexSet):
    """{x : x >= 0}."""

    def __init__(self, dim: int):
        self.dim = int(dim)

    def project(self, x):
        return np.maximum(self._check(x), 0.0)

    def support(self, u):
        u = self._check(u)
        return 0.0 if np.all(u <= 0.0) else np.inf

    def recession_cone(self):
        return self

    def polar_of_recession(self):
        return Box(np.full(self.dim, -np.inf), np.zeros(self.dim))

    def __eq__(self, other):
        return isinstance(other, NonnegOrthant) and self.dim == other.dim

    def __repr__(self):
        return f"NonnegOrthant({self.dim})"


class Zero(ConvexSet):
    """The singleton {0}."""

    def __init__(self, dim: int):
        self.dim = int(dim)

    def project(self, x):
        self._check(x)
        return np.zeros(self.dim)

    def support(self, u):
        self._check(u)
        return 0.0

    def recession_cone(self):
        return self

    def polar_of_recession(self):
        return WholeSpace(self.dim)

    def __eq__(self, other):
        return isinstance(other, Zero) and self.dim == other.dim

    def __repr__(self):
        return f"Zero({self.dim})"


class WholeSpace(ConvexSet):
    """All of R^dim."""

    def __init__(self, dim: int):
        self.dim = int(dim)

    def project(self, x):
        return self._check(x).copy()

    def support(self, u):
        u = self._check(u)
        return 0.0 if np.all(u == 0.0) else np.inf

    def recession_cone(self):
        return self

    def polar_of_recession(self):
        return Zero(self.dim)

    def __eq__(self, other):
        return isinstance(other, WholeSpace) and self.dim == other.dim

    def __repr__(self):
        return f"WholeSpace({self.dim})"


def _soc_project(x: np.ndarray) -> np.ndarray:
    t, u = x[0], x[1:]
    nu = float(np.linalg.norm(u))
    if nu <= t:
        return x.copy()
    if nu <= -t:
        return np.zeros_like(x)
    alpha = 0.5 * (t + nu)
    out = np.empty_like(x)
    out[0] = alpha
    out[1:] = (alpha / nu) * u
    return out


class SecondOrderCone(ConvexSet):
    """{(t, u) : ||u|| <= t}; self-dual, so its polar is the reflected cone."""

    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError("second-order cone needs dim >= 1")
        self.dim = int(dim)

    def project(self, x):
        return _soc_project(self._check(x))

    def support(self, u):
        # sigma of a cone is the indicator of its polar
        u = self._check(u)
        return 0.0 if self.polar_of_recession().distance(u) <= _SOC_MEMBER_TOL else np.inf

    def recession_cone(self):
        return self

    def polar_of_recession(self):
        return PolarSecondOrderCone(self.dim)

    def __eq__(self, other):
        return isinstance(other, SecondOrderCone) and self.dim == other.dim

    def __repr__(self):
        return f"SecondOrderCone({self.dim})"


class PolarSecondOrderCone(ConvexSet):
    """{(t, u) : ||u|| <= -t}, the polar of the second-order cone.

    Not part of the problem-file grammar; produced by the cone calculus.
    """

    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError("second-order cone needs dim >= 1")
        self.dim = int(dim)

    def project(self, x):
        return -_soc_project(-self._check(x))

    def support(self, u):
        u = self._check(u)
        return 0.0 if SecondOrderCone(self.dim).distance(u) <= _SOC_MEMBER_TOL else np.inf

    def recession_cone(self):
        return self

    def polar_of_recession(self):
        return SecondOrderCone(self.dim)

    def __eq__(self, other):
        return isinstance(other, PolarSecondOrderCone) and self.dim == other.dim

    def __repr__(self):
        return f"PolarSecondOrderCone({self.dim})"


class Product(ConvexSet):
    """Cartesian product of blocks, acting blockwise on split vectors."""

    def __init__(self, blocks):
        self.blocks = list(blocks)
        if not self.blocks:
            raise ValueError("product needs at least one block")
        self.dim = sum(b.dim for b in self.blocks)
        offsets = np.cumsum([0] + [b.dim for b in self.blocks])
        self._slices = [slice(offsets[i], offsets[i + 1]) for i in range(len(self.blocks))]

    def project(self, x):
        x = self._check(x)
        out = np.empty_like(x)
        for block, sl in zip(self.blocks, self._slices):
            out[sl] = block.project(x[sl])
        return out

    def support(self, u):
        u = self._check(u)
        return float(sum(block.support(u[sl]) for block, sl in zip(self.blocks, self._slices)))

    def recession_cone(self):
        return Product([b.recession_cone() for b in self.blocks])

    def polar_of_recession(self):
        return Product([b.polar_of_recession() for b in self.blocks])

    def __eq__(self, other):
        return isinstance(other, Product) and self.blocks == other.blocks

    def __repr__(self):
        return f"Product({self.blocks!r})"


def _cone_from_kinds(kinds: np.ndarray) -> ConvexSet:
    """Canonical cone for per-coordinate kinds z/n/p/f, grouping equal runs."""

    def run_to_set(kind: str, length: int) -> ConvexSet:
        if kind == "z":
            return Zero(length)
        if kind == "n":
            return NonnegOrthant(length)
        if kind == "p":
            return Box(np.full(length, -np.inf), np.zeros(length))
        return WholeSpace(length)

    blocks = []
    start = 0
    for i in range(1, len(kinds) + 1):
        if i == len(kinds) or kinds[i] != kinds[start]:
            blocks.append(run_to_set(str(kinds[start]), i - start))
            start = i
    if len(blocks) == 1:
        return blocks[0]
    return Product(blocks)


def support_within(S: ConvexSet, u: np.ndarray, tol: float) -> tuple[float, float]:
    """Support of S at the projection of u onto cl(dom sigma_S) = polar(rec S).

    Returns ``(value, dist)`` where ``dist`` is how far u was from the domain.
    Callers treat the value as valid only when ``dist <= tol``; this makes the
    exact +inf-off-domain support usable on certificate estimates that sit
    within numerical noise of the domain.
    """
    dom = S.polar_of_recession()
    p = dom.project(u)
    dist = float(np.linalg.norm(as_vector(u) - p))
    if dist > tol:
        return np.inf, dist
    return S.support(p), dist
