"""Shared fixtures: canonical instances and random problem samplers."""

from __future__ import annotations

import numpy as np
import pytest

from drqp import (
    Box,
    NonnegOrthant,
    Product,
    QpProblem,
    SecondOrderCone,
    WholeSpace,
    Zero,
    canonical_instances,
)


@pytest.fixture(scope="session")
def instances():
    return canonical_instances()


def random_psd(rng, n, singular_prob=0.4, scale=1.0):
    rank = n if rng.random() > singular_prob else int(rng.integers(0, n))
    if rank == 0:
        return np.zeros((n, n))
    G = rng.standard_normal((n, rank)) * scale / np.sqrt(max(rank, 1))
    Q = G @ G.T
    return 0.5 * (Q + Q.T)


def random_set(rng, dim, depth=0):
    kinds = ["box", "bounded_box", "nonneg", "zero", "whole", "soc"]
    if dim >= 2 and depth == 0:
        kinds.append("product")
    kind = rng.choice(kinds)
    if kind == "product":
        k = int(rng.integers(1, dim))
        return Product([random_set(rng, k, depth + 1), random_set(rng, dim - k, depth + 1)])
    if kind == "nonneg":
        return NonnegOrthant(dim)
    if kind == "zero":
        return Zero(dim)
    if kind == "whole":
        return WholeSpace(dim)
    if kind == "soc":
        return SecondOrderCone(dim)
    lo = rng.standard_normal(dim) - rng.uniform(0.0, 2.0, dim)
    hi = lo + rng.uniform(0.0, 3.0, dim)
    if kind == "box":
        lo[rng.random(dim) < 0.3] = -np.inf
        hi[rng.random(dim) < 0.3] = np.inf
    return Box(lo, hi)


def random_problem(rng, max_dim=5):
    """Unbiased sampler; produces a mix of feasible and infeasible problems."""
    n = int(rng.integers(1, max_dim + 1))
    m = int(rng.integers(1, max_dim + 1))
    return QpProblem(
        Q=random_psd(rng, n),
        q=rng.standard_normal(n),
        A=rng.standard_normal((m, n)),
        B=random_set(rng, n),
        C=random_set(rng, m),
    )


def random_feasible_problem(rng, max_dim=5):
    """C is translated to contain the image of a point of B."""
    n = int(rng.integers(1, max_dim + 1))
    m = int(rng.integers(1, max_dim + 1))
    A = rng.standard_normal((m, n))
    B = random_set(rng, n)
    z0 = B.project(2.0 * rng.standard_normal(n))
    y0 = A @ z0
    lo = y0 - rng.uniform(0.1, 2.0, m)
    hi = y0 + rng.uniform(0.1, 2.0, m)
    lo[rng.random(m) < 0.3] = -np.inf
    hi[rng.random(m) < 0.3] = np.inf
    return QpProblem(
        Q=random_psd(rng, n), q=rng.standard_normal(n), A=A, B=B, C=Box(lo, hi)
    )


def random_infeasible_problem(rng, max_dim=5):
    """Either duplicated rows with disjoint intervals (strong primal
    infeasibility) or an unbounded objective ray (strong dual infeasibility)."""
    n = int(rng.integers(1, max_dim + 1))
    if rng.random() < 0.5:
        m = int(rng.integers(2, max_dim + 1))
        A = rng.standard_normal((m, n))
        A[1] = A[0]
        a = float(rng.standard_normal())
        gap = float(rng.uniform(0.5, 2.0))
        lo = np.full(m, -np.inf)
        hi = np.full(m, np.inf)
        hi[0] = a
        lo[1] = a + gap
        return QpProblem(
            Q=random_psd(rng, n),
            q=rng.standard_normal(n),
            A=A,
            B=random_set(rng, n),
            C=Box(lo, hi),
        )
    m = int(rng.integers(1, max_dim + 1))
    A = np.abs(rng.standard_normal((m, n)))
    q = -np.abs(rng.standard_normal(n)) - 0.1
    return QpProblem(
        Q=np.zeros((n, n)), q=q, A=A, B=WholeSpace(n), C=NonnegOrthant(m)
    )
