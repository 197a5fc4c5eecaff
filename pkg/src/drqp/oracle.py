"""Independent ground truth: projected-gradient certificate oracles,
grid brute force, and the canonical desk instances.

The certificate oracles project the origin onto

    dom f - dom g   = {(b - w, c - Aw) : b in B, c in C, w free}
    dom f* + dom g* = {(l1, m1) + (l, m) : l1 in dom sigma_B, m1 in dom sigma_C,
                       l + A^T m - q in range Q}

by long-run projected gradient on the squared norm of the parameterized
image. This is methodologically independent of the Douglas-Rachford engine,
so it can serve as its oracle. For the set catalog, dom sigma_S equals the
polar of the recession cone of S exactly, and range Q is parameterized as
{Q t}; both sum sets are therefore exactly representable.
"""

from __future__ import annotations

import dataclasses
from typing import Callable, Optional

import numpy as np

from .linalg import as_vector
from .qp import QpProblem
from .sets import Box, NonnegOrthant, WholeSpace

_CONVERGED_TOL = 1e-13
_ACCEPT_TOL = 1e-10
_PATIENCE = 25


class OracleError(RuntimeError):
    pass


@dataclasses.dataclass(frozen=True)
class OracleConfig:
    pg_iters: int = 200_000
    pg_step: Optional[float] = None  # None: 1/L with L from power iteration
    grid_half_width: float = 5.0
    grid_step: float = 1e-3

    def __post_init__(self):
        if self.pg_iters < 1 or self.grid_half_width <= 0 or self.grid_step <= 0:
            raise ValueError("oracle configuration values must be positive")
        if self.pg_step is not None and self.pg_step <= 0:
            raise ValueError("pg_step must be positive")


def _power_iteration(matvec: Callable[[np.ndarray], np.ndarray], dim: int, iters: int = 50) -> float:
    """Largest eigenvalue of a PSD operator given by its matvec."""
    rng = np.random.default_rng(12345)
    v = rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(iters):
        w = matvec(v)
        lam = float(np.linalg.norm(w))
        if lam == 0.0:
            return 0.0
        v = w / lam
    return lam


def _project_image(
    grad_step: Callable[[float], np.ndarray],
    step: float,
    pg_iters: int,
) -> np.ndarray:
    """Drive a projected-gradient loop and return the converged image vector.

    ``grad_step(step)`` performs one update and returns the current image.
    Raises OracleError when the image is still moving more than the
    acceptance tolerance after pg_iters iterations.
    """
    d_prev = grad_step(step)
    rel = np.inf
    quiet = 0
    for _ in range(pg_iters):
        d = grad_step(step)
        rel = float(np.linalg.norm(d - d_prev)) / (1.0 + float(np.linalg.norm(d)))
        d_prev = d
        if rel <= _CONVERGED_TOL:
            quiet += 1
            if quiet >= _PATIENCE:
                return d
        else:
            quiet = 0
    if rel > _ACCEPT_TOL:
        raise OracleError(f"projected gradient did not converge (relative change {rel:.2e})")
    return d_prev


def oracle_vp(problem: QpProblem, cfg: OracleConfig = OracleConfig()) -> np.ndarray:
    """Projection of 0 onto cl(dom f - dom g), stacked as (z-block, y-block)."""
    n, m, A = problem.n, problem.m, problem.A
    b = np.zeros(n)
    c = np.zeros(m)
    w = np.zeros(n)

    def matvec(v):
        vb, vc, vw = v[:n], v[n : n + m], v[n + m :]
        r1 = vb - vw
        r2 = vc - A @ vw
        return np.concatenate([r1, r2, -r1 - A.T @ r2])

    L = _power_iteration(matvec, 2 * n + m)
    step = cfg.pg_step if cfg.pg_step is not None else 1.0 / max(1.01 * L, 1e-12)

    def grad_step(alpha):
        nonlocal b, c, w
        r1 = b - w
        r2 = c - A @ w
        b = problem.B.project(b - alpha * r1)
        c = problem.C.project(c - alpha * r2)
        w = w - alpha * (-r1 - A.T @ r2)
        return np.concatenate([b - w, c - A @ w])

    return _project_image(grad_step, step, cfg.pg_iters)


def oracle_vd(problem: QpProblem, cfg: OracleConfig = OracleConfig()) -> np.ndarray:
    """Projection of 0 onto cl(dom f* + dom g*), stacked as (z-block, y-block)."""
    n, m, A, Q, q = problem.n, problem.m, problem.A, problem.Q, problem.q
    dom_b = problem.B.polar_of_recession()
    dom_c = problem.C.polar_of_recession()
    lam1 = np.zeros(n)
    mu1 = np.zeros(m)
    mu = np.zeros(m)
    t = np.zeros(n)

    def matvec(v):
        vl, vm1, vm, vt = v[:n], v[n : n + m], v[n + m : n + 2 * m], v[n + 2 * m :]
        j1 = vl - A.T @ vm + Q @ vt
        j2 = vm1 + vm
        return np.concatenate([j1, j2, -A @ j1 + j2, Q @ j1])

    L = _power_iteration(matvec, 2 * n + 2 * m)
    step = cfg.pg_step if cfg.pg_step is not None else 1.0 / max(1.01 * L, 1e-12)

    def grad_step(alpha):
        nonlocal lam1, mu1, mu, t
        d1 = lam1 + q - A.T @ mu + Q @ t
        d2 = mu1 + mu
        lam1 = dom_b.project(lam1 - alpha * d1)
        mu1 = dom_c.project(mu1 - alpha * d2)
        mu = mu - alpha * (-A @ d1 + d2)
        t = t - alpha * (Q @ d1)
        return np.concatenate([lam1 + q - A.T @ mu + Q @ t, mu1 + mu])

    return _project_image(grad_step, step, cfg.pg_iters)


def _grid_axis(center: float, half_width: float, step: float) -> np.ndarray:
    count = int(round(2.0 * half_width / step)) + 1
    return np.linspace(center - half_width, center + half_width, count)


def brute_force_prox(
    objective: Callable[[np.ndarray], np.ndarray],
    center: np.ndarray,
    cfg: OracleConfig = OracleConfig(),
) -> np.ndarray:
    """Grid minimization of objective(y) + 0.5 ||y - center||^2.

    ``objective`` is evaluated on (N, d) batches of grid points and may
    return +inf entries. Accuracy is bounded by the grid step; a minimizer
    on the grid boundary raises ("grid too small").
    """
    center = as_vector(center)
    d = center.shape[0]
    if d > 2:
        raise ValueError("brute-force prox supports dimension <= 2")
    axes = [_grid_axis(center[i], cfg.grid_half_width, cfg.grid_step) for i in range(d)]
    best_val = np.inf
    best_pt = None
    if d == 1:
        pts = axes[0][:, None]
        vals = objective(pts) + 0.5 * (axes[0] - center[0]) ** 2
        k = int(np.argmin(vals))
        best_val, best_pt = float(vals[k]), pts[k]
    else:
        for z0 in axes[0]:
            pts = np.column_stack([np.full_like(axes[1], z0), axes[1]])
            vals = objective(pts) + 0.5 * ((z0 - center[0]) ** 2 + (axes[1] - center[1]) ** 2)
            k = int(np.argmin(vals))
            if vals[k] < best_val:
                best_val, best_pt = float(vals[k]), pts[k]
    if not np.isfinite(best_val):
        raise OracleError("objective is +inf on the whole grid")
    for i in range(d):
        if best_pt[i] <= axes[i][0] or best_pt[i] >= axes[i][-1]:
            raise OracleError("grid too small")
    return np.array(best_pt)


def brute_force_conjugate(
    h: Callable[[np.ndarray], np.ndarray],
    u: np.ndarray,
    cfg: OracleConfig = OracleConfig(),
) -> float:
    """Grid evaluation of sup_z <u, z> - h(z) over the box of half-width
    ``grid_half_width`` centered at 0."""
    u = as_vector(u)
    d = u.shape[0]
    if d > 2:
        raise ValueError("brute-force conjugate supports dimension <= 2")
    axes = [_grid_axis(0.0, cfg.grid_half_width, cfg.grid_step) for _ in range(d)]
    best = -np.inf
    if d == 1:
        pts = axes[0][:, None]
        best = float(np.max(axes[0] * u[0] - h(pts)))
    else:
        for z0 in axes[0]:
            pts = np.column_stack([np.full_like(axes[1], z0), axes[1]])
            vals = z0 * u[0] + axes[1] * u[1] - h(pts)
            best = max(best, float(np.max(vals)))
    return best


def canonical_instances() -> dict[str, QpProblem]:
    """The four desk instances exercising every solver status.

    E1 feasible (unique optimum), E2 primal strongly infeasible,
    E3 dual strongly infeasible, E4 simultaneously both (block-diagonal
    combination of E2 and E3).
    """
    inf = np.inf
    return {
        "E1": QpProblem(
            Q=[[2.0]], q=[-2.0], A=[[1.0]], B=WholeSpace(1), C=Box([0.0], [1.0])
        ),
        "E2": QpProblem(
            Q=[[0.0]],
            q=[0.0],
            A=[[1.0], [1.0]],
            B=WholeSpace(1),
            C=Box([-inf, 1.0], [-1.0, inf]),
        ),
        "E3": QpProblem(
            Q=[[0.0]], q=[-1.0], A=[[1.0]], B=WholeSpace(1), C=NonnegOrthant(1)
        ),
        "E4": QpProblem(
            Q=np.zeros((2, 2)),
            q=[0.0, -1.0],
            A=[[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            B=WholeSpace(2),
            C=Box([-inf, 1.0, 0.0], [-1.0, inf, inf]),
        ),
    }
