"""Douglas-Rachford fixed-point iteration with infeasibility detection.

The governing iteration on the product space is

    x_n   = prox_f(s_n)
    nu_n  = s_n - x_n
    xt_n  = prox_g(2 x_n - s_n)
    s_n+1 = s_n + xt_n - x_n

i.e. s_n+1 = T s_n for the firmly nonexpansive DR operator T. The
consecutive differences (s_n - s_n+1, x_n - x_n+1, nu_n - nu_n+1) converge
to (v, v_D, v_P): the minimal displacement vector and its dual/primal
certificate parts. Window means of the recorded differences estimate these
limits; classification turns them into a solver status.
"""

from __future__ import annotations

import collections
import dataclasses
import enum
from typing import NamedTuple, Optional

import numpy as np

from .displacement import CertificatePair, split_displacement
from .linalg import ProductVector
from .qp import QpSplitting


class Status(enum.Enum):
    SOLVED = "solved"
    PRIMAL_INFEASIBLE = "primal_infeasible"
    DUAL_INFEASIBLE = "dual_infeasible"
    PRIMAL_AND_DUAL_INFEASIBLE = "primal_and_dual_infeasible"
    MAX_ITERATIONS = "max_iterations"


EXIT_CODES = {
    Status.SOLVED: 0,
    Status.PRIMAL_INFEASIBLE: 2,
    Status.DUAL_INFEASIBLE: 3,
    Status.PRIMAL_AND_DUAL_INFEASIBLE: 4,
    Status.MAX_ITERATIONS: 5,
}


@dataclasses.dataclass(frozen=True)
class SolverConfig:
    max_iter: int = 100_000
    eps_solved: float = 1e-8
    eps_inf: float = 1e-6
    window: int = 50
    check_interval: int = 25

    def __post_init__(self):
        if self.max_iter < 1 or self.window < 1 or self.check_interval < 1:
            raise ValueError("max_iter, window, and check_interval must be positive")
        if self.eps_solved <= 0 or self.eps_inf <= 0:
            raise ValueError("tolerances must be positive")


class DeltaRecord(NamedTuple):
    ds: ProductVector
    dx: ProductVector
    dnu: ProductVector


@dataclasses.dataclass
class SolverState:
    """Iterate tuple (s, x, nu, xt) plus the recorded difference history.

    nu = s - x holds by construction, and every recorded difference
    satisfies dx + dnu = ds exactly.
    """

    s: ProductVector
    x: ProductVector
    nu: ProductVector
    xt: ProductVector
    iter: int
    deltas: collections.deque


def initial_state(split: QpSplitting, s0: ProductVector, window: int) -> SolverState:
    x = split.prox_f(s0)
    nu = s0 - x
    xt = split.prox_g(2.0 * x - s0)
    return SolverState(s=s0, x=x, nu=nu, xt=xt, iter=0, deltas=collections.deque(maxlen=window))


def dr_step(state: SolverState, split: QpSplitting) -> SolverState:
    """One DR update; returns the successor state with the difference recorded."""
    s1 = state.s + state.xt - state.x
    x1 = split.prox_f(s1)
    nu1 = s1 - x1
    xt1 = split.prox_g(2.0 * x1 - s1)
    deltas = collections.deque(state.deltas, maxlen=state.deltas.maxlen)
    deltas.append(DeltaRecord(ds=state.s - s1, dx=state.x - x1, dnu=state.nu - nu1))
    return SolverState(s=s1, x=x1, nu=nu1, xt=xt1, iter=state.iter + 1, deltas=deltas)


def _delta_means(state: SolverState) -> tuple[ProductVector, ProductVector, ProductVector]:
    k = len(state.deltas)
    n = state.s.z.shape[0]
    m = state.s.y.shape[0]
    sums = [ProductVector.zeros(n, m) for _ in range(3)]
    for rec in state.deltas:
        sums[0] = sums[0] + rec.ds
        sums[1] = sums[1] + rec.dx
        sums[2] = sums[2] + rec.dnu
    return tuple(v * (1.0 / k) for v in sums)


def delta_estimates(state: SolverState) -> tuple[ProductVector, ProductVector, ProductVector]:
    """Window means (v_hat, vx_hat, vnu_hat) estimating (v, v_D, v_P).

    Requires a full difference window.
    """
    if len(state.deltas) < state.deltas.maxlen:
        raise ValueError(
            f"need {state.deltas.maxlen} recorded differences, have {len(state.deltas)}"
        )
    return _delta_means(state)


def cesaro_estimate(state: SolverState) -> tuple[ProductVector, ProductVector]:
    """(-x_n/n, -nu_n/n): window-free O(1/n) estimates of (v_D, v_P)."""
    if state.iter < 1:
        raise ValueError("cesaro estimate needs at least one iteration")
    scale = -1.0 / state.iter
    return state.x * scale, state.nu * scale


def _stabilized(state: SolverState, mean: ProductVector, field: int, threshold: float) -> bool:
    return all((rec[field] - mean).norm() <= threshold for rec in state.deltas)


def classify(
    state: SolverState, split: QpSplitting, config: SolverConfig
) -> Optional[Status]:
    """Decide solved / infeasible from the current difference history.

    Returns None while undecided. The solved test works with whatever
    history exists (an exact fixed point classifies immediately); the
    infeasibility tests additionally require a full, stabilized window
    before trusting the certificate estimates.
    """
    if not state.deltas:
        return None
    ds_mean, dx_mean, dnu_mean = _delta_means(state)

    if ds_mean.norm() <= config.eps_solved * (1.0 + state.s.norm()):
        z, y = state.xt.z, state.xt.y
        if (
            split.problem.B.distance(z) <= config.eps_solved
            and split.problem.C.distance(y) <= config.eps_solved
        ):
            return Status.SOLVED

    if len(state.deltas) < state.deltas.maxlen:
        return None
    stab_tol = 10.0 * config.eps_inf
    cert = split_displacement(split, ds_mean, zero_tol=config.eps_inf)
    primal = (
        cert.vp.norm() > 0.0
        and _stabilized(state, dnu_mean, 2, stab_tol)
        and split.check_primal_certificate(-cert.vp.z, -cert.vp.y, config.eps_inf)
    )
    dual = (
        cert.vd.norm() > 0.0
        and _stabilized(state, dx_mean, 1, stab_tol)
        and split.check_dual_certificate(-cert.vd.z, config.eps_inf)
    )
    if primal and dual:
        return Status.PRIMAL_AND_DUAL_INFEASIBLE
    if primal:
        return Status.PRIMAL_INFEASIBLE
    if dual:
        return Status.DUAL_INFEASIBLE
    return None


class TraceRow(NamedTuple):
    iter: int
    norm_ds: float
    norm_dx: float
    norm_dnu: float
    obj_candidate: float


@dataclasses.dataclass(frozen=True)
class SolveResult:
    status: Status
    iterations: int
    final_residual: float
    certificates: CertificatePair
    z: Optional[np.ndarray] = None
    y: Optional[np.ndarray] = None
    objective: Optional[float] = None
    v_hat: Optional[ProductVector] = None
    vx_hat: Optional[ProductVector] = None
    vnu_hat: Optional[ProductVector] = None
    trace: Optional[list[TraceRow]] = None


def run(
    split: QpSplitting,
    config: SolverConfig = SolverConfig(),
    s0: Optional[ProductVector] = None,
    collect_trace: bool = False,
) -> SolveResult:
    """Iterate dr_step until a status is established or max_iter is hit.

    Classification runs every ``check_interval`` iterations; a cheap
    fixed-point test on the last difference short-circuits that cadence so
    exact fixed points classify as soon as they occur.
    """
    problem = split.problem
    if s0 is None:
        s0 = ProductVector.zeros(problem.n, problem.m)
    if s0.z.shape != (problem.n,) or s0.y.shape != (problem.m,):
        raise ValueError("s0 has wrong block dimensions for the problem")

    state = initial_state(split, s0, config.window)
    trace: Optional[list[TraceRow]] = [] if collect_trace else None
    status: Optional[Status] = None
    while state.iter < config.max_iter:
        state = dr_step(state, split)
        last = state.deltas[-1]
        if trace is not None and state.iter % config.check_interval == 0:
            trace.append(
                TraceRow(
                    iter=state.iter,
                    norm_ds=last.ds.norm(),
                    norm_dx=last.dx.norm(),
                    norm_dnu=last.dnu.norm(),
                    obj_candidate=problem.objective(state.xt.z),
                )
            )
        near_fixed = last.ds.norm() <= config.eps_solved * (1.0 + state.s.norm())
        if near_fixed or state.iter % config.check_interval == 0:
            status = classify(state, split, config)
            if status is not None:
                break

    ds_mean, dx_mean, dnu_mean = _delta_means(state)
    cert = split_displacement(split, ds_mean, zero_tol=config.eps_inf)
    result = SolveResult(
        status=status if status is not None else Status.MAX_ITERATIONS,
        iterations=state.iter,
        final_residual=ds_mean.norm(),
        certificates=cert,
        v_hat=ds_mean,
        vx_hat=dx_mean,
        vnu_hat=dnu_mean,
        trace=trace,
    )
    if result.status is Status.SOLVED:
        result = dataclasses.replace(
            result,
            z=state.xt.z.copy(),
            y=state.xt.y.copy(),
            objective=problem.objective(state.xt.z),
        )
    return result
