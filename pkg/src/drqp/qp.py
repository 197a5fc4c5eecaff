"""Convex QP instances and their Douglas-Rachford splitting.

The problem is

    minimize    0.5 <z, Qz> + <q, z>   over z in B
    subject to  Az in C

with Q symmetric PSD and B, C from the set catalog. It splits into

    f(z, y) = indicator_B(z) + indicator_C(y)
    g(z, y) = 0.5 <z, Qz> + <q, z> + indicator_{Az = y}(z, y)

so prox_f is a pair of projections and prox_g reduces to one SPD solve
against the cached factorization of (I + Q + A^T A).
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .linalg import ProductVector, as_matrix, as_vector, inner, pseudo_inverse_apply
from .sets import ConvexSet, support_within

# Absolute cutoff for the indicator memberships inside recession-function
# evaluation; the exact indicators need a numerical stand-in.
MEMBERSHIP_TOL = 1e-8

RANK_TOL = 1e-9


class QpProblem:
    """Problem data (Q, q, A, B, C); immutable after construction."""

    def __init__(self, Q, q, A, B: ConvexSet, C: ConvexSet):
        self.Q = as_matrix(Q)
        self.q = as_vector(q)
        self.A = as_matrix(A)
        self.B = B
        self.C = C
        n = self.Q.shape[0]
        m = self.A.shape[0]
        if self.Q.shape != (n, n):
            raise ValueError(f"Q must be square, got {self.Q.shape}")
        if self.q.shape != (n,):
            raise ValueError(f"q must have length {n}, got {self.q.shape}")
        if self.A.shape != (m, n):
            raise ValueError(f"A must have {n} columns, got {self.A.shape}")
        if B.dim != n:
            raise ValueError(f"B must have dimension {n}, got {B.dim}")
        if C.dim != m:
            raise ValueError(f"C must have dimension {m}, got {C.dim}")
        scale = max(1.0, float(np.abs(self.Q).max(initial=0.0)))
        if not np.allclose(self.Q, self.Q.T, rtol=0.0, atol=1e-12 * scale):
            raise ValueError("Q must be symmetric")
        if n > 0 and float(np.linalg.eigvalsh(self.Q).min()) < -1e-10:
            raise ValueError("Q not positive semidefinite")
        self.n = n
        self.m = m

    def objective(self, z: np.ndarray) -> float:
        z = as_vector(z)
        return 0.5 * inner(z, self.Q @ z) + inner(self.q, z)

    def __repr__(self):
        return f"QpProblem(n={self.n}, m={self.m}, B={self.B!r}, C={self.C!r})"


class QpSplitting:
    """The (f, g) splitting of a QpProblem with the KKT factor cached.

    I + Q + A^T A is positive definite for any PSD Q, so the Cholesky
    factorization always exists and is computed once.
    """

    def __init__(self, problem: QpProblem):
        self.problem = problem
        kkt = np.eye(problem.n) + problem.Q + problem.A.T @ problem.A
        self._kkt_factor = scipy.linalg.cho_factor(kkt, lower=True)

    def prox_f(self, p: ProductVector) -> ProductVector:
        """Prox of the indicator part: blockwise projection onto B x C."""
        return ProductVector(self.problem.B.project(p.z), self.problem.C.project(p.y))

    def prox_g(self, p: ProductVector) -> ProductVector:
        """Prox of the quadratic-on-the-graph part.

        Substituting y = Az into the prox objective gives the SPD system
        (I + Q + A^T A) z = p_z - q + A^T p_y.
        """
        rhs = p.z - self.problem.q + self.problem.A.T @ p.y
        z = scipy.linalg.cho_solve(self._kkt_factor, rhs)
        return ProductVector(z, self.problem.A @ z)

    def eval_f_conj(self, lam: np.ndarray, mu: np.ndarray) -> float:
        """f*(lam, mu) = sigma_B(lam) + sigma_C(mu)."""
        return self.problem.B.support(lam) + self.problem.C.support(mu)

    def eval_g_conj(self, lam: np.ndarray, mu: np.ndarray) -> float:
        """g*(lam, mu) = 0.5 <w, Q^+ w> on {w in range Q}, +inf elsewhere,
        with w = lam + A^T mu - q."""
        w = as_vector(lam) + self.problem.A.T @ as_vector(mu) - self.problem.q
        x, in_range = pseudo_inverse_apply(self.problem.Q, w, RANK_TOL)
        if not in_range:
            return np.inf
        return 0.5 * inner(w, x)

    def eval_rec_f(self, zbar, ybar, tol: float = MEMBERSHIP_TOL) -> float:
        """Recession function of f: indicator of rec B x rec C."""
        ok = self.problem.B.recession_cone().contains(zbar, tol) and self.problem.C.recession_cone().contains(ybar, tol)
        return 0.0 if ok else np.inf

    def eval_rec_g(self, zbar, ybar, tol: float = MEMBERSHIP_TOL) -> float:
        """Recession function of g: <q, zbar> on ker Q intersected with the
        graph of A, +inf elsewhere."""
        zbar = as_vector(zbar)
        ybar = as_vector(ybar)
        in_kernel = float(np.linalg.norm(self.problem.Q @ zbar)) <= tol
        on_graph = float(np.linalg.norm(self.problem.A @ zbar - ybar)) <= tol
        if not (in_kernel and on_graph):
            return np.inf
        return inner(self.problem.q, zbar)

    def eval_rec_f_conj(self, lam, mu, tol: float = MEMBERSHIP_TOL) -> float:
        """Recession function of f*; support functions are their own recession."""
        return self.eval_f_conj(lam, mu)

    def eval_rec_g_conj(self, lam, mu, tol: float = MEMBERSHIP_TOL) -> float:
        """Recession function of g*: indicator of {lam + A^T mu = 0}."""
        r = as_vector(lam) + self.problem.A.T @ as_vector(mu)
        return 0.0 if float(np.linalg.norm(r)) <= tol else np.inf

    def check_primal_certificate(self, lam, mu, eps: float) -> bool:
        """Strong primal infeasibility test on the normalized pair:
        lam + A^T mu ~ 0 and sigma_B(lam) + sigma_C(mu) <= -eps.

        Supports are evaluated at the projection of the pair onto the support
        domains (the polars of the recession cones), rejecting pairs further
        than eps from them; a pass certifies that an exact certificate exists
        next to the estimate.
        """
        lam = as_vector(lam)
        mu = as_vector(mu)
        nrm = float(np.sqrt(lam @ lam + mu @ mu))
        if nrm == 0.0:
            return False
        lam = lam / nrm
        mu = mu / nrm
        if float(np.linalg.norm(lam + self.problem.A.T @ mu)) > eps:
            return False
        sb, db = support_within(self.problem.B, lam, eps)
        sc, dc = support_within(self.problem.C, mu, eps)
        if db > eps or dc > eps:
            return False
        return sb + sc <= -eps

    def check_dual_certificate(self, zbar, eps: float) -> bool:
        """Strong dual infeasibility test on the normalized direction:
        zbar near rec B, Q zbar ~ 0, A zbar near rec C, <q, zbar> <= -eps."""
        zbar = as_vector(zbar)
        nrm = float(np.linalg.norm(zbar))
        if nrm == 0.0:
            return False
        zbar = zbar / nrm
        if self.problem.B.recession_cone().distance(zbar) > eps:
            return False
        if float(np.linalg.norm(self.problem.Q @ zbar)) > eps:
            return False
        if self.problem.C.recession_cone().distance(self.problem.A @ zbar) > eps:
            return False
        return inner(self.problem.q, zbar) <= -eps
