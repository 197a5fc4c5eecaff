"""Decomposition of the estimated displacement vector into certificates.

The displacement estimate v splits blockwise against rec B x rec C and its
polar: the recession-cone projection of -v carries the dual certificate and
the polar projection the primal one. The two parts are orthogonal and sum
back to v. Static identities tie each part to the problem data and are
re-checked here on the numerical estimates.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .linalg import ProductVector, inner
from .qp import QpSplitting
from .sets import support_within


@dataclasses.dataclass(frozen=True)
class CertificatePair:
    """Estimated primal (vp) and dual (vd) strong-infeasibility certificates."""

    vp: ProductVector
    vd: ProductVector

    @property
    def vp_z(self) -> np.ndarray:
        return self.vp.z

    @property
    def vp_y(self) -> np.ndarray:
        return self.vp.y

    @property
    def vd_z(self) -> np.ndarray:
        return self.vd.z

    @property
    def vd_y(self) -> np.ndarray:
        return self.vd.y


@dataclasses.dataclass(frozen=True)
class IdentityCheck:
    lhs: float
    rhs: float
    gap: float
    passed: bool


class IdentityReport(dict):
    """Mapping identity name -> IdentityCheck."""

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.values())

    def to_json(self) -> dict:
        def num(x: float):
            return x if np.isfinite(x) else ("inf" if x > 0 else "-inf")

        return {
            name: {"lhs": num(c.lhs), "rhs": num(c.rhs), "gap": num(c.gap), "pass": c.passed}
            for name, c in self.items()
        }


def split_displacement(
    split: QpSplitting, v_hat: ProductVector, zero_tol: float = 0.0
) -> CertificatePair:
    """Moreau-decompose -v_hat blockwise against rec B x rec C and its polar.

    Both parts are obtained by direct cone projection, so each certificate
    lies exactly in its cone. Certificates with norm at most ``zero_tol``
    are snapped to zero to avoid reporting numerical dust.
    """
    B = split.problem.B
    C = split.problem.C
    neg_v = -v_hat
    # adding 0.0 clears IEEE negative zeros from the negated projections
    vd = ProductVector(
        -B.recession_cone().project(neg_v.z) + 0.0,
        -C.recession_cone().project(neg_v.y) + 0.0,
    )
    vp = ProductVector(
        -B.polar_of_recession().project(neg_v.z) + 0.0,
        -C.polar_of_recession().project(neg_v.y) + 0.0,
    )
    if vp.norm() <= zero_tol:
        vp = ProductVector.zeros(split.problem.n, split.problem.m)
    if vd.norm() <= zero_tol:
        vd = ProductVector.zeros(split.problem.n, split.problem.m)
    return CertificatePair(vp=vp, vd=vd)


def verify_identities(split: QpSplitting, cert: CertificatePair, tol: float) -> IdentityReport:
    """Check the static certificate identities on unit-normalized estimates.

    Identities of different homogeneity degree are reduced to degree one by
    normalizing each certificate and keeping the raw norm on the right-hand
    side, so a single absolute tolerance is meaningful:

        Q vd' = 0,  A vd' = vd'',  <q, -vd'> = -||vd||
        vp' + A^T vp'' = 0,  sigma_B(-vp') + sigma_C(-vp'') = -||vp||

    (evaluated on vd/||vd|| and vp/||vp||). Zero certificates pass trivially.
    """
    problem = split.problem
    report = IdentityReport()

    def add(name: str, lhs: float, rhs: float):
        gap = abs(lhs - rhs)
        report[name] = IdentityCheck(lhs=lhs, rhs=rhs, gap=gap, passed=bool(gap <= tol))

    vd_norm = cert.vd.norm()
    if vd_norm > 0.0:
        u = cert.vd * (1.0 / vd_norm)
        add("Q_vd_prime", float(np.linalg.norm(problem.Q @ u.z)), 0.0)
        add("A_vd_graph", float(np.linalg.norm(problem.A @ u.z - u.y)), 0.0)
        add("q_inner_vd", inner(problem.q, -u.z), -vd_norm)
    else:
        add("Q_vd_prime", 0.0, 0.0)
        add("A_vd_graph", 0.0, 0.0)
        add("q_inner_vd", 0.0, 0.0)

    vp_norm = cert.vp.norm()
    if vp_norm > 0.0:
        u = cert.vp * (1.0 / vp_norm)
        add("vp_adjoint", float(np.linalg.norm(u.z + problem.A.T @ u.y)), 0.0)
        sb, db = support_within(problem.B, -u.z, tol)
        sc, dc = support_within(problem.C, -u.y, tol)
        if db > tol or dc > tol:
            add("vp_support", np.inf, -vp_norm)
        else:
            add("vp_support", sb + sc, -vp_norm)
    else:
        add("vp_adjoint", 0.0, 0.0)
        add("vp_support", 0.0, 0.0)

    return report


def orthogonality_check(cert: CertificatePair, tol: float) -> bool:
    """|<vp, vd>| <= tol * (1 + ||vp|| ||vd||)."""
    return abs(cert.vp.inner(cert.vd)) <= tol * (1.0 + cert.vp.norm() * cert.vd.norm())
