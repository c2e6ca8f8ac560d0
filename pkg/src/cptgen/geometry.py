"""Information geometry on the open probability simplex.

A distribution over m+1 outcomes is charted by its last m probabilities
(mixture coordinates), an open subset of R^m. On that chart we expose the
Fisher metric, the alpha-connection family's coefficients, and straight-line
geodesics of the flat member (alpha = -1), under which blended rows are
convex combinations and the reachable set of a weight blend is exactly the
convex hull of its anchors. Hull membership is decided by constrained least
squares with an exact linear-programming fallback; recovered blend weights
use the minimum-norm tie-break because shared anchors make weights
non-unique.

Metric and connection coefficients are computed by direct summation of
their defining outcome sums, with the log-derivatives evaluated in closed
form from the chart; closed-form coefficient formulas live in the test
suite as oracles, not here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linprog, nnls

from .model import Distribution

#: Max L-inf reconstruction error for a point to count as a hull member.
HULL_TOLERANCE = 1e-9

#: Zero entries are lifted to this before mixture charting, when clamping
#: is requested; the row is then renormalized.
CLAMP_EPSILON = 1e-12


class InteriorViolationError(ValueError):
    """A distribution touches the simplex boundary where the chart needs
    strictly interior points."""


class NonMemberError(ValueError):
    """Weight recovery was asked for a point outside the anchors' hull."""


@dataclass(frozen=True)
class SimplexPoint:
    """Mixture coordinates of a distribution over m+1 outcomes.

    theta holds the probabilities of outcomes 1..m; outcome 0 carries the
    remainder 1 - sum(theta). Interior only: every coordinate positive,
    coordinates summing below 1.
    """

    theta: tuple[float, ...]
    clamped: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not self.theta:
            raise InteriorViolationError("empty coordinate vector")
        if any(t <= 0.0 for t in self.theta) or math.fsum(self.theta) >= 1.0:
            raise InteriorViolationError(
                f"not an interior point: theta={list(self.theta)}")

    @property
    def dim(self) -> int:
        return len(self.theta)

    @property
    def theta0(self) -> float:
        """Probability of outcome 0, the coordinate left implicit."""
        return 1.0 - math.fsum(self.theta)


@dataclass(frozen=True, eq=False)
class MetricMatrix:
    """Fisher metric coefficients g_ij at one chart point (m x m)."""

    g: np.ndarray


@dataclass(frozen=True, eq=False)
class ConnectionTensor:
    """Lowered connection coefficients Gamma_{ij,k} of one alpha-connection
    at one chart point (m x m x m, symmetric in the first two indices)."""

    alpha: float
    gamma: np.ndarray


@dataclass(frozen=True)
class HullCertificate:
    """Outcome of a hull-membership query.

    When member is True the weights are a simplex vector reconstructing the
    query point within ``residual`` in L-inf. When False they are the best
    blend found and residual is its (minimal) L-inf error.
    """

    weights: tuple[float, ...]
    residual: float
    member: bool


def to_mixture(dist: Distribution, *, clamp: bool = False) -> SimplexPoint:
    """Chart a distribution: theta_i = values[i] for i = 1..m.

    Boundary rows (any zero entry) are rejected unless ``clamp`` is set, in
    which case zeros are lifted to CLAMP_EPSILON, the row renormalized, and
    the returned point flagged as clamped.
    """
    values = dist.values
    clamped = False
    if any(v < CLAMP_EPSILON for v in values):
        if not clamp:
            raise InteriorViolationError(
                f"distribution touches the simplex boundary: {list(values)}")
        lifted = [max(v, CLAMP_EPSILON) for v in values]
        total = math.fsum(lifted)
        values = tuple(v / total for v in lifted)
        clamped = True
    return SimplexPoint(theta=tuple(values[1:]), clamped=clamped)


def from_mixture(point: SimplexPoint) -> Distribution:
    """Invert the chart: prepend the implicit outcome-0 probability."""
    return Distribution((point.theta0,) + point.theta)


def _outcome_scores(point: SimplexPoint) -> tuple[np.ndarray, np.ndarray]:
    """Per-outcome probabilities and score vectors d/dtheta_i log p.

    Returns (p, scores) with p of shape (m+1,) and scores of shape
    (m+1, m); row 0 is the outcome-0 score -1/theta0 in every slot, row l
    has the single nonzero entry 1/theta_l.
    """
    theta = np.asarray(point.theta, dtype=float)
    m = theta.size
    p = np.concatenate(([point.theta0], theta))
    scores = np.zeros((m + 1, m))
    scores[0, :] = -1.0 / p[0]
    scores[1:, :] = np.diag(1.0 / theta)
    return p, scores


def fisher_metric(point: SimplexPoint) -> MetricMatrix:
    """g_ij = sum over outcomes of (d_i log p)(d_j log p) p, summed directly."""
    p, scores = _outcome_scores(point)
    g = np.zeros((point.dim, point.dim))
    for px, s in zip(p, scores):
        g += px * np.outer(s, s)
    return MetricMatrix(g=g)


def connection_coefficients(point: SimplexPoint, alpha: float) -> ConnectionTensor:
    """Gamma_{ij,k} = sum over outcomes of
    (d_i d_j log p + (1-alpha)/2 (d_i log p)(d_j log p)) (d_k log p) p,
    summed directly with analytic derivatives.

    Each outcome probability is affine in theta, so per outcome
    d_i d_j log p = -(d_i log p)(d_j log p); the bracket collapses to
    ((1-alpha)/2 - 1) times the score outer product, which cancels to an
    exact floating-point zero at alpha = -1.
    """
    p, scores = _outcome_scores(point)
    m = point.dim
    coeff = 0.5 * (1.0 - alpha)
    gamma = np.zeros((m, m, m))
    for px, s in zip(p, scores):
        score_sq = np.outer(s, s)
        bracket = -score_sq + coeff * score_sq
        gamma += px * np.einsum("ij,k->ijk", bracket, s)
    return ConnectionTensor(alpha=alpha, gamma=gamma)


def geodesic_point(a: SimplexPoint, b: SimplexPoint, t: float) -> SimplexPoint:
    """The point at parameter t on the flat-connection geodesic from a to b.

    With every connection coefficient zero, the geodesic equation is
    theta'' = 0 and the boundary-value solution is the straight segment
    theta(t) = (1-t) theta_a + t theta_b; endpoints reproduce exactly.
    """
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"geodesic parameter {t!r} outside [0, 1]")
    theta = tuple((1.0 - t) * x + t * y for x, y in zip(a.theta, b.theta))
    return SimplexPoint(theta=theta, clamped=a.clamped or b.clamped)


def _anchor_matrix(q: Distribution, anchors: Sequence[Distribution]) -> tuple[np.ndarray, np.ndarray]:
    if not anchors:
        raise ValueError("at least one anchor distribution required")
    sizes = {len(a) for a in anchors} | {len(q)}
    if len(sizes) != 1:
        raise ValueError(f"dimension mismatch among query and anchors: {sorted(sizes)}")
    columns = np.array([a.values for a in anchors], dtype=float).T
    return columns, np.asarray(q.values, dtype=float)


def hull_membership(
    q: Distribution, anchors: Sequence[Distribution], *, tol: float = HULL_TOLERANCE
) -> HullCertificate:
    """Decide whether q lies in the convex hull of the anchors.

    First pass is nonnegative least squares on the anchor matrix with a
    stacked sum-to-one row; when q is a true blend this lands on an exact
    reconstruction. If inconclusive, the minimal L-inf reconstruction
    error over the weight simplex is computed exactly as a small linear
    program. Membership means that error stays below ``tol``.
    """
    columns, qv = _anchor_matrix(q, anchors)
    n_out, n_anchors = columns.shape

    stacked = np.vstack([columns, np.ones(n_anchors)])
    target = np.concatenate([qv, [1.0]])
    weights, _ = nnls(stacked, target)
    residual = float(np.abs(columns @ weights - qv).max())
    if residual < tol and abs(weights.sum() - 1.0) <= 1e-9:
        return HullCertificate(tuple(map(float, weights)), residual, member=True)

    # Least squares inconclusive: minimize the L-inf error exactly.
    cost = np.zeros(n_anchors + 1)
    cost[-1] = 1.0
    ones_col = np.ones((n_out, 1))
    a_ub = np.block([[columns, -ones_col], [-columns, -ones_col]])
    b_ub = np.concatenate([qv, -qv])
    a_eq = np.concatenate([np.ones(n_anchors), [0.0]])[None, :]
    result = linprog(
        cost, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=[1.0],
        bounds=[(0.0, None)] * (n_anchors + 1), method="highs",
    )
    if not result.success:
        raise RuntimeError(f"hull membership solve failed: {result.message}")
    weights = np.maximum(result.x[:-1], 0.0)
    residual = float(np.abs(columns @ weights - qv).max())
    return HullCertificate(tuple(map(float, weights)), residual, member=residual < tol)


def recover_weights(
    q: Distribution, anchors: Sequence[Distribution], *, tol: float = HULL_TOLERANCE
) -> tuple[float, ...]:
    """The minimum-Euclidean-norm simplex weights reconstructing q.

    Shared anchors make the reconstructing weights non-unique; of all
    feasible weight vectors the one of least norm is returned (unique by
    strict convexity over the feasible slice). Raises NonMemberError when
    q is not a hull member within ``tol``.
    """
    certificate = hull_membership(q, anchors, tol=tol)
    if not certificate.member:
        raise NonMemberError(
            f"point lies outside the anchor hull (residual {certificate.residual:.3e})")
    columns, qv = _anchor_matrix(q, anchors)
    n_anchors = columns.shape[1]

    stacked = np.vstack([columns, np.ones(n_anchors)])
    target = np.concatenate([qv, [1.0]])
    # Min-norm solution of the (possibly rank-deficient) affine system.
    w_min, *_ = np.linalg.lstsq(stacked, target, rcond=None)
    if w_min.min() >= -1e-9:
        return tuple(float(w) for w in np.maximum(w_min, 0.0))

    # The unconstrained minimum leaves the nonnegative orthant: finish with
    # least distance programming over the null space (Lawson-Hanson).
    _, singular, vt = np.linalg.svd(stacked)
    cutoff = singular.max() * max(stacked.shape) * np.finfo(float).eps
    rank = int((singular > cutoff).sum())
    null_basis = vt[rank:].T
    if null_basis.shape[1] == 0:
        raise RuntimeError("infeasible weight recovery on a hull member")
    z = _least_distance(null_basis, -w_min)
    weights = w_min + null_basis @ z
    if weights.min() < -1e-8:
        raise RuntimeError("weight recovery produced a negative weight")
    return tuple(float(w) for w in np.maximum(weights, 0.0))


def _least_distance(g: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Solve min ||z|| subject to g @ z >= h via the classical reduction
    to nonnegative least squares."""
    n_constraints, dim = g.shape
    e = np.vstack([g.T, h[None, :]])
    f = np.zeros(dim + 1)
    f[-1] = 1.0
    u, _ = nnls(e, f)
    r = e @ u - f
    if abs(r[-1]) < 1e-14:
        raise RuntimeError("least-distance constraints are infeasible")
    return -r[:-1] / r[-1]
