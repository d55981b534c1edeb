"""Tail singular-value replacement by a convex combination.

A plan names a 1-based cut position j and convex weights over the original
singular values at positions j-1 .. n.  Applying it replaces every singular
value at positions j .. n with the single weighted value and reconstructs the
matrix; the largest singular value is never touched, so the spectral norm is
preserved while the norm of the inverse shrinks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidPlan
from .linalg import (
    RELATIVE_SINGULARITY_FLOOR,
    SvdFactors,
    as_matrix,
    reconstruct,
    svd,
)

_WEIGHT_SUM_TOL = 1e-9

TAIL_TO_SIGMA2 = "TAIL_TO_SIGMA2"  # sigma_tilde = sigma_2, cut at j = 3
THIRD_ONE = "THIRD_ONE"            # sigma_tilde = sigma_1/3 + 2 sigma_2/3
HALF_HALF = "HALF_HALF"            # sigma_tilde = (sigma_1 + sigma_2)/2
FULL_ORTHO = "FULL_ORTHO"          # sigma_tilde = sigma_1, output is orthogonal up to scale


@dataclass(frozen=True)
class SurgeryPlan:
    """Cut position plus convex weights over original values j-1 .. n."""

    j: int
    weights: tuple[float, ...]

    @property
    def n(self) -> int:
        return self.j - 2 + len(self.weights)


@dataclass(frozen=True)
class SurgeryReport:
    """Norms and condition numbers before/after; inverse-based fields are None
    when the matrix in question is numerically singular."""

    norm_before: float
    norm_after: float
    inverse_norm_before: float | None
    inverse_norm_after: float | None
    kappa_before: float | None
    kappa_after: float | None
    replaced_value: float


def build_plan(j: int, weights) -> SurgeryPlan:
    """Validate and normalize a plan; weights must be >= 0 and sum to 1."""
    if int(j) != j or j < 2:
        raise InvalidPlan(f"cut index must be an integer >= 2, got {j!r}")
    w = [float(x) for x in weights]
    if len(w) < 2:
        raise InvalidPlan("weights must cover positions j-1 .. n (length >= 2)")
    if any(x < 0.0 for x in w):
        raise InvalidPlan(f"negative weight in {w}")
    total = sum(w)
    if abs(total - 1.0) > _WEIGHT_SUM_TOL:
        raise InvalidPlan(f"weights sum to {total}, expected 1")
    return SurgeryPlan(j=int(j), weights=tuple(x / total for x in w))


def replaced_value(sigma, plan: SurgeryPlan) -> float:
    """Convex combination of sigma[j-2 .. n-1] (0-based) under the plan weights."""
    sigma = np.asarray(sigma, dtype=np.float64)
    if sigma.ndim != 1 or sigma.shape[0] != plan.n:
        raise InvalidPlan(
            f"plan expects {plan.n} singular values, got {sigma.shape}"
        )
    if np.any(sigma[:-1] < sigma[1:]) or np.any(sigma < 0.0):
        raise InvalidPlan("singular values must be non-negative and non-increasing")
    tail = sigma[plan.j - 2:]
    return float(tail @ np.asarray(plan.weights))


def apply_surgery(a, plan: SurgeryPlan) -> tuple[np.ndarray, SurgeryReport]:
    """Replace singular values at positions j..n and reconstruct."""
    a = as_matrix(a, square=True)
    n = a.shape[0]
    if n < 2:
        raise InvalidPlan("surgery needs an n x n matrix with n >= 2")
    if plan.n != n:
        raise InvalidPlan(f"plan is for n={plan.n}, matrix is {n}x{n}")

    u, sigma, v = svd(a)
    value = replaced_value(sigma, plan)
    new_sigma = sigma.copy()
    new_sigma[plan.j - 1:] = value
    out = reconstruct(SvdFactors(u, new_sigma, v))

    report = SurgeryReport(
        norm_before=float(sigma[0]),
        norm_after=float(new_sigma[0]),
        inverse_norm_before=_safe_reciprocal(sigma),
        inverse_norm_after=_safe_reciprocal(new_sigma),
        kappa_before=_safe_ratio(sigma),
        kappa_after=_safe_ratio(new_sigma),
        replaced_value=value,
    )
    return out, report


def _safe_reciprocal(sigma: np.ndarray) -> float | None:
    smin = float(sigma[-1])
    if smin == 0.0 or smin <= RELATIVE_SINGULARITY_FLOOR * float(sigma[0]):
        return None
    return 1.0 / smin


def _safe_ratio(sigma: np.ndarray) -> float | None:
    r = _safe_reciprocal(sigma)
    return None if r is None else float(sigma[0]) * r


def preset_plans(n: int) -> dict[str, SurgeryPlan]:
    """The replacement schemes used throughout the batch experiments.

    Presets are defined on the first two singular values; TAIL_TO_SIGMA2 needs
    n >= 3 and is omitted for n == 2.
    """
    if int(n) != n or n < 2:
        raise InvalidPlan(f"presets need n >= 2, got {n!r}")
    n = int(n)
    presets = {
        THIRD_ONE: build_plan(2, [1.0 / 3.0, 2.0 / 3.0] + [0.0] * (n - 2)),
        HALF_HALF: build_plan(2, [0.5, 0.5] + [0.0] * (n - 2)),
        FULL_ORTHO: build_plan(2, [1.0] + [0.0] * (n - 1)),
    }
    if n >= 3:
        presets[TAIL_TO_SIGMA2] = build_plan(3, [1.0] + [0.0] * (n - 2))
    return presets
