"""Dense small-matrix core: SVD, reconstruction, norms, inverse, condition number.

The SVD is a one-sided Jacobi iteration, accurate to machine precision for the
small dense matrices this toolkit targets (n <= 32, the size regime of
convolution filters).  A fixed sign convention makes the factors deterministic:
the largest-magnitude entry of each left singular vector is positive, ties
broken by lowest row index.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import InvalidInput, SingularMatrix

# sigma_n <= RELATIVE_SINGULARITY_FLOOR * sigma_1 counts as singular; only
# genuine underflow is refused, ill-conditioned but invertible inputs pass.
RELATIVE_SINGULARITY_FLOOR = 1e-300

_MAX_SWEEPS = 60
_SWEEP_TOL = 1e-14


class SvdFactors(NamedTuple):
    u: np.ndarray      # (m, m) orthogonal
    sigma: np.ndarray  # (min(m, n),) non-increasing, >= 0
    v: np.ndarray      # (n, n) orthogonal


def as_matrix(a, *, square: bool = False) -> np.ndarray:
    """Validate and convert to a float64 2-D array."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise InvalidInput(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput("matrix has non-finite entries")
    if square and a.shape[0] != a.shape[1]:
        raise InvalidInput(f"expected a square matrix, got shape {a.shape}")
    return a


def _orthonormal_complete(cols: list[np.ndarray], m: int) -> list[np.ndarray]:
    """Extend a list of orthonormal m-vectors to a full basis.

    Candidates are the standard basis vectors in index order, so the result is
    deterministic.
    """
    out = list(cols)
    for i in range(m):
        if len(out) == m:
            break
        v = np.zeros(m)
        v[i] = 1.0
        for u in out:
            v -= (u @ v) * u
        norm = math.sqrt(float(v @ v))
        if norm > 0.5:
            out.append(v / norm)
    return out


def svd(a) -> SvdFactors:
    """One-sided Jacobi SVD with full orthogonal factors.

    Rectangular inputs are supported; u is m x m, v is n x n and sigma has
    min(m, n) entries sorted descending.
    """
    a = as_matrix(a)
    m, n = a.shape
    if m < n:
        u, sigma, v = svd(a.T)
        return SvdFactors(v, sigma, u)

    w = a.copy()
    v = np.eye(n)
    tol = _SWEEP_TOL * float(np.linalg.norm(w))
    for _ in range(_MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                wp = w[:, p]
                wq = w[:, q]
                gamma = float(wp @ wq)
                if abs(gamma) <= tol:
                    continue
                alpha = float(wp @ wp)
                beta = float(wq @ wq)
                zeta = (beta - alpha) / (2.0 * gamma)
                t = (1.0 if zeta >= 0.0 else -1.0) / (
                    abs(zeta) + math.sqrt(1.0 + zeta * zeta)
                )
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                w[:, p], w[:, q] = c * wp - s * wq, s * wp + c * wq
                v[:, p], v[:, q] = c * v[:, p] - s * v[:, q], s * v[:, p] + c * v[:, q]
                rotated = True
        if not rotated:
            break

    sigma = np.linalg.norm(w, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    v = v[:, order]

    u_cols: list[np.ndarray] = []
    for k, j in enumerate(order.tolist()):
        if sigma[k] > 0.0:
            u_cols.append(w[:, j] / sigma[k])
        else:
            break
    filled = len(u_cols)
    u_cols = _orthonormal_complete(u_cols, m)
    u = np.column_stack(u_cols)

    # sign convention: paired flip for genuine singular vectors, lone flip for
    # completed columns (they carry no weight in the reconstruction)
    for k in range(m):
        idx = int(np.argmax(np.abs(u[:, k])))
        if u[idx, k] < 0.0:
            u[:, k] = -u[:, k]
            if k < filled:
                v[:, k] = -v[:, k]
    for k in range(filled, n):
        idx = int(np.argmax(np.abs(v[:, k])))
        if v[idx, k] < 0.0:
            v[:, k] = -v[:, k]

    return SvdFactors(u, sigma, v)


def reconstruct(f: SvdFactors) -> np.ndarray:
    """Multiply the factors back together: u . diag(sigma) . v^T."""
    u = as_matrix(f.u, square=True)
    v = as_matrix(f.v, square=True)
    sigma = np.asarray(f.sigma, dtype=np.float64)
    m, n = u.shape[0], v.shape[0]
    k = min(m, n)
    if sigma.ndim != 1 or sigma.shape[0] != k:
        raise InvalidInput(
            f"sigma has length {sigma.shape}, expected {k} for shapes {m}x{n}"
        )
    if not np.all(np.isfinite(sigma)):
        raise InvalidInput("sigma has non-finite entries")
    return (u[:, :k] * sigma) @ v[:, :k].T


def singular_values(a) -> np.ndarray:
    return svd(a).sigma


def spectral_norm(a) -> float:
    """Largest singular value (the Euclidean operator norm)."""
    return float(singular_values(a)[0])


def _check_invertible(sigma: np.ndarray) -> None:
    smin = float(sigma[-1])
    if smin == 0.0 or smin <= RELATIVE_SINGULARITY_FLOOR * float(sigma[0]):
        raise SingularMatrix(
            f"smallest singular value {smin:g} is below the singularity floor"
        )


def inverse_spectral_norm(a) -> float:
    """Euclidean norm of the inverse, 1/sigma_min."""
    sigma = singular_values(as_matrix(a, square=True))
    _check_invertible(sigma)
    return 1.0 / float(sigma[-1])


def condition_number(a) -> float:
    """sigma_max / sigma_min; 1 for orthogonal matrices."""
    sigma = singular_values(as_matrix(a, square=True))
    _check_invertible(sigma)
    return float(sigma[0]) / float(sigma[-1])


def inverse(a) -> np.ndarray:
    """Inverse via the SVD factors: v . diag(1/sigma) . u^T."""
    a = as_matrix(a, square=True)
    u, sigma, v = svd(a)
    _check_invertible(sigma)
    return (v / sigma) @ u.T
