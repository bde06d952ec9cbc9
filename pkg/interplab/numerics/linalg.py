"""
Dense matrix primitives: validation, the exponential e^{-tA}, resolvents
and the block exponentials used for exact time stepping.
"""

from __future__ import annotations

import logging
import math
import warnings
from typing import Optional, Tuple

import numpy as np
from scipy import linalg as sla

from interplab.config import LabConfig
from interplab.models.exceptions import DomainError, ParameterError, SingularityError

logger = logging.getLogger(__name__)

_TAYLOR_DEGREE = 18
_SCALED_NORM = 0.5


def as_matrix(a) -> np.ndarray:
    """
    Validate a square matrix with finite entries.

    Raises:
        ParameterError: if the input is not square or has non-finite entries
    """
    m = np.atleast_2d(np.asarray(a))
    if m.dtype.kind not in "biufc":
        raise ParameterError("Matrix entries must be numeric")
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ParameterError(f"Expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ParameterError("Matrix entries must be finite")
    if m.dtype.kind in "biu":
        m = m.astype(float)
    return m


def mat_exp(a, t: float = 1.0, cross_check: bool = False) -> np.ndarray:
    """
    Compute e^{-tA} by scaling and squaring a truncated Taylor series.

    Args:
        a: square matrix A
        t: nonnegative time
        cross_check: compare against the eigendecomposition route when the
            eigenvector condition number allows it and log the discrepancy

    Raises:
        ParameterError: if t is negative
        DomainError: if the result overflows
    """
    m = as_matrix(a)
    if t < 0 or not math.isfinite(t):
        raise ParameterError(f"mat_exp needs a finite t >= 0, got {t}")
    dim = m.shape[0]
    if t == 0:
        return np.eye(dim, dtype=m.dtype)
    x = -t * m
    norm = np.linalg.norm(x, 1)
    squarings = max(0, int(math.ceil(math.log2(norm / _SCALED_NORM)))) if norm > _SCALED_NORM else 0
    x = x / (2.0 ** squarings)

    result = np.eye(dim, dtype=x.dtype)
    term = np.eye(dim, dtype=x.dtype)
    for k in range(1, _TAYLOR_DEGREE + 1):
        term = term @ x / k
        result = result + term
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(squarings):
            result = result @ result
    if not np.all(np.isfinite(result)):
        raise DomainError(f"e^(-tA) overflows at t = {t:.6g} (t*|A| = {t * np.linalg.norm(m, 1):.6g})")

    if cross_check:
        oracle = exp_by_eigen(m, t)
        if oracle is not None:
            gap = np.linalg.norm(result - oracle) / max(np.linalg.norm(oracle), 1e-300)
            logger.debug("mat_exp t=%.3g relative gap to eigen route %.3e", t, gap)
    return result


def exp_by_eigen(a, t: float) -> Optional[np.ndarray]:
    """
    e^{-tA} through A = V diag(lambda) V^{-1}.

    Returns None when the eigenvector matrix is too ill-conditioned.
    """
    m = as_matrix(a)
    eigvals, vecs = np.linalg.eig(m)
    if np.linalg.cond(vecs) > LabConfig.EIGEN_CONDITION_LIMIT:
        return None
    return (vecs * np.exp(-t * eigvals)) @ np.linalg.inv(vecs)


def function_by_eigen(a, fn) -> Optional[np.ndarray]:
    """f(A) = V f(Lambda) V^{-1}; None when the eigenvectors are ill-conditioned."""
    m = as_matrix(a)
    eigvals, vecs = np.linalg.eig(m)
    if np.linalg.cond(vecs) > LabConfig.EIGEN_CONDITION_LIMIT:
        return None
    return (vecs * np.asarray(fn(eigvals))) @ np.linalg.inv(vecs)


def _pivot_check(lu: np.ndarray, scale: float, z: complex) -> None:
    pivots = np.abs(np.diag(lu))
    threshold = LabConfig.PIVOT_THRESHOLD * scale
    if pivots.min() <= threshold:
        raise SingularityError(
            f"z = {complex(z):.6g} is (numerically) in the spectrum: pivot {pivots.min():.3e} <= {threshold:.3e}"
        )


def solve_resolvent(a, z: complex) -> np.ndarray:
    """
    R(z, A) = (zI - A)^{-1} by partial-pivoted LU.

    Raises:
        SingularityError: if a pivot falls below 1e-13 * max(|A|, |z|)
    """
    m = as_matrix(a)
    dim = m.shape[0]
    shifted = z * np.eye(dim) - m
    scale = max(np.linalg.norm(m, 1), abs(z), np.finfo(float).tiny)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(shifted, check_finite=False)
    _pivot_check(lu, scale, z)
    return sla.lu_solve((lu, piv), np.eye(dim, dtype=shifted.dtype), check_finite=False)


def solve_shifted(a, z: complex, rhs: np.ndarray) -> np.ndarray:
    """Solve (zI - A) y = rhs with the same singularity policy as solve_resolvent."""
    m = as_matrix(a)
    shifted = z * np.eye(m.shape[0]) - m
    scale = max(np.linalg.norm(m, 1), abs(z), np.finfo(float).tiny)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(shifted, check_finite=False)
    _pivot_check(lu, scale, z)
    return sla.lu_solve((lu, piv), np.asarray(rhs, dtype=np.result_type(shifted, rhs)), check_finite=False)


def is_invertible(a) -> bool:
    m = as_matrix(a)
    try:
        solve_resolvent(m, 0.0)
    except SingularityError:
        return False
    return True


def step_matrices(a, h: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Exact propagators of z' = -Az + g0 + g1*s over a step of length h.

    Returns:
        (E, W0, W1) with E = e^{-hA}, W0 = int_0^h e^{-(h-s)A} ds and
        W1 = int_0^h e^{-(h-s)A} s ds, read off the exponential of the block
        matrix [[-A, I, 0], [0, 0, I], [0, 0, 0]]. When A is invertible,
        W0 = (I - e^{-hA}) A^{-1}.
    """
    m = as_matrix(a)
    d = m.shape[0]
    block = np.zeros((3 * d, 3 * d), dtype=np.result_type(m, float))
    block[:d, :d] = -m
    block[:d, d:2 * d] = np.eye(d)
    block[d:2 * d, 2 * d:] = np.eye(d)
    full = mat_exp(-block, h)
    return full[:d, :d], full[:d, d:2 * d], full[:d, 2 * d:]
