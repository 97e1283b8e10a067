"""Dense linear-algebra kernels with explicit truncation and ordering rules.

Everything here is a pure function of its inputs; there is no module state,
so calls are safe from concurrent contexts. Real input matrices may have
complex spectra, which are always returned as explicit complex arrays.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AllZeroMatrix, ConvergenceFailure, NonFiniteEntry, NotSquare

EPS = float(np.finfo(np.float64).eps)

#: Default relative cutoff below which pseudoinverse singular values are dropped.
DEFAULT_RCOND = 1e-12

#: A data matrix with sigma_min/sigma_max below this is flagged as ill conditioned.
ILL_CONDITIONED_RATIO = 1e-10


@dataclass(frozen=True)
class FixedRank:
    """Keep at most ``rank`` singular values (capped at min(rows, cols))."""

    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError(f"rank must be >= 1, got {self.rank}")


@dataclass(frozen=True)
class RelativeThreshold:
    """Keep exactly the singular values with sigma_i >= tau * sigma_max."""

    tau: float

    def __post_init__(self):
        if not 0.0 < self.tau < 1.0:
            raise ValueError(f"tau must lie in (0, 1), got {self.tau}")


@dataclass(frozen=True)
class MachineDefault:
    """Relative threshold of max(rows, cols) * machine epsilon."""


TruncationRule = FixedRank | RelativeThreshold | MachineDefault


@dataclass(frozen=True, eq=False)
class SvdResult:
    """Truncated singular value decomposition ``input ~ u @ diag(sigma) @ v.T``.

    ``u`` is n-by-p, ``sigma`` the p retained singular values (descending),
    ``v`` is m-by-p. ``discarded_energy`` is the squared-singular-value mass
    dropped by truncation, as a fraction of the total.
    """

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray
    truncation_rank: int
    discarded_energy: float


@dataclass(frozen=True, eq=False)
class EigResult:
    """Eigendecomposition with a deterministic total order.

    Eigenvalues are sorted by descending modulus, ties broken by descending
    real part then descending imaginary part. Eigenvectors are unit 2-norm
    columns with the first nonzero component rotated to non-negative real part.
    """

    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class ConditioningRecord:
    """Singular-value extremes of a data matrix plus an instability flag."""

    sigma_max: float
    sigma_min: float
    rcond_used: float
    warning: bool

    @property
    def ratio(self) -> float:
        """sigma_min / sigma_max, or 0.0 for an all-zero matrix."""
        return self.sigma_min / self.sigma_max if self.sigma_max > 0 else 0.0


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-D float64 array, rejecting NaN/Inf entries."""
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2:
        a = np.atleast_2d(a)
    if a.size and not np.all(np.isfinite(a)):
        raise NonFiniteEntry(f"{name} contains NaN or Inf entries")
    return a


def truncated_svd(m, rule: TruncationRule = MachineDefault()) -> SvdResult:
    """Reduced SVD truncated according to ``rule``.

    ``FixedRank(r)`` keeps ``min(r, min(rows, cols))`` values, dropping any
    trailing exact zeros so that ``diag(sigma)`` stays invertible.
    ``RelativeThreshold(tau)`` keeps the values ``>= tau * sigma_max`` and
    ``MachineDefault`` uses ``tau = max(rows, cols) * eps``; both reject an
    all-zero input since the relative cutoff is then undefined.
    """
    a = as_matrix(m)
    if isinstance(rule, (RelativeThreshold, MachineDefault)) and not np.any(a):
        raise AllZeroMatrix("relative truncation is undefined for an all-zero matrix")
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    if isinstance(rule, FixedRank):
        k = min(rule.rank, s.size)
        while k > 0 and s[k - 1] == 0.0:
            k -= 1
    else:
        tau = rule.tau if isinstance(rule, RelativeThreshold) else max(a.shape) * EPS
        k = int(np.count_nonzero(s >= tau * s[0]))
    total = float(np.sum(s**2))
    discarded = float(np.sum(s[k:] ** 2)) / total if total > 0 else 0.0
    return SvdResult(
        u=u[:, :k].copy(),
        sigma=s[:k].copy(),
        v=vt[:k, :].T.copy(),
        truncation_rank=k,
        discarded_energy=discarded,
    )


def pseudoinverse(m, rcond: float = DEFAULT_RCOND) -> np.ndarray:
    """Moore-Penrose pseudoinverse via SVD.

    Singular values below ``rcond * sigma_max`` are treated as zero.
    """
    a = as_matrix(m)
    if rcond < 0:
        raise ValueError(f"rcond must be >= 0, got {rcond}")
    if a.size == 0 or not np.any(a):
        return np.zeros((a.shape[1], a.shape[0]))
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    keep = (s >= rcond * s[0]) & (s > 0.0)
    s_inv = np.zeros_like(s)
    s_inv[keep] = 1.0 / s[keep]
    return (vt.T * s_inv) @ u.T


def eig(m) -> EigResult:
    """Eigendecomposition of a square matrix, deterministically ordered.

    The returned order is a total order (descending modulus, then real part,
    then imaginary part; remaining exact ties keep backend order), so equal
    inputs produce bit-identical results.
    """
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"eig requires a square matrix, got {a.shape}")
    if a.size == 0:
        return EigResult(np.zeros(0, dtype=complex), np.zeros((0, 0), dtype=complex))
    try:
        values, vectors = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    values = values.astype(np.complex128, copy=False)
    vectors = vectors.astype(np.complex128, copy=False)
    order = np.lexsort((-values.imag, -values.real, -np.abs(values)))
    values = values[order]
    vectors = vectors[:, order]
    return EigResult(values, _canonicalize_columns(vectors))


def _canonicalize_columns(vectors: np.ndarray) -> np.ndarray:
    """Unit-normalize columns and fix their sign by the first nonzero entry."""
    out = vectors.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        nrm = np.linalg.norm(col)
        if nrm > 0:
            col = col / nrm
        mags = np.abs(col)
        top = mags.max() if mags.size else 0.0
        if top > 0:
            lead = col[int(np.argmax(mags > 1e-12 * top))]
            if lead.real < 0 or (lead.real == 0 and lead.imag < 0):
                col = -col
        out[:, j] = col
    return out


def frobenius_norm(m) -> float:
    """Square root of the sum of squared entries."""
    a = as_matrix(m)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a))


def conditioning_record(m, rcond: float = DEFAULT_RCOND) -> ConditioningRecord:
    """Singular-value extremes of a data matrix, flagging near-singularity.

    The warning trips when sigma_min/sigma_max < ILL_CONDITIONED_RATIO, the
    regime where pseudoinverse-based estimates become unreliable.
    """
    a = as_matrix(m)
    if a.size == 0:
        return ConditioningRecord(0.0, 0.0, rcond, True)
    s = np.linalg.svd(a, compute_uv=False)
    sigma_max = float(s[0])
    sigma_min = float(s[-1])
    warning = sigma_max == 0.0 or sigma_min / sigma_max < ILL_CONDITIONED_RATIO
    return ConditioningRecord(sigma_max, sigma_min, rcond, warning)
