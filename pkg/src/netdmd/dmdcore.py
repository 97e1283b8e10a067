"""DMD and DMDc in exact (pseudoinverse) and reduced-order (two-SVD) forms.

The exact variants solve the least-squares / minimum-norm problem
``Y ~ A Z`` (or ``Y ~ A Z + B Gamma``) directly through the pseudoinverse.
The reduced variants project through truncated SVDs of the input stack and
of the successor matrix, returning a small model plus the dynamic modes it
induces in the full space. All functions are pure; determinism comes from
the fixed eigenvalue ordering in :mod:`netdmd.numkernel`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AllZeroMatrix, DimensionMismatch
from .numkernel import (
    DEFAULT_RCOND,
    ConditioningRecord,
    MachineDefault,
    TruncationRule,
    as_matrix,
    conditioning_record,
    eig,
    pseudoinverse,
    truncated_svd,
)

#: Eigenvalues with modulus below this fraction of the largest are dropped
#: from the returned modes (a mode is undefined for a zero eigenvalue).
MODE_ZERO_TOL_FACTOR = 1e-12


@dataclass(frozen=True, eq=False)
class ExactLinearModel:
    """Full-order identified model ``y ~ a x (+ b u)``.

    ``b`` is None for the autonomous (DMD) case. ``conditioning`` describes
    the data matrix whose pseudoinverse produced the model.
    """

    a: np.ndarray
    b: np.ndarray | None
    conditioning: ConditioningRecord


@dataclass(frozen=True, eq=False)
class ReducedLinearModel:
    """Reduced-order model in the coordinates ``x_red = u_hat.T @ x``.

    ``u_hat`` (n-by-r, orthonormal columns) projects full states down and
    lifts reduced states back up. ``p`` is the input-stack truncation rank,
    ``r`` the output truncation rank.
    """

    a_tilde: np.ndarray
    b_tilde: np.ndarray | None
    u_hat: np.ndarray
    p: int
    r: int


@dataclass(frozen=True, eq=False)
class DynamicModes:
    """Eigenvalues and full-space mode vectors of an identified model.

    Pairs whose eigenvalue modulus falls below ``MODE_ZERO_TOL_FACTOR`` times
    the largest modulus are excluded; ``n_zero_excluded`` counts them.
    """

    eigenvalues: np.ndarray
    modes: np.ndarray
    source: str
    n_zero_excluded: int = 0


def _check_columns(*mats):
    cols = {m.shape[1] for m in mats}
    if len(cols) > 1:
        raise DimensionMismatch(f"column counts differ: {[m.shape for m in mats]}")


def dmd_exact(z, y, rcond: float = DEFAULT_RCOND) -> ExactLinearModel:
    """Minimum-norm solution of ``y ~ a z`` via the pseudoinverse of z."""
    z = as_matrix(z, "z")
    y = as_matrix(y, "y")
    _check_columns(z, y)
    if z.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"z has {z.shape[0]} rows but y has {y.shape[0]}")
    a = y @ pseudoinverse(z, rcond)
    return ExactLinearModel(a=a, b=None, conditioning=conditioning_record(z, rcond))


def dmdc_exact(z, y, gamma, rcond: float = DEFAULT_RCOND) -> ExactLinearModel:
    """Minimum-norm solution of ``y ~ a z + b gamma``.

    Stacks ``omega = [z; gamma]``, applies the pseudoinverse, and splits the
    result into the state part (first n columns) and input part (last l).
    """
    z = as_matrix(z, "z")
    y = as_matrix(y, "y")
    gamma = as_matrix(gamma, "gamma")
    _check_columns(z, y, gamma)
    if z.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"z has {z.shape[0]} rows but y has {y.shape[0]}")
    n = z.shape[0]
    omega = np.vstack([z, gamma])
    g = y @ pseudoinverse(omega, rcond)
    return ExactLinearModel(a=g[:, :n], b=g[:, n:], conditioning=conditioning_record(omega, rcond))


def _filter_zero_modes(values: np.ndarray, modes: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    top = np.max(np.abs(values)) if values.size else 0.0
    if top == 0.0:
        return values[:0], modes[:, :0], int(values.size)
    keep = np.abs(values) >= MODE_ZERO_TOL_FACTOR * top
    return values[keep], modes[:, keep], int(np.count_nonzero(~keep))


def dmd_reduced(z, y, rule: TruncationRule = MachineDefault()) -> tuple[ReducedLinearModel, DynamicModes]:
    """Reduced-order DMD through a single truncated SVD of z.

    With ``z ~ u s v.T``, the reduced operator is ``a_tilde = u.T y v s^-1``
    and each eigenpair (w, lam) of it, lam nonzero, lifts to the full-space
    mode ``phi = lam^-1 y v s^-1 w``.
    """
    z = as_matrix(z, "z")
    y = as_matrix(y, "y")
    _check_columns(z, y)
    if not np.any(z) or not np.any(y):
        raise AllZeroMatrix("dmd_reduced needs nonzero z and y")
    svd = truncated_svd(z, rule)
    core = (y @ svd.v) / svd.sigma
    a_tilde = svd.u.T @ core
    eigres = eig(a_tilde)
    raw_modes = core.astype(complex) @ eigres.vectors
    with np.errstate(divide="ignore", invalid="ignore"):
        raw_modes = np.where(eigres.values != 0, raw_modes / eigres.values, raw_modes)
    values, modes, dropped = _filter_zero_modes(eigres.values, raw_modes)
    model = ReducedLinearModel(
        a_tilde=a_tilde,
        b_tilde=None,
        u_hat=svd.u,
        p=svd.truncation_rank,
        r=svd.truncation_rank,
    )
    return model, DynamicModes(values, modes, source="reduced", n_zero_excluded=dropped)


def dmdc_reduced(
    z,
    y,
    gamma,
    input_rule: TruncationRule = MachineDefault(),
    output_rule: TruncationRule = MachineDefault(),
) -> tuple[ReducedLinearModel, DynamicModes]:
    """Reduced-order DMDc via two truncated SVDs.

    Step by step: (1) truncated SVD of the stack ``omega = [z; gamma]`` at
    rank p, splitting its left factor into state rows ``u1`` and input rows
    ``u2``; (2) truncated SVD of y at rank r giving the output projector
    ``u_hat``; (3) ``a_tilde = u_hat.T y v s^-1 u1.T u_hat`` and
    ``b_tilde = u_hat.T y v s^-1 u2.T``; (4) the eigendecomposition of
    ``a_tilde``; (5) full-space modes ``y v s^-1 u1.T u_hat w``.
    """
    z = as_matrix(z, "z")
    y = as_matrix(y, "y")
    gamma = as_matrix(gamma, "gamma")
    _check_columns(z, y, gamma)
    if z.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"z has {z.shape[0]} rows but y has {y.shape[0]}")
    n = z.shape[0]
    omega = np.vstack([z, gamma])
    if not np.any(omega) or not np.any(y):
        raise AllZeroMatrix("dmdc_reduced needs nonzero [z; gamma] and y")
    svd_in = truncated_svd(omega, input_rule)
    svd_out = truncated_svd(y, output_rule)
    u1 = svd_in.u[:n, :]
    u2 = svd_in.u[n:, :]
    u_hat = svd_out.u
    core = (y @ svd_in.v) / svd_in.sigma
    state_map = u1.T @ u_hat
    a_tilde = u_hat.T @ core @ state_map
    b_tilde = u_hat.T @ core @ u2.T
    eigres = eig(a_tilde)
    raw_modes = (core @ state_map).astype(complex) @ eigres.vectors
    values, modes, dropped = _filter_zero_modes(eigres.values, raw_modes)
    model = ReducedLinearModel(
        a_tilde=a_tilde,
        b_tilde=b_tilde,
        u_hat=u_hat,
        p=svd_in.truncation_rank,
        r=svd_out.truncation_rank,
    )
    return model, DynamicModes(values, modes, source="reduced", n_zero_excluded=dropped)


def dmd_modes(model: ExactLinearModel) -> DynamicModes:
    """Eigenvalues and eigenvector modes of an exact model's state operator."""
    eigres = eig(model.a)
    values, modes, dropped = _filter_zero_modes(eigres.values, eigres.vectors)
    return DynamicModes(values, modes, source="exact", n_zero_excluded=dropped)


def lift_reduced(model: ReducedLinearModel) -> tuple[np.ndarray, np.ndarray | None]:
    """Express a reduced model in full-space coordinates via its projector."""
    a = model.u_hat @ model.a_tilde @ model.u_hat.T
    b = model.u_hat @ model.b_tilde if model.b_tilde is not None else None
    return a, b


def predict(model: ExactLinearModel | ReducedLinearModel, x0, inputs, m: int) -> np.ndarray:
    """Roll a model forward m steps; returns the n-by-m matrix of successors.

    For reduced models the initial state is projected through ``u_hat`` and
    every reported column is lifted back to full coordinates. ``inputs`` must
    be l-by-m for models with an input operator and None (or 0-row) without.
    """
    if m < 1:
        raise DimensionMismatch("need at least one prediction step")
    if isinstance(model, ReducedLinearModel):
        a, b = model.a_tilde, model.b_tilde
        project = model.u_hat.T
        lift = model.u_hat
    else:
        a, b = model.a, model.b
        project = lift = None
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    n_full = lift.shape[0] if lift is not None else a.shape[0]
    if x0.size != n_full:
        raise DimensionMismatch(f"x0 has {x0.size} entries, model expects {n_full}")
    l = 0 if b is None else b.shape[1]
    if l == 0:
        u = np.zeros((0, m))
        if inputs is not None:
            u_given = np.asarray(inputs, dtype=float)
            if u_given.size:
                raise DimensionMismatch("model has no input operator but inputs were given")
    else:
        u = np.asarray(inputs, dtype=float)
        if u.ndim != 2 or u.shape != (l, m):
            raise DimensionMismatch(f"inputs must be {(l, m)}, got {None if inputs is None else u.shape}")
    x = project @ x0 if project is not None else x0
    out = np.empty((n_full, m))
    for k in range(m):
        x = a @ x + (b @ u[:, k] if b is not None and l else 0.0)
        out[:, k] = lift @ x if lift is not None else x
    return out


def model_to_dict(model: ExactLinearModel, modes: DynamicModes | None = None) -> dict:
    """JSON-ready form of an exact model plus its dynamic modes."""
    if modes is None:
        modes = dmd_modes(model)
    return {
        "A": model.a.tolist(),
        "B": model.b.tolist() if model.b is not None else None,
        "eigenvalues": [{"re": v.real, "im": v.imag} for v in modes.eigenvalues],
        "modes": [[{"re": c.real, "im": c.imag} for c in row] for row in modes.modes],
        "conditioning": {
            "sigma_max": model.conditioning.sigma_max,
            "sigma_min": model.conditioning.sigma_min,
            "rcond_used": model.conditioning.rcond_used,
            "warning": model.conditioning.warning,
        },
    }


def model_from_dict(d: dict) -> tuple[ExactLinearModel, DynamicModes]:
    a = np.asarray(d["A"], dtype=float)
    b = np.asarray(d["B"], dtype=float) if d["B"] is not None else None
    cond = ConditioningRecord(
        sigma_max=float(d["conditioning"]["sigma_max"]),
        sigma_min=float(d["conditioning"]["sigma_min"]),
        rcond_used=float(d["conditioning"]["rcond_used"]),
        warning=bool(d["conditioning"]["warning"]),
    )
    values = np.array([complex(e["re"], e["im"]) for e in d["eigenvalues"]], dtype=complex)
    if d["modes"]:
        modes = np.array([[complex(c["re"], c["im"]) for c in row] for row in d["modes"]], dtype=complex)
    else:
        modes = np.zeros((a.shape[0], 0), dtype=complex)
    return ExactLinearModel(a, b, cond), DynamicModes(values, modes, source="exact")
