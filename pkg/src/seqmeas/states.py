"""States, partial states, outcome probabilities, and conditioning."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .effects import Effect, atom_effect, seq_product
from .errors import (
    ConditioningOnNull,
    DimensionMismatch,
    InternalInconsistency,
    NotPositive,
    TraceOutOfRange,
)
from .linalg import (
    DEFAULT_TOL,
    Tolerance,
    as_square_matrix,
    hermitian_eig,
    hermitize,
)

if TYPE_CHECKING:
    from .observables import Observable


@dataclass(frozen=True, eq=False)
class PartialState:
    """PSD operator with trace at most 1 (an unnormalized branch of a state)."""

    matrix: np.ndarray
    trace: float

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class State(PartialState):
    """PSD operator with unit trace."""


def _validated_psd(m: np.ndarray, tol: Tolerance) -> tuple[np.ndarray, float]:
    m = hermitize(as_square_matrix(m))
    eig = hermitian_eig(m, tol)
    if eig.eigenvalues[0] < -tol.psd_tol:
        raise NotPositive(f"smallest eigenvalue {eig.eigenvalues[0]:.3e} below -psd_tol")
    m.setflags(write=False)
    return m, float(np.trace(m).real)


def make_partial_state(m: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> PartialState:
    m, tr = _validated_psd(m, tol)
    if tr > 1.0 + tol.eq_tol:
        raise TraceOutOfRange(f"partial state trace {tr!r} exceeds 1")
    return PartialState(m, tr)


def make_state(m: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> State:
    m, tr = _validated_psd(m, tol)
    if abs(tr - 1.0) > tol.eq_tol:
        raise TraceOutOfRange(f"state trace {tr!r} differs from 1")
    return State(m, tr)


def pure_state(phi: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> State:
    """Projection onto a (normalized) vector, as a state."""
    proj = atom_effect(phi, tol).matrix
    return State(proj, float(np.trace(proj).real))


def maximally_mixed(dim: int, tol: Tolerance = DEFAULT_TOL) -> State:
    return make_state(np.eye(dim, dtype=complex) / dim, tol)


def purity(rho: PartialState) -> float:
    return float(np.trace(rho.matrix @ rho.matrix).real)


def is_pure(rho: State, tol: Tolerance = DEFAULT_TOL) -> bool:
    return abs(purity(rho) - 1.0) <= tol.eq_tol


def _require_same_dim(rho: PartialState, a: Effect) -> None:
    if rho.dim != a.dim:
        raise DimensionMismatch(f"state dim {rho.dim} vs effect dim {a.dim}")


def prob_of_effect(rho: State, a: Effect, tol: Tolerance = DEFAULT_TOL) -> float:
    """Probability tr(rho a) that the effect occurs, clamped into [0, 1].

    Values outside [-eq_tol, 1 + eq_tol] indicate corrupted inputs and raise
    rather than clamp.
    """
    _require_same_dim(rho, a)
    p = float(np.trace(rho.matrix @ a.matrix).real)
    if p < -tol.eq_tol or p > 1.0 + tol.eq_tol:
        raise InternalInconsistency(f"probability {p!r} outside [0, 1] beyond tolerance")
    return min(max(p, 0.0), 1.0)


def condition_state_effect(rho: State, a: Effect, tol: Tolerance = DEFAULT_TOL) -> PartialState:
    """Unnormalized post-measurement state sqrt(a) rho sqrt(a).

    Its trace equals the probability of a, and pairing it with any effect b
    reproduces the sequential statistics tr[rho (a o b)].
    """
    _require_same_dim(rho, a)
    return make_partial_state(a.sqrt @ rho.matrix @ a.sqrt, tol)


def conditional_probability(
    rho: State, b: Effect, a: Effect, tol: Tolerance = DEFAULT_TOL
) -> float:
    """Probability of b given that a occurred first: tr[rho (a o b)] / tr(rho a)."""
    _require_same_dim(rho, a)
    _require_same_dim(rho, b)
    denom = float(np.trace(rho.matrix @ a.matrix).real)
    if denom <= tol.psd_tol:
        raise ConditioningOnNull(f"conditioning effect has probability {denom!r}")
    num = float(np.trace(rho.matrix @ seq_product(a, b, tol).matrix).real)
    ratio = num / denom
    if ratio < -tol.eq_tol or ratio > 1.0 + tol.eq_tol:
        raise InternalInconsistency(f"conditional probability {ratio!r} outside [0, 1]")
    return min(max(ratio, 0.0), 1.0)


def condition_state_observable(
    rho: State, obs: "Observable", tol: Tolerance = DEFAULT_TOL
) -> State:
    """Total measurement back-action: sum of sqrt(A_x) rho sqrt(A_x) over outcomes."""
    acc = np.zeros((rho.dim, rho.dim), dtype=complex)
    for eff in obs.effects:
        _require_same_dim(rho, eff)
        acc += eff.sqrt @ rho.matrix @ eff.sqrt
    return make_state(acc, tol)
