"""Effects (operators between 0 and the identity) and their sequential algebra.

An effect models a yes-no measurement outcome. The sequential product
``seq_product(a, b) = sqrt(a) b sqrt(a)`` is the effect of observing b after
a; the same operator read the other way round is "b conditioned on a".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    DimensionMismatch,
    ExceedsIdentity,
    NotOrthogonal,
    NotPositive,
    NotUnit,
)
from .linalg import (
    DEFAULT_TOL,
    Tolerance,
    as_square_matrix,
    frob,
    hermitian_eig,
    hermitize,
    loewner_leq,
    mats_close,
    psd_sqrt_from_eig,
)


@dataclass(frozen=True, eq=False)
class Effect:
    """A validated effect with its cached positive square root.

    ``sharp`` means the operator is a projection; ``atom`` additionally means
    rank one. Instances are immutable; construct via make_effect/atom_effect.
    """

    matrix: np.ndarray
    sqrt: np.ndarray
    sharp: bool
    atom: bool

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def make_effect(m: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> Effect:
    """Validate 0 <= m <= I and build an Effect with flags and cached root."""
    m = hermitize(as_square_matrix(m))
    eig = hermitian_eig(m, tol)
    if eig.eigenvalues[0] < -tol.psd_tol:
        raise NotPositive(f"smallest eigenvalue {eig.eigenvalues[0]:.3e} below -psd_tol")
    if eig.eigenvalues[-1] > 1.0 + tol.psd_tol:
        raise ExceedsIdentity(f"largest eigenvalue {eig.eigenvalues[-1]:.3e} above 1")
    root = psd_sqrt_from_eig(eig)
    sharp = mats_close(m @ m, m, tol.eq_tol)
    atom = sharp and int(round(float(np.sum(np.clip(eig.eigenvalues, 0.0, None))))) == 1
    return Effect(_freeze(m), _freeze(root), sharp, atom)


def atom_effect(phi: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> Effect:
    """Rank-one projection onto a vector, normalizing non-unit input."""
    vec = np.ascontiguousarray(phi, dtype=complex).reshape(-1)
    norm = float(np.linalg.norm(vec))
    if norm < 1e-12:
        raise NotUnit("cannot project onto the zero vector")
    m = np.outer(vec, vec.conj()) / (norm * norm)
    m = hermitize(m)
    return Effect(_freeze(m), _freeze(m.copy()), True, True)


def identity_effect(dim: int, tol: Tolerance = DEFAULT_TOL) -> Effect:
    return make_effect(np.eye(dim, dtype=complex), tol)


def zero_effect(dim: int, tol: Tolerance = DEFAULT_TOL) -> Effect:
    return make_effect(np.zeros((dim, dim), dtype=complex), tol)


def effects_close(a: Effect, b: Effect, tol: Tolerance = DEFAULT_TOL) -> bool:
    return mats_close(a.matrix, b.matrix, tol.eq_tol)


def _require_same_dim(a: Effect, b: Effect) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f"effect dims differ: {a.dim} vs {b.dim}")


def seq_product(a: Effect, b: Effect, tol: Tolerance = DEFAULT_TOL) -> Effect:
    """Sequential product sqrt(a) b sqrt(a): measure a first, then b.

    The result never exceeds a in the operator order, so it revalidates as an
    effect without any rescaling.
    """
    _require_same_dim(a, b)
    return make_effect(a.sqrt @ b.matrix @ a.sqrt, tol)


def condition_effect(b: Effect, a: Effect, tol: Tolerance = DEFAULT_TOL) -> Effect:
    """The effect b conditioned on a; identical to seq_product(a, b)."""
    return seq_product(a, b, tol)


def is_compatible(a: Effect, b: Effect, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True when the operators commute (no interference between the outcomes)."""
    _require_same_dim(a, b)
    commutator = a.matrix @ b.matrix - b.matrix @ a.matrix
    return frob(commutator) <= tol.eq_tol * (1.0 + frob(a.matrix) * frob(b.matrix))


def is_perp(a: Effect, b: Effect, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True when a + b is still an effect (the outcomes exclude each other)."""
    _require_same_dim(a, b)
    return loewner_leq(a.matrix + b.matrix, np.eye(a.dim), tol)


class AdditivityCheck(NamedTuple):
    holds: bool
    gap: float


def additive_relative(
    a: Effect, b: Effect, c: Effect, tol: Tolerance = DEFAULT_TOL
) -> AdditivityCheck:
    """Test whether (a+b) o c = a o c + b o c for orthogonal a, b.

    Returns the Frobenius gap between the two sides alongside the verdict;
    the verdict is ``gap <= eq_tol``. Raises NotOrthogonal when a + b is not
    an effect.
    """
    _require_same_dim(a, c)
    _require_same_dim(b, c)
    if not is_perp(a, b, tol):
        raise NotOrthogonal("a + b exceeds the identity; additivity is undefined")
    combined = make_effect(a.matrix + b.matrix, tol)
    lhs = seq_product(combined, c, tol).matrix
    rhs = seq_product(a, c, tol).matrix + seq_product(b, c, tol).matrix
    gap = frob(lhs - rhs)
    return AdditivityCheck(gap <= tol.eq_tol, gap)
