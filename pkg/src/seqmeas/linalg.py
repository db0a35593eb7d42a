"""Dense complex matrix substrate for finite-dimensional operator theory.

Everything here is deterministic. The Hermitian eigendecomposition is the
single spectral primitive (no iterative methods), orthonormal completion
follows a fixed canonical-basis sweep, and matrix equality is Frobenius
distance relative to the larger operand norm.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotIsometry, NotPositive


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds used throughout the package.

    eq_tol bounds relative Frobenius distance in matrix-equality tests;
    psd_tol bounds how negative an eigenvalue may be before an operator
    stops counting as positive semidefinite.
    """

    eq_tol: float = 1e-9
    psd_tol: float = 1e-9

    def __post_init__(self) -> None:
        for name in ("eq_tol", "psd_tol"):
            value = getattr(self, name)
            if not 0.0 < value <= 1e-6:
                raise ValueError(f"{name} must lie in (0, 1e-6], got {value!r}")


DEFAULT_TOL = Tolerance()

#: Residual norm below which a canonical basis vector is considered to lie in
#: the span of the columns accumulated so far during unitary completion.
_COMPLETION_RESIDUAL = 1e-8


class HermitianEig(NamedTuple):
    """Eigendecomposition of a Hermitian matrix.

    eigenvalues are real and ascending; eigenvectors are the matching
    orthonormal columns, so ``vectors @ diag(values) @ vectors.conj().T``
    reconstructs the input.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_square_matrix(m: np.ndarray) -> np.ndarray:
    """Coerce to a square complex ndarray, raising DimensionMismatch otherwise."""
    arr = np.ascontiguousarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DimensionMismatch(f"expected a square matrix, got shape {arr.shape}")
    return arr


def frob(m: np.ndarray) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(m))


def hermitize(m: np.ndarray) -> np.ndarray:
    """Average away floating-point asymmetry: (m + m^dagger)/2."""
    return (m + m.conj().T) / 2.0


def mats_close(a: np.ndarray, b: np.ndarray, eq_tol: float = DEFAULT_TOL.eq_tol) -> bool:
    """Matrix equality: Frobenius distance at most eq_tol * (1 + max operand norm)."""
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape mismatch: {a.shape} vs {b.shape}")
    return frob(a - b) <= eq_tol * (1.0 + max(frob(a), frob(b)))


def is_hermitian(m: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> bool:
    m = as_square_matrix(m)
    return frob(m - m.conj().T) <= tol.eq_tol * (1.0 + frob(m))


def hermitian_eig(m: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> HermitianEig:
    """Eigendecompose a Hermitian matrix, validating Hermiticity first."""
    m = as_square_matrix(m)
    if not is_hermitian(m, tol):
        raise NotHermitian(f"matrix deviates from Hermitian by {frob(m - m.conj().T):.3e}")
    values, vectors = np.linalg.eigh(hermitize(m))
    return HermitianEig(values, vectors)


def psd_sqrt_from_eig(eig: HermitianEig) -> np.ndarray:
    """Square root from a precomputed eigendecomposition.

    Eigenvalues below the spectral noise floor (largest eigenvalue times
    dimension times machine epsilon) are zeroed first; otherwise the square
    root amplifies eigensolver roundoff on rank-deficient inputs from 1e-17
    to a visible 1e-9.
    """
    clamped = np.clip(eig.eigenvalues, 0.0, None)
    noise = float(clamped[-1]) * clamped.size * np.finfo(float).eps
    clamped = np.where(clamped <= noise, 0.0, clamped)
    return hermitize((eig.eigenvectors * np.sqrt(clamped)) @ eig.eigenvectors.conj().T)


def psd_sqrt(m: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Unique positive square root of a PSD Hermitian matrix.

    Eigenvalues in [-psd_tol, 0) are clamped to 0 before taking the root;
    anything more negative raises NotPositive.
    """
    eig = hermitian_eig(m, tol)
    if eig.eigenvalues[0] < -tol.psd_tol:
        raise NotPositive(f"smallest eigenvalue {eig.eigenvalues[0]:.3e} below -psd_tol")
    return psd_sqrt_from_eig(eig)


def loewner_leq(s: np.ndarray, t: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Operator order s <= t: the difference t - s is PSD up to psd_tol."""
    s = as_square_matrix(s)
    t = as_square_matrix(t)
    if s.shape != t.shape:
        raise DimensionMismatch(f"shape mismatch: {s.shape} vs {t.shape}")
    if not is_hermitian(s, tol) or not is_hermitian(t, tol):
        raise NotHermitian("loewner_leq requires Hermitian operands")
    smallest = np.linalg.eigvalsh(hermitize(t - s))[0]
    return bool(smallest >= -tol.psd_tol)


def tensor_product(m: np.ndarray, n: np.ndarray) -> np.ndarray:
    """Kronecker product with the first factor's index major.

    With this ordering ``tensor_product(I, f)`` is block diagonal with copies
    of ``f``, which is what the bipartite base/probe arithmetic relies on.
    """
    return np.kron(as_square_matrix(m), as_square_matrix(n))


def partial_trace_probe(m: np.ndarray, dim_base: int, dim_probe: int) -> np.ndarray:
    """Trace out the minor (probe) factor of a base-major bipartite matrix."""
    m = as_square_matrix(m)
    if dim_base < 1 or dim_probe < 1 or m.shape[0] != dim_base * dim_probe:
        raise DimensionMismatch(
            f"matrix of dim {m.shape[0]} does not factor as {dim_base}x{dim_probe}"
        )
    reshaped = m.reshape(dim_base, dim_probe, dim_base, dim_probe)
    return np.ascontiguousarray(np.trace(reshaped, axis1=1, axis2=3))


def complete_isometry_to_unitary(v: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Extend an isometry (N x d, d <= N, v^dagger v = I) to an N x N unitary.

    The first d columns of the result equal ``v`` exactly. The remaining
    columns come from sweeping the canonical basis vectors in index order,
    projecting each onto the orthocomplement of the columns collected so far,
    and keeping it (normalized) whenever the residual norm is at least 1e-8.
    The sweep is deterministic, so completions are reproducible.
    """
    v = np.ascontiguousarray(v, dtype=complex)
    if v.ndim != 2 or v.shape[0] < v.shape[1] or v.shape[1] < 1:
        raise NotIsometry(f"expected N x d with d <= N, got shape {v.shape}")
    n, d = v.shape
    gram = v.conj().T @ v
    if frob(gram - np.eye(d)) > tol.eq_tol * (1.0 + frob(gram)):
        raise NotIsometry(f"columns not orthonormal (defect {frob(gram - np.eye(d)):.3e})")

    cols = [v[:, j].copy() for j in range(d)]
    for i in range(n):
        if len(cols) == n:
            break
        cand = np.zeros(n, dtype=complex)
        cand[i] = 1.0
        for c in cols:
            cand -= c * np.vdot(c, cand)
        if np.linalg.norm(cand) < _COMPLETION_RESIDUAL:
            continue
        # Second projection pass keeps orthogonality well below the 1e-10
        # unitarity budget even for nearly dependent candidates.
        for c in cols:
            cand -= c * np.vdot(c, cand)
        cols.append(cand / np.linalg.norm(cand))
    if len(cols) != n:
        raise NotIsometry("canonical sweep failed to complete the isometry")
    return np.stack(cols, axis=1)
