"""Seeded random generators for effects, states, observables, and instruments.

Everything takes an explicit numpy Generator so that suites and tests replay
deterministically from a single seed.
"""

from __future__ import annotations

import numpy as np

from .effects import Effect, make_effect
from .errors import BadDimension
from .instruments import Instrument, QuantumOperation, make_instrument, make_operation
from .linalg import DEFAULT_TOL, Tolerance, hermitian_eig, hermitize
from .observables import Observable, make_observable
from .states import State, make_state, pure_state


def complex_gaussian(dim: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))


def random_unit_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return vec / np.linalg.norm(vec)


def random_direction(rng: np.random.Generator) -> np.ndarray:
    while True:
        v = rng.standard_normal(3)
        norm = np.linalg.norm(v)
        if norm > 1e-6:
            return v / norm


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    # QR with the R-diagonal phase fixed gives a Haar-distributed unitary.
    q, r = np.linalg.qr(complex_gaussian(dim, rng))
    phases = np.diagonal(r).copy()
    phases /= np.abs(phases)
    return q * phases


def random_effect(dim: int, rng: np.random.Generator, tol: Tolerance = DEFAULT_TOL) -> Effect:
    """Full-support unsharp effect: logistic squash of a random Hermitian spectrum."""
    g = hermitize(complex_gaussian(dim, rng))
    eig = hermitian_eig(g, tol)
    squashed = 1.0 / (1.0 + np.exp(-eig.eigenvalues))
    m = (eig.eigenvectors * squashed) @ eig.eigenvectors.conj().T
    return make_effect(m, tol)


def random_state(dim: int, rng: np.random.Generator, tol: Tolerance = DEFAULT_TOL) -> State:
    """Full-rank random density operator G G^dagger normalized to unit trace."""
    g = complex_gaussian(dim, rng)
    m = g @ g.conj().T
    return make_state(m / np.trace(m).real, tol)


def random_pure_state(dim: int, rng: np.random.Generator, tol: Tolerance = DEFAULT_TOL) -> State:
    return pure_state(random_unit_vector(dim, rng), tol)


def random_observable(
    dim: int,
    outcomes: int,
    rng: np.random.Generator,
    tol: Tolerance = DEFAULT_TOL,
    prefix: str = "x",
) -> Observable:
    """Unsharp observable: random PSD pieces renormalized to resolve the identity."""
    if outcomes < 1:
        raise BadDimension(f"need at least one outcome, got {outcomes}")
    pieces = []
    for _ in range(outcomes):
        g = complex_gaussian(dim, rng)
        pieces.append(g @ g.conj().T)
    total = hermitize(sum(pieces))
    eig = hermitian_eig(total, tol)
    inv_root = (eig.eigenvectors / np.sqrt(eig.eigenvalues)) @ eig.eigenvectors.conj().T
    effects = tuple(make_effect(hermitize(inv_root @ p @ inv_root), tol) for p in pieces)
    return make_observable(tuple(f"{prefix}{i}" for i in range(outcomes)), effects, tol)


def random_partition(dim: int, groups: int, rng: np.random.Generator) -> list[list[int]]:
    """Split range(dim) into ``groups`` consecutive nonempty index blocks."""
    cuts = np.sort(rng.choice(dim - 1, size=groups - 1, replace=False)) + 1 if groups > 1 else []
    bounds = [0, *cuts, dim]
    return [list(range(bounds[i], bounds[i + 1])) for i in range(groups)]


def sharp_observable_from_basis(
    basis: np.ndarray, partition: list[list[int]], tol: Tolerance = DEFAULT_TOL
) -> Observable:
    """Projections onto groups of columns of an orthonormal basis."""
    effects = []
    for group in partition:
        block = basis[:, group]
        effects.append(make_effect(block @ block.conj().T, tol))
    return make_observable(tuple(f"x{i}" for i in range(len(partition))), tuple(effects), tol)


def random_sharp_observable(
    dim: int, outcomes: int, rng: np.random.Generator, tol: Tolerance = DEFAULT_TOL
) -> Observable:
    """Sharp observable: projections onto random orthogonal eigenspace groups."""
    if not 1 <= outcomes <= dim:
        raise BadDimension(f"{outcomes} sharp outcomes do not fit in dim {dim}")
    basis = random_unitary(dim, rng)
    return sharp_observable_from_basis(basis, random_partition(dim, outcomes, rng), tol)


def commuting_observable_in_basis(
    basis: np.ndarray, outcomes: int, rng: np.random.Generator, tol: Tolerance = DEFAULT_TOL
) -> Observable:
    """Observable diagonal in a given orthonormal basis (commutes with anything
    else diagonal there); outcome weights are a random column-stochastic table."""
    dim = basis.shape[0]
    table = rng.random((outcomes, dim))
    table /= table.sum(axis=0)
    effects = tuple(
        make_effect((basis * row) @ basis.conj().T, tol) for row in table
    )
    return make_observable(tuple(f"y{i}" for i in range(outcomes)), effects, tol)


def random_commuting_triple(
    dim: int, rng: np.random.Generator, tol: Tolerance = DEFAULT_TOL
) -> tuple[Effect, Effect, Effect]:
    """Effects a, b, c diagonal in one basis with a + b still an effect."""
    basis = random_unitary(dim, rng)
    height = rng.random(dim)
    split = rng.random(dim)
    diag_a = height * split
    diag_b = height * (1.0 - split)
    diag_c = rng.random(dim)
    build = lambda d: make_effect((basis * d) @ basis.conj().T, tol)
    return build(diag_a), build(diag_b), build(diag_c)


def random_sharp_orthogonal_pair(
    dim: int, rng: np.random.Generator, tol: Tolerance = DEFAULT_TOL
) -> tuple[Effect, Effect]:
    """Two projections onto disjoint subspaces (their sum is still an effect)."""
    if dim < 2:
        raise BadDimension("need dim >= 2 for an orthogonal pair")
    basis = random_unitary(dim, rng)
    size_a = int(rng.integers(1, dim))
    size_b = int(rng.integers(1, dim - size_a + 1))
    block_a = basis[:, :size_a]
    block_b = basis[:, size_a : size_a + size_b]
    return (
        make_effect(block_a @ block_a.conj().T, tol),
        make_effect(block_b @ block_b.conj().T, tol),
    )


def effect_with_vanishing_cross_block(
    a: Effect, b: Effect, rng: np.random.Generator, tol: Tolerance = DEFAULT_TOL
) -> Effect:
    """Random effect c with a c b = 0, for orthogonal projections a and b.

    Start from a random Hermitian, remove its a-b cross block, then shift and
    scale the spectrum into [0, 1]; the cross block stays zero because both
    adjustments commute with the a..b sandwich (a b = 0).
    """
    dim = a.dim
    h = hermitize(complex_gaussian(dim, rng))
    h = h - (a.matrix @ h @ b.matrix + b.matrix @ h @ a.matrix)
    values = np.linalg.eigvalsh(h)
    low, high = float(values[0]), float(values[-1])
    if high - low < 1e-12:
        return make_effect(np.eye(dim, dtype=complex) / 2.0, tol)
    scaled = (h - low * np.eye(dim)) / (high - low)
    return make_effect(scaled, tol)


def random_channel(
    dim: int, rng: np.random.Generator, n_kraus: int = 2, tol: Tolerance = DEFAULT_TOL
) -> QuantumOperation:
    inst = random_instrument(dim, rng, max_labels=1, max_kraus=n_kraus, min_kraus=n_kraus, tol=tol)
    return inst.operations[0]


def random_instrument(
    dim: int,
    rng: np.random.Generator,
    max_labels: int = 3,
    max_kraus: int = 2,
    min_labels: int = 1,
    min_kraus: int = 1,
    tol: Tolerance = DEFAULT_TOL,
) -> Instrument:
    """Random instrument: Gaussian Kraus drafts whitened so the total is a channel."""
    n_labels = int(rng.integers(min_labels, max_labels + 1))
    counts = [int(rng.integers(min_kraus, max_kraus + 1)) for _ in range(n_labels)]
    drafts = [[complex_gaussian(dim, rng) for _ in range(c)] for c in counts]
    total = hermitize(sum(g.conj().T @ g for group in drafts for g in group))
    eig = hermitian_eig(total, tol)
    inv_root = (eig.eigenvectors / np.sqrt(eig.eigenvalues)) @ eig.eigenvectors.conj().T
    ops = tuple(
        make_operation(tuple(g @ inv_root for g in group), tol) for group in drafts
    )
    return make_instrument(tuple(f"x{i}" for i in range(n_labels)), ops, tol)
