"""Quantum operations, channels, instruments, and joint-probability rules.

Operations are kept in Kraus form so complete positivity holds by
construction; maps given only through their linear action are admitted via a
Choi-matrix PSD check. Equality of operations always means equality of the
induced maps (equal Choi matrices), never equality of Kraus lists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .effects import make_effect, seq_product
from .errors import (
    ConditioningOnNull,
    DimensionMismatch,
    ExceedsIdentity,
    IncompatibleInstrument,
    InvalidInstrument,
    LabelCollision,
    NotPositive,
    OverlappingSubsets,
    UnknownLabel,
)
from .linalg import (
    DEFAULT_TOL,
    Tolerance,
    as_square_matrix,
    frob,
    hermitian_eig,
    hermitize,
    mats_close,
)
from .observables import Observable, make_observable
from .states import PartialState, State, make_partial_state, make_state


@dataclass(frozen=True, eq=False)
class QuantumOperation:
    """Completely positive trace-nonincreasing map given by Kraus operators."""

    kraus: tuple[np.ndarray, ...]
    sum_kk: np.ndarray

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]


@dataclass(frozen=True, eq=False)
class Instrument:
    """Outcome-labelled operations whose total is a channel."""

    labels: tuple[str, ...]
    operations: tuple[QuantumOperation, ...]

    @property
    def dim(self) -> int:
        return self.operations[0].dim

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabel(f"label {label!r} not in {self.labels}") from None

    def operation_for(self, label: str) -> QuantumOperation:
        return self.operations[self.index(label)]


def make_operation(kraus, tol: Tolerance = DEFAULT_TOL) -> QuantumOperation:
    """Validate a nonempty Kraus list with trace-nonincreasing total."""
    mats = tuple(as_square_matrix(k) for k in kraus)
    if not mats:
        raise InvalidInstrument("operation needs at least one Kraus operator")
    dim = mats[0].shape[0]
    if any(k.shape[0] != dim for k in mats):
        raise DimensionMismatch("Kraus operators have differing dimensions")
    total = hermitize(sum(k.conj().T @ k for k in mats))
    if np.linalg.eigvalsh(total)[-1] > 1.0 + tol.psd_tol:
        raise ExceedsIdentity("Kraus operators define a trace-increasing map")
    for k in mats:
        k.setflags(write=False)
    total.setflags(write=False)
    return QuantumOperation(mats, total)


def is_channel(op: QuantumOperation, tol: Tolerance = DEFAULT_TOL) -> bool:
    return mats_close(op.sum_kk, np.eye(op.dim), tol.eq_tol)


def apply_operation(op: QuantumOperation, rho: PartialState, tol: Tolerance = DEFAULT_TOL) -> PartialState:
    """Apply the map: sum of K rho K^dagger over the Kraus operators."""
    if op.dim != rho.dim:
        raise DimensionMismatch(f"operation dim {op.dim} vs state dim {rho.dim}")
    acc = np.zeros((op.dim, op.dim), dtype=complex)
    for k in op.kraus:
        acc += k @ rho.matrix @ k.conj().T
    return make_partial_state(hermitize(acc), tol)


def compose_operations(
    second: QuantumOperation, first: QuantumOperation, tol: Tolerance = DEFAULT_TOL
) -> QuantumOperation:
    """Operation applying ``first`` and then ``second``."""
    if second.dim != first.dim:
        raise DimensionMismatch("cannot compose operations of differing dimension")
    return make_operation(
        tuple(s @ f for s in second.kraus for f in first.kraus), tol
    )


def choi_matrix(op: QuantumOperation) -> np.ndarray:
    """Choi matrix: stack each Kraus operator row-major and sum the outer squares."""
    d = op.dim
    j = np.zeros((d * d, d * d), dtype=complex)
    for k in op.kraus:
        v = k.reshape(d * d)
        j += np.outer(v, v.conj())
    return j


def choi_from_action(apply_fn: Callable[[np.ndarray], np.ndarray], dim: int) -> np.ndarray:
    """Choi matrix of an arbitrary linear map given by its action on matrices."""
    j = np.zeros((dim * dim, dim * dim), dtype=complex)
    for a in range(dim):
        for b in range(dim):
            unit = np.zeros((dim, dim), dtype=complex)
            unit[a, b] = 1.0
            j += np.kron(np.asarray(apply_fn(unit), dtype=complex), unit)
    return j


def operation_from_choi(choi: np.ndarray, dim: int, tol: Tolerance = DEFAULT_TOL) -> QuantumOperation:
    """Recover Kraus operators from a Choi matrix, validating positivity.

    This is the only admission path for maps supplied as raw linear actions:
    a non-PSD Choi matrix (a map that is not completely positive) raises
    NotPositive.
    """
    choi = as_square_matrix(choi)
    if choi.shape[0] != dim * dim:
        raise DimensionMismatch(f"Choi matrix of shape {choi.shape} for dim {dim}")
    eig = hermitian_eig(choi, tol)
    if eig.eigenvalues[0] < -tol.psd_tol * dim:
        raise NotPositive(f"Choi matrix has eigenvalue {eig.eigenvalues[0]:.3e}")
    kraus = []
    for idx in range(dim * dim):
        lam = eig.eigenvalues[idx]
        if lam > tol.psd_tol:
            kraus.append(np.sqrt(lam) * eig.eigenvectors[:, idx].reshape(dim, dim))
    if not kraus:
        kraus.append(np.zeros((dim, dim), dtype=complex))
    return make_operation(kraus, tol)


def operation_from_action(
    apply_fn: Callable[[np.ndarray], np.ndarray], dim: int, tol: Tolerance = DEFAULT_TOL
) -> QuantumOperation:
    return operation_from_choi(choi_from_action(apply_fn, dim), dim, tol)


def operations_equal(
    a: QuantumOperation, b: QuantumOperation, tol: Tolerance = DEFAULT_TOL
) -> bool:
    if a.dim != b.dim:
        return False
    return mats_close(choi_matrix(a), choi_matrix(b), tol.eq_tol)


def make_instrument(labels, operations, tol: Tolerance = DEFAULT_TOL) -> Instrument:
    labels = tuple(str(x) for x in labels)
    if not labels or len(set(labels)) != len(labels):
        raise LabelCollision(f"labels must be distinct and nonempty: {labels}")
    ops = tuple(operations)
    if len(ops) != len(labels):
        raise InvalidInstrument(f"{len(labels)} labels for {len(ops)} operations")
    dim = ops[0].dim
    if any(op.dim != dim for op in ops):
        raise DimensionMismatch("operations have differing dimensions")
    total = sum(op.sum_kk for op in ops)
    if not mats_close(total, np.eye(dim), tol.eq_tol):
        raise InvalidInstrument(
            f"total map is not a channel (defect {frob(total - np.eye(dim)):.3e})"
        )
    return Instrument(labels, ops)


def instruments_equal(a: Instrument, b: Instrument, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Label-wise equality of the induced maps; Kraus freedom is ignored."""
    return a.labels == b.labels and all(
        operations_equal(x, y, tol) for x, y in zip(a.operations, b.operations)
    )


def luders_instrument(obs: Observable, tol: Tolerance = DEFAULT_TOL) -> Instrument:
    """The canonical compatible instrument: one Kraus operator sqrt(A_x) per outcome."""
    ops = tuple(make_operation((eff.sqrt,), tol) for eff in obs.effects)
    return make_instrument(obs.labels, ops, tol)


def trivial_instrument(obs: Observable, eta: State, tol: Tolerance = DEFAULT_TOL) -> Instrument:
    """Instrument that reports outcome statistics but always outputs ``eta``.

    The Kraus realization is fixed for reproducibility: with eigenpairs
    (alpha_i, w_i) of each outcome effect and (beta_j, v_j) of eta, the
    operators are sqrt(alpha_i beta_j) |v_j><w_i| in ascending eigenvalue
    order, zero modes dropped.
    """
    if obs.dim != eta.dim:
        raise DimensionMismatch(f"observable dim {obs.dim} vs state dim {eta.dim}")
    eta_eig = hermitian_eig(eta.matrix, tol)
    eta_pairs = [
        (float(b), eta_eig.eigenvectors[:, j])
        for j, b in enumerate(np.clip(eta_eig.eigenvalues, 0.0, None))
        if b > 0.0
    ]
    ops = []
    for eff in obs.effects:
        eff_eig = hermitian_eig(eff.matrix, tol)
        kraus = []
        for i, alpha in enumerate(np.clip(eff_eig.eigenvalues, 0.0, None)):
            if alpha <= 0.0:
                continue
            w = eff_eig.eigenvectors[:, i]
            for beta, v in eta_pairs:
                kraus.append(np.sqrt(alpha * beta) * np.outer(v, w.conj()))
        if not kraus:
            kraus.append(np.zeros((obs.dim, obs.dim), dtype=complex))
        ops.append(make_operation(kraus, tol))
    return make_instrument(obs.labels, tuple(ops), tol)


def induced_observable(inst: Instrument, tol: Tolerance = DEFAULT_TOL) -> Observable:
    """The unique observable whose statistics the instrument reproduces."""
    return make_observable(
        inst.labels, tuple(make_effect(op.sum_kk, tol) for op in inst.operations), tol
    )


def is_compatible_with(inst: Instrument, obs: Observable, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True when the instrument measures exactly this observable."""
    if inst.labels != obs.labels or inst.dim != obs.dim:
        return False
    induced = induced_observable(inst, tol)
    return all(
        mats_close(ie.matrix, oe.matrix, tol.eq_tol)
        for ie, oe in zip(induced.effects, obs.effects)
    )


def apply_instrument_subset(
    inst: Instrument, rho: State, subset, tol: Tolerance = DEFAULT_TOL
) -> PartialState:
    """Unnormalized output over a set of outcomes: sum of the branch maps."""
    wanted = {label: None for label in subset}
    if not wanted:
        raise UnknownLabel("outcome subset must be nonempty")
    for label in wanted:
        inst.index(label)
    acc = np.zeros((inst.dim, inst.dim), dtype=complex)
    for label, op in zip(inst.labels, inst.operations):
        if label in wanted:
            acc += apply_operation(op, rho, tol).matrix
    return make_partial_state(hermitize(acc), tol)


def conditional_output_state(
    inst: Instrument, rho: State, subset, tol: Tolerance = DEFAULT_TOL
) -> State:
    """Normalized post-measurement state given the outcome landed in ``subset``."""
    branch = apply_instrument_subset(inst, rho, subset, tol)
    if branch.trace <= tol.psd_tol:
        raise ConditioningOnNull(f"outcome subset has probability {branch.trace!r}")
    return make_state(branch.matrix / branch.trace, tol)


@dataclass(frozen=True)
class JointMethod:
    """Which rule defines the probability of (first A in X, then B in Y).

    - "instrument": pair the output of a compatible instrument with B,
    - "luders": same with the canonical instrument, equivalently the sum of
      singleton sequential terms,
    - "sequential": the sequential product of the subset effects themselves.
    """

    variant: str
    instrument: Optional[Instrument] = None

    def __post_init__(self) -> None:
        if self.variant not in ("instrument", "luders", "sequential"):
            raise ValueError(f"unknown joint method {self.variant!r}")
        if (self.variant == "instrument") != (self.instrument is not None):
            raise ValueError("instrument variant requires an instrument, others forbid it")

    @classmethod
    def sequential(cls) -> "JointMethod":
        return cls("sequential")

    @classmethod
    def luders(cls) -> "JointMethod":
        return cls("luders")

    @classmethod
    def from_instrument(cls, inst: Instrument) -> "JointMethod":
        return cls("instrument", inst)


def _check_subset(obs: Observable, subset) -> tuple[str, ...]:
    labels = tuple(dict.fromkeys(str(x) for x in subset))
    if not labels:
        raise UnknownLabel("outcome subset must be nonempty")
    for label in labels:
        obs.index(label)
    return labels


def joint_probability(
    rho: State,
    obs_a: Observable,
    x_subset,
    obs_b: Observable,
    y_subset,
    method: JointMethod,
    tol: Tolerance = DEFAULT_TOL,
) -> float:
    """Probability that a first measurement lands in X and a second in Y."""
    xs = _check_subset(obs_a, x_subset)
    ys = _check_subset(obs_b, y_subset)
    if obs_a.dim != obs_b.dim or rho.dim != obs_a.dim:
        raise DimensionMismatch("state and observables must share one dimension")
    b_y = obs_b.subset_effect(ys, tol)
    if method.variant == "instrument":
        inst = method.instrument
        if not is_compatible_with(inst, obs_a, tol):
            raise IncompatibleInstrument("instrument does not measure the first observable")
        branch = apply_instrument_subset(inst, rho, xs, tol)
        p = float(np.trace(branch.matrix @ b_y.matrix).real)
    elif method.variant == "luders":
        p = 0.0
        for x in xs:
            p += float(
                np.trace(rho.matrix @ seq_product(obs_a.effect_for(x), b_y, tol).matrix).real
            )
    else:
        a_x = obs_a.subset_effect(xs, tol)
        p = float(np.trace(rho.matrix @ seq_product(a_x, b_y, tol).matrix).real)
    return min(max(p, 0.0), 1.0)


def additivity_gap(
    rho: State,
    obs_a: Observable,
    x1,
    x2,
    obs_b: Observable,
    y_subset,
    method: JointMethod = JointMethod.sequential(),
    tol: Tolerance = DEFAULT_TOL,
) -> float:
    """How far the joint probability is from additive over a disjoint split of X."""
    xs1 = _check_subset(obs_a, x1)
    xs2 = _check_subset(obs_a, x2)
    if set(xs1) & set(xs2):
        raise OverlappingSubsets(f"subsets overlap: {xs1} and {xs2}")
    union = tuple(x for x in obs_a.labels if x in set(xs1) | set(xs2))
    whole = joint_probability(rho, obs_a, union, obs_b, y_subset, method, tol)
    part1 = joint_probability(rho, obs_a, xs1, obs_b, y_subset, method, tol)
    part2 = joint_probability(rho, obs_a, xs2, obs_b, y_subset, method, tol)
    return abs(whole - part1 - part2)


@dataclass(frozen=True)
class AdditivityWitness:
    """A concrete configuration where the sequential joint rule is not additive."""

    state: State
    obs_a: Observable
    x1: tuple[str, ...]
    x2: tuple[str, ...]
    obs_b: Observable
    y: tuple[str, ...]
    gap: float
    restart_index: int


def search_additivity_witness(
    seed: int = 7, restarts: int = 64, tol: Tolerance = DEFAULT_TOL
) -> AdditivityWitness:
    """Random-restart search for a large sequential-rule additivity gap.

    Candidates are qubit three-outcome observables built from two Bloch
    effects plus the complement, probed with a two-outcome observable. For
    each draw, the state is aligned with the dominant eigenvector of the
    additivity defect operator, so the reported gap equals its spectral
    radius. Restarts reduce deterministically by (gap, index) ordering.
    """
    from . import sampling
    from .states import pure_state

    rng = np.random.default_rng(seed)
    eye = np.eye(2, dtype=complex)
    best: Optional[AdditivityWitness] = None
    for idx in range(restarts):
        raw_a = sampling.random_effect(2, rng, tol)
        raw_b = sampling.random_effect(2, rng, tol)
        sa = rng.uniform(0.3, 0.9)
        sb = rng.uniform(0.3, 0.9)
        top = np.linalg.eigvalsh(sa * raw_a.matrix + sb * raw_b.matrix)[-1]
        if top > 0.98:
            sa *= 0.98 / top
            sb *= 0.98 / top
        a = make_effect(sa * raw_a.matrix, tol)
        b = make_effect(sb * raw_b.matrix, tol)
        rest = make_effect(eye - a.matrix - b.matrix, tol)
        c = sampling.random_effect(2, rng, tol)
        combined = make_effect(a.matrix + b.matrix, tol)
        defect = (
            seq_product(combined, c, tol).matrix
            - seq_product(a, c, tol).matrix
            - seq_product(b, c, tol).matrix
        )
        values, vectors = np.linalg.eigh(hermitize(defect))
        pick = int(np.argmax(np.abs(values)))
        rho = pure_state(vectors[:, pick], tol)
        obs_a = make_observable(("a1", "a2", "rest"), (a, b, rest), tol)
        obs_b = make_observable(("hit", "miss"), (c, make_effect(eye - c.matrix, tol)), tol)
        gap = additivity_gap(
            rho, obs_a, ("a1",), ("a2",), obs_b, ("hit",), JointMethod.sequential(), tol
        )
        witness = AdditivityWitness(rho, obs_a, ("a1",), ("a2",), obs_b, ("hit",), gap, idx)
        if best is None or (gap, idx) > (best.gap, best.restart_index):
            best = witness
    assert best is not None
    return best
