"""POVM observables: sequential products, conditioning, distributions, MUBs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .effects import Effect, atom_effect, is_compatible, make_effect, seq_product
from .errors import (
    BadDimension,
    DimensionMismatch,
    InternalInconsistency,
    LabelCollision,
    LabelMismatch,
    MalformedLabels,
    NotResolutionOfIdentity,
    UnknownLabel,
    WeightInvalid,
)
from .linalg import DEFAULT_TOL, Tolerance, frob, mats_close
from .states import State, prob_of_effect


@dataclass(frozen=True, eq=False)
class Observable:
    """Finite family of effects summing to the identity, indexed by labels."""

    labels: tuple[str, ...]
    effects: tuple[Effect, ...]

    @property
    def dim(self) -> int:
        return self.effects[0].dim

    @property
    def sharp(self) -> bool:
        return all(e.sharp for e in self.effects)

    @property
    def atomic(self) -> bool:
        return all(e.atom for e in self.effects)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabel(f"label {label!r} not in {self.labels}") from None

    def effect_for(self, label: str) -> Effect:
        return self.effects[self.index(label)]

    def subset_effect(self, labels, tol: Tolerance = DEFAULT_TOL) -> Effect:
        """Sum of the effects over a subset of outcomes (duplicates ignored)."""
        wanted = {label: None for label in labels}
        for label in wanted:
            self.index(label)
        acc = np.zeros((self.dim, self.dim), dtype=complex)
        for label, eff in zip(self.labels, self.effects):
            if label in wanted:
                acc += eff.matrix
        return make_effect(acc, tol)


@dataclass(frozen=True, eq=False)
class ProbDistribution:
    """Probabilities on an ordered finite label set."""

    labels: tuple[str, ...]
    probs: tuple[float, ...]

    def prob(self, label: str) -> float:
        try:
            return self.probs[self.labels.index(label)]
        except ValueError:
            raise UnknownLabel(f"label {label!r} not in {self.labels}") from None

    def subset(self, labels) -> float:
        wanted = set(labels)
        for label in wanted:
            if label not in self.labels:
                raise UnknownLabel(f"label {label!r} not in {self.labels}")
        return sum(p for label, p in zip(self.labels, self.probs) if label in wanted)


def _check_labels(labels) -> tuple[str, ...]:
    labels = tuple(str(x) for x in labels)
    if not labels:
        raise LabelCollision("label set must be nonempty")
    if len(set(labels)) != len(labels):
        raise LabelCollision(f"duplicate labels in {labels}")
    return labels


def make_observable(labels, effects, tol: Tolerance = DEFAULT_TOL) -> Observable:
    """Validate that the effects resolve the identity and build an Observable."""
    labels = _check_labels(labels)
    effects = tuple(effects)
    if len(labels) != len(effects):
        raise DimensionMismatch(f"{len(labels)} labels for {len(effects)} effects")
    dim = effects[0].dim
    if any(e.dim != dim for e in effects):
        raise DimensionMismatch("effects have differing dimensions")
    total = sum(e.matrix for e in effects)
    if not mats_close(total, np.eye(dim), tol.eq_tol):
        raise NotResolutionOfIdentity(
            f"effects sum deviates from identity by {frob(total - np.eye(dim)):.3e}"
        )
    return Observable(labels, effects)


def make_distribution(labels, probs, tol: Tolerance = DEFAULT_TOL) -> ProbDistribution:
    labels = _check_labels(labels)
    values = tuple(float(p) for p in probs)
    if len(values) != len(labels):
        raise DimensionMismatch(f"{len(labels)} labels for {len(values)} probabilities")
    slack = tol.eq_tol * (1 + len(values))
    if any(p < -slack or p > 1.0 + slack for p in values):
        raise InternalInconsistency(f"probability outside [0, 1]: {values}")
    if abs(sum(values) - 1.0) > slack:
        raise InternalInconsistency(f"probabilities sum to {sum(values)!r}")
    return ProbDistribution(labels, tuple(min(max(p, 0.0), 1.0) for p in values))


def trivial_observable(dim: int, label: str = "u", tol: Tolerance = DEFAULT_TOL) -> Observable:
    return make_observable((label,), (make_effect(np.eye(dim, dtype=complex), tol),), tol)


def pair_label(x: str, y: str) -> str:
    return f"({x},{y})"


def split_pair_label(label: str) -> tuple[str, str]:
    """Invert pair_label, honouring nested parentheses in the components."""
    if not (label.startswith("(") and label.endswith(")")):
        raise MalformedLabels(f"label {label!r} is not a pair")
    inner = label[1:-1]
    depth = 0
    cut = None
    for pos, ch in enumerate(inner):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise MalformedLabels(f"unbalanced parentheses in {label!r}")
        elif ch == "," and depth == 0:
            if cut is not None:
                raise MalformedLabels(f"ambiguous pair label {label!r}")
            cut = pos
    if cut is None or depth != 0:
        raise MalformedLabels(f"label {label!r} is not a pair")
    return inner[:cut], inner[cut + 1 :]


def seq_product_obs(a: Observable, b: Observable, tol: Tolerance = DEFAULT_TOL) -> Observable:
    """Observable of measuring a then b; outcomes are (x,y) pairs, x outer."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"observable dims differ: {a.dim} vs {b.dim}")
    labels = []
    effects = []
    for x, ax in zip(a.labels, a.effects):
        for y, by in zip(b.labels, b.effects):
            labels.append(pair_label(x, y))
            effects.append(seq_product(ax, by, tol))
    return make_observable(labels, effects, tol)


def condition_obs(b: Observable, a: Observable, tol: Tolerance = DEFAULT_TOL) -> Observable:
    """Observable b conditioned by a: effect at y is the sum over x of A_x o B_y."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"observable dims differ: {a.dim} vs {b.dim}")
    effects = []
    for by in b.effects:
        acc = np.zeros((a.dim, a.dim), dtype=complex)
        for ax in a.effects:
            acc += seq_product(ax, by, tol).matrix
        effects.append(make_effect(acc, tol))
    return make_observable(b.labels, effects, tol)


def observables_commute(a: Observable, b: Observable, tol: Tolerance = DEFAULT_TOL) -> bool:
    if a.dim != b.dim:
        raise DimensionMismatch(f"observable dims differ: {a.dim} vs {b.dim}")
    return all(is_compatible(ax, by, tol) for ax in a.effects for by in b.effects)


def distribution(rho: State, obs: Observable, tol: Tolerance = DEFAULT_TOL) -> ProbDistribution:
    """Outcome distribution tr(rho A_x) of an observable in a state."""
    return make_distribution(
        obs.labels, (prob_of_effect(rho, eff, tol) for eff in obs.effects), tol
    )


def marginals(
    joint: ProbDistribution, tol: Tolerance = DEFAULT_TOL
) -> tuple[ProbDistribution, ProbDistribution]:
    """Split a distribution on pair labels into left and right marginals."""
    left: dict[str, float] = {}
    right: dict[str, float] = {}
    for label, p in zip(joint.labels, joint.probs):
        x, y = split_pair_label(label)
        left[x] = left.get(x, 0.0) + p
        right[y] = right.get(y, 0.0) + p
    return (
        make_distribution(tuple(left), tuple(left.values()), tol),
        make_distribution(tuple(right), tuple(right.values()), tol),
    )


def mixture_obs(weights, observables, tol: Tolerance = DEFAULT_TOL) -> Observable:
    """Convex combination of observables sharing one label list."""
    ws = [float(w) for w in weights]
    obs_list = list(observables)
    if len(ws) != len(obs_list) or not ws:
        raise WeightInvalid(f"{len(ws)} weights for {len(obs_list)} observables")
    if any(w < -DEFAULT_TOL.psd_tol for w in ws) or abs(sum(ws) - 1.0) > tol.eq_tol:
        raise WeightInvalid(f"weights must be convex, got {ws}")
    labels = obs_list[0].labels
    dim = obs_list[0].dim
    for obs in obs_list[1:]:
        if obs.labels != labels:
            raise LabelMismatch(f"label lists differ: {obs.labels} vs {labels}")
        if obs.dim != dim:
            raise DimensionMismatch("observable dims differ in mixture")
    effects = []
    for k in range(len(labels)):
        acc = sum(w * obs.effects[k].matrix for w, obs in zip(ws, obs_list))
        effects.append(make_effect(acc, tol))
    return make_observable(labels, effects, tol)


def is_complementary(a: Observable, b: Observable, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Each definite outcome of one observable makes the other uniformly random.

    Concretely: A_x o B_y = A_x/|B| and B_y o A_x = B_y/|A| for every pair,
    which forces both conditioned observables to consist of multiples of the
    identity.
    """
    if a.dim != b.dim:
        raise DimensionMismatch(f"observable dims differ: {a.dim} vs {b.dim}")
    m, n = len(a.labels), len(b.labels)
    for ax in a.effects:
        for by in b.effects:
            if not mats_close(seq_product(ax, by, tol).matrix, ax.matrix / n, tol.eq_tol):
                return False
            if not mats_close(seq_product(by, ax, tol).matrix, by.matrix / m, tol.eq_tol):
                return False
    return True


def is_identity_observable(obs: Observable, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True when every effect is a nonnegative multiple of the identity."""
    eye = np.eye(obs.dim)
    for eff in obs.effects:
        scale = float(np.trace(eff.matrix).real) / obs.dim
        if scale < -tol.psd_tol or not mats_close(eff.matrix, scale * eye, tol.eq_tol):
            return False
    return True


def standard_basis_observable(dim: int, tol: Tolerance = DEFAULT_TOL) -> Observable:
    if dim < 1:
        raise BadDimension(f"dimension must be positive, got {dim}")
    eye = np.eye(dim, dtype=complex)
    return make_observable(
        tuple(str(j) for j in range(dim)),
        tuple(atom_effect(eye[:, j], tol) for j in range(dim)),
        tol,
    )


def fourier_basis_observable(dim: int, tol: Tolerance = DEFAULT_TOL) -> Observable:
    if dim < 1:
        raise BadDimension(f"dimension must be positive, got {dim}")
    omega = np.exp(2j * np.pi / dim)
    effects = []
    for k in range(dim):
        vec = np.array([omega ** (j * k) for j in range(dim)], dtype=complex) / np.sqrt(dim)
        effects.append(atom_effect(vec, tol))
    return make_observable(tuple(str(k) for k in range(dim)), tuple(effects), tol)


def fourier_mub_pair(dim: int, tol: Tolerance = DEFAULT_TOL) -> tuple[Observable, Observable]:
    """Atomic observables on the standard and discrete-Fourier bases.

    The two bases are mutually unbiased in every dimension, so the returned
    observables are complementary.
    """
    if dim < 2:
        raise BadDimension(f"need dimension >= 2, got {dim}")
    return standard_basis_observable(dim, tol), fourier_basis_observable(dim, tol)


def search_conditioning_counterexamples(
    dim: int,
    cases: int,
    seed: int,
    tol: Tolerance = DEFAULT_TOL,
    deviation_tol: float = 1e-6,
    commutator_floor: float = 1e-6,
) -> list[dict]:
    """Look for unsharp observables where conditioning fixes b without commuting.

    For sharp conditioning observables, invariance of b under conditioning
    forces commutation; whether the same holds for unsharp ones is open. This
    utility scans random pairs and reports any candidate with conditioning
    deviation below ``deviation_tol`` despite a commutator above
    ``commutator_floor``. It asserts nothing: an empty list is not evidence.
    """
    from . import sampling

    rng = np.random.default_rng(seed)
    candidates = []
    for case in range(cases):
        a = sampling.random_observable(dim, min(dim, 3), rng, tol)
        b = sampling.random_observable(dim, 2, rng, tol)
        conditioned = condition_obs(b, a, tol)
        deviation = max(
            frob(cy.matrix - by.matrix)
            for cy, by in zip(conditioned.effects, b.effects)
        )
        commutator = max(
            frob(ax.matrix @ by.matrix - by.matrix @ ax.matrix)
            for ax in a.effects
            for by in b.effects
        )
        if deviation <= deviation_tol and commutator > commutator_floor:
            candidates.append(
                {"case": case, "deviation": deviation, "commutator": commutator}
            )
    return candidates
