"""Measurement models: base/probe dilations of instruments and observables.

A model couples the measured system to a probe, evolves the pair unitarily,
and reads a pointer observable off the probe. Any instrument admits such a
realization with a pure probe state and a sharp pointer; the construction
here is the minimal one, with probe dimension equal to the total number of
Kraus operators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .effects import Effect, make_effect
from .errors import (
    DimensionMismatch,
    InvalidInstrument,
    MalformedLabels,
    NotIsometry,
)
from .instruments import (
    Instrument,
    choi_from_action,
    choi_matrix,
    luders_instrument,
)
from .linalg import (
    DEFAULT_TOL,
    Tolerance,
    as_square_matrix,
    complete_isometry_to_unitary,
    frob,
    hermitize,
    partial_trace_probe,
    tensor_product,
)
from .observables import Observable, make_observable, split_pair_label
from .states import PartialState, State, make_partial_state, make_state, prob_of_effect


@dataclass(frozen=True, eq=False)
class MeasurementModel:
    """Probe state, joint unitary, and pointer observable over a base system."""

    dim_base: int
    dim_probe: int
    probe_state: State
    unitary: np.ndarray
    pointer: Observable


def make_measurement_model(
    dim_base: int,
    dim_probe: int,
    probe_state: State,
    unitary: np.ndarray,
    pointer: Observable,
    tol: Tolerance = DEFAULT_TOL,
) -> MeasurementModel:
    unitary = as_square_matrix(unitary)
    total = dim_base * dim_probe
    if unitary.shape[0] != total:
        raise DimensionMismatch(
            f"unitary of dim {unitary.shape[0]} does not match {dim_base}x{dim_probe}"
        )
    defect = frob(unitary.conj().T @ unitary - np.eye(total))
    if defect > tol.eq_tol * (1.0 + float(total)):
        raise NotIsometry(f"interaction is not unitary (defect {defect:.3e})")
    if probe_state.dim != dim_probe:
        raise DimensionMismatch(f"probe state dim {probe_state.dim} vs {dim_probe}")
    if pointer.dim != dim_probe:
        raise DimensionMismatch(f"pointer dim {pointer.dim} vs {dim_probe}")
    unitary.setflags(write=False)
    return MeasurementModel(dim_base, dim_probe, probe_state, unitary, pointer)


def _apply_model_raw(model: MeasurementModel, mat: np.ndarray, f_probe: np.ndarray) -> np.ndarray:
    """Linear action of one model branch on an arbitrary base matrix."""
    joint = model.unitary @ tensor_product(mat, model.probe_state.matrix) @ model.unitary.conj().T
    selected = joint @ tensor_product(np.eye(model.dim_base), f_probe)
    return partial_trace_probe(selected, model.dim_base, model.dim_probe)


def model_instrument(
    model: MeasurementModel, rho: State, subset, tol: Tolerance = DEFAULT_TOL
) -> PartialState:
    """Unnormalized base output when the pointer lands in ``subset``."""
    if rho.dim != model.dim_base:
        raise DimensionMismatch(f"state dim {rho.dim} vs base dim {model.dim_base}")
    f_x = model.pointer.subset_effect(subset, tol)
    return make_partial_state(hermitize(_apply_model_raw(model, rho.matrix, f_x.matrix)), tol)


def model_operation_choi(model: MeasurementModel, label: str, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Choi matrix of one pointer-outcome branch of the model instrument."""
    f_x = model.pointer.effect_for(label)
    return choi_from_action(lambda m: _apply_model_raw(model, m, f_x.matrix), model.dim_base)


def _induced_effect(model: MeasurementModel, f_probe: np.ndarray, tol: Tolerance) -> Effect:
    # tr(rho B) = tr[branch(rho)] for all rho pins B entrywise via matrix units.
    d = model.dim_base
    eff = np.zeros((d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[i, j] = 1.0
            eff[j, i] = np.trace(_apply_model_raw(model, unit, f_probe))
    return make_effect(hermitize(eff), tol)


def model_observable(model: MeasurementModel, tol: Tolerance = DEFAULT_TOL) -> Observable:
    """The base-system observable whose statistics the model reproduces."""
    effects = tuple(
        _induced_effect(model, f.matrix, tol) for f in model.pointer.effects
    )
    return make_observable(model.pointer.labels, effects, tol)


def verify_reproducing(
    model: MeasurementModel,
    trials: int,
    seed: int,
    expected: Observable | None = None,
    tol: Tolerance = DEFAULT_TOL,
) -> float:
    """Largest deviation between observable statistics and pointer statistics.

    Draws ``trials`` random base states and compares tr(rho B_x) against the
    trace of the model branch for every singleton pointer outcome. When
    ``expected`` is given it is used as B, which turns this into a check that
    the model measures the observable it is claimed to measure; by default B
    is recomputed from the model, making this a numerical self-consistency
    bound.
    """
    from . import sampling

    if trials < 1:
        raise ValueError("trials must be at least 1")
    target = expected if expected is not None else model_observable(model, tol)
    if target.labels != model.pointer.labels:
        raise DimensionMismatch("expected observable labels differ from pointer labels")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        rho = sampling.random_state(model.dim_base, rng, tol)
        for label in model.pointer.labels:
            lhs = prob_of_effect(rho, target.effect_for(label), tol)
            rhs = model_instrument(model, rho, (label,), tol).trace
            worst = max(worst, abs(lhs - rhs))
    return worst


def dilation_isometry(inst: Instrument) -> np.ndarray:
    """Stack the Kraus operators into the isometry phi -> sum K phi (x) probe basis."""
    dim = inst.dim
    dim_probe = sum(len(op.kraus) for op in inst.operations)
    v = np.zeros((dim * dim_probe, dim), dtype=complex)
    flat = 0
    for op in inst.operations:
        for k in op.kraus:
            basis = np.zeros((dim_probe, 1), dtype=complex)
            basis[flat, 0] = 1.0
            v += np.kron(k, basis)
            flat += 1
    return v


def ozawa_dilation(inst: Instrument, tol: Tolerance = DEFAULT_TOL) -> MeasurementModel:
    """Realize an instrument with a pure probe, a unitary, and a sharp pointer.

    The probe has one basis vector per Kraus operator, ordered by (outcome,
    Kraus index). The probe starts in the first basis vector; the interaction
    extends the stacking isometry to a unitary, deterministically, so that
    acting on (phi (x) first basis vector) yields sum_k K_k phi (x) e_k; the
    pointer projects onto each outcome's group of basis vectors.
    """
    dim = inst.dim
    dim_probe = sum(len(op.kraus) for op in inst.operations)
    v = dilation_isometry(inst)
    try:
        completed = complete_isometry_to_unitary(v, tol)
    except NotIsometry as exc:
        raise InvalidInstrument(f"instrument total is not a channel: {exc}") from exc

    # Column c = (base j, probe l) of the unitary must equal column j of the
    # isometry when l = 0; leftover completion columns fill the rest in order.
    total = dim * dim_probe
    perm = np.empty(total, dtype=int)
    extra = dim
    for c in range(total):
        if c % dim_probe == 0:
            perm[c] = c // dim_probe
        else:
            perm[c] = extra
            extra += 1
    unitary = completed[:, perm]

    probe0 = np.zeros((dim_probe, dim_probe), dtype=complex)
    probe0[0, 0] = 1.0
    eta = make_state(probe0, tol)

    pointer_effects = []
    flat = 0
    for op in inst.operations:
        block = np.zeros((dim_probe, dim_probe), dtype=complex)
        for _ in op.kraus:
            block[flat, flat] = 1.0
            flat += 1
        pointer_effects.append(make_effect(block, tol))
    pointer = make_observable(inst.labels, tuple(pointer_effects), tol)

    return make_measurement_model(dim, dim_probe, eta, unitary, pointer, tol)


def dilation_for_observable(obs: Observable, tol: Tolerance = DEFAULT_TOL) -> MeasurementModel:
    """Model measuring a given observable, via its canonical instrument."""
    return ozawa_dilation(luders_instrument(obs, tol), tol)


def dilation_matches_instrument(
    model: MeasurementModel, inst: Instrument, tol: Tolerance = DEFAULT_TOL
) -> float:
    """Largest Choi-matrix distance between model branches and instrument branches."""
    if model.pointer.labels != inst.labels:
        raise DimensionMismatch("model pointer labels differ from instrument labels")
    worst = 0.0
    for label, op in zip(inst.labels, inst.operations):
        worst = max(worst, frob(model_operation_choi(model, label, tol) - choi_matrix(op)))
    return worst


def coarse_grained_pointers(
    model: MeasurementModel, tol: Tolerance = DEFAULT_TOL
) -> tuple[Observable, Observable]:
    """Split a pair-labelled pointer into its two sharp coarse-grainings.

    For a pointer over labels (x,y), returns the observable summing over y
    for each x and the one summing over x for each y. For a product-outcome
    dilation the two consist of commuting projections even when the base
    observables they describe do not commute.
    """
    first_groups: dict[str, np.ndarray] = {}
    second_groups: dict[str, np.ndarray] = {}
    for label, eff in zip(model.pointer.labels, model.pointer.effects):
        x, y = split_pair_label(label)
        first_groups[x] = first_groups.get(x, 0) + eff.matrix
        second_groups[y] = second_groups.get(y, 0) + eff.matrix
    if len(first_groups) < 1 or len(second_groups) < 1:
        raise MalformedLabels("pointer labels do not form a grid of pairs")
    first = make_observable(
        tuple(first_groups), tuple(make_effect(m, tol) for m in first_groups.values()), tol
    )
    second = make_observable(
        tuple(second_groups), tuple(make_effect(m, tol) for m in second_groups.values()), tol
    )
    return first, second
