"""Closed-form qubit constructions used as independent cross-checks.

Spin observables along a direction, their eigenvectors, and the explicit
transition-probability formulas for repeated spin measurements are all
available in closed form on a qubit. The generic machinery elsewhere in the
package must reproduce these formulas, which makes this module the oracle
side of the cross-validation tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .effects import Effect, make_effect
from .errors import NotUnit
from .linalg import DEFAULT_TOL, Tolerance, frob
from .observables import (
    Observable,
    make_observable,
    pair_label,
    seq_product_obs,
)
from .states import State, make_state

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

_POLE_EPS = 1e-12

SIGNS = ("+", "-")


def pauli_dot(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v[0] * PAULI_X + v[1] * PAULI_Y + v[2] * PAULI_Z


def as_direction(v, atol: float = 1e-6) -> np.ndarray:
    """Validate and exactly normalize a 3-vector whose norm is within atol of 1."""
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.shape != (3,):
        raise NotUnit(f"direction needs 3 components, got {v.shape}")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > atol:
        raise NotUnit(f"direction norm {norm!r} is not 1 within {atol}")
    out = v / norm
    out.setflags(write=False)
    return out


def bloch_state(r, tol: Tolerance = DEFAULT_TOL) -> State:
    """Qubit state (I + r.sigma)/2 for a Bloch vector of length at most 1."""
    r = np.asarray(r, dtype=float).reshape(-1)
    if r.shape != (3,):
        raise NotUnit(f"Bloch vector needs 3 components, got {r.shape}")
    return make_state((np.eye(2, dtype=complex) + pauli_dot(r)) / 2.0, tol)


def bloch_effect(alpha: float, n, tol: Tolerance = DEFAULT_TOL) -> Effect:
    """Qubit effect (alpha I + n.sigma)/2; valid iff |n| <= alpha <= 2 - |n|."""
    n = np.asarray(n, dtype=float).reshape(-1)
    return make_effect((alpha * np.eye(2, dtype=complex) + pauli_dot(n)) / 2.0, tol)


def spin_effect(n, sign: str, tol: Tolerance = DEFAULT_TOL) -> Effect:
    n = as_direction(n)
    if sign == "+":
        return make_effect((np.eye(2, dtype=complex) + pauli_dot(n)) / 2.0, tol)
    if sign == "-":
        return make_effect((np.eye(2, dtype=complex) - pauli_dot(n)) / 2.0, tol)
    raise NotUnit(f"sign must be '+' or '-', got {sign!r}")


def spin_observable(n, tol: Tolerance = DEFAULT_TOL) -> Observable:
    """Two-outcome spin-component observable along a unit direction."""
    n = as_direction(n)
    plus = spin_effect(n, "+", tol)
    minus = make_effect(np.eye(2, dtype=complex) - plus.matrix, tol)
    return make_observable(SIGNS, (plus, minus), tol)


def _phase_fix(vec: np.ndarray) -> np.ndarray:
    # Global phase convention: last component of visible magnitude real positive.
    for comp in vec[::-1]:
        if abs(comp) > 1e-14:
            return vec * (abs(comp) / comp)
    return vec


def spin_eigenvectors(n, tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Unit eigenvectors of the spin-up effect for eigenvalues 1 and 0.

    Away from the poles the explicit branch formulas are used; directions
    within 1e-12 of a pole are routed to the pole vectors (1,0) and (0,1).
    """
    n = as_direction(n)
    n1, n2, n3 = n
    if n3 >= 1.0 - _POLE_EPS:
        plus = np.array([1.0, 0.0], dtype=complex)
    else:
        plus = np.array([n1 - 1j * n2, 1.0 - n3], dtype=complex) / np.sqrt(2.0 * (1.0 - n3))
    if n3 <= -1.0 + _POLE_EPS:
        minus = np.array([0.0, 1.0], dtype=complex)
    else:
        minus = np.array([1j * n2 - n1, 1.0 + n3], dtype=complex) / np.sqrt(2.0 * (1.0 + n3))
    return _phase_fix(plus), _phase_fix(minus)


def transition_prob(u: np.ndarray, v: np.ndarray) -> float:
    return float(abs(np.vdot(u, v)) ** 2)


def seq_spin(m, n, tol: Tolerance = DEFAULT_TOL) -> Observable:
    """Closed form of measuring spin along m then along n.

    Effect at (s,t) is the transition probability between the s eigenvector
    of the first spin and the t eigenvector of the second, times the first
    spin's s projector.
    """
    m_vecs = spin_eigenvectors(m, tol)
    n_vecs = spin_eigenvectors(n, tol)
    m_effs = (spin_effect(m, "+", tol), spin_effect(m, "-", tol))
    labels = []
    effects = []
    for s, (mv, me) in enumerate(zip(m_vecs, m_effs)):
        for t, nv in enumerate(n_vecs):
            labels.append(pair_label(SIGNS[s], SIGNS[t]))
            effects.append(make_effect(transition_prob(mv, nv) * me.matrix, tol))
    return make_observable(labels, effects, tol)


def conditioned_spin_closed_form(
    m, n, tol: Tolerance = DEFAULT_TOL
) -> tuple[float, Observable]:
    """Closed form of the second spin conditioned on the first.

    Returns the overlap a = |<up_m, up_n>|^2 together with the observable
    whose effects are (2a-1) S_up + (1-a) I and (1-2a) S_up + a I.
    """
    m_vecs = spin_eigenvectors(m, tol)
    n_vecs = spin_eigenvectors(n, tol)
    a = transition_prob(m_vecs[0], n_vecs[0])
    up = spin_effect(m, "+", tol).matrix
    eye = np.eye(2, dtype=complex)
    plus = make_effect((2.0 * a - 1.0) * up + (1.0 - a) * eye, tol)
    minus = make_effect((1.0 - 2.0 * a) * up + a * eye, tol)
    return a, make_observable(SIGNS, (plus, minus), tol)


@dataclass(frozen=True)
class SpinCoefficients:
    """Transition-probability coefficients for three spin measurements.

    ``c[(s,t,u)]`` multiplies the s projector of the first spin in the effect
    describing outcomes t of the second and u of the third measurement;
    ``a`` is the plus-plus overlap of the first two directions. For each s,
    the eight coefficients sum to 1 over (t,u).
    """

    a: float
    c: dict[tuple[str, str, str], float]


def triple_spin_coefficients(m, n, r, tol: Tolerance = DEFAULT_TOL) -> SpinCoefficients:
    m_vecs = spin_eigenvectors(m, tol)
    n_vecs = spin_eigenvectors(n, tol)
    r_vecs = spin_eigenvectors(r, tol)
    coeff = {}
    for s, mv in enumerate(m_vecs):
        for t, nv in enumerate(n_vecs):
            for u, rv in enumerate(r_vecs):
                coeff[(SIGNS[s], SIGNS[t], SIGNS[u])] = transition_prob(
                    nv, rv
                ) * transition_prob(mv, nv)
    a = transition_prob(m_vecs[0], n_vecs[0])
    for s in SIGNS:
        row = sum(coeff[(s, t, u)] for t in SIGNS for u in SIGNS)
        if abs(row - 1.0) > 1e-10:
            raise AssertionError(f"coefficient rows must sum to 1, got {row!r}")
    return SpinCoefficients(a, coeff)


def conditioned_double_spin(m, n, r, tol: Tolerance = DEFAULT_TOL) -> Observable:
    """Closed form of (second spin then third spin) conditioned on the first."""
    coeff = triple_spin_coefficients(m, n, r, tol).c
    up = spin_effect(m, "+", tol).matrix
    down = spin_effect(m, "-", tol).matrix
    labels = []
    effects = []
    for t in SIGNS:
        for u in SIGNS:
            labels.append(pair_label(t, u))
            effects.append(make_effect(coeff[("+", t, u)] * up + coeff[("-", t, u)] * down, tol))
    return make_observable(labels, effects, tol)


def double_conditioned_spin(m, n, r, tol: Tolerance = DEFAULT_TOL) -> Observable:
    """Closed form of ((third | second) | first) with coefficients grouped over t."""
    coeff = triple_spin_coefficients(m, n, r, tol).c
    up = spin_effect(m, "+", tol).matrix
    down = spin_effect(m, "-", tol).matrix
    effects = []
    for u in SIGNS:
        plus_weight = sum(coeff[("+", t, u)] for t in SIGNS)
        minus_weight = sum(coeff[("-", t, u)] for t in SIGNS)
        effects.append(make_effect(plus_weight * up + minus_weight * down, tol))
    return make_observable(SIGNS, tuple(effects), tol)


def associativity_gap(m, n, r, tol: Tolerance = DEFAULT_TOL) -> float:
    """Largest effect-wise distance between the two groupings of three spins.

    Both groupings enumerate outcomes in the same (s,t,u) order, so effects
    are compared positionally.
    """
    sm = spin_observable(m, tol)
    sn = spin_observable(n, tol)
    sr = spin_observable(r, tol)
    left = seq_product_obs(seq_product_obs(sm, sn, tol), sr, tol)
    right = seq_product_obs(sm, seq_product_obs(sn, sr, tol), tol)
    return max(
        frob(le.matrix - re.matrix) for le, re in zip(left.effects, right.effects)
    )
