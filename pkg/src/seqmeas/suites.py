"""Named check suites: seeded property runs behind the ``check`` CLI command.

Each suite draws its inputs from a single seeded generator, evaluates a fixed
family of identities at their pinned thresholds, and reports every violation
with the case index and the numeric gap. Reports are deterministic for a
given (suite, dim, cases, seed).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import sampling
from .effects import additive_relative, is_compatible, make_effect, seq_product
from .errors import BadDimension, UnknownSuite
from .instruments import (
    JointMethod,
    additivity_gap,
    induced_observable,
    joint_probability,
    search_additivity_witness,
    trivial_instrument,
)
from .linalg import DEFAULT_TOL, Tolerance, frob, mats_close
from .models import (
    coarse_grained_pointers,
    dilation_for_observable,
    dilation_matches_instrument,
    model_instrument,
    ozawa_dilation,
    verify_reproducing,
)
from .observables import (
    condition_obs,
    distribution,
    fourier_mub_pair,
    is_complementary,
    is_identity_observable,
    make_observable,
    marginals,
    observables_commute,
    seq_product_obs,
    split_pair_label,
)
from .qubit import bloch_effect, conditioned_spin_closed_form, seq_spin, spin_observable
from .states import (
    condition_state_effect,
    condition_state_observable,
    conditional_probability,
    prob_of_effect,
    purity,
)


@dataclass(frozen=True)
class SuiteFailure:
    case: str
    detail: str
    gap: float


@dataclass
class SuiteReport:
    suite: str
    dim: int
    cases_run: int
    failures: list[SuiteFailure] = field(default_factory=list)
    wall_time_s: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures


class _Recorder:
    """Collects failures; every check increments the case counter."""

    def __init__(self) -> None:
        self.cases = 0
        self.failures: list[SuiteFailure] = []

    def check(self, ok: bool, case: str, detail: str, gap: float = 0.0) -> None:
        self.cases += 1
        if not ok:
            self.failures.append(SuiteFailure(case, detail, float(gap)))

    def close(self, value: float, bound: float, case: str, detail: str) -> None:
        self.check(value <= bound, case, f"{detail} (bound {bound:g})", value)


def _suite_example5x(dim, cases, seed, tol):
    rec = _Recorder()
    a = make_effect(np.diag([1.0, 0.0, 0.0]).astype(complex), tol)
    b = make_effect(np.diag([0.0, 0.0, 1.0]).astype(complex), tol)
    c = make_effect(
        np.array([[0.5, 0.5, 0.0], [0.5, 0.5, 0.0], [0.0, 0.0, 0.0]], dtype=complex), tol
    )
    rec.close(frob(seq_product(a, c, tol).matrix - a.matrix / 2), 1e-12, "a.c", "a o c = a/2")
    rec.close(frob(seq_product(b, c, tol).matrix), 1e-12, "b.c", "b o c = 0")
    combined = make_effect(a.matrix + b.matrix, tol)
    rec.close(
        frob(seq_product(combined, c, tol).matrix - a.matrix / 2),
        1e-12,
        "sum.c",
        "(a+b) o c = a/2",
    )
    rec.close(frob(c.matrix @ b.matrix), 1e-12, "cb", "c b = 0")
    comm = frob(a.matrix @ c.matrix - c.matrix @ a.matrix)
    rec.check(comm > 0.1, "ac-ca", f"a and c must not commute, norm {comm:g}", comm)
    res = additive_relative(a, b, c, tol)
    rec.check(res.holds, "additive", "additivity must hold for this triple", res.gap)
    return rec


def _suite_seqorder(dim, cases, seed, tol):
    rec = _Recorder()
    rng = np.random.default_rng(seed)
    for i in range(cases):
        if i % 4 == 3:
            a, _, b = sampling.random_commuting_triple(dim, rng, tol)
        else:
            a = sampling.random_effect(dim, rng, tol)
            b = sampling.random_effect(dim, rng, tol)
        ab = seq_product(a, b, tol)
        slack = float(np.linalg.eigvalsh(a.matrix - ab.matrix)[0])
        rec.check(slack >= -1e-9, f"{i}", f"a o b must stay below a, slack {slack:g}", -slack)
        commute = is_compatible(a, b, tol)
        symmetric = mats_close(ab.matrix, seq_product(b, a, tol).matrix, tol.eq_tol)
        rec.check(
            commute == symmetric,
            f"{i}",
            f"commutation ({commute}) and product symmetry ({symmetric}) must agree",
        )
    return rec


def _suite_conditioning(dim, cases, seed, tol):
    rec = _Recorder()
    rng = np.random.default_rng(seed)
    for i in range(cases):
        rho = sampling.random_state(dim, rng, tol)
        a = sampling.random_effect(dim, rng, tol)
        b = sampling.random_effect(dim, rng, tol)
        branch = condition_state_effect(rho, a, tol)
        lhs = float(np.trace(branch.matrix @ b.matrix).real)
        rhs = float(np.trace(rho.matrix @ seq_product(a, b, tol).matrix).real)
        rec.close(abs(lhs - rhs), 1e-10, f"{i}", "pairing conditioned state vs product")
        rec.close(
            abs(branch.trace - prob_of_effect(rho, a, tol)),
            1e-10,
            f"{i}",
            "conditioned trace vs probability",
        )
        one = conditional_probability(rho, sampling.random_observable(dim, 1, rng, tol).effects[0], a, tol)
        rec.close(abs(one - 1.0), 1e-10, f"{i}", "conditional probability of identity")
        half_a = make_effect(a.matrix / 2, tol)
        half_rest = make_effect((np.eye(dim) - a.matrix) / 2, tol)
        additive = abs(
            prob_of_effect(rho, make_effect(half_a.matrix + half_rest.matrix, tol), tol)
            - prob_of_effect(rho, half_a, tol)
            - prob_of_effect(rho, half_rest, tol)
        )
        rec.close(additive, 1e-12, f"{i}", "probability additive over orthogonal effects")
        obs = sampling.random_observable(dim, min(dim, 3), rng, tol)
        after = condition_state_observable(rho, obs, tol)
        rec.close(abs(after.trace - 1.0), 1e-10, f"{i}", "total back-action preserves trace")
    return rec


def _suite_lemma21(dim, cases, seed, tol):
    rec = _Recorder()
    rng = np.random.default_rng(seed)
    for i in range(cases):
        groups = int(rng.integers(2, dim + 1))
        basis = sampling.random_unitary(dim, rng)
        sharp = sampling.sharp_observable_from_basis(
            basis, sampling.random_partition(dim, groups, rng), tol
        )
        friendly = sampling.commuting_observable_in_basis(basis, 2, rng, tol)
        conditioned = condition_obs(friendly, sharp, tol)
        dev = max(
            frob(ce.matrix - be.matrix)
            for ce, be in zip(conditioned.effects, friendly.effects)
        )
        rec.close(dev, 1e-10, f"{i}", "conditioning must fix a commuting observable")
        rec.check(
            observables_commute(sharp, friendly, tol),
            f"{i}",
            "constructed pair must commute",
        )
        generic = sampling.random_observable(dim, 2, rng, tol)
        comm = max(
            frob(ax.matrix @ by.matrix - by.matrix @ ax.matrix)
            for ax in sharp.effects
            for by in generic.effects
        )
        if comm > 1e-6:
            dev = max(
                frob(ce.matrix - be.matrix)
                for ce, be in zip(condition_obs(generic, sharp, tol).effects, generic.effects)
            )
            rec.check(
                dev > 1e-9,
                f"{i}",
                f"noncommuting pair (norm {comm:g}) must move under conditioning",
                dev,
            )
    return rec


def _suite_lemma51(dim, cases, seed, tol):
    rec = _Recorder()
    rng = np.random.default_rng(seed)
    for i in range(cases):
        a, b, c = sampling.random_commuting_triple(dim, rng, tol)
        res = additive_relative(a, b, c, tol)
        rec.close(res.gap, 1e-10, f"{i}", "compatible pairs must be additive")
    return rec


def _suite_lemma52(dim, cases, seed, tol):
    rec = _Recorder()
    rng = np.random.default_rng(seed)
    for i in range(cases):
        a, b = sampling.random_sharp_orthogonal_pair(dim, rng, tol)
        if i % 2 == 0:
            c = sampling.effect_with_vanishing_cross_block(a, b, rng, tol)
        else:
            c = sampling.random_effect(dim, rng, tol)
        cross = frob(a.matrix @ c.matrix @ b.matrix)
        res = additive_relative(a, b, c, tol)
        vanishes = cross <= 1e-9
        rec.check(
            res.holds == vanishes,
            f"{i}",
            f"additivity ({res.holds}, gap {res.gap:g}) must match cross term "
            f"({vanishes}, norm {cross:g})",
            res.gap,
        )
    return rec


def _suite_marginals(dim, cases, seed, tol):
    rec = _Recorder()
    rng = np.random.default_rng(seed)
    for i in range(cases):
        rho = sampling.random_state(dim, rng, tol)
        obs_a = sampling.random_observable(dim, int(rng.integers(2, 4)), rng, tol)
        obs_b = sampling.random_observable(dim, int(rng.integers(2, 4)), rng, tol)
        joint = distribution(rho, seq_product_obs(obs_a, obs_b, tol), tol)
        left, right = marginals(joint, tol)
        da = distribution(rho, obs_a, tol)
        rec.close(
            max(abs(left.prob(x) - da.prob(x)) for x in obs_a.labels),
            1e-10,
            f"{i}",
            "left marginal vs first distribution",
        )
        dcond = distribution(rho, condition_obs(obs_b, obs_a, tol), tol)
        rec.close(
            max(abs(right.prob(y) - dcond.prob(y)) for y in obs_b.labels),
            1e-10,
            f"{i}",
            "right marginal vs conditioned distribution",
        )
        dpost = distribution(condition_state_observable(rho, obs_a, tol), obs_b, tol)
        rec.close(
            max(abs(right.prob(y) - dpost.prob(y)) for y in obs_b.labels),
            1e-10,
            f"{i}",
            "right marginal vs post-measurement distribution",
        )
    return rec


def _suite_complementarity(dim, cases, seed, tol):
    rec = _Recorder()
    rng = np.random.default_rng(seed)
    obs_a, obs_b = fourier_mub_pair(dim, tol)
    rec.check(is_complementary(obs_a, obs_b, tol), "pair", "bases must be complementary")
    conditioned = condition_obs(obs_b, obs_a, tol)
    rec.check(
        is_identity_observable(conditioned, tol),
        "identity",
        "conditioned observable must be trivial",
    )
    rec.close(
        max(frob(e.matrix - np.eye(dim) / dim) for e in conditioned.effects),
        1e-10,
        "identity",
        "conditioned effects vs I/d",
    )
    product = seq_product_obs(obs_a, obs_b, tol)
    worst = 0.0
    for label, eff in zip(product.labels, product.effects):
        x, _ = split_pair_label(label)
        worst = max(worst, frob(eff.matrix - obs_a.effect_for(x).matrix / dim))
    rec.close(worst, 1e-10, "product", "product effects vs A_x/d")
    for i in range(cases):
        rho = sampling.random_state(dim, rng, tol)
        dist = distribution(rho, conditioned, tol)
        rec.close(
            max(abs(p - 1.0 / dim) for p in dist.probs),
            1e-10,
            f"{i}",
            "conditioned distribution must be uniform",
        )
    return rec


def _suite_qubitforms(dim, cases, seed, tol):
    rec = _Recorder()
    rng = np.random.default_rng(seed)
    z = np.array([0.0, 0.0, 1.0])
    x = np.array([1.0, 0.0, 0.0])
    sz, sx = spin_observable(z, tol), spin_observable(x, tol)
    product = seq_product_obs(sz, sx, tol)
    halves = [
        sz.effects[0].matrix / 2,
        sz.effects[0].matrix / 2,
        sz.effects[1].matrix / 2,
        sz.effects[1].matrix / 2,
    ]
    rec.close(
        max(frob(e.matrix - h) for e, h in zip(product.effects, halves)),
        1e-12,
        "zx",
        "z-then-x effects vs half projectors",
    )
    eye = np.eye(2) / 2
    for name, (first, second) in {"x|z": (sz, sx), "z|x": (sx, sz)}.items():
        conditioned = condition_obs(second, first, tol)
        rec.close(
            max(frob(e.matrix - eye) for e in conditioned.effects),
            1e-12,
            name,
            "conditioned spin must be I/2",
        )
    comm = frob(
        sz.effects[0].matrix @ sx.effects[0].matrix
        - sx.effects[0].matrix @ sz.effects[0].matrix
    )
    rec.check(comm > 0.1, "zx-comm", f"spin projectors must not commute, norm {comm:g}", comm)
    for i in range(cases):
        m = sampling.random_direction(rng)
        n = sampling.random_direction(rng)
        closed = seq_spin(m, n, tol)
        generic = seq_product_obs(spin_observable(m, tol), spin_observable(n, tol), tol)
        rec.close(
            max(frob(c.matrix - g.matrix) for c, g in zip(closed.effects, generic.effects)),
            1e-10,
            f"{i}",
            "closed-form product vs generic",
        )
        _, closed_cond = conditioned_spin_closed_form(m, n, tol)
        generic_cond = condition_obs(spin_observable(n, tol), spin_observable(m, tol), tol)
        rec.close(
            max(
                frob(c.matrix - g.matrix)
                for c, g in zip(closed_cond.effects, generic_cond.effects)
            ),
            1e-10,
            f"{i}",
            "closed-form conditioning vs generic",
        )
    return rec


def _suite_dilation(dim, cases, seed, tol):
    rec = _Recorder()
    rng = np.random.default_rng(seed)
    for i in range(cases):
        inst = sampling.random_instrument(dim, rng, tol=tol)
        model = ozawa_dilation(inst, tol)
        rec.close(abs(purity(model.probe_state) - 1.0), 1e-10, f"{i}", "probe state purity")
        rec.close(
            max(frob(f.matrix @ f.matrix - f.matrix) for f in model.pointer.effects),
            1e-10,
            f"{i}",
            "pointer sharpness",
        )
        total = model.dim_base * model.dim_probe
        defect = max(
            frob(model.unitary.conj().T @ model.unitary - np.eye(total)),
            frob(model.unitary @ model.unitary.conj().T - np.eye(total)),
        )
        rec.close(defect, 1e-10, f"{i}", "interaction unitarity")
        rec.close(
            dilation_matches_instrument(model, inst, tol), 1e-9, f"{i}", "branch Choi equality"
        )
        deviation = verify_reproducing(
            model, trials=5, seed=seed + i + 1, expected=induced_observable(inst, tol), tol=tol
        )
        rec.close(deviation, 1e-9, f"{i}", "probability reproduction")
    return rec


def _suite_coarse(dim, cases, seed, tol):
    rec = _Recorder()
    rng = np.random.default_rng(seed)
    sz = spin_observable(np.array([0.0, 0.0, 1.0]), tol)
    sx = spin_observable(np.array([1.0, 0.0, 0.0]), tol)
    product = seq_product_obs(sz, sx, tol)
    model = dilation_for_observable(product, tol)
    first, second = coarse_grained_pointers(model, tol)
    for name, obs in (("first", first), ("second", second)):
        rec.close(
            max(frob(f.matrix @ f.matrix - f.matrix) for f in obs.effects),
            1e-10,
            name,
            "coarse-grained pointer sharpness",
        )
    rec.close(
        max(
            frob(fa.matrix @ fb.matrix - fb.matrix @ fa.matrix)
            for fa in first.effects
            for fb in second.effects
        ),
        1e-10,
        "cross",
        "coarse-grained pointers must commute",
    )
    conditioned = condition_obs(sx, sz, tol)
    for i in range(cases):
        rho = sampling.random_state(2, rng, tol)
        worst = 0.0
        for label, eff in zip(product.labels, product.effects):
            lhs = prob_of_effect(rho, eff, tol)
            rhs = model_instrument(model, rho, (label,), tol).trace
            worst = max(worst, abs(lhs - rhs))
        rec.close(worst, 1e-10, f"{i}", "pointer statistics vs sequential effects")
        base_first = max(
            abs(
                prob_of_effect(rho, sz.effect_for(x), tol)
                - model_instrument(
                    model,
                    rho,
                    [lab for lab in product.labels if split_pair_label(lab)[0] == x],
                    tol,
                ).trace
            )
            for x in sz.labels
        )
        rec.close(base_first, 1e-10, f"{i}", "first coarse-graining statistics")
        base_second = max(
            abs(
                prob_of_effect(rho, conditioned.effect_for(y), tol)
                - model_instrument(
                    model,
                    rho,
                    [lab for lab in product.labels if split_pair_label(lab)[1] == y],
                    tol,
                ).trace
            )
            for y in sx.labels
        )
        rec.close(base_second, 1e-10, f"{i}", "second coarse-graining statistics")
    # The same pointer structure describes genuinely noncommuting base content
    # once the first observable is unsharp.
    noisy_plus = bloch_effect(1.0, (0.0, 0.0, 0.8), tol)
    noisy = make_observable(
        ("+", "-"), (noisy_plus, make_effect(np.eye(2) - noisy_plus.matrix, tol)), tol
    )
    noisy_model = dilation_for_observable(seq_product_obs(noisy, sx, tol), tol)
    nfirst, nsecond = coarse_grained_pointers(noisy_model, tol)
    rec.close(
        max(
            frob(fa.matrix @ fb.matrix - fb.matrix @ fa.matrix)
            for fa in nfirst.effects
            for fb in nsecond.effects
        ),
        1e-10,
        "unsharp-cross",
        "coarse-grained pointers must commute for the unsharp pair",
    )
    ncond = condition_obs(sx, noisy, tol)
    base_comm = max(
        frob(ax.matrix @ cy.matrix - cy.matrix @ ax.matrix)
        for ax in noisy.effects
        for cy in ncond.effects
    )
    rec.check(
        base_comm > 1e-3,
        "unsharp-base",
        f"unsharp base pair must not commute, norm {base_comm:g}",
        base_comm,
    )
    return rec


def _suite_joint(dim, cases, seed, tol):
    rec = _Recorder()
    rng = np.random.default_rng(seed)
    for i in range(cases):
        rho = sampling.random_state(dim, rng, tol)
        obs_a = sampling.random_observable(dim, 3, rng, tol)
        obs_b = sampling.random_observable(dim, 2, rng, tol, prefix="y")
        eta = sampling.random_state(dim, rng, tol)
        discard = trivial_instrument(obs_a, eta, tol)
        for x_subset in (("x0",), ("x0", "x1")):
            p_inst = joint_probability(
                rho, obs_a, x_subset, obs_b, ("y0",), JointMethod.from_instrument(discard), tol
            )
            factored = prob_of_effect(rho, obs_a.subset_effect(x_subset, tol), tol) * prob_of_effect(
                eta, obs_b.effect_for("y0"), tol
            )
            rec.close(abs(p_inst - factored), 1e-12, f"{i}", "trivial instrument factorization")
        gap = additivity_gap(
            rho, obs_a, ("x0",), ("x1",), obs_b, ("y0",), JointMethod.luders(), tol
        )
        rec.close(gap, 1e-12, f"{i}", "canonical-instrument rule additivity")
        lone = joint_probability(rho, obs_a, ("x0",), obs_b, ("y0",), JointMethod.luders(), tol)
        seq = joint_probability(
            rho, obs_a, ("x0",), obs_b, ("y0",), JointMethod.sequential(), tol
        )
        rec.close(abs(lone - seq), 1e-12, f"{i}", "singleton rules agree")
    witness = search_additivity_witness(seed, restarts=64, tol=tol)
    rec.check(
        witness.gap > 0.01,
        "witness",
        f"sequential rule must show a gap above 0.01, found {witness.gap:g}",
        witness.gap,
    )
    return rec


_SUITES = {
    "example5x": (_suite_example5x, 3, "fixed three-level additivity example"),
    "seqorder": (_suite_seqorder, None, "sequential product order and commutation"),
    "conditioning": (_suite_conditioning, None, "conditioned states and probabilities"),
    "lemma21": (_suite_lemma21, None, "sharp conditioning forces commutation"),
    "lemma51": (_suite_lemma51, None, "compatibility implies relative additivity"),
    "lemma52": (_suite_lemma52, None, "sharp additivity iff vanishing cross term"),
    "marginals": (_suite_marginals, None, "joint distribution marginal identities"),
    "complementarity": (_suite_complementarity, None, "mutually unbiased basis pair"),
    "qubitforms": (_suite_qubitforms, 2, "closed-form qubit spin formulas"),
    "dilation": (_suite_dilation, None, "pure-probe unitary dilation of instruments"),
    "coarse": (_suite_coarse, 2, "commuting pointer coarse-grainings"),
    "joint": (_suite_joint, 2, "joint probability rule discriminations"),
}

SUITE_NAMES = tuple(_SUITES)


def suite_description(name: str) -> str:
    return _SUITES[name][2]


def run_check(
    suite: str, dim: int = 2, cases: int = 50, seed: int = 7, tol: Tolerance = DEFAULT_TOL
) -> SuiteReport:
    """Run one named suite and return its report.

    Suites bound to a specific dimension (for instance the qubit ones)
    override ``dim`` and record the dimension they actually used.
    """
    if suite not in _SUITES:
        raise UnknownSuite(f"unknown suite {suite!r}; choose from {', '.join(SUITE_NAMES)}")
    if not 2 <= dim <= 8:
        raise BadDimension(f"dim must lie in [2, 8], got {dim}")
    if cases < 1:
        raise BadDimension(f"cases must be at least 1, got {cases}")
    fn, forced_dim, _ = _SUITES[suite]
    used_dim = forced_dim if forced_dim is not None else dim
    start = time.perf_counter()
    rec = fn(used_dim, cases, seed, tol)
    elapsed = time.perf_counter() - start
    return SuiteReport(suite, used_dim, rec.cases, rec.failures, elapsed)
