import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from seqmeas import sampling
from seqmeas.effects import identity_effect, make_effect, seq_product
from seqmeas.errors import (
    BadDimension,
    LabelCollision,
    LabelMismatch,
    MalformedLabels,
    NotResolutionOfIdentity,
    UnknownLabel,
    WeightInvalid,
)
from seqmeas.linalg import frob
from seqmeas.observables import (
    condition_obs,
    distribution,
    fourier_mub_pair,
    is_complementary,
    is_identity_observable,
    make_distribution,
    make_observable,
    marginals,
    mixture_obs,
    observables_commute,
    pair_label,
    search_conditioning_counterexamples,
    seq_product_obs,
    split_pair_label,
    standard_basis_observable,
    trivial_observable,
)
from seqmeas.qubit import spin_observable
from seqmeas.states import maximally_mixed, pure_state

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.sampled_from([2, 3, 4])

Z = np.array([0.0, 0.0, 1.0])
X = np.array([1.0, 0.0, 0.0])


class TestConstruction:
    def test_trivial(self):
        obs = trivial_observable(3)
        assert obs.labels == ("u",) and obs.sharp and not obs.atomic

    def test_spin_is_sharp_atomic(self):
        obs = spin_observable(Z)
        assert obs.sharp and obs.atomic

    def test_rejects_wrong_normalization(self):
        eff = identity_effect(2)
        with pytest.raises(NotResolutionOfIdentity):
            make_observable(("a", "b"), (eff, eff))

    def test_rejects_duplicate_labels(self):
        halves = make_effect(np.eye(2, dtype=complex) / 2)
        with pytest.raises(LabelCollision):
            make_observable(("a", "a"), (halves, halves))

    def test_subset_effect(self):
        obs = standard_basis_observable(3)
        eff = obs.subset_effect(("0", "2"))
        assert frob(eff.matrix - np.diag([1.0, 0.0, 1.0])) < 1e-12
        assert frob(obs.subset_effect(obs.labels).matrix - np.eye(3)) < 1e-12
        with pytest.raises(UnknownLabel):
            obs.subset_effect(("9",))


class TestPairLabels:
    def test_round_trip(self):
        assert split_pair_label(pair_label("+", "-")) == ("+", "-")

    def test_nested(self):
        nested = pair_label(pair_label("a", "b"), "c")
        assert split_pair_label(nested) == ("(a,b)", "c")

    def test_malformed(self):
        for bad in ("plain", "(a,b,c)", "(a,(b)"):
            with pytest.raises(MalformedLabels):
                split_pair_label(bad)


class TestSeqProductObs:
    def test_spin_zx_values(self):
        sz, sx = spin_observable(Z), spin_observable(X)
        prod = seq_product_obs(sz, sx)
        assert prod.labels == ("(+,+)", "(+,-)", "(-,+)", "(-,-)")
        expected = [
            sz.effects[0].matrix / 2,
            sz.effects[0].matrix / 2,
            sz.effects[1].matrix / 2,
            sz.effects[1].matrix / 2,
        ]
        for eff, want in zip(prod.effects, expected):
            assert frob(eff.matrix - want) < 1e-12

    def test_product_with_trivial_relabels(self):
        rng = np.random.default_rng(0)
        obs = sampling.random_observable(3, 2, rng)
        prod = seq_product_obs(obs, trivial_observable(3))
        assert prod.labels == ("(x0,u)", "(x1,u)")
        for eff, orig in zip(prod.effects, obs.effects):
            assert frob(eff.matrix - orig.matrix) < 1e-10

    def test_complementary_pair_repeats_first(self):
        obs_a, obs_b = fourier_mub_pair(3)
        prod = seq_product_obs(obs_a, obs_b)
        for label, eff in zip(prod.labels, prod.effects):
            x, _ = split_pair_label(label)
            assert frob(eff.matrix - obs_a.effect_for(x).matrix / 3) < 1e-10


class TestConditionObs:
    def test_spin_x_given_z_is_flat(self):
        cond = condition_obs(spin_observable(X), spin_observable(Z))
        for eff in cond.effects:
            assert frob(eff.matrix - np.eye(2) / 2) < 1e-12

    @given(seeds)
    def test_closed_form_for_random_directions(self, seed):
        from seqmeas.qubit import conditioned_spin_closed_form

        rng = np.random.default_rng(seed)
        m = sampling.random_direction(rng)
        n = sampling.random_direction(rng)
        _, closed = conditioned_spin_closed_form(m, n)
        generic = condition_obs(spin_observable(n), spin_observable(m))
        for ce, ge in zip(closed.effects, generic.effects):
            assert frob(ce.matrix - ge.matrix) < 1e-10

    def test_commuting_pair_unchanged(self):
        a = make_observable(
            ("0", "1"),
            (make_effect(np.diag([0.7, 0.2]).astype(complex)),
             make_effect(np.diag([0.3, 0.8]).astype(complex))),
        )
        b = standard_basis_observable(2)
        assert observables_commute(a, b)
        cond = condition_obs(b, a)
        for ce, be in zip(cond.effects, b.effects):
            assert frob(ce.matrix - be.matrix) < 1e-12

    @given(seeds, dims)
    def test_sharp_fixed_point_forces_commutation(self, seed, dim):
        # conditioning by a sharp observable either moves b or the pair commutes
        rng = np.random.default_rng(seed)
        groups = int(rng.integers(2, dim + 1))
        basis = sampling.random_unitary(dim, rng)
        sharp = sampling.sharp_observable_from_basis(
            basis, sampling.random_partition(dim, groups, rng)
        )
        friendly = sampling.commuting_observable_in_basis(basis, 2, rng)
        cond = condition_obs(friendly, sharp)
        assert all(
            frob(ce.matrix - be.matrix) < 1e-10
            for ce, be in zip(cond.effects, friendly.effects)
        )
        assert observables_commute(sharp, friendly)

        generic = sampling.random_observable(dim, 2, rng)
        commutator = max(
            frob(ax.matrix @ by.matrix - by.matrix @ ax.matrix)
            for ax in sharp.effects
            for by in generic.effects
        )
        if commutator > 1e-6:
            moved = max(
                frob(ce.matrix - be.matrix)
                for ce, be in zip(condition_obs(generic, sharp).effects, generic.effects)
            )
            assert moved > 1e-9


class TestDistributionAndMarginals:
    def test_mixed_state_is_uniform(self):
        dist = distribution(maximally_mixed(2), spin_observable(Z))
        assert np.allclose(dist.probs, [0.5, 0.5], atol=1e-12)

    @given(seeds)
    def test_bloch_distribution(self, seed):
        from seqmeas.qubit import bloch_state

        rng = np.random.default_rng(seed)
        r = 0.8 * sampling.random_direction(rng)
        n = sampling.random_direction(rng)
        dist = distribution(bloch_state(r), spin_observable(n))
        dot = float(r @ n)
        assert abs(dist.prob("+") - (1 + dot) / 2) < 1e-12
        assert abs(dist.prob("-") - (1 - dot) / 2) < 1e-12

    def test_marginals_of_spin_product(self):
        joint = distribution(
            maximally_mixed(2), seq_product_obs(spin_observable(Z), spin_observable(X))
        )
        left, right = marginals(joint)
        assert np.allclose(left.probs, [0.5, 0.5], atol=1e-12)
        assert np.allclose(right.probs, [0.5, 0.5], atol=1e-12)

    def test_uniform_2x3(self):
        labels = [pair_label(x, y) for x in "ab" for y in "012"]
        joint = make_distribution(labels, [1 / 6] * 6)
        left, right = marginals(joint)
        assert np.allclose(left.probs, [0.5, 0.5])
        assert np.allclose(right.probs, [1 / 3] * 3)

    @given(seeds, dims)
    def test_atomic_first_factorizes(self, seed, dim):
        rng = np.random.default_rng(seed)
        rho = sampling.random_state(dim, rng)
        obs_a = standard_basis_observable(dim)
        obs_b = sampling.random_observable(dim, 2, rng, prefix="y")
        joint = distribution(rho, seq_product_obs(obs_a, obs_b))
        for label, p in zip(joint.labels, joint.probs):
            x, y = split_pair_label(label)
            basis_vec = np.eye(dim)[:, int(x)]
            expected = distribution(rho, obs_a).prob(x) * distribution(
                pure_state(basis_vec), obs_b
            ).prob(y)
            assert abs(p - expected) < 1e-10

    @given(seeds, dims)
    def test_marginal_chain(self, seed, dim):
        from seqmeas.states import condition_state_observable

        rng = np.random.default_rng(seed)
        rho = sampling.random_state(dim, rng)
        obs_a = sampling.random_observable(dim, 2, rng)
        obs_b = sampling.random_observable(dim, 3, rng, prefix="y")
        joint = distribution(rho, seq_product_obs(obs_a, obs_b))
        left, right = marginals(joint)
        da = distribution(rho, obs_a)
        assert max(abs(left.prob(x) - da.prob(x)) for x in obs_a.labels) < 1e-10
        dc = distribution(rho, condition_obs(obs_b, obs_a))
        assert max(abs(right.prob(y) - dc.prob(y)) for y in obs_b.labels) < 1e-10
        dp = distribution(condition_state_observable(rho, obs_a), obs_b)
        assert max(abs(right.prob(y) - dp.prob(y)) for y in obs_b.labels) < 1e-10


class TestMixture:
    def test_single_weight(self):
        obs = spin_observable(Z)
        mixed = mixture_obs([1.0], [obs])
        for me, oe in zip(mixed.effects, obs.effects):
            assert frob(me.matrix - oe.matrix) < 1e-12

    def test_half_half_spins(self):
        sz, sx = spin_observable(Z), spin_observable(X)
        mixed = mixture_obs([0.5, 0.5], [sz, sx])
        assert not mixed.sharp
        for me, ze, xe in zip(mixed.effects, sz.effects, sx.effects):
            assert frob(me.matrix - (ze.matrix + xe.matrix) / 2) < 1e-12

    @given(seeds)
    def test_distribution_is_affine(self, seed):
        rng = np.random.default_rng(seed)
        rho = sampling.random_state(3, rng)
        obs1 = sampling.random_observable(3, 2, rng)
        obs2 = sampling.random_observable(3, 2, rng)
        lam = float(rng.random())
        mixed = mixture_obs([lam, 1 - lam], [obs1, obs2])
        d_mixed = distribution(rho, mixed)
        d1, d2 = distribution(rho, obs1), distribution(rho, obs2)
        for label in mixed.labels:
            want = lam * d1.prob(label) + (1 - lam) * d2.prob(label)
            assert abs(d_mixed.prob(label) - want) < 1e-10

    def test_rejects_bad_weights_and_labels(self):
        sz = spin_observable(Z)
        with pytest.raises(WeightInvalid):
            mixture_obs([0.6, 0.6], [sz, sz])
        other = standard_basis_observable(2)
        with pytest.raises(LabelMismatch):
            mixture_obs([0.5, 0.5], [sz, other])


class TestComplementarity:
    def test_standard_vs_fourier_qubit(self):
        obs_a, obs_b = fourier_mub_pair(2)
        assert is_complementary(obs_a, obs_b)

    def test_self_pair_not_complementary(self):
        obs = standard_basis_observable(2)
        assert not is_complementary(obs, obs)

    @pytest.mark.parametrize("dim", [2, 3, 5])
    def test_fourier_overlaps(self, dim):
        obs_a, obs_b = fourier_mub_pair(dim)
        for ax in obs_a.effects:
            for by in obs_b.effects:
                overlap = float(np.trace(ax.matrix @ by.matrix).real)
                assert abs(overlap - 1.0 / dim) < 1e-12

    def test_atomic_iff_unbiased(self):
        # a rotated-but-biased basis pair must fail the test
        theta = 0.4
        basis = np.array(
            [[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]]
        )
        from seqmeas.effects import atom_effect

        biased = make_observable(
            ("0", "1"), (atom_effect(basis[:, 0]), atom_effect(basis[:, 1]))
        )
        assert not is_complementary(standard_basis_observable(2), biased)

    def test_conditioned_is_identity_observable(self):
        obs_a, obs_b = fourier_mub_pair(3)
        cond_b = condition_obs(obs_b, obs_a)
        cond_a = condition_obs(obs_a, obs_b)
        assert is_identity_observable(cond_b)
        assert is_identity_observable(cond_a)
        for eff in cond_b.effects:
            assert frob(eff.matrix - np.eye(3) / 3) < 1e-10

    @pytest.mark.parametrize("dim", [2, 3])
    def test_nested_products_collapse(self, dim):
        obs_a, obs_b = fourier_mub_pair(dim)
        n = len(obs_b.labels)
        m = len(obs_a.labels)
        for ax in obs_a.effects:
            for by in obs_b.effects:
                axy = seq_product(ax, by)
                for bz in obs_b.effects:
                    left = seq_product(axy, bz)
                    assert frob(left.matrix - ax.matrix / n**2) < 1e-10
                    right = seq_product(bz, axy)
                    assert frob(right.matrix - bz.matrix / (n * m)) < 1e-10

    def test_uniform_conditioned_distribution(self):
        rng = np.random.default_rng(9)
        obs_a, obs_b = fourier_mub_pair(5)
        cond = condition_obs(obs_b, obs_a)
        for _ in range(5):
            rho = sampling.random_state(5, rng)
            dist = distribution(rho, cond)
            assert max(abs(p - 0.2) for p in dist.probs) < 1e-10

    def test_bad_dimension(self):
        with pytest.raises(BadDimension):
            fourier_mub_pair(1)


def test_counterexample_search_returns_empty():
    found = search_conditioning_counterexamples(dim=3, cases=25, seed=11)
    assert found == []
