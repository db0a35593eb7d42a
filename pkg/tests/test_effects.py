import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from seqmeas import sampling
from seqmeas.effects import (
    additive_relative,
    atom_effect,
    condition_effect,
    identity_effect,
    is_compatible,
    is_perp,
    make_effect,
    seq_product,
    zero_effect,
)
from seqmeas.errors import (
    DimensionMismatch,
    ExceedsIdentity,
    NotOrthogonal,
    NotPositive,
)
from seqmeas.linalg import frob, loewner_leq
from seqmeas.qubit import bloch_effect, spin_effect

dims = st.sampled_from([2, 3, 4])
seeds = st.integers(min_value=0, max_value=2**32 - 1)


class TestConstruction:
    def test_identity_flags(self):
        eff = identity_effect(2)
        assert eff.sharp and not eff.atom

    def test_atom_from_unnormalized_vector(self):
        eff = atom_effect(np.array([2.0, 0.0]))
        assert eff.atom and eff.sharp
        assert frob(eff.matrix - np.diag([1.0, 0.0])) < 1e-12

    def test_bloch_positivity_window(self):
        n = np.array([0.6, 0.0, 0.8])
        bloch_effect(1.0, n)  # |n| = 1 = alpha is the boundary case
        with pytest.raises(NotPositive):
            bloch_effect(0.9, n)
        with pytest.raises(ExceedsIdentity):
            bloch_effect(1.2, n)

    def test_rejects_exceeding_identity(self):
        with pytest.raises(ExceedsIdentity):
            make_effect(2.0 * np.eye(2, dtype=complex))

    def test_cached_sqrt_squares_back(self):
        rng = np.random.default_rng(5)
        eff = sampling.random_effect(3, rng)
        assert frob(eff.sqrt @ eff.sqrt - eff.matrix) < 1e-9


class TestSeqProduct:
    def test_spin_z_then_x_halves(self):
        plus_z = spin_effect([0, 0, 1], "+")
        plus_x = spin_effect([1, 0, 0], "+")
        minus_x = spin_effect([1, 0, 0], "-")
        for second in (plus_x, minus_x):
            out = seq_product(plus_z, second)
            assert frob(out.matrix - plus_z.matrix / 2) < 1e-12

    def test_unit_and_absorbing(self):
        rng = np.random.default_rng(1)
        b = sampling.random_effect(3, rng)
        assert frob(seq_product(identity_effect(3), b).matrix - b.matrix) < 1e-12
        assert frob(seq_product(b, zero_effect(3)).matrix) < 1e-12

    @given(seeds)
    def test_atom_sandwich_is_expectation(self, seed):
        rng = np.random.default_rng(seed)
        phi = sampling.random_unit_vector(3, rng)
        b = sampling.random_effect(3, rng)
        out = seq_product(atom_effect(phi), b)
        expectation = float(np.vdot(phi, b.matrix @ phi).real)
        assert frob(out.matrix - expectation * np.outer(phi, phi.conj())) < 1e-10

    @given(seeds, dims)
    def test_stays_below_first_factor(self, seed, dim):
        rng = np.random.default_rng(seed)
        a = sampling.random_effect(dim, rng)
        b = sampling.random_effect(dim, rng)
        out = seq_product(a, b)
        assert loewner_leq(out.matrix, a.matrix)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            seq_product(identity_effect(2), identity_effect(3))

    def test_condition_effect_alias(self):
        rng = np.random.default_rng(2)
        a = sampling.random_effect(2, rng)
        b = sampling.random_effect(2, rng)
        assert frob(condition_effect(b, a).matrix - seq_product(a, b).matrix) == 0.0


class TestCompatibility:
    def test_diagonal_pair(self):
        a = make_effect(np.diag([0.2, 0.9]).astype(complex))
        b = make_effect(np.diag([0.5, 0.1]).astype(complex))
        assert is_compatible(a, b)

    def test_spin_pair_not_compatible(self):
        plus_z = spin_effect([0, 0, 1], "+")
        plus_x = spin_effect([1, 0, 0], "+")
        comm = plus_z.matrix @ plus_x.matrix - plus_x.matrix @ plus_z.matrix
        assert abs(frob(comm) - 1 / np.sqrt(2)) < 1e-12
        assert not is_compatible(plus_z, plus_x)

    @given(seeds, dims)
    def test_commutation_iff_product_symmetric(self, seed, dim):
        rng = np.random.default_rng(seed)
        if seed % 2 == 0:
            a = sampling.random_effect(dim, rng)
            b = sampling.random_effect(dim, rng)
        else:
            a, _, b = sampling.random_commuting_triple(dim, rng)
        symmetric = frob(
            seq_product(a, b).matrix - seq_product(b, a).matrix
        ) <= 1e-9 * (1 + frob(a.matrix))
        assert is_compatible(a, b) == symmetric


class TestConditioningLinearity:
    @given(seeds)
    def test_additive_over_orthogonal_pieces(self, seed):
        rng = np.random.default_rng(seed)
        a = sampling.random_effect(3, rng)
        u = sampling.random_effect(3, rng)
        b1 = make_effect(u.matrix / 2)
        b2 = make_effect((np.eye(3) - u.matrix) / 2)
        assert is_perp(b1, b2)
        combined = condition_effect(make_effect(b1.matrix + b2.matrix), a)
        split = condition_effect(b1, a).matrix + condition_effect(b2, a).matrix
        assert frob(combined.matrix - split) < 1e-10

    @given(seeds)
    def test_affine_in_conditioned_argument(self, seed):
        rng = np.random.default_rng(seed)
        a = sampling.random_effect(2, rng)
        b1 = sampling.random_effect(2, rng)
        b2 = sampling.random_effect(2, rng)
        lam = rng.random()
        mix = make_effect(lam * b1.matrix + (1 - lam) * b2.matrix)
        lhs = condition_effect(mix, a).matrix
        rhs = lam * condition_effect(b1, a).matrix + (1 - lam) * condition_effect(b2, a).matrix
        assert frob(lhs - rhs) < 1e-10


class TestAdditiveRelative:
    def triple(self):
        a = make_effect(np.diag([1.0, 0.0, 0.0]).astype(complex))
        b = make_effect(np.diag([0.0, 0.0, 1.0]).astype(complex))
        c = make_effect(
            0.5 * np.array([[1, 1, 0], [1, 1, 0], [0, 0, 0]], dtype=complex)
        )
        return a, b, c

    def test_three_level_example(self):
        a, b, c = self.triple()
        res = additive_relative(a, b, c)
        assert res.holds and res.gap < 1e-12
        assert frob(seq_product(make_effect(a.matrix + b.matrix), c).matrix - a.matrix / 2) < 1e-12
        # the pair is additive even though a and c do not commute
        assert not is_compatible(a, c)
        assert frob(c.matrix @ b.matrix) < 1e-12

    def test_identity_reference_always_additive(self):
        rng = np.random.default_rng(3)
        a, b = sampling.random_sharp_orthogonal_pair(3, rng)
        res = additive_relative(a, b, identity_effect(3))
        assert res.holds

    def test_plus_projector_fails_with_known_gap(self):
        a = atom_effect(np.array([1.0, 0.0]))
        b = atom_effect(np.array([0.0, 1.0]))
        c = atom_effect(np.array([1.0, 1.0]))
        res = additive_relative(a, b, c)
        assert not res.holds
        # direct 2x2 arithmetic: (a+b) o c = c, a o c = a/2, b o c = b/2
        assert abs(res.gap - frob(c.matrix - np.eye(2) / 2)) < 1e-12
        cross = a.matrix @ c.matrix @ b.matrix
        assert frob(cross - 0.5 * np.outer([1, 0], [0, 1])) < 1e-12

    def test_rejects_nonorthogonal(self):
        rng = np.random.default_rng(4)
        a = sampling.random_effect(2, rng)
        with pytest.raises(NotOrthogonal):
            additive_relative(a, identity_effect(2), identity_effect(2))

    @given(seeds, dims)
    def test_compatible_pairs_additive(self, seed, dim):
        rng = np.random.default_rng(seed)
        a, b, c = sampling.random_commuting_triple(dim, rng)
        res = additive_relative(a, b, c)
        assert res.holds and res.gap < 1e-10

    @given(seeds, dims)
    def test_sharp_iff_vanishing_cross_term(self, seed, dim):
        rng = np.random.default_rng(seed)
        a, b = sampling.random_sharp_orthogonal_pair(dim, rng)
        if seed % 2 == 0:
            c = sampling.effect_with_vanishing_cross_block(a, b, rng)
        else:
            c = sampling.random_effect(dim, rng)
        res = additive_relative(a, b, c)
        assert res.holds == (frob(a.matrix @ c.matrix @ b.matrix) <= 1e-9)
