import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from seqmeas import sampling
from seqmeas.effects import make_effect
from seqmeas.errors import DimensionMismatch, MalformedLabels, NotIsometry, UnknownLabel
from seqmeas.instruments import (
    choi_matrix,
    induced_observable,
    luders_instrument,
    make_instrument,
    make_operation,
)
from seqmeas.linalg import frob, tensor_product
from seqmeas.models import (
    coarse_grained_pointers,
    dilation_for_observable,
    dilation_isometry,
    dilation_matches_instrument,
    make_measurement_model,
    model_instrument,
    model_observable,
    model_operation_choi,
    ozawa_dilation,
    verify_reproducing,
)
from seqmeas.observables import (
    condition_obs,
    make_observable,
    seq_product_obs,
    split_pair_label,
    standard_basis_observable,
    trivial_observable,
)
from seqmeas.qubit import bloch_effect, spin_observable
from seqmeas.states import make_state, prob_of_effect, purity, pure_state

seeds = st.integers(min_value=0, max_value=2**32 - 1)

Z = np.array([0.0, 0.0, 1.0])
X = np.array([1.0, 0.0, 0.0])

CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


def cnot_model_for_spin_z():
    eta = pure_state(np.array([1.0, 0.0]))
    pointer = make_observable(
        ("+", "-"),
        (make_effect(np.diag([1.0, 0.0]).astype(complex)),
         make_effect(np.diag([0.0, 1.0]).astype(complex))),
    )
    return make_measurement_model(2, 2, eta, CNOT, pointer)


class TestModelInstrument:
    def test_full_pointer_range_preserves_trace(self):
        rng = np.random.default_rng(0)
        model = cnot_model_for_spin_z()
        rho = sampling.random_state(2, rng)
        out = model_instrument(model, rho, ("+", "-"))
        assert abs(out.trace - 1.0) < 1e-12

    def test_matches_direct_luders_application(self):
        rng = np.random.default_rng(1)
        sz = spin_observable(Z)
        model = ozawa_dilation(luders_instrument(sz))
        for _ in range(10):
            rho = sampling.random_state(2, rng)
            for label, eff in zip(sz.labels, sz.effects):
                direct = eff.sqrt @ rho.matrix @ eff.sqrt
                via_model = model_instrument(model, rho, (label,)).matrix
                assert frob(direct - via_model) < 1e-9

    def test_noninteracting_model_returns_input(self):
        rng = np.random.default_rng(2)
        eta = pure_state(np.array([1.0, 0.0]))
        model = make_measurement_model(
            2, 2, eta, np.eye(4, dtype=complex), trivial_observable(2)
        )
        rho = sampling.random_state(2, rng)
        out = model_instrument(model, rho, ("u",))
        assert frob(out.matrix - rho.matrix) < 1e-12

    def test_unknown_pointer_label(self):
        model = cnot_model_for_spin_z()
        rho = pure_state(np.array([1.0, 0.0]))
        with pytest.raises(UnknownLabel):
            model_instrument(model, rho, ("nope",))

    def test_rejects_nonunitary_interaction(self):
        eta = pure_state(np.array([1.0, 0.0]))
        with pytest.raises(NotIsometry):
            make_measurement_model(2, 2, eta, np.ones((4, 4), dtype=complex), trivial_observable(2))


class TestVerifyReproducing:
    def test_cnot_model_measures_spin_z(self):
        model = cnot_model_for_spin_z()
        assert verify_reproducing(model, trials=20, seed=3, expected=spin_observable(Z)) < 1e-12

    def test_self_derived_observable_is_consistent(self):
        model = cnot_model_for_spin_z()
        assert verify_reproducing(model, trials=10, seed=4) < 1e-12

    def test_phase_flip_on_embedded_column_is_flagged(self):
        sx = spin_observable(X)
        model = ozawa_dilation(luders_instrument(sx))
        flip = np.diag([1.0, 1.0, -1.0, 1.0]).astype(complex)
        corrupted = make_measurement_model(
            model.dim_base,
            model.dim_probe,
            model.probe_state,
            model.unitary @ flip,
            model.pointer,
        )
        deviation = verify_reproducing(corrupted, trials=20, seed=5, expected=sx)
        assert deviation > 1e-3

    def test_label_mismatch_rejected(self):
        model = cnot_model_for_spin_z()
        with pytest.raises(DimensionMismatch):
            verify_reproducing(model, trials=1, seed=0, expected=standard_basis_observable(2))


class TestOzawaDilation:
    def test_identity_instrument(self):
        inst = make_instrument(("u",), (make_operation((np.eye(2, dtype=complex),)),))
        model = ozawa_dilation(inst)
        assert model.dim_probe == 1
        assert frob(model.unitary - np.eye(2)) < 1e-12
        assert model.pointer.labels == ("u",)
        assert frob(model.pointer.effects[0].matrix - np.eye(1)) < 1e-12

    def test_spin_z_gives_cnot(self):
        model = ozawa_dilation(luders_instrument(spin_observable(Z)))
        assert model.dim_probe == 2
        assert frob(model.unitary - CNOT) < 1e-12
        assert frob(model.probe_state.matrix - np.diag([1.0, 0.0])) < 1e-12

    def test_embedded_action_column_by_column(self):
        rng = np.random.default_rng(6)
        inst = sampling.random_instrument(3, rng)
        model = ozawa_dilation(inst)
        v = dilation_isometry(inst)
        probe_first = np.zeros(model.dim_probe)
        probe_first[0] = 1.0
        for j in range(3):
            phi = np.eye(3)[:, j]
            embedded = np.kron(phi, probe_first)
            assert frob((model.unitary @ embedded - v[:, j]).reshape(-1, 1)) < 1e-12

    @given(seeds, st.sampled_from([2, 3]))
    def test_structure_and_round_trip(self, seed, dim):
        rng = np.random.default_rng(seed)
        inst = sampling.random_instrument(dim, rng)
        model = ozawa_dilation(inst)
        assert model.dim_probe == sum(len(op.kraus) for op in inst.operations)
        assert abs(purity(model.probe_state) - 1.0) < 1e-10
        assert all(f.sharp for f in model.pointer.effects)
        total = model.dim_base * model.dim_probe
        assert frob(model.unitary.conj().T @ model.unitary - np.eye(total)) < 1e-10
        assert frob(model.unitary @ model.unitary.conj().T - np.eye(total)) < 1e-10
        assert dilation_matches_instrument(model, inst) < 1e-9
        deviation = verify_reproducing(
            model, trials=5, seed=seed % 1000, expected=induced_observable(inst)
        )
        assert deviation < 1e-9

    def test_model_observable_matches_source(self):
        rng = np.random.default_rng(7)
        obs = sampling.random_observable(2, 3, rng)
        model = dilation_for_observable(obs)
        recovered = model_observable(model)
        for re, oe in zip(recovered.effects, obs.effects):
            assert frob(re.matrix - oe.matrix) < 1e-9


class TestSequentialModel:
    def build(self, first=None):
        first = spin_observable(Z) if first is None else first
        product = seq_product_obs(first, spin_observable(X))
        model = dilation_for_observable(product)
        return first, spin_observable(X), product, model

    def test_pair_statistics(self):
        rng = np.random.default_rng(8)
        _, _, product, model = self.build()
        for _ in range(10):
            rho = sampling.random_state(2, rng)
            for label, eff in zip(product.labels, product.effects):
                lhs = prob_of_effect(rho, eff)
                rhs = model_instrument(model, rho, (label,)).trace
                assert abs(lhs - rhs) < 1e-10

    def test_subset_statistics(self):
        rng = np.random.default_rng(9)
        _, _, product, model = self.build()
        subsets = [("(+,+)",), ("(+,+)", "(-,-)"), ("(+,-)", "(-,+)", "(-,-)")]
        for _ in range(5):
            rho = sampling.random_state(2, rng)
            for subset in subsets:
                lhs = prob_of_effect(rho, product.subset_effect(subset))
                rhs = model_instrument(model, rho, subset).trace
                assert abs(lhs - rhs) < 1e-10

    def test_coarse_grainings_commute_and_describe_base(self):
        rng = np.random.default_rng(10)
        first, second, product, model = self.build()
        fa, fb = coarse_grained_pointers(model)
        assert fa.labels == ("+", "-") and fb.labels == ("+", "-")
        for obs in (fa, fb):
            for eff in obs.effects:
                assert frob(eff.matrix @ eff.matrix - eff.matrix) < 1e-10
        cross = max(
            frob(a.matrix @ b.matrix - b.matrix @ a.matrix)
            for a in fa.effects
            for b in fb.effects
        )
        assert cross < 1e-10
        conditioned = condition_obs(second, first)
        for _ in range(10):
            rho = sampling.random_state(2, rng)
            for x in first.labels:
                subset = [l for l in product.labels if split_pair_label(l)[0] == x]
                assert (
                    abs(
                        prob_of_effect(rho, first.effect_for(x))
                        - model_instrument(model, rho, subset).trace
                    )
                    < 1e-10
                )
            for y in second.labels:
                subset = [l for l in product.labels if split_pair_label(l)[1] == y]
                assert (
                    abs(
                        prob_of_effect(rho, conditioned.effect_for(y))
                        - model_instrument(model, rho, subset).trace
                    )
                    < 1e-10
                )

    def test_product_diagonal_pointer_coarse_grains_to_diagonal_sums(self):
        _, _, _, model = self.build()
        fa, fb = coarse_grained_pointers(model)
        # the dilation pointer is diagonal, so the coarse grainings are too
        for obs in (fa, fb):
            for eff in obs.effects:
                off_diag = eff.matrix - np.diag(np.diag(eff.matrix))
                assert frob(off_diag) < 1e-12

    def test_unsharp_first_observable_noncommuting_on_base(self):
        noisy_plus = bloch_effect(1.0, (0.0, 0.0, 0.8))
        noisy = make_observable(
            ("+", "-"), (noisy_plus, make_effect(np.eye(2) - noisy_plus.matrix))
        )
        first, second, product, model = self.build(first=noisy)
        fa, fb = coarse_grained_pointers(model)
        cross = max(
            frob(a.matrix @ b.matrix - b.matrix @ a.matrix)
            for a in fa.effects
            for b in fb.effects
        )
        assert cross < 1e-10
        conditioned = condition_obs(second, first)
        base_comm = max(
            frob(ax.matrix @ cy.matrix - cy.matrix @ ax.matrix)
            for ax in first.effects
            for cy in conditioned.effects
        )
        assert base_comm > 1e-3

    def test_malformed_pointer_labels_rejected(self):
        model = cnot_model_for_spin_z()
        with pytest.raises(MalformedLabels):
            coarse_grained_pointers(model)


class TestChoiExtraction:
    def test_model_branch_choi_matches_kraus(self):
        sz = spin_observable(Z)
        inst = luders_instrument(sz)
        model = ozawa_dilation(inst)
        for label, op in zip(inst.labels, inst.operations):
            assert frob(model_operation_choi(model, label) - choi_matrix(op)) < 1e-12
