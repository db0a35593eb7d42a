"""Finite-dimensional quantum measurement toolkit.

Effects, states, POVM observables, sequential products and conditioning,
quantum instruments, measurement-model dilations, and the competing joint
probability rules, with seeded check suites behind a CLI.
"""

from .effects import (
    AdditivityCheck,
    Effect,
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
from .instruments import (
    AdditivityWitness,
    Instrument,
    JointMethod,
    QuantumOperation,
    additivity_gap,
    apply_instrument_subset,
    apply_operation,
    choi_matrix,
    conditional_output_state,
    induced_observable,
    instruments_equal,
    is_channel,
    is_compatible_with,
    joint_probability,
    luders_instrument,
    make_instrument,
    make_operation,
    operation_from_action,
    search_additivity_witness,
    trivial_instrument,
)
from .linalg import (
    DEFAULT_TOL,
    HermitianEig,
    Tolerance,
    complete_isometry_to_unitary,
    hermitian_eig,
    loewner_leq,
    partial_trace_probe,
    psd_sqrt,
    tensor_product,
)
from .models import (
    MeasurementModel,
    coarse_grained_pointers,
    dilation_for_observable,
    make_measurement_model,
    model_instrument,
    model_observable,
    ozawa_dilation,
    verify_reproducing,
)
from .observables import (
    Observable,
    ProbDistribution,
    condition_obs,
    distribution,
    fourier_mub_pair,
    is_complementary,
    make_observable,
    marginals,
    mixture_obs,
    observables_commute,
    seq_product_obs,
)
from .qubit import (
    SpinCoefficients,
    bloch_effect,
    bloch_state,
    conditioned_spin_closed_form,
    spin_eigenvectors,
    spin_observable,
    triple_spin_coefficients,
)
from .states import (
    PartialState,
    State,
    condition_state_effect,
    condition_state_observable,
    conditional_probability,
    make_partial_state,
    make_state,
    maximally_mixed,
    prob_of_effect,
    pure_state,
)
from .suites import SUITE_NAMES, SuiteReport, run_check

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
