"""ncprob: finite-dimensional algebraic probability.

Classical laws as diagonal operators, projector-valued measures, entropic
uncertainty bounds with non-commutativity certificates, and diagnostics
for when a pair of observables cannot share a classical description.
"""

from . import classical, construct, eur, hilbert
from .classical import (
    Distribution,
    Event,
    FiniteProbabilitySpace,
    RandomVariable,
    condition,
    expectation,
    lln_frequency,
    pushforward,
    shannon_entropy,
)
from .errors import (
    AlgebraError,
    DimensionError,
    DomainError,
    HypothesisError,
    NcprobError,
    NonCommutingError,
    NullEventError,
    PartitionError,
    ScenarioError,
)
from .hilbert import (
    PVM,
    DensityOperator,
    HermitianOperator,
    PureState,
    SpectralCell,
    apply_function,
    chsh_beta,
    commutator_norm,
    common_refiner,
    density_from_distribution,
    dispersion,
    dispersion_free_state,
    fourier_unitary,
    gns_construct,
    hadamard_unitary,
    joint_pvm,
    observable_from_distribution,
    spectral_measure,
    spectral_pvm,
    trace_expectation,
)
from .eur import (
    EURCertificate,
    MinEntropyResult,
    OptimizerConfig,
    SpectrumPartition,
    certify_noncommutativity,
    epsilon_entropy,
    is_finer,
    maassen_uffink_bound,
    min_entropy_sum,
    partition_probabilities,
    partovi_bound,
)
from .construct import (
    ContextFamily,
    ScenarioPair,
    TransitionKernel,
    bayes_violation,
    born_consistency,
    build_pair,
    contextual_family,
    interference_delta,
    verify_overlap_bound,
)

__version__ = "0.1.0"
