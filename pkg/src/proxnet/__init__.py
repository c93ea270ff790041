"""proxnet: fixed points of layered proximal neural networks.

Build networks whose layers are sigma(W x + b) with proximal activations,
analyze their contraction constants, solve for the unique fixed point (both
on the input space and on the layer product space), verify solutions against
the equivalent system of subdifferential inclusions, and reduce continuous
Hopfield models to the same machinery.
"""

from .activations import (
    Activation,
    Ball,
    Clip,
    EMPTY,
    GroupSoftThreshold,
    Identity,
    IntervalBox,
    Relu,
    Shrink,
    SoftThreshold,
    SubgradientSet,
    make_activation,
    phi_value,
    prox_apply,
    subgradient_contains,
)
from .block_solver import (
    BlockNetwork,
    BoundReport,
    InclusionReport,
    assemble_block_weight,
    block_map,
    block_operator_norm_identity,
    block_weight_apply,
    check_monotone,
    prox_psi_apply,
    shift_apply,
    solve_block,
    verify_bound,
    verify_inclusion,
)
from .errors import (
    BlowUpError,
    ConfigError,
    DimensionMismatch,
    NoConvergence,
    NotContractive,
    NumericError,
    PreconditionError,
    ProxnetError,
    SpectralNormError,
)
from .hopfield import (
    EquilibriumResult,
    HopfieldModel,
    dynamics_residual,
    equilibrium_via_prox,
    simulate,
)
from .linalg import (
    BlockVector,
    adjoint_apply,
    apply,
    as_matrix,
    as_vector,
    block_norm,
    spectral_norm,
)
from .network import (
    AnalysisReport,
    FixedPointResult,
    Layer,
    Network,
    analyze,
    apriori_iteration_bound,
    forward,
    layer_apply,
    lift_trajectory,
    sequential_iterates,
    solve_sequential,
)

__version__ = "0.1.0"
