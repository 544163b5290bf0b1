"""qspeed: how fast a driven qubit turns orthogonal to where it started.

The package evolves a single qubit under either a classical three-axis
drive or a detuned single-mode cavity coupling, follows the overlap
between the evolved and initial density-matrix eigenvectors, and extracts
speed-of-evolution statistics from the moments that overlap (nearly)
vanishes. Every closed-form evolution path is paired with an independent
matrix-based oracle.
"""

__version__ = "0.1.0"

from .errors import (
    ContractViolationError,
    InvalidStateError,
    NumericalFailureError,
)
from .linalg import (
    HermitianEigenSystem,
    evolve_unitary,
    hermitian_eig,
    partial_trace_field,
)
from .states import (
    BlochVector,
    EigenBasis,
    OverlapMatrix,
    bloch_to_density,
    density_to_bloch,
    eigenbasis,
    overlap_matrix,
    uhlmann_fidelity,
)
from .series import OverlapSeries, TimeGrid
from .classical import (
    ClassicalFieldParams,
    channel_oracle_classical,
    classical_trajectory,
    evolve_bloch_classical,
    product_law_classical,
)
from .jaynes_cummings import (
    BlockCoefficients,
    JCParams,
    block_coefficients,
    evolve_qubit_jc,
    full_fock_oracle,
    jc_block_propagator,
    jc_trajectory,
    paper_bloch_jc,
)
from .metrics import (
    OrthogonalityEvent,
    SpeedMetrics,
    SweepResult,
    detect_events,
    speed_metrics,
    sweep,
)

__all__ = [
    "__version__",
    "ContractViolationError",
    "InvalidStateError",
    "NumericalFailureError",
    "HermitianEigenSystem",
    "hermitian_eig",
    "evolve_unitary",
    "partial_trace_field",
    "BlochVector",
    "EigenBasis",
    "OverlapMatrix",
    "bloch_to_density",
    "density_to_bloch",
    "eigenbasis",
    "overlap_matrix",
    "uhlmann_fidelity",
    "OverlapSeries",
    "TimeGrid",
    "ClassicalFieldParams",
    "evolve_bloch_classical",
    "channel_oracle_classical",
    "product_law_classical",
    "classical_trajectory",
    "JCParams",
    "BlockCoefficients",
    "block_coefficients",
    "jc_block_propagator",
    "evolve_qubit_jc",
    "full_fock_oracle",
    "paper_bloch_jc",
    "jc_trajectory",
    "OrthogonalityEvent",
    "SpeedMetrics",
    "SweepResult",
    "detect_events",
    "speed_metrics",
    "sweep",
]
