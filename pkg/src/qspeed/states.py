"""Qubit states and the eigenvector-overlap machinery.

A state is carried either as a Bloch vector (sx, sy, sz) or as the 2x2
density matrix rho = (I + sx X + sy Y + sz Z) / 2. Orthogonality between
an evolved state and the initial one is measured through the matrix of
eigenvector overlaps of the two density matrices, plus a closed-form
two-qubit fidelity.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError, InvalidStateError
from .linalg import HermitianEigenSystem, hermitian_eig, require_hermitian

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

# Bloch vectors may overshoot the unit ball by this much squared-norm
# before they are rejected as unphysical.
BLOCH_NORM_TOL = 1e-10

# Spectral gaps below this are treated as degenerate: the eigenvectors of
# such a matrix are numerically meaningless, so trajectory code keeps the
# previous basis instead.
DEGENERACY_GAP = 1e-9


@dataclass(frozen=True)
class BlochVector:
    sx: float
    sy: float
    sz: float

    @classmethod
    def from_array(cls, arr) -> "BlochVector":
        a = np.asarray(arr, dtype=float).reshape(3)
        return cls(float(a[0]), float(a[1]), float(a[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.sx, self.sy, self.sz])

    def norm_sq(self) -> float:
        return self.sx * self.sx + self.sy * self.sy + self.sz * self.sz

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def purity(self) -> float:
        # tr(rho^2) for the matching density matrix
        return 0.5 * (1.0 + self.norm_sq())


def check_bloch(s: BlochVector) -> BlochVector:
    """Raise InvalidStateError unless s fits in the (tolerant) Bloch ball."""
    if not all(math.isfinite(c) for c in (s.sx, s.sy, s.sz)):
        raise InvalidStateError("Bloch components must be finite")
    if s.norm_sq() > 1.0 + BLOCH_NORM_TOL:
        raise InvalidStateError(
            f"Bloch vector norm {s.norm():.12f} exceeds the unit ball")
    return s


def bloch_to_density(s: BlochVector) -> np.ndarray:
    """Density matrix (I + s . sigma) / 2 of a Bloch vector inside the ball."""
    check_bloch(s)
    return 0.5 * (IDENTITY2 + s.sx * SIGMA_X + s.sy * SIGMA_Y + s.sz * SIGMA_Z)


def validate_density(rho) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity of a 2x2 density matrix."""
    rho = require_hermitian(rho)
    if rho.shape != (2, 2):
        raise ContractViolationError(f"expected a 2x2 matrix, got {rho.shape}")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > 1e-12:
        raise ContractViolationError(f"trace is {tr}, expected 1")
    evals = np.linalg.eigvalsh(rho)
    if evals[0] < -1e-10 or evals[-1] > 1.0 + 1e-10:
        raise ContractViolationError(f"eigenvalues {evals} outside [0, 1]")
    return rho


def density_to_bloch(rho) -> BlochVector:
    """Bloch components s_k = tr(rho sigma_k) of a valid density matrix."""
    rho = validate_density(rho)
    return BlochVector(
        float(np.trace(rho @ SIGMA_X).real),
        float(np.trace(rho @ SIGMA_Y).real),
        float(np.trace(rho @ SIGMA_Z).real),
    )


@dataclass(frozen=True)
class EigenBasis:
    """Orthonormal eigenbasis of a qubit density matrix.

    ``vectors[:, k]`` belongs to ``eigenvalues[k]``; eigenvalues are sorted
    descending and the phase convention of :func:`qspeed.linalg.hermitian_eig`
    applies. ``degenerate`` flags a spectral gap below ``DEGENERACY_GAP``.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray
    degenerate: bool


def eigenbasis(rho, previous: EigenBasis | None = None) -> EigenBasis:
    """Sorted, phase-fixed eigenbasis of a qubit density matrix.

    When the spectrum is degenerate within ``DEGENERACY_GAP`` the
    eigenvectors are no longer determined by rho. If a ``previous`` basis
    is supplied it is kept wholesale in that case (any orthonormal pair
    spans the near-degenerate eigenspace, and the previous one maximizes
    continuity along a trajectory); without one, the raw decomposition is
    returned with the flag set.
    """
    es: HermitianEigenSystem = hermitian_eig(rho)
    gap = float(es.eigenvalues[0] - es.eigenvalues[-1])
    degenerate = gap < DEGENERACY_GAP
    if degenerate and previous is not None:
        return EigenBasis(es.eigenvalues.copy(), previous.vectors.copy(), True)
    return EigenBasis(es.eigenvalues, es.eigenvectors, degenerate)


@dataclass(frozen=True)
class OverlapMatrix:
    """Pairwise eigenvector overlaps <v_i|u_j> and their magnitudes.

    Row i is conjugate-linear in the initial basis vector v_i, column j is
    linear in the evolved basis vector u_j. For two orthonormal bases the
    matrix is unitary, so each row and column has unit norm.
    """

    entries: np.ndarray
    magnitudes: np.ndarray


def overlap_matrix(initial: EigenBasis, evolved: EigenBasis) -> OverlapMatrix:
    entries = initial.vectors.conj().T @ evolved.vectors
    return OverlapMatrix(entries=entries, magnitudes=np.abs(entries))


def uhlmann_fidelity(a, b) -> float:
    """Fidelity tr(a b) + 2 sqrt(det a det b) of two qubit density matrices.

    This is the closed form of the Uhlmann fidelity special to 2x2 states,
    in the squared convention: pure inputs give |<psi|phi>|^2. Determinants
    are clipped at zero before the square root so roundoff-negative values
    of nearly pure states cannot poison the result; the value is clamped
    to [0, 1].
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    overlap = float(np.trace(a @ b).real)
    det_a = max(float(np.linalg.det(a).real), 0.0)
    det_b = max(float(np.linalg.det(b).real), 0.0)
    f = overlap + 2.0 * math.sqrt(det_a * det_b)
    return min(max(f, 0.0), 1.0)
