"""Dense complex linear algebra for small Hermitian problems.

This is the slow-but-certain substrate of the package: spectral
decomposition with a reproducible eigenvector phase, unitary evolution
built from that decomposition, and the partial trace that reduces a
qubit-plus-field state back to the qubit. Every closed-form evolution
path elsewhere in the package is cross-checked against these routines,
so they stay independent of those closed forms.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError, NumericalFailureError

HERMITICITY_TOL = 1e-12

# Magnitudes this close to the column maximum count as a tie when picking
# the component whose phase is normalized away; the lowest index wins, so
# reflection-symmetric vectors like (1, -1)/sqrt(2) come out stable even
# when the two magnitudes differ by one ulp.
_PHASE_TIE_TOL = 1e-12

__all__ = [
    "HermitianEigenSystem",
    "hermitian_eig",
    "evolve_unitary",
    "partial_trace_field",
    "HERMITICITY_TOL",
]


@dataclass(frozen=True)
class HermitianEigenSystem:
    """Spectral decomposition with eigenvalues sorted in descending order.

    ``eigenvectors[:, k]`` is the unit eigenvector belonging to
    ``eigenvalues[k]``; each vector's largest-magnitude component is real
    and nonnegative.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def require_hermitian(m, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Return ``m`` as a complex array, or raise if it is not Hermitian."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ContractViolationError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ContractViolationError("matrix contains non-finite entries")
    dev = float(np.max(np.abs(m - m.conj().T)))
    if dev > tol:
        raise ContractViolationError(
            f"matrix is not Hermitian: max |m - m^dag| = {dev:.3e} exceeds {tol:.1e}")
    return m


def hermitian_eig(m) -> HermitianEigenSystem:
    """Eigendecomposition of a Hermitian matrix with a fixed output convention.

    Parameters
    ----------
    m : array_like
        Square complex Hermitian matrix (within ``HERMITICITY_TOL``).

    Returns
    -------
    HermitianEigenSystem
        Eigenvalues sorted descending. Each eigenvector is normalized and
        multiplied by the global phase that makes its largest-magnitude
        component real and nonnegative (ties broken toward the lowest
        index). The convention makes overlap trajectories reproducible
        from run to run and across processes.

    Raises
    ------
    ContractViolationError
        If the input is not square or not Hermitian.
    NumericalFailureError
        If the decomposition does not converge.
    """
    m = require_hermitian(m)
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"eigendecomposition failed: {exc}") from exc
    # eigh returns ascending order; a stable sort on -w keeps ties deterministic.
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = np.ascontiguousarray(v[:, order])
    for k in range(v.shape[1]):
        col = v[:, k]
        mags = np.abs(col)
        lead = int(np.argmax(mags >= mags.max() - _PHASE_TIE_TOL))
        pivot = col[lead]
        if abs(pivot) > 0.0:
            v[:, k] = col * (pivot.conjugate() / abs(pivot))
    return HermitianEigenSystem(eigenvalues=w, eigenvectors=v)


def evolve_unitary(h, t: float) -> np.ndarray:
    """Propagator exp(-i h t) of a Hermitian generator, by spectral sum.

    The result is unitary to roundoff because it is assembled from the
    orthonormal eigenvectors of ``h`` and pure phases.
    """
    if not np.isfinite(t):
        raise ContractViolationError("time must be finite")
    es = hermitian_eig(h)
    phases = np.exp(-1j * es.eigenvalues * t)
    v = es.eigenvectors
    return (v * phases) @ v.conj().T


def partial_trace_field(rho, field_dim: int, qubit_dim: int = 2) -> np.ndarray:
    """Trace out the field mode of a qubit (x) field density matrix.

    The composite basis index is qubit-major: ``index = qubit * field_dim
    + fock``. Only ``qubit_dim == 2`` is supported.
    """
    if qubit_dim != 2:
        raise ContractViolationError("only a two-level system factor is supported")
    if field_dim < 1:
        raise ContractViolationError("field dimension must be at least 1")
    rho = np.asarray(rho, dtype=complex)
    dim = 2 * field_dim
    if rho.shape != (dim, dim):
        raise ContractViolationError(
            f"expected a {dim}x{dim} matrix for field_dim={field_dim}, got {rho.shape}")
    require_hermitian(rho)
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > 1e-10:
        raise ContractViolationError(f"density matrix trace is {tr}, expected 1")
    blocks = rho.reshape(2, field_dim, 2, field_dim)
    return np.einsum("ambm->ab", blocks)
