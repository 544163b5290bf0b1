"""Qubit under a classical three-axis drive.

The drive couples to all three Pauli axes with strengths (alpha1, alpha2,
alpha3). The state map used throughout is the uniform mixture of the three
single-axis rotations,

    rho -> (1/3) sum_i U_i rho U_i^dag,   U_i = exp(-i alpha_i t sigma_i),

which on Bloch components has the closed form implemented in
:func:`evolve_bloch_classical`. Two independent routes compute the same
map: the closed form (fast path) and :func:`channel_oracle_classical`,
which conjugates the density matrix by each exponential explicitly and
averages. They share no code beyond the Pauli constants.

A sequential product of the three exponentials is a different, unitary
reading of the same drive; it is kept as an optional comparison mode and
never feeds the mixture's closed form.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError
from .linalg import evolve_unitary
from .series import OverlapSeries, TimeGrid, build_series
from .states import (
    BlochVector,
    PAULIS,
    bloch_to_density,
    check_bloch,
    density_to_bloch,
)

LAWS = ("mixture", "product")


@dataclass(frozen=True)
class ClassicalFieldParams:
    alpha1: float
    alpha2: float
    alpha3: float

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "alpha3"):
            if not math.isfinite(getattr(self, name)):
                raise ContractViolationError(f"{name} must be finite")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.alpha1, self.alpha2, self.alpha3)


def evolve_bloch_classical(s: BlochVector, p: ClassicalFieldParams,
                           t: float) -> BlochVector:
    """Closed-form Bloch map of the three-axis mixture channel.

    Each component averages the three axis rotations, hence the overall
    1/3. At t = 0 all cosines are 1 and the map is the identity.
    """
    check_bloch(s)
    if not math.isfinite(t):
        raise ContractViolationError("time must be finite")
    c1, s1 = math.cos(2.0 * t * p.alpha1), math.sin(2.0 * t * p.alpha1)
    c2, s2 = math.cos(2.0 * t * p.alpha2), math.sin(2.0 * t * p.alpha2)
    c3, s3 = math.cos(2.0 * t * p.alpha3), math.sin(2.0 * t * p.alpha3)
    return BlochVector(
        (s.sx * (1.0 + c2 + c3) - s.sy * s3 + s.sz * s2) / 3.0,
        (s.sy * (1.0 + c1 + c3) + s.sx * s3 - s.sz * s1) / 3.0,
        (s.sz * (1.0 + c1 + c2) - s.sx * s2 + s.sy * s1) / 3.0,
    )


def channel_oracle_classical(s: BlochVector, p: ClassicalFieldParams,
                             t: float) -> BlochVector:
    """Matrix-route oracle for the mixture channel.

    Builds each axis exponential by spectral decomposition, conjugates the
    density matrix, averages with weight 1/3 and reads the Bloch components
    back off. Kept deliberately independent of the closed form.
    """
    rho = bloch_to_density(s)
    if not math.isfinite(t):
        raise ContractViolationError("time must be finite")
    acc = np.zeros((2, 2), dtype=complex)
    for alpha, sigma in zip(p.as_tuple(), PAULIS):
        u = evolve_unitary(alpha * sigma, t)
        acc += u @ rho @ u.conj().T
    return density_to_bloch(acc / 3.0)


def product_law_classical(s: BlochVector, p: ClassicalFieldParams,
                          t: float) -> BlochVector:
    """Sequential-product reading of the drive: one unitary conjugation.

    The x, y and z exponentials are composed left to right,
    U = U_x U_y U_z, and applied as rho -> U rho U^dag. The ordering is a
    convention; the three exponentials do not commute.
    """
    rho = bloch_to_density(s)
    if not math.isfinite(t):
        raise ContractViolationError("time must be finite")
    u = np.eye(2, dtype=complex)
    for alpha, sigma in zip(p.as_tuple(), PAULIS):
        u = u @ evolve_unitary(alpha * sigma, t)
    return density_to_bloch(u @ rho @ u.conj().T)


def classical_trajectory(s0: BlochVector, p: ClassicalFieldParams,
                         grid: TimeGrid, law: str = "mixture",
                         use_oracle: bool = False) -> OverlapSeries:
    """Overlap trajectory of the classical drive over a time grid.

    ``law`` selects the mixture map (default) or the sequential product;
    ``use_oracle`` routes the mixture through the matrix oracle instead of
    the closed form, which is slower but useful for cross-checks.
    """
    if law not in LAWS:
        raise ValueError(f"unknown evolution law {law!r}, expected one of {LAWS}")
    if law == "product":
        evolve = lambda t: product_law_classical(s0, p, t)
    elif use_oracle:
        evolve = lambda t: channel_oracle_classical(s0, p, t)
    else:
        evolve = lambda t: evolve_bloch_classical(s0, p, t)
    metadata = {
        "model": "classical",
        "law": law,
        "oracle": use_oracle,
        "alpha1": p.alpha1,
        "alpha2": p.alpha2,
        "alpha3": p.alpha3,
        "time_axis": "t",
    }
    return build_series(s0, evolve, grid, metadata)
