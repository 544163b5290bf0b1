"""Time grids and sampled overlap trajectories."""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ContractViolationError
from .states import (
    BlochVector,
    EigenBasis,
    bloch_to_density,
    eigenbasis,
    overlap_matrix,
    uhlmann_fidelity,
)

# Named scalar tracks a trajectory exposes. sp_ij is the magnitude of the
# overlap between initial eigenvector i and evolved eigenvector j.
TRACK_INDEX = {"sp11": (0, 0), "sp12": (0, 1), "sp21": (1, 0), "sp22": (1, 1)}
TRACK_NAMES = ("sp11", "sp12", "sp21", "sp22", "fidelity")


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sample times starting at 0.

    ``samples`` counts grid points, so a run with N steps has N+1 samples.
    The single-point grid {0} is allowed for degenerate "initial state
    only" evaluations; every multi-point grid must have t_end > 0.
    """

    t_end: float
    samples: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.samples < 1:
            raise ContractViolationError("a grid needs at least one sample")
        if len(self.values) != self.samples:
            raise ContractViolationError("sample count does not match values")
        if self.values[0] != 0.0:
            raise ContractViolationError("grids start at t = 0")
        if self.samples == 1:
            if self.t_end != 0.0:
                raise ContractViolationError("a one-point grid must be {0}")
            return
        if not self.t_end > 0.0:
            raise ContractViolationError("t_end must be positive")
        steps = np.diff(self.values)
        if np.any(steps <= 0.0):
            raise ContractViolationError("grid times must increase strictly")
        if np.max(np.abs(steps - steps[0])) > 1e-12:
            raise ContractViolationError("grid spacing must be uniform")

    @classmethod
    def uniform(cls, t_end: float, samples: int) -> "TimeGrid":
        if samples == 1:
            return cls(t_end=0.0, samples=1, values=np.zeros(1))
        return cls(t_end=float(t_end), samples=int(samples),
                   values=np.linspace(0.0, float(t_end), int(samples)))


class OverlapSeries:
    """Sampled trajectory with per-sample overlaps against the t=0 basis.

    Arrays are indexed by sample: ``bloch`` is (N, 3), ``overlaps`` and
    ``magnitudes`` are (N, 2, 2), ``purity``, ``fidelity`` and
    ``degenerate`` are (N,). ``evaluate`` is the continuous-time model the
    samples came from (t -> BlochVector); event refinement re-evaluates it
    between grid points, so it is kept on the series rather than thrown
    away after sampling.
    """

    def __init__(self, grid: TimeGrid, bloch, purity, fidelity, overlaps,
                 magnitudes, degenerate, metadata: dict,
                 initial_basis: EigenBasis,
                 evaluate: Callable[[float], BlochVector] | None = None):
        self.grid = grid
        self.bloch = bloch
        self.purity = purity
        self.fidelity = fidelity
        self.overlaps = overlaps
        self.magnitudes = magnitudes
        self.degenerate = degenerate
        self.metadata = metadata
        self.initial_basis = initial_basis
        self.evaluate = evaluate

    def __len__(self) -> int:
        return self.grid.samples

    def track(self, name: str) -> np.ndarray:
        """Scalar track by name: one of sp11, sp12, sp21, sp22, fidelity."""
        if name == "fidelity":
            return self.fidelity
        try:
            i, j = TRACK_INDEX[name]
        except KeyError:
            raise ValueError(f"unknown track {name!r}, expected one of {TRACK_NAMES}")
        return self.magnitudes[:, i, j]


def build_series(s0: BlochVector, evolve: Callable[[float], BlochVector],
                 grid: TimeGrid, metadata: dict) -> OverlapSeries:
    """Sample a continuous Bloch-vector model over a grid.

    Per sample: evolved Bloch vector, purity, fidelity to the initial
    state, and the eigenvector overlap matrix against the initial basis.
    The previous sample's basis is threaded through so degenerate samples
    inherit it instead of jumping to an arbitrary eigenbasis.
    """
    rho0 = bloch_to_density(s0)
    basis0 = eigenbasis(rho0)
    n = grid.samples
    bloch = np.empty((n, 3))
    purity = np.empty(n)
    fidelity = np.empty(n)
    overlaps = np.empty((n, 2, 2), dtype=complex)
    magnitudes = np.empty((n, 2, 2))
    degenerate = np.zeros(n, dtype=bool)

    prev = basis0
    for k, t in enumerate(grid.values):
        s_t = evolve(float(t))
        rho_t = bloch_to_density(s_t)
        basis_t = eigenbasis(rho_t, previous=prev)
        ov = overlap_matrix(basis0, basis_t)
        bloch[k] = (s_t.sx, s_t.sy, s_t.sz)
        purity[k] = s_t.purity()
        fidelity[k] = uhlmann_fidelity(rho0, rho_t)
        overlaps[k] = ov.entries
        magnitudes[k] = ov.magnitudes
        degenerate[k] = basis_t.degenerate
        prev = basis_t

    return OverlapSeries(grid, bloch, purity, fidelity, overlaps, magnitudes,
                         degenerate, metadata, basis0, evaluate=evolve)
