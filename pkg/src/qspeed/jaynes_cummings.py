"""Qubit exchanging energy with a single detuned cavity mode.

The Hamiltonian is the detuned Jaynes-Cummings model

    H = eta*gamma (a^dag sigma_- + a sigma_+) + (Delta/2) sigma_z,

with qubit level |0> taken as the excited state |e> (sigma_z eigenvalue
+1). Because the interaction only connects |e,n> with |g,n+1>, the
propagator splits into 2x2 blocks that can be written down exactly; an
initial product state rho_a (x) |n><n| never leaves the four levels
{|e,n>, |g,n+1>, |g,n>, |e,n-1>}.

Two independent routes evolve the qubit: the exact block propagation
(:func:`evolve_qubit_jc`) and a full matrix computation on a truncated
Fock space (:func:`full_fock_oracle`). They must agree to near machine
precision whenever the truncation keeps headroom above the initial photon
number.

:func:`paper_bloch_jc` evaluates a published closed-form variant of the
evolved Bloch components that contains explicitly imaginary terms and does
not reduce to the identity at t=0. It exists only to quantify how far that
printed form sits from the block propagation; nothing downstream consumes
it.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError
from .linalg import evolve_unitary, partial_trace_field
from .series import OverlapSeries, TimeGrid, build_series
from .states import (
    BlochVector,
    SIGMA_Z,
    bloch_to_density,
    check_bloch,
    density_to_bloch,
)

# Default headroom of the truncated-Fock oracle above the initial photon
# number. The exact dynamics never populates levels beyond n+1, so +3
# leaves a margin that makes truncation error vanish identically.
DEFAULT_NMAX_MARGIN = 3


@dataclass(frozen=True)
class JCParams:
    """Drive parameters: coupling eta, detuning ratio Delta/gamma, gamma scale,
    and the initial Fock level ``photons``."""

    eta: float
    delta_over_gamma: float
    gamma: float = 1.0
    photons: int = 0

    def __post_init__(self):
        for name in ("eta", "delta_over_gamma", "gamma"):
            if not math.isfinite(getattr(self, name)):
                raise ContractViolationError(f"{name} must be finite")
        if self.eta < 0.0:
            raise ContractViolationError("eta must be nonnegative")
        if self.gamma <= 0.0:
            raise ContractViolationError("gamma must be positive")
        if not isinstance(self.photons, (int, np.integer)) or self.photons < 0:
            raise ContractViolationError("photons must be a nonnegative integer")


@dataclass(frozen=True)
class BlockCoefficients:
    """Scalars of one 2x2 propagator block at a given coefficient index.

    mu = sqrt((Delta/2 gamma)^2 + eta^2 * index), c_coef = cos(mu gamma t)
    and s_coef = sin(mu gamma t)/mu, with the mu -> 0 limit s_coef = gamma t.
    """

    index: int
    mu: float
    s_coef: float
    c_coef: float


def block_coefficients(p: JCParams, index: int, t: float) -> BlockCoefficients:
    if index < 0 or not isinstance(index, (int, np.integer)):
        raise ContractViolationError("coefficient index must be a nonnegative integer")
    if not math.isfinite(t):
        raise ContractViolationError("time must be finite")
    d = 0.5 * p.delta_over_gamma
    mu = math.sqrt(d * d + p.eta * p.eta * index)
    phase = mu * p.gamma * t
    if mu > 0.0:
        s_coef = math.sin(phase) / mu
    else:
        # sin(mu g t)/mu -> g t as mu -> 0
        s_coef = p.gamma * t
    return BlockCoefficients(index=int(index), mu=mu,
                             s_coef=s_coef, c_coef=math.cos(phase))


def jc_block_propagator(p: JCParams, n: int, t: float) -> np.ndarray:
    """Exact propagator on the block spanned by {|e,n>, |g,n+1>}.

    With d = Delta/2gamma and the coefficients taken at index n+1,

        U_n = C * I - i S * [[d, eta sqrt(n+1)], [eta sqrt(n+1), -d]],

    which equals exp(-i H_n gamma t) for the dimensionless block
    Hamiltonian H_n = [[d, eta sqrt(n+1)], [eta sqrt(n+1), -d]].
    """
    if n < 0 or not isinstance(n, (int, np.integer)):
        raise ContractViolationError("block index must be a nonnegative integer")
    coef = block_coefficients(p, n + 1, t)
    d = 0.5 * p.delta_over_gamma
    off = p.eta * math.sqrt(n + 1.0) * coef.s_coef
    return np.array([
        [coef.c_coef - 1j * d * coef.s_coef, -1j * off],
        [-1j * off, coef.c_coef + 1j * d * coef.s_coef],
    ])


def branch_amplitudes(p: JCParams, t: float) -> tuple[complex, complex, complex, complex]:
    """Evolution amplitudes of the two initially occupied levels.

    For initial Fock level n = p.photons:

        |e,n>  ->  a_ee |e,n>   + a_eg |g,n+1>     (block n, column 0)
        |g,n>  ->  a_ge |e,n-1> + a_gg |g,n>       (block n-1, column 1)

    Returned as (a_ee, a_eg, a_ge, a_gg). For n = 0 the lower branch has
    no partner level, so |g,0> just picks up the bare detuning phase
    exp(+i Delta t / 2) and a_ge = 0.
    """
    n = p.photons
    upper = jc_block_propagator(p, n, t)
    a_ee, a_eg = complex(upper[0, 0]), complex(upper[1, 0])
    if n == 0:
        d = 0.5 * p.delta_over_gamma
        return a_ee, a_eg, 0.0 + 0.0j, cmath.exp(1j * d * p.gamma * t)
    lower = jc_block_propagator(p, n - 1, t)
    return a_ee, a_eg, complex(lower[0, 1]), complex(lower[1, 1])


def evolve_qubit_jc(s0: BlochVector, p: JCParams, t: float) -> BlochVector:
    """Reduced qubit Bloch vector after exact block propagation.

    Starting from rho_a (x) |n><n|, each occupied level evolves inside its
    2x2 block; tracing out the field leaves

        sz(t)         = rho_ee (|a_ee|^2 - |a_eg|^2) + rho_gg (|a_ge|^2 - |a_gg|^2)
        sx(t)+i sy(t) = (sx + i sy) conj(a_ee) a_gg,

    because cross terms between different Fock levels vanish under the
    partial trace.
    """
    check_bloch(s0)
    a_ee, a_eg, a_ge, a_gg = branch_amplitudes(p, t)
    rho_ee = 0.5 * (1.0 + s0.sz)
    rho_gg = 0.5 * (1.0 - s0.sz)
    planar = (s0.sx + 1j * s0.sy) * a_ee.conjugate() * a_gg
    sz = rho_ee * (abs(a_ee) ** 2 - abs(a_eg) ** 2) \
        + rho_gg * (abs(a_ge) ** 2 - abs(a_gg) ** 2)
    return BlochVector(planar.real, planar.imag, sz)


def jc_hamiltonian(p: JCParams, n_max: int) -> np.ndarray:
    """Full matrix of the Hamiltonian on 2 x (n_max + 1) levels.

    Composite index is qubit-major: index = qubit * (n_max + 1) + fock,
    with qubit 0 = |e>.
    """
    if n_max < 1:
        raise ContractViolationError("n_max must be at least 1")
    fdim = n_max + 1
    lower = np.diag(np.sqrt(np.arange(1.0, fdim)), 1)      # a |n> = sqrt(n) |n-1>
    raise_ = lower.conj().T
    sig_minus = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
    sig_plus = sig_minus.conj().T
    lam = p.eta * p.gamma
    delta = p.delta_over_gamma * p.gamma
    return (lam * (np.kron(sig_minus, raise_) + np.kron(sig_plus, lower))
            + 0.5 * delta * np.kron(SIGMA_Z, np.eye(fdim)))


def full_fock_oracle(s0: BlochVector, p: JCParams, t: float,
                     n_max: int | None = None) -> BlochVector:
    """Oracle route: evolve the whole qubit+field matrix and trace the field.

    Builds rho(0) = rho_a (x) |n><n| on a Fock space truncated at n_max
    (default photons + 3), applies exp(-i H t) from the spectral
    decomposition of the full Hamiltonian, and partial-traces the field.
    Requires n_max >= photons + 2 so the one level the dynamics reaches
    above n keeps a buffer below the truncation edge.
    """
    if n_max is None:
        n_max = p.photons + DEFAULT_NMAX_MARGIN
    if n_max < p.photons + 2:
        raise ContractViolationError(
            f"n_max={n_max} leaves no headroom above photons={p.photons}")
    fdim = n_max + 1
    rho_a = bloch_to_density(s0)
    fock = np.zeros((fdim, fdim), dtype=complex)
    fock[p.photons, p.photons] = 1.0
    u = evolve_unitary(jc_hamiltonian(p, n_max), t)
    rho_t = u @ np.kron(rho_a, fock) @ u.conj().T
    return density_to_bloch(partial_trace_field(rho_t, fdim))


def paper_bloch_jc(s0: BlochVector, p: JCParams,
                   t: float) -> tuple[BlochVector, float]:
    """Published closed-form Bloch components, evaluated verbatim.

    The three expressions are computed in complex arithmetic exactly as
    printed, including their explicitly imaginary terms; the returned
    Bloch vector keeps the real parts and the second value is the largest
    absolute imaginary residual. The form does not reduce to the identity
    at t = 0 (its sz component comes out as -sz there), so it serves only
    as a comparison curve against :func:`evolve_qubit_jc` and never feeds
    metrics.
    """
    check_bloch(s0)
    n = p.photons
    # Detuning enters these expressions dimensionlessly, same reading as
    # the d = Delta/2gamma of the block propagator.
    delta = p.delta_over_gamma
    sx, sy, sz = s0.sx, s0.sy, s0.sz

    def cs(index: int) -> tuple[complex, complex]:
        coef = block_coefficients(p, index, t)
        return complex(coef.c_coef), complex(coef.s_coef)

    c_n, s_n = cs(n)
    c_n1, s_n1 = cs(n + 1)
    c_n2, s_n2 = cs(n + 2)
    rt1 = math.sqrt(n + 1.0)
    rt2 = math.sqrt(n + 2.0)
    eta = p.eta

    bracket = rt1 * (c_n1 + 0.5 * delta * s_n1) + (c_n1 - 0.5 * delta * s_n1)

    out_x = (-1j * eta * s_n1 * 0.5 * (1.0 + sz) * bracket
             + eta * eta * rt1 * rt2 * s_n * s_n1 * sx
             + 1j * eta * rt1 * 0.5 * (1.0 - sz) * s_n * c_n2
             + (c_n1 ** 2 - 0.5 * delta * delta * s_n1 ** 2) * sx
             - delta * s_n1 * c_n1 * sy)

    out_y = (eta * s_n1 * 0.5 * (1.0 + sz) * bracket
             - eta * eta * rt1 * rt2 * s_n * s_n1 * sy
             + 1j * eta * delta * rt1 * 0.5 * (1.0 - sz) * s_n * s_n2
             + delta * s_n1 * c_n1 * sx
             + (c_n2 ** 2 - 0.5 * delta * delta * s_n1 ** 2) * sy)

    # The sz line carries an unsquared S_{n+1} in its first parenthesis;
    # it is reproduced as printed rather than repaired.
    out_z = (-1j * 0.5 * eta * ((1.0 + rt1) * c_n1
                                + 0.5 * delta * (1.0 - rt1) * s_n1) * sx * s_n1
             + 0.5 * eta * ((1.0 - rt1) * c_n1
                            + 0.5 * delta * (1.0 + rt1) * s_n1) * sy * s_n1
             - (c_n1 ** 2 + 0.25 * delta * delta * s_n1) * sz
             + eta * eta * s_n ** 2 * (0.5 - (n + 0.5) * sz)
             - 1j * eta * 0.5 * (sx - 1j * sy) * rt1 * s_n * c_n1)

    residual = max(abs(out_x.imag), abs(out_y.imag), abs(out_z.imag))
    return BlochVector(out_x.real, out_y.real, out_z.real), residual


def jc_trajectory(s0: BlochVector, p: JCParams, grid: TimeGrid,
                  use_oracle: bool = False,
                  n_max: int | None = None) -> OverlapSeries:
    """Overlap trajectory of the cavity model over a time grid.

    ``use_oracle`` routes every sample through the truncated-Fock matrix
    oracle instead of the block propagation (slow, for cross-checks).
    """
    if use_oracle:
        evolve = lambda t: full_fock_oracle(s0, p, t, n_max)
    else:
        evolve = lambda t: evolve_qubit_jc(s0, p, t)
    metadata = {
        "model": "jc",
        "eta": p.eta,
        "detuning": p.delta_over_gamma,
        "gamma": p.gamma,
        "photons": p.photons,
        "oracle": use_oracle,
        "nmax": n_max if n_max is not None else p.photons + DEFAULT_NMAX_MARGIN,
        "time_axis": "gamma_t",
    }
    return build_series(s0, evolve, grid, metadata)
