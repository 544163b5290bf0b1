import math

import numpy as np
import pytest

from qspeed.errors import ContractViolationError, InvalidStateError
from qspeed.states import (
    BlochVector,
    bloch_to_density,
    check_bloch,
    density_to_bloch,
    eigenbasis,
    overlap_matrix,
    uhlmann_fidelity,
    validate_density,
)

RT2 = 1.0 / math.sqrt(2.0)


def random_bloch(rng, max_norm=1.0):
    v = rng.normal(size=3)
    v *= rng.uniform(0.0, max_norm) / np.linalg.norm(v)
    return BlochVector.from_array(v)


def test_bloch_round_trip():
    rng = np.random.default_rng(41)
    for _ in range(300):
        s = random_bloch(rng)
        back = density_to_bloch(bloch_to_density(s))
        assert np.max(np.abs(back.as_array() - s.as_array())) < 1e-14


def test_density_matrix_entries():
    # rho01 = (sx - i sy)/2 under the standard Pauli convention
    rho = bloch_to_density(BlochVector(0.6, -0.2, 0.3))
    assert abs(rho[0, 0] - 0.65) < 1e-15
    assert abs(rho[1, 1] - 0.35) < 1e-15
    assert abs(rho[0, 1] - (0.3 + 0.1j)) < 1e-15
    assert abs(rho[1, 0] - (0.3 - 0.1j)) < 1e-15


def test_purity():
    assert abs(BlochVector(0.0, 0.0, 0.0).purity() - 0.5) < 1e-15
    assert abs(BlochVector(0.0, 1.0, 0.0).purity() - 1.0) < 1e-15
    s = BlochVector(0.3, -0.4, 0.1)
    rho = bloch_to_density(s)
    assert abs(s.purity() - float(np.trace(rho @ rho).real)) < 1e-15


def test_check_bloch_rejects_outside_ball():
    check_bloch(BlochVector(1.0, 0.0, 0.0))          # boundary is fine
    with pytest.raises(InvalidStateError):
        check_bloch(BlochVector(1.0, 1e-4, 0.0))
    with pytest.raises(InvalidStateError):
        check_bloch(BlochVector(math.nan, 0.0, 0.0))


def test_validate_density_rejects_bad_inputs():
    with pytest.raises(ContractViolationError):
        validate_density(np.eye(2))                   # trace 2
    with pytest.raises(ContractViolationError):
        validate_density(np.array([[1.2, 0.0], [0.0, -0.2]]))  # negative eigenvalue
    with pytest.raises(ContractViolationError):
        validate_density(np.array([[0.5, 0.5], [0.0, 0.5]]))   # not Hermitian


def test_eigenbasis_pure_state_along_x():
    rho = bloch_to_density(BlochVector(1.0, 0.0, 0.0))
    eb = eigenbasis(rho)
    assert not eb.degenerate
    assert np.allclose(eb.eigenvalues, [1.0, 0.0], atol=1e-14)
    assert np.allclose(eb.vectors[:, 0], [RT2, RT2], atol=1e-12)
    assert np.allclose(eb.vectors[:, 1], [RT2, -RT2], atol=1e-12)


def test_eigenbasis_eigenvalues_from_norm():
    # spectrum of rho is (1 +- |s|)/2 regardless of direction
    rng = np.random.default_rng(43)
    for _ in range(100):
        s = random_bloch(rng)
        eb = eigenbasis(bloch_to_density(s))
        assert abs(eb.eigenvalues[0] - 0.5 * (1.0 + s.norm())) < 1e-12
        assert abs(eb.eigenvalues[1] - 0.5 * (1.0 - s.norm())) < 1e-12


def test_eigenbasis_degenerate_keeps_previous():
    prev = eigenbasis(bloch_to_density(BlochVector(0.0, 0.0, 0.9)))
    mixed = np.eye(2, dtype=complex) / 2.0
    eb = eigenbasis(mixed, previous=prev)
    assert eb.degenerate
    assert np.array_equal(eb.vectors, prev.vectors)
    # without a previous basis the flag is still set
    assert eigenbasis(mixed).degenerate


def test_overlap_matrix_unitary():
    rng = np.random.default_rng(44)
    for _ in range(200):
        a = eigenbasis(bloch_to_density(random_bloch(rng, 0.98)))
        b = eigenbasis(bloch_to_density(random_bloch(rng, 0.98)))
        sp = overlap_matrix(a, b)
        prod = sp.entries.conj().T @ sp.entries
        assert np.max(np.abs(prod - np.eye(2))) < 1e-12
        # unitarity ties the magnitudes together pairwise
        assert abs(sp.magnitudes[0, 0] - sp.magnitudes[1, 1]) < 1e-12
        assert abs(sp.magnitudes[0, 1] - sp.magnitudes[1, 0]) < 1e-12


def test_overlap_matrix_identity_and_flip():
    up = eigenbasis(bloch_to_density(BlochVector(0.0, 0.0, 1.0)))
    same = overlap_matrix(up, up)
    assert np.allclose(same.magnitudes, np.eye(2), atol=1e-14)
    down = eigenbasis(bloch_to_density(BlochVector(0.0, 0.0, -1.0)))
    flip = overlap_matrix(up, down)
    assert np.allclose(flip.magnitudes, [[0.0, 1.0], [1.0, 0.0]], atol=1e-14)


def test_overlap_antipodal_is_orthogonal():
    rng = np.random.default_rng(45)
    for _ in range(100):
        s = random_bloch(rng, 0.95)
        a = eigenbasis(bloch_to_density(s))
        b = eigenbasis(bloch_to_density(BlochVector.from_array(-s.as_array())))
        sp = overlap_matrix(a, b)
        assert sp.magnitudes[0, 0] < 1e-12
        assert abs(sp.magnitudes[0, 1] - 1.0) < 1e-12


def test_fidelity_pure_states():
    x = bloch_to_density(BlochVector(1.0, 0.0, 0.0))
    z = bloch_to_density(BlochVector(0.0, 0.0, 1.0))
    mz = bloch_to_density(BlochVector(0.0, 0.0, -1.0))
    assert abs(uhlmann_fidelity(x, x) - 1.0) < 1e-12
    assert abs(uhlmann_fidelity(x, z) - 0.5) < 1e-12
    assert uhlmann_fidelity(z, mz) < 1e-12


def test_fidelity_pure_pair_closed_form():
    # for unit Bloch vectors F = (1 + a . b)/2
    rng = np.random.default_rng(46)
    for _ in range(100):
        a = random_bloch(rng)
        b = random_bloch(rng)
        ua = BlochVector.from_array(a.as_array() / a.norm())
        ub = BlochVector.from_array(b.as_array() / b.norm())
        f = uhlmann_fidelity(bloch_to_density(ua), bloch_to_density(ub))
        expect = 0.5 * (1.0 + float(ua.as_array() @ ub.as_array()))
        assert abs(f - expect) < 1e-12


def test_fidelity_mixed_frozen_value():
    a = bloch_to_density(BlochVector(0.3, -0.2, 0.4))
    b = bloch_to_density(BlochVector(-0.1, 0.5, 0.2))
    assert abs(uhlmann_fidelity(a, b) - 0.82749113464029134) < 1e-12


def test_fidelity_symmetric_and_bounded():
    rng = np.random.default_rng(47)
    for _ in range(200):
        a = bloch_to_density(random_bloch(rng))
        b = bloch_to_density(random_bloch(rng))
        f = uhlmann_fidelity(a, b)
        assert 0.0 <= f <= 1.0
        assert abs(f - uhlmann_fidelity(b, a)) < 1e-13
