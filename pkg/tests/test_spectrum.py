"""Eigensolver contracts: ordering, orthonormality, determinism, sweeps, cache."""

import numpy as np
import pytest

from fluxmaser import (
    CircuitParams,
    PhaseGrid,
    assemble_hamiltonian,
    lowest_eigenpairs,
    sweep_spectrum,
)

COARSE = PhaseGrid(41, 81)


@pytest.fixture(scope="module")
def coarse_spec():
    return lowest_eigenpairs(
        assemble_hamiltonian(CircuitParams(f=0.47, f_s=0.22), COARSE), 4
    )


def test_levels_sorted_ascending(coarse_spec):
    assert np.all(np.diff(coarse_spec.levels) >= 0)


def test_states_orthonormal_under_quadrature(coarse_spec):
    k = coarse_spec.k
    gram = np.empty((k, k))
    for i in range(k):
        for j in range(k):
            gram[i, j] = np.sum(coarse_spec.states[i] * coarse_spec.states[j]) * coarse_spec.weight
    assert np.max(np.abs(gram - np.eye(k))) < 1e-8


def test_states_real_with_positive_anchor(coarse_spec):
    for state in coarse_spec.states:
        assert np.isrealobj(state)
        assert state.flat[np.argmax(np.abs(state))] > 0


def test_solver_residuals_tiny(coarse_spec):
    assert np.max(coarse_spec.residuals) < 1e-8


def test_k_range_enforced():
    op = assemble_hamiltonian(CircuitParams(), COARSE)
    with pytest.raises(ValueError):
        lowest_eigenpairs(op, 0)
    with pytest.raises(ValueError):
        lowest_eigenpairs(op, 9)


def test_repeat_solves_identical():
    # production-size operator exercises the iterative path; the seeded start
    # vector makes the answer reproducible
    op = assemble_hamiltonian(CircuitParams(f=0.493, f_s=0.27), PhaseGrid(81, 161))
    a = lowest_eigenpairs(op, 4)
    b = lowest_eigenpairs(op, 4)
    assert a.method == "lanczos"
    assert np.max(np.abs(a.levels - b.levels)) < 1e-12
    assert np.max(np.abs(a.states - b.states)) < 1e-12


def test_gap_at_operating_point(spec_resonant):
    gap = spec_resonant.gap(0, 1)
    assert 0.04 <= gap <= 0.06


def test_upper_pair_nearly_touches_at_symmetric_point(spec_crossing):
    assert spec_crossing.gap(2, 3) < 1e-3


def test_sweep_levels_continuous():
    # no eigenvalue may jump by more than 10x the drive-coupling slope bound
    # (2*pi per unit f) between adjacent scan points
    f_values = np.linspace(0.49, 0.50, 11)
    sweep = sweep_spectrum(CircuitParams(f_s=0.27), COARSE, f_values, k=4)
    assert np.max(np.abs(np.diff(sweep.levels, axis=0))) < 10 * 2 * np.pi * 0.001


def test_sweep_deterministic():
    f_values = np.linspace(0.48, 0.50, 5)
    a = sweep_spectrum(CircuitParams(f_s=0.22), COARSE, f_values, k=3)
    b = sweep_spectrum(CircuitParams(f_s=0.22), COARSE, f_values, k=3)
    assert np.max(np.abs(a.levels - b.levels)) < 1e-12


def test_sweep_cache_round_trip(tmp_path):
    f_values = np.linspace(0.48, 0.50, 5)
    params = CircuitParams(f_s=0.22)
    first = sweep_spectrum(params, COARSE, f_values, k=3, cache_dir=tmp_path)
    assert not first.from_cache
    second = sweep_spectrum(params, COARSE, f_values, k=3, cache_dir=tmp_path)
    assert second.from_cache
    assert np.array_equal(first.levels, second.levels)  # bit-exact, not approximate


def test_sweep_cache_invalidated_by_any_field(tmp_path):
    f_values = np.linspace(0.48, 0.50, 5)
    sweep_spectrum(CircuitParams(f_s=0.22), COARSE, f_values, k=3, cache_dir=tmp_path)
    other = sweep_spectrum(CircuitParams(f_s=0.27), COARSE, f_values, k=3, cache_dir=tmp_path)
    assert not other.from_cache
