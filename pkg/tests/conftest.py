"""Shared fixtures.

The three production-grid eigensolves below are the expensive inputs that
several test modules share (transition amplitudes, ramp sensitivities, the
headline gap checks), so they are solved once per session.
"""

import pytest

from fluxmaser import CircuitParams, PhaseGrid, assemble_hamiltonian, lowest_eigenpairs

PRODUCTION_GRID = (81, 161)


def solve_point(f, f_s, k=6, grid=PRODUCTION_GRID):
    op = assemble_hamiltonian(CircuitParams(f=f, f_s=f_s), PhaseGrid(*grid))
    return lowest_eigenpairs(op, k)


@pytest.fixture(scope="session")
def spec_resonant():
    """Operating point: biased near half flux with screening on."""
    return solve_point(0.493, 0.27)


@pytest.fixture(scope="session")
def spec_offres():
    """Same bias, weaker screening — the suppressed-pump comparison point."""
    return solve_point(0.493, 0.22)


@pytest.fixture(scope="session")
def spec_crossing():
    """Symmetric point with screening off: selection rules and level crossings."""
    return solve_point(0.5, 0.0)
