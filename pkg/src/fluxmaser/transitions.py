"""Microwave transition amplitudes and adiabatic-control figures of merit.

Transition amplitudes ``|t_ij|`` are grid quadratures of the loop-current
profile between eigenstates, in units of ``I_c * Phi_w0`` (critical current
times the vacuum flux amplitude).  The adiabaticity coefficient ``K_ij``
measures how slowly the SQUID flux must be ramped for the state to follow:
``K_ij * |d f_s/dt| << 1`` with the ramp rate in 1/ns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import CircuitParams, PhaseGrid, assemble_hamiltonian
from .errors import DegenerateGapError
from .spectrum import EigenSpectrum, lowest_eigenpairs

__all__ = [
    "TransitionTable",
    "transition_element",
    "adiabatic_k",
    "transition_table",
    "adiabatic_rate_check",
    "pumping_feasibility",
    "relative_relaxation",
]

DEGENERACY_FLOOR = 1e-6


def transition_element(spec: EigenSpectrum, i: int, j: int) -> float:
    """``|<E_i| cos(phi_p) sin(pi f + phi_q/2) |E_j>|`` by grid quadrature."""
    pp, qq = np.meshgrid(spec.phi_p_axis, spec.phi_q_axis, indexing="ij")
    profile = np.cos(pp) * np.sin(math.pi * spec.params.f + qq / 2.0)
    return float(abs(np.sum(spec.states[i] * profile * spec.states[j]) * spec.weight))


def adiabatic_k(spec: EigenSpectrum, i: int, j: int, *, degeneracy_floor: float = DEGENERACY_FLOOR) -> float:
    """Adiabaticity coefficient for a SQUID-flux ramp, in nanoseconds.

    ``K_ij = |<i| dH/df_s |j>| / (E_i - E_j)^2`` with the energy scale
    restored through ``ej_freq`` (E_J expressed as an ordinary frequency, so
    the dimensionless ratio divides by ej_freq in GHz to land in ns).  The
    flux derivative of the potential is ``2 pi gamma sin(pi f_s) cos(phi_q)``,
    which vanishes identically at ``f_s = 0``.

    Raises
    ------
    DegenerateGapError
        If ``|E_i - E_j|`` is below ``degeneracy_floor`` (in E_J units): the
        pair is effectively crossing and the coefficient diverges.
    """
    params = spec.params
    if params.f_s == 0.0:
        return 0.0
    gap = spec.levels[j] - spec.levels[i]
    if abs(gap) < degeneracy_floor:
        raise DegenerateGapError(
            f"levels {i},{j} separated by {abs(gap):.3e} E_J (< {degeneracy_floor:.0e}): crossing"
        )
    _, qq = np.meshgrid(spec.phi_p_axis, spec.phi_q_axis, indexing="ij")
    dpot = 2.0 * math.pi * params.gamma * math.sin(math.pi * params.f_s) * np.cos(qq)
    element = abs(np.sum(spec.states[i] * dpot * spec.states[j]) * spec.weight)
    return float(element / gap**2 / params.ej_freq)


@dataclass
class TransitionTable:
    """Transition amplitudes, gaps and adiabaticity along a flux sweep.

    ``k_01``/``k_12`` hold NaN where the corresponding pair is closer than
    the degeneracy floor; the matching ``crossing_*`` mask records it.
    """

    params: CircuitParams
    grid: PhaseGrid
    f_values: np.ndarray
    gap_01: np.ndarray
    gap_02: np.ndarray
    gap_12: np.ndarray
    t_01: np.ndarray
    t_02: np.ndarray
    t_12: np.ndarray
    k_01: np.ndarray
    k_12: np.ndarray
    crossing_01: np.ndarray
    crossing_12: np.ndarray


def transition_table(
    params: CircuitParams,
    grid: PhaseGrid,
    f_values,
    *,
    k: int = 6,
    sector: str = "even",
    seed: int = 0,
) -> TransitionTable:
    """Sweep ``f`` at fixed ``f_s`` and tabulate the working-level couplings.

    Six levels are solved by default so that near-degenerate clusters around
    the half-flux crossings are fully contained and can be consistently
    rotated before amplitudes are read off.
    """
    f_values = np.asarray(f_values, dtype=np.float64)
    n = f_values.size
    cols = {name: np.empty(n) for name in ("gap_01", "gap_02", "gap_12", "t_01", "t_02", "t_12", "k_01", "k_12")}
    crossing_01 = np.zeros(n, dtype=bool)
    crossing_12 = np.zeros(n, dtype=bool)

    for idx, f in enumerate(f_values):
        op = assemble_hamiltonian(params.replace(f=float(f)), grid, sector=sector)
        spec = lowest_eigenpairs(op, k, seed=seed)
        cols["gap_01"][idx] = spec.gap(0, 1)
        cols["gap_02"][idx] = spec.gap(0, 2)
        cols["gap_12"][idx] = spec.gap(1, 2)
        cols["t_01"][idx] = transition_element(spec, 0, 1)
        cols["t_02"][idx] = transition_element(spec, 0, 2)
        cols["t_12"][idx] = transition_element(spec, 1, 2)
        try:
            cols["k_01"][idx] = adiabatic_k(spec, 0, 1)
        except DegenerateGapError:
            cols["k_01"][idx] = math.nan
            crossing_01[idx] = True
        try:
            cols["k_12"][idx] = adiabatic_k(spec, 1, 2)
        except DegenerateGapError:
            cols["k_12"][idx] = math.nan
            crossing_12[idx] = True

    return TransitionTable(
        params=params,
        grid=grid,
        f_values=f_values,
        crossing_01=crossing_01,
        crossing_12=crossing_12,
        **cols,
    )


@dataclass(frozen=True)
class RateCheck:
    product: float
    adiabatic: bool


def adiabatic_rate_check(k_ns: float, ramp_rate_per_ns: float, threshold: float = 0.1) -> RateCheck:
    """Evaluate ``K * |df_s/dt|`` and compare against the adiabatic threshold."""
    product = abs(k_ns * ramp_rate_per_ns)
    return RateCheck(product=product, adiabatic=product < threshold)


@dataclass(frozen=True)
class Feasibility:
    ratio: float
    passes: bool


def pumping_feasibility(t_01: float, t_12: float, t_02: float, threshold: float = 5.0) -> Feasibility:
    """Pump-selectivity ratio ``min(|t_12|, |t_02|) / |t_01|``.

    Large values mean the two pump legs dominate the direct 0-1 leakage, so
    population can be cycled into the upper working level faster than it
    decays.  A zero-leakage amplitude gives an infinite ratio.
    """
    if t_01 == 0.0:
        return Feasibility(ratio=math.inf, passes=True)
    ratio = min(abs(t_12), abs(t_02)) / abs(t_01)
    return Feasibility(ratio=ratio, passes=ratio >= threshold)


def relative_relaxation(t_01_a: float, t_01_b: float) -> float:
    """Radiative-lifetime ratio between two bias points, ``(t_b/t_a)^2``.

    Spontaneous emission scales with the squared amplitude, so this is how
    much faster the state relaxes at point ``b`` than at point ``a``.
    """
    return (t_01_b / t_01_a) ** 2
