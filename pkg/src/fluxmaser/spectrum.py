"""Eigenpairs and flux sweeps of the circuit Hamiltonian.

Dense LAPACK diagonalization is used up to operator dimension 4096; larger
problems go through shift-invert Lanczos with a deterministically seeded
start vector, so repeated calls give bit-identical results.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse.linalg as spla

from .circuit import (
    CircuitParams,
    HamiltonianOperator,
    PhaseGrid,
    assemble_hamiltonian,
    circulating_current,
)
from .errors import ConvergenceError

__all__ = ["EigenSpectrum", "SweepResult", "lowest_eigenpairs", "sweep_spectrum"]

DENSE_LIMIT = 4096
MAX_K = 8
DEFAULT_DEGENERACY_TOL = 5e-4


@dataclass
class EigenSpectrum:
    """Lowest eigenlevels and real position-sampled eigenstates.

    ``levels`` are ascending, in units of E_J.  ``states[i]`` is sampled on
    ``(phi_p_axis, phi_q_axis)`` and unit-normalized under the quadrature
    weight ``weight``; the component of largest magnitude is positive.
    ``residuals`` are the solver residual norms ``|H v - E v|`` in the
    operator basis, before any degenerate-cluster rotation.
    """

    params: CircuitParams
    grid: PhaseGrid
    representation: str
    sector: str | None
    levels: np.ndarray
    states: np.ndarray
    residuals: np.ndarray
    phi_p_axis: np.ndarray
    phi_q_axis: np.ndarray
    weight: float
    method: str

    @property
    def k(self) -> int:
        return self.levels.size

    def gap(self, i: int, j: int) -> float:
        return float(self.levels[j] - self.levels[i])


def _seeded_start(dim: int, seed: int) -> np.ndarray:
    rng = np.random.RandomState(seed)
    v0 = rng.standard_normal(dim)
    return v0 / np.linalg.norm(v0)


def _degenerate_groups(levels: np.ndarray, tol: float) -> list[list[int]]:
    groups: list[list[int]] = [[0]]
    for i in range(1, levels.size):
        if levels[i] - levels[i - 1] < tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def lowest_eigenpairs(
    op: HamiltonianOperator,
    k: int = 4,
    *,
    seed: int = 0,
    resolve_degeneracies: bool = True,
    degeneracy_tol: float = DEFAULT_DEGENERACY_TOL,
) -> EigenSpectrum:
    """Compute the ``k`` lowest eigenpairs of a circuit Hamiltonian.

    When ``resolve_degeneracies`` is set (default), eigenvectors inside any
    near-degenerate cluster (consecutive gaps below ``degeneracy_tol`` E_J)
    are rotated to diagonalize the loop-current drive profile.  That is the
    limiting adiabatic basis at a level crossing (the flux derivative of the
    Hamiltonian is proportional to the current operator), and it makes
    transition amplitudes continuous through crossings instead of
    solver-arbitrary.  Inside a cluster the rotated states are linear
    combinations of true eigenvectors, accurate to the cluster's energy
    spread; ``residuals`` always reports the raw solver quality.
    """
    if not 1 <= k <= MAX_K:
        raise ValueError(f"k must be between 1 and {MAX_K}, got {k}")
    dim = op.dimension
    if k >= dim:
        raise ValueError(f"k={k} too large for operator dimension {dim}")

    if dim <= DENSE_LIMIT:
        dense = op.matrix.toarray()
        vals, vecs = scipy.linalg.eigh(dense, subset_by_index=[0, k - 1])
        method = "dense"
    else:
        v0 = _seeded_start(dim, seed)
        vals, vecs = spla.eigsh(op.matrix, k=k, sigma=0.0, which="LM", v0=v0, tol=0)
        order = np.argsort(vals)
        vals = vals[order]
        vecs = vecs[:, order]
        method = "lanczos"

    residuals = np.array(
        [np.linalg.norm(op.matrix @ vecs[:, i] - vals[i] * vecs[:, i]) for i in range(k)]
    )
    scale = spla.norm(op.matrix, np.inf)
    worst = residuals.max()
    if worst > max(1e-8 * scale, 1e-10):
        raise ConvergenceError(
            f"eigensolver residual {worst:.3e} exceeds bound (operator scale {scale:.3e})"
        )

    states = np.stack([op.to_position(vecs[:, i]) for i in range(k)])

    if resolve_degeneracies:
        groups = [g for g in _degenerate_groups(vals, degeneracy_tol) if len(g) > 1]
        if groups:
            pp, qq = np.meshgrid(op.phi_p_axis, op.phi_q_axis, indexing="ij")
            drive = -circulating_current(op.params, pp, qq)
            for group in groups:
                block = np.empty((len(group), len(group)))
                for ia, a in enumerate(group):
                    for ib, b in enumerate(group):
                        block[ia, ib] = np.sum(states[a] * drive * states[b]) * op.weight
                block = 0.5 * (block + block.T)
                _, rot = scipy.linalg.eigh(block)
                states[group] = np.tensordot(rot.T, states[group], axes=1)

    for i in range(k):
        flat = states[i].ravel()
        if flat[np.argmax(np.abs(flat))] < 0:
            states[i] = -states[i]

    return EigenSpectrum(
        params=op.params,
        grid=op.grid,
        representation=op.representation,
        sector=op.sector,
        levels=vals.astype(float),
        states=states,
        residuals=residuals,
        phi_p_axis=op.phi_p_axis,
        phi_q_axis=op.phi_q_axis,
        weight=op.weight,
        method=method,
    )


@dataclass
class SweepResult:
    """Energy levels along a flux sweep at fixed ``f_s``."""

    f_values: np.ndarray
    levels: np.ndarray
    params: CircuitParams
    grid: PhaseGrid
    representation: str
    sector: str | None
    k: int
    max_residual: float
    from_cache: bool = False


def _sweep_cache_key(
    params: CircuitParams,
    grid: PhaseGrid,
    f_values: np.ndarray,
    k: int,
    representation: str,
    sector: str | None,
    seed: int,
) -> str:
    meta = {
        "gamma": repr(params.gamma),
        "ej_over_ec": repr(params.ej_over_ec),
        "f_s": repr(params.f_s),
        "ej_freq": repr(params.ej_freq),
        "n_p": grid.n_p,
        "n_q": grid.n_q,
        "k": k,
        "representation": representation,
        "sector": sector,
        "seed": seed,
    }
    digest = hashlib.sha256()
    digest.update(json.dumps(meta, sort_keys=True).encode())
    digest.update(f_values.astype(np.float64).tobytes())
    return digest.hexdigest()[:24]


def sweep_spectrum(
    params: CircuitParams,
    grid: PhaseGrid,
    f_values,
    k: int = 4,
    *,
    representation: str = "sector",
    sector: str = "even",
    seed: int = 0,
    cache_dir: str | None = None,
) -> SweepResult:
    """Levels vs applied flux ``f`` with everything else held fixed.

    Deterministic: the same inputs produce identical levels.  If
    ``cache_dir`` is given, results are memoized on disk under a key derived
    from all inputs, and reloads round-trip bit-exactly.
    """
    f_values = np.asarray(f_values, dtype=np.float64)
    cache_path = None
    if cache_dir is not None:
        key = _sweep_cache_key(params, grid, f_values, k, representation, sector, seed)
        cache_path = os.path.join(cache_dir, f"sweep_{key}.npz")
        if os.path.exists(cache_path):
            with np.load(cache_path) as payload:
                if np.array_equal(payload["f_values"], f_values):
                    return SweepResult(
                        f_values=payload["f_values"],
                        levels=payload["levels"],
                        params=params,
                        grid=grid,
                        representation=representation,
                        sector=sector,
                        k=k,
                        max_residual=float(payload["max_residual"]),
                        from_cache=True,
                    )

    levels = np.empty((f_values.size, k))
    worst = 0.0
    for i, f in enumerate(f_values):
        op = assemble_hamiltonian(
            params.replace(f=float(f)), grid, representation=representation, sector=sector
        )
        spec = lowest_eigenpairs(op, k, seed=seed, resolve_degeneracies=False)
        levels[i] = spec.levels
        worst = max(worst, float(spec.residuals.max()))

    if cache_path is not None:
        os.makedirs(cache_dir, exist_ok=True)
        np.savez(cache_path, f_values=f_values, levels=levels, max_residual=worst)

    return SweepResult(
        f_values=f_values,
        levels=levels,
        params=params,
        grid=grid,
        representation=representation,
        sector=sector,
        k=k,
        max_residual=worst,
    )
