"""Two-dimensional phase-space model of the flux-biased circuit.

The circuit is described by two periodic phase coordinates: ``phi_p`` (the
in-phase junction combination, period ``2*pi``) and ``phi_q`` (the SQUID-loop
combination, period ``4*pi``).  In units of the Josephson energy the
Hamiltonian reads::

    H/E_J = -c_p d2/dphi_p^2 - c_q d2/dphi_q^2 + U(phi_p, phi_q)/E_J

with kinetic coefficients fixed by the charging-to-Josephson energy ratio
``x = ej_over_ec``::

    c_p = 2/x          c_q = 8/(x*(1 + 4*gamma))

The potential is invariant under the half-period translation
``(phi_p, phi_q) -> (phi_p + pi, phi_q + 2*pi)``, so the spectrum on the full
``[-pi,pi) x [-2pi,2pi)`` torus contains every physical level twice, once per
symmetry sector.  ``assemble_hamiltonian`` therefore offers two
representations:

* ``"torus"`` — literal 5-point finite differences on the full doubled cell
  (useful for validation; its spectrum is the union of both sectors);
* ``"sector"`` — the default: one symmetry sector, built from real
  trigonometric modes in ``phi_p`` crossed with finite differences in
  ``phi_q`` on the reduced domain ``[-pi, pi)``, with a per-mode boundary
  sign implementing the sector condition.  This is what physical spectra and
  matrix elements are computed from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import scipy.sparse as sp

__all__ = [
    "CircuitParams",
    "PhaseGrid",
    "HamiltonianOperator",
    "effective_alpha",
    "potential",
    "circulating_current",
    "assemble_hamiltonian",
]

MIN_N_P = 16
MIN_N_Q = 32


@dataclass(frozen=True)
class CircuitParams:
    """Static circuit biases and energy scales.

    Parameters
    ----------
    gamma:
        Ratio of the SQUID junction's Josephson energy to the main junctions'.
    ej_over_ec:
        Josephson-to-charging energy ratio ``x = E_J/E_c``.
    f:
        Reduced external flux through the main loop (units of the flux
        quantum), already including half the SQUID flux.
    f_s:
        Reduced flux through the SQUID loop.
    ej_freq:
        Josephson energy expressed as a frequency, ``E_J/h`` in GHz.  Sets
        the absolute time/frequency scale of derived quantities.
    """

    gamma: float = 0.5
    ej_over_ec: float = 100.0
    f: float = 0.5
    f_s: float = 0.0
    ej_freq: float = 400.0

    def __post_init__(self) -> None:
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if not self.ej_over_ec > 0:
            raise ValueError(f"ej_over_ec must be positive, got {self.ej_over_ec}")
        if not self.ej_freq > 0:
            raise ValueError(f"ej_freq must be positive, got {self.ej_freq}")

    @property
    def c_p(self) -> float:
        return 2.0 / self.ej_over_ec

    @property
    def c_q(self) -> float:
        return 8.0 / (self.ej_over_ec * (1.0 + 4.0 * self.gamma))

    def replace(self, **kwargs) -> "CircuitParams":
        from dataclasses import replace as _replace

        return _replace(self, **kwargs)


@dataclass(frozen=True)
class PhaseGrid:
    """Uniform sampling of the doubled phase cell ``[-pi,pi) x [-2pi,2pi)``.

    ``n_q_half`` points cover the reduced domain ``[-pi, pi)`` used by the
    sector representation; the count is chosen so the reduced step matches
    the full-cell step (``(n_q+1)//2`` points).
    """

    n_p: int = 81
    n_q: int = 161

    def __post_init__(self) -> None:
        if self.n_p < MIN_N_P:
            raise ValueError(f"n_p must be >= {MIN_N_P}, got {self.n_p}")
        if self.n_q < MIN_N_Q:
            raise ValueError(f"n_q must be >= {MIN_N_Q}, got {self.n_q}")

    @property
    def h_p(self) -> float:
        return 2.0 * math.pi / self.n_p

    @property
    def h_q(self) -> float:
        return 4.0 * math.pi / self.n_q

    @property
    def phi_p_axis(self) -> np.ndarray:
        return -math.pi + self.h_p * np.arange(self.n_p)

    @property
    def phi_q_axis(self) -> np.ndarray:
        return -2.0 * math.pi + self.h_q * np.arange(self.n_q)

    @property
    def n_q_half(self) -> int:
        return (self.n_q + 1) // 2

    @property
    def h_q_half(self) -> float:
        return 2.0 * math.pi / self.n_q_half

    @property
    def phi_q_half_axis(self) -> np.ndarray:
        return -math.pi + self.h_q_half * np.arange(self.n_q_half)


def effective_alpha(gamma: float, f_s: float) -> float:
    """Flux-tunable effective junction strength ``alpha = 2*gamma*cos(pi*f_s)``."""
    return 2.0 * gamma * math.cos(math.pi * f_s)


def potential(params: CircuitParams, phi_p, phi_q):
    """Potential energy surface in units of E_J (vectorized over the phases)."""
    phi_p = np.asarray(phi_p, dtype=float)
    phi_q = np.asarray(phi_q, dtype=float)
    term_main = 2.0 * (1.0 - np.cos(phi_p) * np.cos(math.pi * params.f + phi_q / 2.0))
    term_squid = 2.0 * params.gamma * (
        1.0 - math.cos(math.pi * params.f_s) * np.cos(phi_q)
    )
    return term_main + term_squid


def circulating_current(params: CircuitParams, phi_p, phi_q):
    """Loop current profile ``-cos(phi_p)*sin(pi*f + phi_q/2)`` in units of I_c.

    Its matrix elements between energy eigenstates set the microwave
    transition amplitudes; its expectation value is (up to ``-2*pi``) the
    flux derivative of the energy.
    """
    phi_p = np.asarray(phi_p, dtype=float)
    phi_q = np.asarray(phi_q, dtype=float)
    return -np.cos(phi_p) * np.sin(math.pi * params.f + phi_q / 2.0)


def _minus_d2(n: int, h: float, wrap_sign: float = 1.0) -> sp.csr_matrix:
    """Second-order 3-point stencil for ``-d2/dx2`` with (anti)periodic wrap."""
    inv = 1.0 / (h * h)
    main = np.full(n, 2.0 * inv)
    off = np.full(n - 1, -inv)
    mat = sp.diags([off, main, off], [-1, 0, 1], format="lil")
    mat[0, n - 1] = -inv * wrap_sign
    mat[n - 1, 0] = -inv * wrap_sign
    return mat.tocsr()


def _sector_modes(n_p: int) -> tuple[np.ndarray, np.ndarray]:
    """Real trigonometric basis bookkeeping for the ``phi_p`` direction.

    Returns ``(m, kind)`` arrays; ``kind`` is 0 for cosine-type (including
    the constant mode m=0) and 1 for sine-type.  For even sample counts the
    unpaired top harmonic is dropped so discrete orthonormality stays exact.
    """
    if n_p % 2 == 1:
        m_max = (n_p - 1) // 2
    else:
        m_max = n_p // 2 - 1
    ms = [0]
    kinds = [0]
    for m in range(1, m_max + 1):
        ms += [m, m]
        kinds += [0, 1]
    return np.asarray(ms, dtype=int), np.asarray(kinds, dtype=int)


def _sector_basis_matrix(phi_p_axis: np.ndarray, ms: np.ndarray, kinds: np.ndarray) -> np.ndarray:
    """Position samples of the orthonormal trig basis, shape (n_p, n_modes)."""
    n_p = phi_p_axis.size
    basis = np.empty((n_p, ms.size))
    for a, (m, kind) in enumerate(zip(ms, kinds)):
        if m == 0:
            basis[:, a] = 1.0 / math.sqrt(2.0 * math.pi)
        elif kind == 0:
            basis[:, a] = np.cos(m * phi_p_axis) / math.sqrt(math.pi)
        else:
            basis[:, a] = np.sin(m * phi_p_axis) / math.sqrt(math.pi)
    return basis


def _coupling_ladder(ms: np.ndarray, kinds: np.ndarray) -> list[tuple[int, int, float]]:
    """Matrix elements of ``cos(phi_p)`` between basis modes.

    ``cos`` couples neighbouring harmonics of the same kind with weight 1/2,
    except the constant-to-first-cosine link whose weight is 1/sqrt(2).
    """
    index = {(int(m), int(k)): a for a, (m, k) in enumerate(zip(ms, kinds))}
    ladder = []
    m_max = int(ms.max())
    if m_max >= 1:
        ladder.append((index[(0, 0)], index[(1, 0)], 1.0 / math.sqrt(2.0)))
    for m in range(1, m_max):
        ladder.append((index[(m, 0)], index[(m + 1, 0)], 0.5))
        ladder.append((index[(m, 1)], index[(m + 1, 1)], 0.5))
    return ladder


@dataclass
class HamiltonianOperator:
    """Sparse symmetric real Hamiltonian in units of E_J.

    ``apply`` acts on coefficient vectors in the operator's own basis;
    ``to_position`` maps such vectors to real wavefunction samples on
    ``(phi_p_axis, phi_q_axis)``, unit-normalized under the quadrature
    weight ``weight = h_p * h_q_used``.
    """

    matrix: sp.csr_matrix
    params: CircuitParams
    grid: PhaseGrid
    representation: str
    sector: str | None
    c_p: float
    c_q: float
    phi_p_axis: np.ndarray
    phi_q_axis: np.ndarray
    weight: float
    _basis: np.ndarray | None = field(default=None, repr=False)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.matrix @ vec

    def to_position(self, vec: np.ndarray) -> np.ndarray:
        """Map an l2-unit coefficient vector to quadrature-unit samples."""
        n_qu = self.phi_q_axis.size
        if self.representation == "torus":
            return vec.reshape(self.phi_p_axis.size, n_qu) / math.sqrt(self.weight)
        coeffs = vec.reshape(-1, n_qu)
        h_qr = self.phi_q_axis[1] - self.phi_q_axis[0]
        return (self._basis @ coeffs) / math.sqrt(h_qr)


def assemble_hamiltonian(
    params: CircuitParams,
    grid: PhaseGrid,
    *,
    representation: Literal["sector", "torus"] = "sector",
    sector: Literal["even", "odd"] = "even",
    zero_potential: bool = False,
) -> HamiltonianOperator:
    """Build the sparse Hamiltonian matrix for the requested representation.

    With ``zero_potential=True`` only the kinetic terms are kept (plane-wave
    checks).  The torus representation uses the 5-point periodic
    finite-difference stencil on the full cell; the sector representation is
    exact in ``phi_p`` (trigonometric modes) and second order in ``phi_q``.
    """
    if representation == "torus":
        return _assemble_torus(params, grid, zero_potential)
    if representation != "sector":
        raise ValueError(f"unknown representation {representation!r}")
    if sector not in ("even", "odd"):
        raise ValueError(f"sector must be 'even' or 'odd', got {sector!r}")
    return _assemble_sector(params, grid, sector, zero_potential)


def _assemble_torus(params: CircuitParams, grid: PhaseGrid, zero_potential: bool) -> HamiltonianOperator:
    kin_p = _minus_d2(grid.n_p, grid.h_p)
    kin_q = _minus_d2(grid.n_q, grid.h_q)
    ham = params.c_p * sp.kron(kin_p, sp.identity(grid.n_q), format="csr")
    ham = ham + params.c_q * sp.kron(sp.identity(grid.n_p), kin_q, format="csr")
    if not zero_potential:
        pp, qq = np.meshgrid(grid.phi_p_axis, grid.phi_q_axis, indexing="ij")
        ham = ham + sp.diags(potential(params, pp, qq).ravel())
    return HamiltonianOperator(
        matrix=ham.tocsr(),
        params=params,
        grid=grid,
        representation="torus",
        sector=None,
        c_p=params.c_p,
        c_q=params.c_q,
        phi_p_axis=grid.phi_p_axis,
        phi_q_axis=grid.phi_q_axis,
        weight=grid.h_p * grid.h_q,
    )


def _assemble_sector(
    params: CircuitParams, grid: PhaseGrid, sector: str, zero_potential: bool
) -> HamiltonianOperator:
    sigma = 1.0 if sector == "even" else -1.0
    ms, kinds = _sector_modes(grid.n_p)
    n_modes = ms.size
    n_q = grid.n_q_half
    h_q = grid.h_q_half
    q_axis = grid.phi_q_half_axis

    if zero_potential:
        u_diag = np.zeros(n_q)
        g_profile = np.zeros(n_q)
    else:
        u_diag = 2.0 + 2.0 * params.gamma * (
            1.0 - math.cos(math.pi * params.f_s) * np.cos(q_axis)
        )
        g_profile = np.cos(math.pi * params.f + q_axis / 2.0)

    blocks_rows: list[np.ndarray] = []
    blocks_cols: list[np.ndarray] = []
    blocks_vals: list[np.ndarray] = []
    j_idx = np.arange(n_q)
    inv_h2 = 1.0 / (h_q * h_q)

    for a, m in enumerate(ms):
        base = a * n_q
        wrap = sigma * (1.0 if m % 2 == 0 else -1.0)
        diag = params.c_p * m * m + 2.0 * params.c_q * inv_h2 + u_diag
        blocks_rows.append(base + j_idx)
        blocks_cols.append(base + j_idx)
        blocks_vals.append(diag)
        off = np.full(n_q - 1, -params.c_q * inv_h2)
        blocks_rows.append(base + j_idx[:-1])
        blocks_cols.append(base + j_idx[1:])
        blocks_vals.append(off)
        blocks_rows.append(base + j_idx[1:])
        blocks_cols.append(base + j_idx[:-1])
        blocks_vals.append(off)
        corner = np.array([-params.c_q * inv_h2 * wrap])
        blocks_rows.append(np.array([base]))
        blocks_cols.append(np.array([base + n_q - 1]))
        blocks_vals.append(corner)
        blocks_rows.append(np.array([base + n_q - 1]))
        blocks_cols.append(np.array([base]))
        blocks_vals.append(corner)

    if not zero_potential:
        for a, b, wab in _coupling_ladder(ms, kinds):
            vals = -2.0 * wab * g_profile
            blocks_rows.append(a * n_q + j_idx)
            blocks_cols.append(b * n_q + j_idx)
            blocks_vals.append(vals)
            blocks_rows.append(b * n_q + j_idx)
            blocks_cols.append(a * n_q + j_idx)
            blocks_vals.append(vals)

    dim = n_modes * n_q
    ham = sp.coo_matrix(
        (np.concatenate(blocks_vals), (np.concatenate(blocks_rows), np.concatenate(blocks_cols))),
        shape=(dim, dim),
    ).tocsr()
    basis = _sector_basis_matrix(grid.phi_p_axis, ms, kinds)
    return HamiltonianOperator(
        matrix=ham,
        params=params,
        grid=grid,
        representation="sector",
        sector=sector,
        c_p=params.c_p,
        c_q=params.c_q,
        phi_p_axis=grid.phi_p_axis,
        phi_q_axis=q_axis,
        weight=grid.h_p * h_q,
        _basis=basis,
    )
