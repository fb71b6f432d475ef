"""Master-equation engine for the pumped cavity.

The cavity field (truncated at ``n_max`` photons) evolves under

    drho/dt = r_a (M - 1) rho - (r_a/2) (M - 1)^2 rho + L rho

where ``M`` is the one-transit gain map of an inverted emitter, ``r_a`` the
emitter arrival rate and ``L`` the thermal-bath dissipator.  The first-order
term is ordinary Poissonian gain; the second-order term is the correction
for regular (sub-Poissonian) arming of the emitter.  Everything is expressed
in cavity-lifetime units: ``kappa = 1`` and ``r_a = n_t``.

The module deliberately offers two independent routes to the steady state —
time integration (``evolve``) and an explicit nullspace of the
diagonal-sector generator (``steady_state_nullspace``) — used to validate
the closed-form recursions elsewhere.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import AmbiguousSteadyStateError, InvariantViolation, StabilityError, TruncationWarning
from .maser import MaserConfig, PhotonDistribution

__all__ = [
    "validate_density_matrix",
    "fock_state",
    "thermal_state",
    "gain_map",
    "dissipator",
    "generator",
    "Trajectory",
    "evolve",
    "diagonal_generator",
    "steady_state_nullspace",
]

KAPPA = 1.0
STABILITY_MARGIN = 0.1
TOP_LEVEL_TOL = 1e-10


def validate_density_matrix(
    rho: np.ndarray,
    *,
    herm_tol: float = 1e-12,
    trace_tol: float = 1e-12,
    diag_floor: float = -1e-10,
    context: str = "",
) -> None:
    """Check hermiticity, unit trace and non-negative populations.

    Raises ``InvariantViolation`` with the worst offender spelled out.
    """
    where = f" ({context})" if context else ""
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    if herm > herm_tol:
        raise InvariantViolation(f"hermiticity violated by {herm:.3e}{where}")
    trace = complex(np.trace(rho))
    if abs(trace - 1.0) > trace_tol:
        raise InvariantViolation(f"trace deviates from 1 by {abs(trace - 1.0):.3e}{where}")
    diag_min = float(np.min(np.real(np.diag(rho))))
    if diag_min < diag_floor:
        raise InvariantViolation(f"population {diag_min:.3e} below floor{where}")


def fock_state(n: int, n_max: int) -> np.ndarray:
    rho = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    rho[n, n] = 1.0
    return rho


def thermal_state(n_th: float, n_max: int) -> np.ndarray:
    q = n_th / (n_th + 1.0)
    diag = (1.0 - q) * q ** np.arange(n_max + 1)
    rho = np.diag(diag / diag.sum()).astype(complex)
    return rho


def gain_map(rho: np.ndarray, g_tau: float) -> np.ndarray:
    """Cavity state after one transit of an excited emitter, traced over it.

    Closed form on the Fock grid::

        (M rho)_{nm} = cos(g_tau sqrt(n+1)) cos(g_tau sqrt(m+1)) rho_{nm}
                     + sin(g_tau sqrt(n))   sin(g_tau sqrt(m))   rho_{n-1,m-1}

    Validated against a direct joint-space matrix exponential in the test
    suite.  Population sitting on the top Fock level cannot emit into the
    (truncated) next level, so it is flagged with a ``TruncationWarning``.
    """
    size = rho.shape[0]
    if abs(rho[-1, -1]) > TOP_LEVEL_TOL:
        warnings.warn(
            f"top Fock level populated ({abs(rho[-1, -1]):.2e}); gain is truncation-limited",
            TruncationWarning,
            stacklevel=2,
        )
    n = np.arange(size, dtype=float)
    cos_vec = np.cos(g_tau * np.sqrt(n + 1.0))
    sin_vec = np.sin(g_tau * np.sqrt(n))
    out = np.outer(cos_vec, cos_vec) * rho
    out[1:, 1:] += np.outer(sin_vec[1:], sin_vec[1:]) * rho[:-1, :-1]
    return out


def dissipator(rho: np.ndarray, n_th: float, kappa: float = KAPPA) -> np.ndarray:
    """Thermal-bath Lindblad term with downward and upward photon exchange.

    Implemented with shift-and-scale operations (exact, no matrix products),
    using the Lindblad form of the *truncated* ladder operators: the upward
    anticommutator weight is ``diag(1, .., n_max, 0)`` — the top Fock level
    is a reflecting boundary, not a leak — so the trace is annihilated
    identically for any input.  The mean-photon flow ``-kappa*(<n> - n_th)``
    is exact whenever the top level is unpopulated.
    """
    size = rho.shape[0]
    n = np.arange(size, dtype=float)
    root = np.sqrt(n[1:])  # sqrt(1..n_max)

    down = np.zeros_like(rho)
    down[:-1, :-1] = np.outer(root, root) * rho[1:, 1:]
    anti_down = 0.5 * (n[:, None] + n[None, :]) * rho

    up = np.zeros_like(rho)
    up[1:, 1:] = np.outer(root, root) * rho[:-1, :-1]
    up_weight = n + 1.0
    up_weight[-1] = 0.0
    anti_up = 0.5 * (up_weight[:, None] + up_weight[None, :]) * rho

    return kappa * (n_th + 1.0) * (down - anti_down) + kappa * n_th * (up - anti_up)


def generator(rho: np.ndarray, cfg: MaserConfig, kappa: float = KAPPA) -> np.ndarray:
    """Right-hand side ``drho/dt`` of the master equation."""
    r_a = cfg.n_t * kappa
    if r_a == 0.0:
        return dissipator(rho, cfg.n_th, kappa)
    first = gain_map(rho, cfg.g_tau) - rho
    second = gain_map(first, cfg.g_tau) - first
    return r_a * first - 0.5 * r_a * second + dissipator(rho, cfg.n_th, kappa)


@dataclass
class Trajectory:
    """Recorded time evolution: populations, trace and mean photon number."""

    times: np.ndarray
    traces: np.ndarray
    populations: np.ndarray
    mean_n: np.ndarray
    rho_final: np.ndarray
    dt: float
    steps: int


def evolve(
    rho0: np.ndarray,
    cfg: MaserConfig,
    t_final: float,
    dt: float,
    *,
    record_every: int = 10,
    kappa: float = KAPPA,
) -> Trajectory:
    """Fixed-step 4th-order Runge-Kutta integration of the master equation.

    The step must satisfy the explicit stability budget
    ``dt * (r_a + kappa * (n_th + 1) * n_max) < 0.1``; otherwise a
    ``StabilityError`` carrying a workable suggestion is raised before any
    work is done.  Hermiticity (1e-10) and trace conservation (1e-9) are
    enforced at every recorded step.  Populations are NOT floored mid-run:
    the second-order pump correction is a regular-pumping approximation and
    can push diagonals transiently negative for coherent initial states —
    a property of the model equation, not an integration fault.  Positivity
    is a steady-state statement and is asserted there by callers.
    """
    rate_scale = cfg.n_t * kappa + kappa * (cfg.n_th + 1.0) * cfg.n_max
    if dt * rate_scale >= STABILITY_MARGIN:
        suggestion = 0.5 * STABILITY_MARGIN / rate_scale
        raise StabilityError(
            f"dt={dt:g} violates stability bound dt*{rate_scale:g} < {STABILITY_MARGIN}; "
            f"try dt={suggestion:.3e}",
            suggested_dt=suggestion,
        )
    if rho0.shape != (cfg.n_max + 1, cfg.n_max + 1):
        raise ValueError(f"rho0 shape {rho0.shape} does not match n_max={cfg.n_max}")
    validate_density_matrix(rho0, context="initial state")

    steps = max(1, int(round(t_final / dt)))
    n_axis = np.arange(cfg.n_max + 1, dtype=float)
    rho = rho0.astype(complex)

    times = [0.0]
    traces = [float(np.real(np.trace(rho)))]
    populations = [np.real(np.diag(rho)).copy()]
    mean_n = [float(np.dot(n_axis, populations[0]))]

    for step in range(1, steps + 1):
        k1 = generator(rho, cfg, kappa)
        k2 = generator(rho + 0.5 * dt * k1, cfg, kappa)
        k3 = generator(rho + 0.5 * dt * k2, cfg, kappa)
        k4 = generator(rho + dt * k3, cfg, kappa)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if step % record_every == 0 or step == steps:
            t = step * dt
            validate_density_matrix(
                rho,
                herm_tol=1e-10,
                trace_tol=1e-9,
                diag_floor=-np.inf,
                context=f"t={t:g}",
            )
            times.append(t)
            traces.append(float(np.real(np.trace(rho))))
            populations.append(np.real(np.diag(rho)).copy())
            mean_n.append(float(np.dot(n_axis, populations[-1])))

    return Trajectory(
        times=np.asarray(times),
        traces=np.asarray(traces),
        populations=np.asarray(populations),
        mean_n=np.asarray(mean_n),
        rho_final=rho,
        dt=dt,
        steps=steps,
    )


def diagonal_generator(cfg: MaserConfig, kappa: float = KAPPA) -> np.ndarray:
    """Explicit matrix of the generator restricted to Fock-diagonal states.

    Built column by column by applying the full gain map and dissipator to
    diagonal basis matrices — independent of any closed-form recursion.
    """
    size = cfg.n_max + 1
    matrix = np.empty((size, size))
    basis = np.zeros((size, size))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        for n in range(size):
            basis[n, n] = 1.0
            matrix[:, n] = np.real(np.diag(generator(basis, cfg, kappa)))
            basis[n, n] = 0.0
    return matrix


def steady_state_nullspace(cfg: MaserConfig, kappa: float = KAPPA) -> PhotonDistribution:
    """Steady state as the nullspace of the diagonal-sector generator.

    The smallest singular vector is taken; if the second-smallest singular
    value is not at least 1000x the smallest, the nullspace is not clean
    enough to trust and ``AmbiguousSteadyStateError`` is raised.
    """
    matrix = diagonal_generator(cfg, kappa)
    _, svals, vt = np.linalg.svd(matrix)
    smallest = svals[-1]
    second = svals[-2]
    if second < 1e3 * smallest:
        raise AmbiguousSteadyStateError(
            f"singular values {second:.3e} / {smallest:.3e} leave the steady state ambiguous"
        )
    vec = vt[-1]
    if vec.sum() < 0:
        vec = -vec
    clamped = int(np.count_nonzero(vec < 0))
    vec = np.clip(vec, 0.0, None)
    p = vec / vec.sum()
    p = p / p.sum()
    return PhotonDistribution(
        p=p,
        provenance="master-equation",
        unstable=False,
        truncation_limited=bool(p[-1] >= 1e-10),
        clamped_count=clamped,
    )
