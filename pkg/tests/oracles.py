"""Brute-force reference implementations the fast code is validated against.

These are intentionally slow and dumb.  They stay in the tree permanently:
whenever the production implementations change, the equivalence tests must
keep passing against these.
"""

import numpy as np
from scipy.linalg import expm


def joint_gain_oracle(rho: np.ndarray, g_tau: float) -> np.ndarray:
    """One emitter transit computed on the joint emitter+field space.

    The field space is padded by one Fock level so that emission from the top
    retained state lands inside the simulation instead of silently vanishing;
    without the pad the top state would be an artificial dark state and the
    comparison against the closed form would be wrong at the boundary.  The
    resonant exchange Hamiltonian is exponentiated densely, the emitter
    (injected excited) is traced out, and the result is projected back onto
    the original truncation.
    """
    size = rho.shape[0]
    pad = size + 1
    a = np.diag(np.sqrt(np.arange(1.0, pad)), 1)
    lower = np.array([[0.0, 1.0], [0.0, 0.0]])  # |g><e| in basis (g, e)
    h_exchange = np.kron(lower.T, a) + np.kron(lower, a.T)
    u = expm(-1j * g_tau * h_exchange)

    rho_pad = np.zeros((pad, pad), dtype=complex)
    rho_pad[:size, :size] = rho
    excited = np.array([[0.0, 0.0], [0.0, 1.0]])
    joint = np.kron(excited, rho_pad)
    evolved = u @ joint @ u.conj().T
    field = evolved[:pad, :pad] + evolved[pad:, pad:]  # trace out the emitter
    return field[:size, :size]


def poissonian_generator_nullspace(cfg) -> np.ndarray:
    """Steady state of the randomly pumped (first-order) master equation.

    Independent reference for the two-term atomic recursion: builds the
    diagonal-sector matrix of r_a(M-1) + L column by column from the full
    gain map and dissipator, then takes the nullspace.
    """
    import warnings

    from fluxmaser.errors import TruncationWarning
    from fluxmaser.lindblad import dissipator, gain_map

    size = cfg.n_max + 1
    matrix = np.empty((size, size))
    basis = np.zeros((size, size))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        for n in range(size):
            basis[n, n] = 1.0
            rho = basis.astype(complex)
            out = cfg.n_t * (gain_map(rho, cfg.g_tau) - rho) + dissipator(rho, cfg.n_th)
            matrix[:, n] = np.real(np.diag(out))
            basis[n, n] = 0.0
    _, svals, vt = np.linalg.svd(matrix)
    assert svals[-2] > 1e3 * svals[-1], "no clean nullspace at this truncation"
    vec = vt[-1]
    if vec.sum() < 0:
        vec = -vec
    vec = np.clip(vec, 0.0, None)
    return vec / vec.sum()
