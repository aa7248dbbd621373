"""Pairwise entanglement: Wootters concurrence and W-state detection."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import settings
from .linalg import n_qubits_of, partial_trace
from .settings import ContractError

SIGMA_Y_SIGMA_Y = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=float
)

# Eigenvalues of rho below this are rounding noise and are dropped before the
# factorization; keeping them would inject sqrt(noise) ~ 1e-8 into the result.
_RANK_CUTOFF = 1e-14


def _concurrence_from_factor(m: np.ndarray) -> np.ndarray:
    # With rho = M M^dagger, the square roots of the spectrum of
    # rho (Y rho* Y) are the singular values of M^T Y M (Y real symmetric).
    tau = np.swapaxes(m, -1, -2) @ SIGMA_Y_SIGMA_Y @ m
    lam = np.linalg.svd(tau, compute_uv=False)
    lam = np.sort(lam, axis=-1)[..., ::-1]
    return np.maximum(lam[..., 0] - lam[..., 1] - lam[..., 2] - lam[..., 3], 0.0)


def wootters_concurrence(rho) -> np.ndarray | float:
    """Concurrence of a two-qubit density matrix (or a stack of them).

    Equivalent to ``max(l1 - l2 - l3 - l4, 0)`` with ``l_r`` the descending
    square roots of the eigenvalues of ``rho (sy x sy) rho* (sy x sy)``.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[-2:] != (4, 4):
        raise ContractError(f"expected 4x4 density matrices, got shape {rho.shape}")
    herm = np.max(np.abs(rho - np.swapaxes(rho, -1, -2).conj()))
    if herm > settings.HERMITIAN_TOL:
        raise ContractError(f"density matrix is not Hermitian (defect {herm:.3e})")
    trace = np.trace(rho, axis1=-2, axis2=-1)
    if np.any(np.abs(trace - 1.0) > settings.NORM_TOL):
        raise ContractError("density matrix does not have unit trace")
    w, v = np.linalg.eigh(rho)
    if np.any(w < -settings.PSD_TOL):
        raise ContractError(f"density matrix is not positive (min eigenvalue {w.min():.3e})")
    w = np.where(w > _RANK_CUTOFF, w, 0.0)
    c = _concurrence_from_factor(v * np.sqrt(w)[..., None, :])
    return float(c) if c.ndim == 0 else c


def one_particle_concurrence(b, i: int, j: int):
    b = np.asarray(b)
    n = b.shape[-1]
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise ContractError(f"invalid site pair ({i}, {j}) for {n} sites")
    return 2.0 * np.abs(b[..., i]) * np.abs(b[..., j])


def pairwise_concurrence_matrix(state) -> np.ndarray:
    """Symmetric matrix of concurrences between every pair of qubits."""
    state = np.asarray(state, dtype=complex)
    n = n_qubits_of(state.shape[-1])
    out = np.zeros(state.shape[:-1] + (n, n))
    for i, j in combinations(range(n), 2):
        c = wootters_concurrence(partial_trace(state, (i, j)))
        out[..., i, j] = out[..., j, i] = c
    return out


def one_particle_concurrence_matrix(b) -> np.ndarray:
    mod = np.abs(np.asarray(b))
    out = 2.0 * mod[..., :, None] * mod[..., None, :]
    n = mod.shape[-1]
    out[..., np.arange(n), np.arange(n)] = 0.0
    return out


def w_state_fidelity(b):
    """Best overlap ``|<W|psi>|^2`` over all relative phases of the W state."""
    mod = np.abs(np.asarray(b))
    return np.sum(mod, axis=-1) ** 2 / mod.shape[-1]


@dataclass(frozen=True)
class WStateVerdict:
    is_w_state: bool
    spread: float
    deviation: float
    fidelity: float
    t: float | None = None


def _offdiag(cmat: np.ndarray) -> np.ndarray:
    n = cmat.shape[-1]
    iu = np.triu_indices(n, 1)
    return cmat[..., iu[0], iu[1]]


def w_spread(cmat) -> tuple[np.ndarray, np.ndarray]:
    """``(max - min, max |C - 2/N|)`` over the pairs of a concurrence matrix."""
    cmat = np.asarray(cmat)
    vals = _offdiag(cmat)
    target = 2.0 / cmat.shape[-1]
    return vals.max(axis=-1) - vals.min(axis=-1), np.abs(vals - target).max(axis=-1)


def detect_w_state(
    amplitudes=None, *, state=None, tol: float = settings.EXACT_W_TOL, t: float | None = None
) -> WStateVerdict:
    """Decide whether a one-particle trajectory point is a W state.

    Pass either sector ``amplitudes`` (shortcut concurrences) or a full
    ``state`` vector (reduced density matrices and the general formula).
    """
    if (amplitudes is None) == (state is None):
        raise ContractError("pass exactly one of amplitudes or state")
    if tol <= 0:
        raise ContractError("tol must be positive")
    if state is not None:
        state = np.asarray(state, dtype=complex)
        n = n_qubits_of(state.shape[-1])
        cmat = pairwise_concurrence_matrix(state)
        b = state[[1 << (n - 1 - s) for s in range(n)]]
    else:
        b = np.asarray(amplitudes, dtype=complex)
        cmat = one_particle_concurrence_matrix(b)
    spread, deviation = w_spread(cmat)
    fidelity = float(w_state_fidelity(b))
    ok = bool(deviation < tol and fidelity > 1.0 - tol)
    return WStateVerdict(ok, float(spread), float(deviation), fidelity, t)
