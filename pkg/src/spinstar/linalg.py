"""Dense complex linear algebra used throughout the package.

Qubit ordering convention: in a register of ``n`` qubits, qubit 0 (the
central spin) is the most significant bit of the basis index, so the ket
``|q0 q1 ... q_{n-1}>`` sits at index ``sum(q_k << (n-1-k))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import settings
from .settings import ContractError, NumericalError, SizeError

_EPS = np.finfo(float).eps


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product ``a (x) b`` with the row-major block layout.

    ``result[i*p + k, j*q + l] == a[i, j] * b[k, l]`` for ``b`` of shape ``(p, q)``.
    Vectors are treated as column matrices.
    """
    a = np.atleast_2d(np.asarray(a))
    b = np.atleast_2d(np.asarray(b))
    if a.ndim != 2 or b.ndim != 2:
        raise ContractError("tensor_product expects matrices")
    if a.size * b.size > settings.MAX_KRON_ENTRIES:
        raise SizeError(
            f"tensor product of {a.shape} and {b.shape} exceeds "
            f"{settings.MAX_KRON_ENTRIES} entries"
        )
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ContractError("tensor_product inputs must be finite")
    return np.kron(a, b)


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


@lru_cache(maxsize=64)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    # Tournament schedule: every round is a set of disjoint (p, q) pairs and
    # each pair occurs exactly once per sweep.
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            p, q = players[i], players[m - 1 - i]
            if p < n and q < n:
                ps.append(min(p, q))
                qs.append(max(p, q))
        order = np.argsort(ps)
        rounds.append((np.asarray(ps)[order], np.asarray(qs)[order]))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _check_hermitian(h: np.ndarray) -> None:
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise ContractError("matrix has non-finite entries")
    defect = np.max(np.abs(h - h.conj().T)) if h.size else 0.0
    if defect > settings.HERMITIAN_TOL:
        raise ContractError(f"matrix is not Hermitian (max defect {defect:.3e})")


def hermitian_eig(h, max_sweeps: int = 60) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Rotations are scheduled in round-robin order, so each step annihilates
    ``n // 2`` disjoint off-diagonal pairs at once. The sweep order is fixed,
    which keeps results bit-reproducible on a given platform.

    Returns eigenvalues in ascending order and the matching orthonormal
    eigenvectors as columns.
    """
    a = np.array(h, dtype=complex)
    _check_hermitian(a)
    n = a.shape[0]
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    scale = np.linalg.norm(a)
    if n == 1 or scale == 0.0:
        return EigenDecomposition(np.sort(a.diagonal().real), v)

    threshold = 2.0 * n * _EPS * scale
    schedule = _round_robin(n)
    for sweep in range(max_sweeps + 1):
        off = np.linalg.norm(a[~np.eye(n, dtype=bool)])
        if off <= threshold:
            break
        if sweep == max_sweeps:
            raise NumericalError(
                f"Jacobi iteration did not converge after {max_sweeps} sweeps "
                f"(off-diagonal norm {off:.3e})"
            )
        for P, Q in schedule:
            apq = a[P, Q]
            r = np.abs(apq)
            active = r > 0.0
            if not active.any():
                continue
            r_safe = np.where(active, r, 1.0)
            phase = np.where(active, apq / r_safe, 1.0)
            tau = (a[Q, Q].real - a[P, P].real) / (2.0 * r_safe)
            sgn = np.where(tau >= 0.0, 1.0, -1.0)
            t = sgn / (np.abs(tau) + np.hypot(1.0, tau))
            c = 1.0 / np.hypot(1.0, t)
            s = np.where(active, t * c, 0.0)
            c = np.where(active, c, 1.0)
            back = phase.conj()
            w00, w01, w10, w11 = c, s, -s * back, c * back

            cp, cq = a[:, P], a[:, Q]
            a[:, P], a[:, Q] = cp * w00 + cq * w10, cp * w01 + cq * w11
            rp, rq = a[P, :], a[Q, :]
            a[P, :] = w00.conj()[:, None] * rp + w10.conj()[:, None] * rq
            a[Q, :] = w01.conj()[:, None] * rp + w11.conj()[:, None] * rq
            vp, vq = v[:, P], v[:, Q]
            v[:, P], v[:, Q] = vp * w00 + vq * w10, vp * w01 + vq * w11
            a[P, Q] = 0.0
            a[Q, P] = 0.0

    w = a.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    return EigenDecomposition(w[order], v[:, order])


def matrix_exp_series(m, scale: complex = 1.0, tol: float = 1e-15) -> np.ndarray:
    """``exp(scale * m)`` by Taylor series with scaling and squaring.

    Kept deliberately naive: it is the brute-force reference the tests hold
    the spectral propagator against.
    """
    if not (0.0 < tol <= 1e-6):
        raise ContractError("tol must lie in (0, 1e-6]")
    a = scale * np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractError("matrix_exp_series expects a square matrix")
    if not np.all(np.isfinite(a)):
        raise ContractError("matrix has non-finite entries")
    n = a.shape[0]
    norm = np.max(np.sum(np.abs(a), axis=1)) if n else 0.0
    squarings = max(0, math.ceil(math.log2(norm / 0.5))) if norm > 0.5 else 0
    a = a / 2.0**squarings

    result = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    k = 0
    while True:
        k += 1
        if k > 10000:
            raise NumericalError("Taylor series did not converge within 10000 terms")
        term = term @ a / k
        result = result + term
        if np.linalg.norm(term) < tol:
            break
    for _ in range(squarings):
        result = result @ result
    return result


def n_qubits_of(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 2 or 1 << n != dim:
        raise ContractError(f"state dimension {dim} is not a power of two >= 2")
    return n


def reduced_factor(state, keep: tuple[int, int]) -> np.ndarray:
    """Matrix ``M`` with ``partial_trace(state, keep) == M @ M^dagger``.

    ``state`` may carry leading batch axes; the result has shape
    ``(..., 4, 2**(n-2))``.
    """
    psi = np.asarray(state, dtype=complex)
    n = n_qubits_of(psi.shape[-1])
    i, j = keep
    if i == j:
        raise ContractError("kept qubit indices must be distinct")
    for k in (i, j):
        if not 0 <= k < n:
            raise ContractError(f"qubit index {k} out of range for {n} qubits")
    norms = np.sum(np.abs(psi) ** 2, axis=-1)
    if np.any(np.abs(norms - 1.0) > settings.NORM_TOL):
        raise ContractError("state is not normalized")
    batch = psi.shape[:-1]
    nb = len(batch)
    t = psi.reshape(batch + (2,) * n)
    t = np.moveaxis(t, (nb + i, nb + j), (nb, nb + 1))
    return t.reshape(batch + (4, -1))


def partial_trace(state, keep: tuple[int, int]) -> np.ndarray:
    """Two-qubit reduced density matrix of a pure state.

    The basis order is ``|00>, |01>, |10>, |11>`` with ``keep[0]`` as the
    left (most significant) qubit.
    """
    m = reduced_factor(state, keep)
    return m @ np.swapaxes(m, -1, -2).conj()
