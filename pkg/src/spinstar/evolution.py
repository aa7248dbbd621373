"""Time propagation, numerical and closed-form.

The closed forms are the exact single-excitation amplitudes of the
three-ligand star at unit coupling; pass ``coupling`` to evaluate them at
``t * J`` for other couplings.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import settings
from .linalg import EigenDecomposition, hermitian_eig
from .model import StarModel, build_full_hamiltonian, build_sector_hamiltonian
from .settings import ContractError


@dataclass(frozen=True)
class Propagator:
    """Spectral propagator ``U(t) = V exp(-i Lambda t) V^dagger``.

    The decomposition is computed once; every later call is a pair of
    matrix-vector products.
    """

    decomposition: EigenDecomposition

    @classmethod
    def from_hamiltonian(cls, h) -> "Propagator":
        return cls(hermitian_eig(h))

    @classmethod
    def sector(cls, m: StarModel) -> "Propagator":
        return cls.from_hamiltonian(build_sector_hamiltonian(m))

    @classmethod
    def full(cls, m: StarModel) -> "Propagator":
        return cls.from_hamiltonian(build_full_hamiltonian(m))

    @property
    def dim(self) -> int:
        return self.decomposition.dim

    def unitary(self, t: float) -> np.ndarray:
        v = self.decomposition.eigenvectors
        phases = np.exp(-1j * self.decomposition.eigenvalues * t)
        return (v * phases) @ v.conj().T

    def evolve(self, state, times) -> np.ndarray:
        """States at every time in ``times``; result has shape ``(len(times), dim)``."""
        psi = self._check_state(state)
        times = np.asarray(times, dtype=float)
        if not np.all(np.isfinite(times)):
            raise ContractError("times must be finite")
        v = self.decomposition.eigenvectors
        coeffs = v.conj().T @ psi
        phases = np.exp(-1j * np.multiply.outer(times, self.decomposition.eigenvalues))
        return (phases * coeffs) @ v.T

    def _check_state(self, state) -> np.ndarray:
        psi = np.asarray(state, dtype=complex)
        if psi.shape != (self.dim,):
            raise ContractError(f"state shape {psi.shape} does not match dimension {self.dim}")
        if abs(np.vdot(psi, psi).real - 1.0) > settings.NORM_TOL:
            raise ContractError("state is not normalized")
        return psi


def propagate(p: Propagator, state, t: float) -> np.ndarray:
    if not np.isfinite(t):
        raise ContractError("t must be finite")
    return p.evolve(state, [t])[0]


def _phase(freq, t):
    return np.exp(1j * freq * np.asarray(t, dtype=float))


def cops_amplitudes_closed_form(t, coupling: float = 1.0) -> np.ndarray:
    """Amplitudes (central, ligand 1..3) after evolving the central excitation."""
    t = np.asarray(t, dtype=float) * coupling
    slow, fast = _phase(-0.75, t), _phase(1.25, t)
    central = slow / 4 + 3 * fast / 4
    ligand = slow / 4 - fast / 4
    return np.stack([central, ligand, ligand, ligand], axis=-1)


def lops_amplitudes_closed_form(t, excited_ligand: int = 3, coupling: float = 1.0) -> np.ndarray:
    """Amplitudes after evolving the state with only ``excited_ligand`` (1..3) up."""
    if excited_ligand not in (1, 2, 3):
        raise ContractError("excited_ligand must be 1, 2 or 3")
    t = np.asarray(t, dtype=float) * coupling
    a, slow, fast = _phase(-0.25, t), _phase(-0.75, t), _phase(1.25, t)
    central = slow / 4 - fast / 4
    excited = 2 * a / 3 + slow / 4 + fast / 12
    other = -a / 3 + slow / 4 + fast / 12
    cols = [central] + [excited if k == excited_ligand else other for k in (1, 2, 3)]
    return np.stack(cols, axis=-1)
