"""Spin expectations and two-point correlators on full state vectors.

Operators act through bit masks on the basis index instead of being built
as matrices, so each expectation costs O(2**n). All functions accept
states with leading batch axes.
"""
from __future__ import annotations

import numpy as np

from .linalg import n_qubits_of
from .model import site_mask
from .settings import ContractError, NumericalError

AXES = ("x", "y", "z")
IMAG_TOL = 1e-12


def apply_spin(state, site: int, axis: str) -> np.ndarray:
    """``S^axis_site |psi>`` with ``S = sigma / 2``."""
    psi = np.asarray(state, dtype=complex)
    n = n_qubits_of(psi.shape[-1])
    mask = site_mask(n, site)
    idx = np.arange(psi.shape[-1])
    up = (idx & mask) != 0
    if axis == "z":
        return psi * np.where(up, 0.5, -0.5)
    if axis == "x":
        return 0.5 * psi[..., idx ^ mask]
    if axis == "y":
        # sigma_y |0> = i|1>, sigma_y |1> = -i|0>
        return np.where(up, 0.5j, -0.5j) * psi[..., idx ^ mask]
    raise ContractError(f"axis must be one of {AXES}, got {axis!r}")


def _real(value: np.ndarray, what: str):
    if np.any(np.abs(np.imag(value)) > IMAG_TOL):
        raise NumericalError(f"{what} has an imaginary part above {IMAG_TOL}")
    value = np.real(value)
    return float(value) if value.ndim == 0 else value


def _expect(psi: np.ndarray, phi: np.ndarray) -> np.ndarray:
    return np.sum(psi.conj() * phi, axis=-1)


def spin_expectation(state, site: int, axis: str):
    psi = np.asarray(state, dtype=complex)
    return _real(_expect(psi, apply_spin(psi, site, axis)), f"<S{axis}_{site}>")


def two_point_correlator(state, i: int, j: int, axis: str):
    """``<S^axis_i S^axis_j>`` for distinct sites."""
    if i == j:
        raise ContractError("correlator sites must be distinct")
    psi = np.asarray(state, dtype=complex)
    phi = apply_spin(apply_spin(psi, j, axis), i, axis)
    return _real(_expect(psi, phi), f"<S{axis}_{i} S{axis}_{j}>")


def one_particle_probabilities(b) -> np.ndarray:
    return np.abs(np.asarray(b)) ** 2


def total_magnetization(state):
    psi = np.asarray(state, dtype=complex)
    n = n_qubits_of(psi.shape[-1])
    return sum(spin_expectation(psi, s, "z") for s in range(n))
